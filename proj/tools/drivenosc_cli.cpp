// Command-line front end: experiment presets, run orchestration, comparison
// reports, operator decomposition tables and pulse data export.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical abort,
//             4 comparison failure.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drivenosc/drivenosc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCompareFailed = 4;

struct ConfigOptions {
  std::string preset;
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigOptions& opts) {
  cmd->add_option("--preset", opts.preset, "Experiment preset (fig1 | fig2)");
  cmd->add_option("--config", opts.config_path, "Flat key-value config file");
  cmd->add_option("--set", opts.overrides, "Override a config key, e.g. --set prop.t_end_cycles=12");
  cmd->add_option("--out", opts.out_dir, "Output directory (overrides out.dir)");
}

drivenosc::ExperimentConfig resolve_config(const ConfigOptions& opts) {
  drivenosc::ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = drivenosc::parse_config_file(opts.config_path);
  } else if (!opts.preset.empty()) {
    cfg = drivenosc::preset_config(opts.preset);
  } else {
    throw std::invalid_argument("need --preset or --config");
  }
  for (const auto& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got: " + kv);
    }
    drivenosc::apply_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  return cfg;
}

drivenosc::ToleranceSpec parse_tolerances(const std::vector<std::string>& entries) {
  drivenosc::ToleranceSpec tols;
  for (const auto& kv : entries) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--tol expects column=value, got: " + kv);
    }
    tols[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return tols;
}

std::vector<double> parse_time_list(const std::string& csv) {
  std::vector<double> times;
  std::istringstream in(csv);
  std::string cell;
  while (std::getline(in, cell, ',')) times.push_back(std::stod(cell));
  return times;
}

void print_report(const drivenosc::CompareReport& report) {
  for (const auto& [file, columns] : report.files) {
    if (!file.empty()) std::cout << file << ":\n";
    for (const auto& [name, diff] : columns) {
      std::cout << "  " << name << ": max_abs=" << drivenosc::format_sig(diff.max_abs)
                << " rms=" << drivenosc::format_sig(diff.rms)
                << " tol=" << drivenosc::format_sig(diff.tol)
                << (diff.pass ? " PASS" : " FAIL") << "\n";
    }
  }
  std::cout << "RESULT: " << (report.pass ? "PASS" : "FAIL") << "\n";
}

void emit_table(const drivenosc::Table& table, const std::string& out_path) {
  if (out_path.empty()) {
    drivenosc::write_table_csv(std::cout, table);
  } else {
    drivenosc::write_table_csv(out_path, table);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven harmonic oscillator toolkit"};
  app.require_subcommand(1);

  ConfigOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and export its artifacts");
  add_config_options(run_cmd, run_opts);

  std::string compare_a, compare_b, report_path;
  std::vector<std::string> tol_entries;
  double default_tol = 0.0;
  auto* compare_cmd = app.add_subcommand("compare", "Diff two runs or CSV files");
  compare_cmd->add_option("a", compare_a, "Run directory or CSV file")->required();
  compare_cmd->add_option("b", compare_b, "Run directory or CSV file")->required();
  compare_cmd->add_option("--tol", tol_entries, "Per-column tolerance, e.g. --tol mean_x=1e-6");
  compare_cmd->add_option("--default-tol", default_tol, "Tolerance for unlisted columns");
  compare_cmd->add_option("--report", report_path, "Write the JSON report here");

  ConfigOptions decompose_opts;
  std::string decompose_times, decompose_out;
  double decompose_t_end_cycles = -1.0;
  std::size_t decompose_num = 50;
  auto* decompose_cmd =
      app.add_subcommand("decompose", "Tabulate the H = H~ + H_c operator split over time");
  add_config_options(decompose_cmd, decompose_opts);
  decompose_cmd->add_option("--times", decompose_times, "Comma-separated absolute times");
  decompose_cmd->add_option("--t-end-cycles", decompose_t_end_cycles,
                            "Uniform mesh end (cycles; default: prop.t_end_cycles)");
  decompose_cmd->add_option("--num", decompose_num, "Uniform mesh size");
  decompose_cmd->add_option("--table-out", decompose_out, "Output CSV (default: stdout)");

  ConfigOptions pulse_opts;
  std::string pulse_out;
  double pulse_t_end_cycles = -1.0;
  std::size_t pulse_num = 200;
  auto* pulse_cmd = app.add_subcommand("pulse-table", "Export F(t), fs, fc, d columns");
  add_config_options(pulse_cmd, pulse_opts);
  pulse_cmd->add_option("--t-end-cycles", pulse_t_end_cycles,
                        "Mesh end (cycles; default: pulse.T_cycles)");
  pulse_cmd->add_option("--num", pulse_num, "Number of samples");
  pulse_cmd->add_option("--table-out", pulse_out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) {
      drivenosc::run_experiment(resolve_config(run_opts));
      return kExitOk;
    }
    if (*compare_cmd) {
      const auto tols = parse_tolerances(tol_entries);
      const bool dirs = std::filesystem::is_directory(compare_a);
      const auto report = dirs
                              ? drivenosc::compare_runs(compare_a, compare_b, tols, default_tol)
                              : drivenosc::compare_files(compare_a, compare_b, tols, default_tol);
      print_report(report);
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << drivenosc::report_to_json(report).dump(2) << "\n";
      }
      return report.pass ? kExitOk : kExitCompareFailed;
    }
    if (*decompose_cmd) {
      const auto cfg = resolve_config(decompose_opts);
      std::vector<double> times;
      if (!decompose_times.empty()) {
        times = parse_time_list(decompose_times);
      } else {
        const double end_cycles =
            decompose_t_end_cycles >= 0.0 ? decompose_t_end_cycles : cfg.prop_t_end_cycles;
        const double t_end = end_cycles * cfg.params.cycle();
        for (std::size_t i = 0; i < decompose_num; ++i) {
          times.push_back(t_end * static_cast<double>(i) /
                          static_cast<double>(decompose_num > 1 ? decompose_num - 1 : 1));
        }
      }
      emit_table(drivenosc::decompose_report(cfg, times), decompose_out);
      return kExitOk;
    }
    if (*pulse_cmd) {
      const auto cfg = resolve_config(pulse_opts);
      const double end_cycles =
          pulse_t_end_cycles >= 0.0 ? pulse_t_end_cycles : cfg.pulse_t_cycles;
      emit_table(drivenosc::pulse_table(cfg, end_cycles * cfg.params.cycle(), pulse_num),
                 pulse_out);
      return kExitOk;
    }
  } catch (const drivenosc::numerical_error& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
