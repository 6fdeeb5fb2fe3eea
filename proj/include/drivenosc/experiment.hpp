// Experiment orchestration: preset configurations, the flat key-value config
// format, run artifacts (CSV time series + final states + run metadata), and
// the comparison/report tooling on top of them.
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "drivenosc/common.hpp"
#include "drivenosc/csvio.hpp"
#include "drivenosc/eigenstates.hpp"
#include "drivenosc/exact_solution.hpp"
#include "drivenosc/kinematics.hpp"
#include "drivenosc/phase_space.hpp"
#include "drivenosc/propagator.hpp"
#include "drivenosc/pulse.hpp"

namespace drivenosc {

enum class PulseKind { Zero, Constant, SineSquared, Tabulated };

struct ExperimentConfig {
  OscillatorParams params{};
  PulseKind pulse_kind = PulseKind::SineSquared;
  double pulse_f_m = 1.0;
  double pulse_omega_over_omega = 0.5;
  double pulse_t_cycles = 10.0;
  double pulse_f0 = 0.0;          // constant pulses
  std::string pulse_table{};      // tabulated pulses: CSV path
  int state_n = 0;
  double grid_x_min = -20.0;
  double grid_x_max = 20.0;
  std::size_t grid_n = 512;
  double prop_dt_per_cycle = 1.0 / 2000.0;  // time step as a fraction of a cycle
  double prop_t_end_cycles = 10.0;
  std::string prop_method = "split";  // split | adaptive
  std::size_t prop_record_stride = 20;
  std::string out_dir{};
  std::string preset{};
};

inline ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig cfg;
  cfg.preset = name;
  if (name == "fig1") {
    cfg.pulse_omega_over_omega = 0.5;
    cfg.grid_x_min = -20.0;
    cfg.grid_x_max = 20.0;
    cfg.grid_n = 512;
    cfg.prop_t_end_cycles = 10.0;
  } else if (name == "fig2") {
    // Resonant driving grows d(t) secularly; the grid has to be much wider.
    cfg.pulse_omega_over_omega = 1.0;
    cfg.grid_x_min = -64.0;
    cfg.grid_x_max = 64.0;
    cfg.grid_n = 2048;
    cfg.prop_t_end_cycles = 12.0;  // two cycles past the pulse
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return cfg;
}

inline const char* to_string(PulseKind kind) {
  switch (kind) {
    case PulseKind::Zero: return "zero";
    case PulseKind::Constant: return "constant";
    case PulseKind::SineSquared: return "sine_squared";
    case PulseKind::Tabulated: return "tabulated";
  }
  return "?";
}

inline void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto as_double = [&] {
    try {
      return std::stod(value);
    } catch (const std::exception&) {
      throw std::invalid_argument("config: bad numeric value for " + key + ": " + value);
    }
  };
  auto as_size = [&] {
    const double v = as_double();
    if (v < 0 || v != std::floor(v)) {
      throw std::invalid_argument("config: expected non-negative integer for " + key);
    }
    return static_cast<std::size_t>(v);
  };
  if (key == "params.m") cfg.params.mass = as_double();
  else if (key == "params.omega") cfg.params.omega = as_double();
  else if (key == "params.hbar") cfg.params.hbar = as_double();
  else if (key == "pulse.kind") {
    if (value == "zero") cfg.pulse_kind = PulseKind::Zero;
    else if (value == "constant") cfg.pulse_kind = PulseKind::Constant;
    else if (value == "sine_squared") cfg.pulse_kind = PulseKind::SineSquared;
    else if (value == "tabulated") cfg.pulse_kind = PulseKind::Tabulated;
    else throw std::invalid_argument("config: unknown pulse.kind " + value);
  } else if (key == "pulse.F_m") cfg.pulse_f_m = as_double();
  else if (key == "pulse.Omega_over_omega") cfg.pulse_omega_over_omega = as_double();
  else if (key == "pulse.T_cycles") cfg.pulse_t_cycles = as_double();
  else if (key == "pulse.F0") cfg.pulse_f0 = as_double();
  else if (key == "pulse.table") cfg.pulse_table = value;
  else if (key == "state.n") cfg.state_n = static_cast<int>(as_size());
  else if (key == "grid.x_min") cfg.grid_x_min = as_double();
  else if (key == "grid.x_max") cfg.grid_x_max = as_double();
  else if (key == "grid.n") cfg.grid_n = as_size();
  else if (key == "prop.dt_per_cycle") cfg.prop_dt_per_cycle = as_double();
  else if (key == "prop.t_end_cycles") cfg.prop_t_end_cycles = as_double();
  else if (key == "prop.method") {
    if (value != "split" && value != "adaptive") {
      throw std::invalid_argument("config: prop.method must be split or adaptive");
    }
    cfg.prop_method = value;
  } else if (key == "prop.record_stride") cfg.prop_record_stride = as_size();
  else if (key == "out.dir") cfg.out_dir = value;
  else if (key == "preset") { /* handled by the first parse pass */ }
  else throw std::invalid_argument("config: unknown key " + key);
}

// Flat "key = value" text; '#' starts a comment. A preset key, when present,
// seeds the defaults and every other key overrides it.
inline ExperimentConfig parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw std::invalid_argument("config: expected key = value, got: " + line);
      }
      continue;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  ExperimentConfig cfg;
  for (const auto& [key, value] : entries) {
    if (key == "preset") cfg = preset_config(value);
  }
  for (const auto& [key, value] : entries) apply_key(cfg, key, value);
  return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  if (!cfg.preset.empty()) out << "preset = " << cfg.preset << "\n";
  out << "params.m = " << format_sig(cfg.params.mass) << "\n";
  out << "params.omega = " << format_sig(cfg.params.omega) << "\n";
  out << "params.hbar = " << format_sig(cfg.params.hbar) << "\n";
  out << "pulse.kind = " << to_string(cfg.pulse_kind) << "\n";
  out << "pulse.F_m = " << format_sig(cfg.pulse_f_m) << "\n";
  out << "pulse.Omega_over_omega = " << format_sig(cfg.pulse_omega_over_omega) << "\n";
  out << "pulse.T_cycles = " << format_sig(cfg.pulse_t_cycles) << "\n";
  if (cfg.pulse_kind == PulseKind::Constant) {
    out << "pulse.F0 = " << format_sig(cfg.pulse_f0) << "\n";
  }
  if (cfg.pulse_kind == PulseKind::Tabulated) {
    out << "pulse.table = " << cfg.pulse_table << "\n";
  }
  out << "state.n = " << cfg.state_n << "\n";
  out << "grid.x_min = " << format_sig(cfg.grid_x_min) << "\n";
  out << "grid.x_max = " << format_sig(cfg.grid_x_max) << "\n";
  out << "grid.n = " << cfg.grid_n << "\n";
  out << "prop.dt_per_cycle = " << format_sig(cfg.prop_dt_per_cycle) << "\n";
  out << "prop.t_end_cycles = " << format_sig(cfg.prop_t_end_cycles) << "\n";
  out << "prop.method = " << cfg.prop_method << "\n";
  out << "prop.record_stride = " << cfg.prop_record_stride << "\n";
  if (!cfg.out_dir.empty()) out << "out.dir = " << cfg.out_dir << "\n";
  return out.str();
}

inline Pulse make_pulse(const ExperimentConfig& cfg) {
  validate(cfg.params);
  switch (cfg.pulse_kind) {
    case PulseKind::Zero: return ZeroPulse{};
    case PulseKind::Constant: return ConstantPulse{cfg.pulse_f0};
    case PulseKind::SineSquared:
      return make_sine_squared(cfg.pulse_f_m, cfg.pulse_omega_over_omega * cfg.params.omega,
                               cfg.pulse_t_cycles * cfg.params.cycle());
    case PulseKind::Tabulated: return pulse_from_csv_file(cfg.pulse_table);
  }
  throw std::invalid_argument("make_pulse: bad pulse kind");
}

inline PropagationConfig make_propagation_config(const ExperimentConfig& cfg) {
  PropagationConfig prop;
  prop.grid = build_grid(cfg.grid_x_min, cfg.grid_x_max, cfg.grid_n);
  prop.dt = cfg.prop_dt_per_cycle * cfg.params.cycle();
  prop.t_end = cfg.prop_t_end_cycles * cfg.params.cycle();
  prop.record_stride = cfg.prop_record_stride;
  prop.method = cfg.prop_method == "adaptive" ? Method::AdaptiveMultistep : Method::SplitOperator;
  return prop;
}

namespace detail {

inline TimeSeriesRecord exact_record(const ExactState& state, const Pulse& pulse, double t,
                                     const Grid& grid) {
  const auto kin = kinematics_quadrature(pulse, state.params, t);
  const WaveFunction psi = exact_envelope(state, kin, grid);
  const auto obs = observables(psi, state.params);
  TimeSeriesRecord rec;
  rec.t = t;
  rec.peak = peak_position(psi);
  rec.mean_x = obs.mean_x;
  rec.mean_p = obs.mean_p;
  rec.dx = obs.dx_unc;
  rec.dp = obs.dp_unc;
  rec.dxdp = obs.product;
  rec.energy = energy_expectation(psi, pulse, state.params, t);
  rec.accel = ehrenfest_acceleration(psi, pulse, state.params, t);
  rec.d_ref = kin.d;
  rec.norm = obs.norm;
  return rec;
}

inline double closed_form_or_quadrature(const Pulse& pulse, const OscillatorParams& params,
                                        double t, double quadrature_value) {
  if (const auto* ss = std::get_if<SineSquaredPulse>(&pulse)) {
    return d_closed_sine_squared(*ss, params, t);
  }
  return quadrature_value;  // no closed form for this pulse kind
}

}  // namespace detail

// Runs the configured experiment and writes the full artifact set into
// cfg.out_dir: numeric and exact time series on the same mesh, the classical
// reference trajectory, the state-changing operator coefficients, both final
// states, and the resolved metadata. Deterministic given the config.
inline void run_experiment(const ExperimentConfig& cfg) {
  validate(cfg.params);
  if (cfg.out_dir.empty()) throw std::invalid_argument("run_experiment: out.dir not set");
  const Pulse pulse = make_pulse(cfg);
  const PropagationConfig prop = make_propagation_config(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = [&](const char* name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
  };

  const WaveFunction psi0 = eigenstate(cfg.state_n, cfg.params, prop.grid);
  const PropagationResult numeric = propagate(psi0, pulse, cfg.params, prop);
  write_timeseries_csv(path("timeseries_numeric.csv"), numeric.series);
  write_wavefunction_csv(path("psi_final_numeric.csv"), numeric.psi_final);

  const ExactState state{cfg.state_n, pulse, cfg.params, PhaseMode::Validated};
  TimeSeries exact_series;
  Table d_reference{{"t", "d_quadrature", "d_closed"}, {}};
  Table decomposition{{"t", "cx", "cp", "c1"}, {}};
  for (const auto& rec : numeric.series.records) {
    exact_series.records.push_back(detail::exact_record(state, pulse, rec.t, prop.grid));
    d_reference.rows.push_back(
        {rec.t, rec.d_ref, detail::closed_form_or_quadrature(pulse, cfg.params, rec.t, rec.d_ref)});
    const auto dec = decompose(pulse, cfg.params, rec.t);
    decomposition.rows.push_back(
        {rec.t, dec.h_c.cx.real(), dec.h_c.cp.real(), dec.h_c.c1.real()});
  }
  write_timeseries_csv(path("timeseries_exact.csv"), exact_series);
  write_table_csv(path("d_reference.csv"), d_reference);
  write_table_csv(path("decomposition.csv"), decomposition);
  write_wavefunction_csv(path("psi_final_exact.csv"),
                         exact_psi(state, numeric.series.records.back().t, prop.grid));

  nlohmann::json meta;
  meta["version"] = kVersion;
  std::istringstream cfg_lines(serialize_config(cfg));
  std::string line;
  while (std::getline(cfg_lines, line)) {
    const auto eq = line.find(" = ");
    meta["config"][line.substr(0, eq)] = line.substr(eq + 3);
  }
  meta["derived"]["cycle"] = cfg.params.cycle();
  meta["derived"]["dt"] = prop.dt;
  meta["derived"]["t_end"] = prop.t_end;
  meta["derived"]["n_steps"] = static_cast<long long>(std::llround(prop.t_end / prop.dt));
  meta["tolerances"]["edge_amplitude_limit"] = kEdgeAmplitudeLimit;
  meta["tolerances"]["kinematics_quadrature"] = kKinematicsTol;
  meta["tolerances"]["adaptive_rel_tol"] = prop.adaptive_rel_tol;
  std::ofstream meta_out(path("run_meta.json"));
  meta_out << meta.dump(2) << "\n";
}

struct ColumnDiff {
  double max_abs = 0.0;
  double rms = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct CompareReport {
  bool pass = true;
  // file name (empty for a direct file pair) -> column -> diff
  std::map<std::string, std::map<std::string, ColumnDiff>> files;
};

using ToleranceSpec = std::map<std::string, double>;

namespace detail {

inline std::map<std::string, ColumnDiff> compare_tables(const Table& a, const Table& b,
                                                        const ToleranceSpec& tols,
                                                        double default_tol) {
  if (a.columns != b.columns) {
    throw std::invalid_argument("compare: column schema mismatch");
  }
  if (a.rows.size() != b.rows.size()) {
    throw std::invalid_argument("compare: row count mismatch");
  }
  // The leading t/x column is the mesh; it must agree before the physics
  // columns are worth diffing.
  if (!a.columns.empty() && (a.columns[0] == "t" || a.columns[0] == "x")) {
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      if (std::abs(a.rows[r][0] - b.rows[r][0]) > 1e-9 * (1.0 + std::abs(a.rows[r][0]))) {
        throw std::invalid_argument("compare: mesh mismatch in column " + a.columns[0]);
      }
    }
  }
  std::map<std::string, ColumnDiff> out;
  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    ColumnDiff diff;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      const double d = std::abs(a.rows[r][c] - b.rows[r][c]);
      diff.max_abs = std::max(diff.max_abs, d);
      sum_sq += d * d;
    }
    diff.rms = a.rows.empty() ? 0.0 : std::sqrt(sum_sq / static_cast<double>(a.rows.size()));
    const auto it = tols.find(a.columns[c]);
    diff.tol = it != tols.end() ? it->second : default_tol;
    diff.pass = diff.max_abs <= diff.tol;
    out.emplace(a.columns[c], diff);
  }
  return out;
}

}  // namespace detail

// Per-column max-abs and RMS differences between two like-schema CSV files.
// Wave-function files additionally get an "l2_psi" entry with the L2 distance
// between the two complex states.
inline CompareReport compare_files(const std::string& file_a, const std::string& file_b,
                                   const ToleranceSpec& tols = {}, double default_tol = 0.0,
                                   const std::string& label = "") {
  const Table a = read_table_csv(file_a);
  const Table b = read_table_csv(file_b);
  CompareReport report;
  auto& columns = report.files[label];
  columns = detail::compare_tables(a, b, tols, default_tol);
  if (a.columns == std::vector<std::string>{"x", "re", "im"} && a.rows.size() > 1) {
    const double dx = a.rows[1][0] - a.rows[0][0];
    double sum = 0.0;
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      const double dre = a.rows[r][1] - b.rows[r][1];
      const double dim = a.rows[r][2] - b.rows[r][2];
      sum += (dre * dre + dim * dim) * dx;
    }
    ColumnDiff l2;
    l2.max_abs = std::sqrt(sum);
    l2.rms = l2.max_abs;
    const auto it = tols.find("l2_psi");
    l2.tol = it != tols.end() ? it->second : default_tol;
    l2.pass = l2.max_abs <= l2.tol;
    columns.emplace("l2_psi", l2);
  }
  for (const auto& [name, diff] : columns) {
    if (!diff.pass) report.pass = false;
  }
  return report;
}

inline const std::vector<std::string>& standard_run_files() {
  static const std::vector<std::string> names = {
      "timeseries_numeric.csv", "timeseries_exact.csv", "d_reference.csv",
      "decomposition.csv",      "psi_final_numeric.csv", "psi_final_exact.csv"};
  return names;
}

// Compares every standard artifact present in both run directories.
inline CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b,
                                  const ToleranceSpec& tols = {}, double default_tol = 0.0) {
  CompareReport report;
  bool any = false;
  for (const auto& name : standard_run_files()) {
    const auto pa = std::filesystem::path(dir_a) / name;
    const auto pb = std::filesystem::path(dir_b) / name;
    if (!std::filesystem::exists(pa) || !std::filesystem::exists(pb)) continue;
    any = true;
    CompareReport one = compare_files(pa.string(), pb.string(), tols, default_tol, name);
    report.files.insert(one.files.begin(), one.files.end());
    if (!one.pass) report.pass = false;
  }
  if (!any) throw std::invalid_argument("compare_runs: no common artifacts found");
  return report;
}

inline nlohmann::json report_to_json(const CompareReport& report) {
  nlohmann::json j;
  j["pass"] = report.pass;
  for (const auto& [file, columns] : report.files) {
    nlohmann::json cols;
    for (const auto& [name, diff] : columns) {
      cols[name] = {{"max_abs", diff.max_abs},
                    {"rms", diff.rms},
                    {"tol", diff.tol},
                    {"pass", diff.pass}};
    }
    j["files"][file.empty() ? "(files)" : file] = cols;
  }
  return j;
}

// Operator decomposition table: H, H~ and H_c coefficients at each requested
// time, the linearity flag (quadratic part of H_c identically zero), and the
// classical d'/d'' cross-check columns.
inline Table decompose_report(const ExperimentConfig& cfg, const std::vector<double>& times) {
  const Pulse pulse = make_pulse(cfg);
  Table table;
  table.columns = {"t",      "H_c1",  "H_cx",  "H_cp",  "H_cxx", "H_cpp",  "H_cxp",
                   "Ht_c1",  "Ht_cx", "Ht_cp", "Ht_cxx", "Ht_cpp", "Ht_cxp", "Hc_c1",
                   "Hc_cx",  "Hc_cp", "Hc_quadratic_zero", "d_dot", "d_ddot"};
  for (double t : times) {
    const auto h = build_hamiltonian(pulse, cfg.params, t);
    const auto dec = decompose(pulse, cfg.params, t);
    const auto kin = kinematics_quadrature(pulse, cfg.params, t);
    const bool linear = dec.h_c.cxx == 0.0 && dec.h_c.cpp == 0.0 && dec.h_c.cxp == 0.0;
    table.rows.push_back({t, h.c1.real(), h.cx.real(), h.cp.real(), h.cxx.real(), h.cpp.real(),
                          h.cxp.real(), dec.h_tilde.c1.real(), dec.h_tilde.cx.real(),
                          dec.h_tilde.cp.real(), dec.h_tilde.cxx.real(), dec.h_tilde.cpp.real(),
                          dec.h_tilde.cxp.real(), dec.h_c.c1.real(), dec.h_c.cx.real(),
                          dec.h_c.cp.real(), linear ? 1.0 : 0.0, kin.d_dot, kin.d_ddot});
  }
  return table;
}

// F(t), fs, fc and d sampled on a uniform mesh; plot-ready pulse data.
inline Table pulse_table(const ExperimentConfig& cfg, double t_end, std::size_t n_samples) {
  if (n_samples < 2) throw std::invalid_argument("pulse_table: need at least 2 samples");
  const Pulse pulse = make_pulse(cfg);
  Table table;
  table.columns = {"t", "F", "fs", "fc", "d"};
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = t_end * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    const auto kin = kinematics_quadrature(pulse, cfg.params, t);
    table.rows.push_back({t, eval_force(pulse, t), kin.fs, kin.fc, kin.d});
  }
  return table;
}

}  // namespace drivenosc
