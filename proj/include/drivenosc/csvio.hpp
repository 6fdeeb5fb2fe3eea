// CSV import/export. All floats are written with 12 significant digits so a
// given configuration always produces byte-identical files.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "drivenosc/grid.hpp"
#include "drivenosc/propagator.hpp"
#include "drivenosc/wavefunction.hpp"

namespace drivenosc {

inline std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline constexpr const char* kTimeSeriesHeader =
    "t,peak,mean_x,mean_p,dx,dp,dxdp,energy,accel,d_ref,norm";

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline void write_table_csv(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_sig(row[c]);
    }
    out << "\n";
  }
}

inline void write_table_csv(const std::string& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("write_table_csv: cannot open " + path);
  write_table_csv(out, table);
}

inline Table read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("read_table_csv: cannot open " + path);
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_table_csv: empty file " + path);
  std::istringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    if (values.size() != table.columns.size()) {
      throw std::invalid_argument("read_table_csv: ragged row in " + path);
    }
    table.rows.push_back(std::move(values));
  }
  return table;
}

inline void write_timeseries_csv(const std::string& path, const TimeSeries& series) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("write_timeseries_csv: cannot open " + path);
  out << kTimeSeriesHeader << "\n";
  for (const auto& r : series.records) {
    out << format_sig(r.t) << ',' << format_sig(r.peak) << ',' << format_sig(r.mean_x) << ','
        << format_sig(r.mean_p) << ',' << format_sig(r.dx) << ',' << format_sig(r.dp) << ','
        << format_sig(r.dxdp) << ',' << format_sig(r.energy) << ',' << format_sig(r.accel) << ','
        << format_sig(r.d_ref) << ',' << format_sig(r.norm) << "\n";
  }
}

inline TimeSeries read_timeseries_csv(const std::string& path) {
  const Table table = read_table_csv(path);
  TimeSeries series;
  for (const auto& row : table.rows) {
    if (row.size() != 11) throw std::invalid_argument("read_timeseries_csv: bad row width");
    TimeSeriesRecord r;
    r.t = row[0];
    r.peak = row[1];
    r.mean_x = row[2];
    r.mean_p = row[3];
    r.dx = row[4];
    r.dp = row[5];
    r.dxdp = row[6];
    r.energy = row[7];
    r.accel = row[8];
    r.d_ref = row[9];
    r.norm = row[10];
    series.records.push_back(r);
  }
  return series;
}

inline void write_wavefunction_csv(const std::string& path, const WaveFunction& psi) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("write_wavefunction_csv: cannot open " + path);
  out << "x,re,im\n";
  for (std::size_t j = 0; j < psi.grid.n_points; ++j) {
    out << format_sig(psi.grid.x(j)) << ',' << format_sig(psi.amps[j].real()) << ','
        << format_sig(psi.amps[j].imag()) << "\n";
  }
}

}  // namespace drivenosc
