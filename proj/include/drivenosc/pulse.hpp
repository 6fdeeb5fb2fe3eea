// Driving-force descriptorsF(t). The sine-squared pulse is
// F(t) = F_m * sin(pi t/T)^2 * sin(carrier t) on [0, T] and exactly zero
// outside; tabulated pulses interpolate linearly and vanish off the table.
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "drivenosc/common.hpp"

namespace drivenosc {

struct ZeroPulse {};

struct ConstantPulse {
  double amplitude = 0.0;
};

struct SineSquaredPulse {
  double peak_force = 1.0;       // F_m
  double carrier_frequency = 1.0;  // Omega
  double duration = 1.0;         // T
};

struct TabulatedPulse {
  std::vector<double> times;
  std::vector<double> forces;
};

using Pulse = std::variant<ZeroPulse, ConstantPulse, SineSquaredPulse, TabulatedPulse>;

inline SineSquaredPulse make_sine_squared(double peak_force, double carrier_frequency,
                                          double duration) {
  if (!std::isfinite(peak_force)) {
    throw std::invalid_argument("sine-squared pulse: peak force must be finite");
  }
  if (!(carrier_frequency > 0.0) || !(duration > 0.0)) {
    throw std::invalid_argument("sine-squared pulse: carrier frequency and duration must be positive");
  }
  return SineSquaredPulse{peak_force, carrier_frequency, duration};
}

inline TabulatedPulse make_tabulated(std::vector<double> times, std::vector<double> forces) {
  if (times.size() != forces.size() || times.size() < 2) {
    throw std::invalid_argument("tabulated pulse: need matching time/force columns, at least 2 rows");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("tabulated pulse: times must be strictly increasing");
    }
  }
  return TabulatedPulse{std::move(times), std::move(forces)};
}

inline double eval_force(const Pulse& pulse, double t) {
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ZeroPulse>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, ConstantPulse>) {
          return p.amplitude;
        } else if constexpr (std::is_same_v<T, SineSquaredPulse>) {
          if (t < 0.0 || t > p.duration) return 0.0;
          const double envelope = std::sin(kPi * t / p.duration);
          return p.peak_force * envelope * envelope * std::sin(p.carrier_frequency * t);
        } else {
          if (p.times.empty() || t < p.times.front() || t > p.times.back()) return 0.0;
          const auto it = std::upper_bound(p.times.begin(), p.times.end(), t);
          if (it == p.times.begin()) return p.forces.front();
          const std::size_t hi = static_cast<std::size_t>(it - p.times.begin());
          if (hi == p.times.size()) return p.forces.back();
          const std::size_t lo = hi - 1;
          const double w = (t - p.times[lo]) / (p.times[hi] - p.times[lo]);
          return (1.0 - w) * p.forces[lo] + w * p.forces[hi];
        }
      },
      pulse);
}

// Upper end of the pulse support; infinity for a constant force.
inline double support_end(const Pulse& pulse) {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ZeroPulse>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, ConstantPulse>) {
          return std::numeric_limits<double>::infinity();
        } else if constexpr (std::is_same_v<T, SineSquaredPulse>) {
          return p.duration;
        } else {
          return p.times.empty() ? 0.0 : p.times.back();
        }
      },
      pulse);
}

// Two-column CSV (time, force); a non-numeric first line is treated as a header.
inline TabulatedPulse pulse_from_csv(std::istream& in) {
  std::vector<double> times, forces;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t = 0.0, f = 0.0;
    if (!(row >> t >> f)) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw std::invalid_argument("pulse_from_csv: malformed row: " + line);
    }
    first = false;
    times.push_back(t);
    forces.push_back(f);
  }
  return make_tabulated(std::move(times), std::move(forces));
}

inline TabulatedPulse pulse_from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("pulse_from_csv_file: cannot open " + path);
  return pulse_from_csv(in);
}

}  // namespace drivenosc
