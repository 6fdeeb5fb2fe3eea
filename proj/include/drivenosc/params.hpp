// Oscillator unit convention. Defaults m = omega = hbar = 1, which puts the
// ground-state classical turning points at x = +-1.
#pragma once

#include <stdexcept>

#include "drivenosc/common.hpp"

namespace drivenosc {

struct OscillatorParams {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;

  // One oscillator cycle, 2*pi/omega.
  double cycle() const { return 2.0 * kPi / omega; }

  bool operator==(const OscillatorParams&) const = default;
};

inline void validate(const OscillatorParams& p) {
  if (!(p.mass > 0.0) || !(p.omega > 0.0) || !(p.hbar > 0.0)) {
    throw std::invalid_argument("OscillatorParams: mass, omega, hbar must be positive");
  }
}

}  // namespace drivenosc
