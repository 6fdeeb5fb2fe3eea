// Harmonic-oscillator eigenstates Phi_n evaluated from the normalized
// Hermite-function three-term recurrence (stable far past n = 20, unlike the
// raw Hermite polynomials), and their sampling onto a Grid.
#pragma once

#include <cmath>
#include <stdexcept>

#include "drivenosc/common.hpp"
#include "drivenosc/grid.hpp"
#include "drivenosc/params.hpp"
#include "drivenosc/wavefunction.hpp"

namespace drivenosc {

inline double sho_energy(int n, const OscillatorParams& params) {
  if (n < 0) throw std::invalid_argument("sho_energy: n must be non-negative");
  return (static_cast<double>(n) + 0.5) * params.hbar * params.omega;
}

// Phi_n(x), real and unit-normalized in the continuum.
inline double eigenstate_value(int n, double x, const OscillatorParams& params) {
  if (n < 0) throw std::invalid_argument("eigenstate_value: n must be non-negative");
  validate(params);
  const double alpha = std::sqrt(params.mass * params.omega / params.hbar);
  const double xi = alpha * x;
  double hm1 = 0.0;
  double h = std::pow(kPi, -0.25) * std::exp(-0.5 * xi * xi);
  for (int k = 1; k <= n; ++k) {
    const double next =
        xi * std::sqrt(2.0 / k) * h - std::sqrt((k - 1.0) / k) * hm1;
    hm1 = h;
    h = next;
  }
  return std::sqrt(alpha) * h;
}

// Samples Phi_n on the grid. Throws when the grid is too narrow to hold the
// state (edge amplitude at or above kEdgeAmplitudeLimit).
inline WaveFunction eigenstate(int n, const OscillatorParams& params, const Grid& grid) {
  WaveFunction psi = make_wavefunction(grid);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    psi.amps[j] = eigenstate_value(n, grid.x(j), params);
  }
  if (edge_amplitude(psi) >= kEdgeAmplitudeLimit) {
    throw std::invalid_argument("eigenstate: grid too narrow for requested state");
  }
  return psi;
}

}  // namespace drivenosc
