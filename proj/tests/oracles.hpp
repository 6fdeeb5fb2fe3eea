// Test-only oracles, deliberately independent of the library's own numerical
// paths: fixed-panel composite Simpson quadrature (vs adaptive Gauss-Kronrod
// in the library), classical RK4 trajectory integration (vs the convolution
// quadrature), dense grid-matrix operator representations (vs the symbolic
// algebra), and random bandlimited test states.
#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "drivenosc/eigenstates.hpp"
#include "drivenosc/grid.hpp"
#include "drivenosc/params.hpp"
#include "drivenosc/phase_space.hpp"
#include "drivenosc/pulse.hpp"
#include "drivenosc/wavefunction.hpp"

namespace oracles {

// Plain composite Simpson rule with a fixed (even) panel count.
template <class F>
double composite_simpson(F&& f, double a, double b, std::size_t panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  }
  return sum * h / 3.0;
}

struct ClassicalState {
  double d = 0.0;
  double v = 0.0;
};

// RK4 integration of d'' + omega^2 d = F(t)/m from rest.
inline ClassicalState rk4_trajectory(const drivenosc::Pulse& pulse,
                                     const drivenosc::OscillatorParams& params, double t,
                                     std::size_t n_steps) {
  ClassicalState s;
  const double h = t / static_cast<double>(n_steps);
  const double w2 = params.omega * params.omega;
  auto acc = [&](double time, double d) {
    return drivenosc::eval_force(pulse, time) / params.mass - w2 * d;
  };
  double time = 0.0;
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double k1d = s.v, k1v = acc(time, s.d);
    const double k2d = s.v + 0.5 * h * k1v, k2v = acc(time + 0.5 * h, s.d + 0.5 * h * k1d);
    const double k3d = s.v + 0.5 * h * k2v, k3v = acc(time + 0.5 * h, s.d + 0.5 * h * k2d);
    const double k4d = s.v + h * k3v, k4v = acc(time + h, s.d + h * k3d);
    s.d += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    s.v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    time += h;
  }
  return s;
}

// Dense matrix representation of a phase-space polynomial on the grid, built
// from explicit x and p matrices (p spectral, as a plain double loop).
inline Eigen::MatrixXcd momentum_matrix(const drivenosc::Grid& grid,
                                        const drivenosc::OscillatorParams& params) {
  const auto n = static_cast<Eigen::Index>(grid.n_points);
  const auto k = drivenosc::fourier_wavenumbers(grid);
  Eigen::MatrixXcd p(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      std::complex<double> sum{};
      for (Eigen::Index q = 0; q < n; ++q) {
        const double kq = k[static_cast<std::size_t>(q)];
        sum += params.hbar * kq *
               std::polar(1.0, kq * (grid.x(static_cast<std::size_t>(j)) -
                                     grid.x(static_cast<std::size_t>(l))));
      }
      p(j, l) = sum / static_cast<double>(n);
    }
  }
  return p;
}

inline Eigen::MatrixXcd position_matrix(const drivenosc::Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.n_points);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) x(j, j) = grid.x(static_cast<std::size_t>(j));
  return x;
}

inline Eigen::MatrixXcd to_matrix(const drivenosc::PhaseSpacePolynomial& a,
                                  const drivenosc::Grid& grid,
                                  const drivenosc::OscillatorParams& params) {
  const auto n = static_cast<Eigen::Index>(grid.n_points);
  const Eigen::MatrixXcd x = position_matrix(grid);
  const Eigen::MatrixXcd p = momentum_matrix(grid, params);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  return a.c1 * eye + a.cx * x + a.cp * p + a.cxx * x * x + a.cpp * p * p +
         a.cxp * 0.5 * (x * p + p * x);
}

// Random normalized state bandlimited to the first few eigenstates; smooth
// and negligible at the domain edges by construction.
inline drivenosc::WaveFunction random_state(const drivenosc::Grid& grid,
                                            const drivenosc::OscillatorParams& params,
                                            std::mt19937_64& rng, int max_n = 6) {
  std::normal_distribution<double> gauss;
  drivenosc::WaveFunction psi = drivenosc::make_wavefunction(grid);
  for (int n = 0; n <= max_n; ++n) {
    const std::complex<double> coeff{gauss(rng), gauss(rng)};
    for (std::size_t j = 0; j < grid.n_points; ++j) {
      psi.amps[j] += coeff * drivenosc::eigenstate_value(n, grid.x(j), params);
    }
  }
  return drivenosc::normalized(psi);
}

}  // namespace oracles
