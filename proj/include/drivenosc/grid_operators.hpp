// Dense operator matrices on the Fourier grid, shared by the matrix oracle
// and the rotating-frame integrator: the circulant spectral kinetic energy
// and momentum, and the static oscillator Hamiltonian.
#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "drivenosc/grid.hpp"
#include "drivenosc/params.hpp"

namespace drivenosc::detail {

inline Eigen::MatrixXd dense_kinetic_matrix(const Grid& grid, const OscillatorParams& params) {
  const auto n = static_cast<Eigen::Index>(grid.n_points);
  const auto k = fourier_wavenumbers(grid);
  // Circulant: precompute the profile over index offsets.
  std::vector<double> profile(grid.n_points);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t d = 0; d < grid.n_points; ++d) {
    double sum = 0.0;
    for (std::size_t q = 0; q < grid.n_points; ++q) {
      const double kq = k[q];
      sum += params.hbar * params.hbar * kq * kq / (2.0 * params.mass) *
             std::cos(kq * static_cast<double>(d) * grid.dx());
    }
    profile[d] = sum * inv_n;
  }
  Eigen::MatrixXd t(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const std::size_t d = static_cast<std::size_t>(j >= l ? j - l : l - j);
      t(j, l) = profile[d];
    }
  }
  return t;
}

inline Eigen::MatrixXcd dense_momentum_matrix(const Grid& grid, const OscillatorParams& params) {
  const auto n = static_cast<Eigen::Index>(grid.n_points);
  const auto k = fourier_wavenumbers(grid);
  std::vector<std::complex<double>> profile(grid.n_points);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t d = 0; d < grid.n_points; ++d) {
    std::complex<double> sum{};
    for (std::size_t q = 0; q < grid.n_points; ++q) {
      sum += params.hbar * k[q] * std::polar(1.0, k[q] * static_cast<double>(d) * grid.dx());
    }
    profile[d] = sum * inv_n;
  }
  Eigen::MatrixXcd p(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const std::size_t d = static_cast<std::size_t>(j >= l ? j - l : l - j);
      p(j, l) = (j >= l) ? profile[d] : std::conj(profile[d]);
    }
  }
  return p;
}

// T + m w^2 x^2 / 2 as a dense real symmetric matrix.
inline Eigen::MatrixXd dense_static_hamiltonian(const Grid& grid,
                                                const OscillatorParams& params) {
  Eigen::MatrixXd h = dense_kinetic_matrix(grid, params);
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(grid.n_points); ++j) {
    const double x = grid.x(static_cast<std::size_t>(j));
    h(j, j) += 0.5 * params.mass * params.omega * params.omega * x * x;
  }
  return h;
}

}  // namespace drivenosc::detail
