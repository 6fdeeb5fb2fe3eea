// Uniform periodic spatial grid. Sample points are x_j = x_min + j*dx for
// j = 0..n_points-1; x_max itself is excluded (periodic convention).
#pragma once

#include <bit>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "drivenosc/common.hpp"

namespace drivenosc {

struct Grid {
  double x_min = -20.0;
  double x_max = 20.0;
  std::size_t n_points = 512;

  double length() const { return x_max - x_min; }
  double dx() const { return length() / static_cast<double>(n_points); }
  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }

  bool operator==(const Grid&) const = default;
};

inline Grid build_grid(double x_min, double x_max, std::size_t n_points) {
  if (!(x_min < x_max)) {
    throw std::invalid_argument("build_grid: x_min must be below x_max");
  }
  if (n_points < 8 || !std::has_single_bit(n_points)) {
    throw std::invalid_argument("build_grid: n_points must be a power of two, at least 8");
  }
  return Grid{x_min, x_max, n_points};
}

// Signed Fourier wavenumbers k_j = 2*pi*j~/L with j~ = j for j < n/2 and
// j - n otherwise. Momentum acts diagonally as hbar*k in this basis.
inline std::vector<double> fourier_wavenumbers(const Grid& grid) {
  const std::size_t n = grid.n_points;
  std::vector<double> k(n);
  const double dk = 2.0 * kPi / grid.length();
  for (std::size_t j = 0; j < n; ++j) {
    const double signed_index =
        (j < n / 2) ? static_cast<double>(j)
                    : static_cast<double>(j) - static_cast<double>(n);
    k[j] = dk * signed_index;
  }
  return k;
}

}  // namespace drivenosc
