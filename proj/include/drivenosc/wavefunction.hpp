// Complex wave function samples on a Grid, plus the grid-level observables
// used throughout: norm, inner products, moments of x and p (the latter via
// the spectral derivative), uncertainties, and the refined density peak.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "drivenosc/common.hpp"
#include "drivenosc/fft.hpp"
#include "drivenosc/grid.hpp"
#include "drivenosc/params.hpp"

namespace drivenosc {

// States accepted by the simulation pipeline must stay below this amplitude
// at the two domain edges; beyond it, periodic images corrupt the physics.
inline constexpr double kEdgeAmplitudeLimit = 1e-8;

struct WaveFunction {
  Grid grid;
  std::vector<std::complex<double>> amps;
};

inline WaveFunction make_wavefunction(const Grid& grid) {
  return WaveFunction{grid, std::vector<std::complex<double>>(grid.n_points)};
}

inline std::complex<double> inner_product(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid == b.grid)) {
    throw std::invalid_argument("inner_product: grid mismatch");
  }
  std::complex<double> sum{};
  for (std::size_t j = 0; j < a.amps.size(); ++j) {
    sum += std::conj(a.amps[j]) * b.amps[j];
  }
  return sum * a.grid.dx();
}

inline double norm(const WaveFunction& psi) {
  double sum = 0.0;
  for (const auto& a : psi.amps) sum += std::norm(a);
  return std::sqrt(sum * psi.grid.dx());
}

inline WaveFunction normalized(const WaveFunction& psi) {
  const double n = norm(psi);
  if (!(n > 0.0)) throw std::invalid_argument("normalized: zero-norm state");
  WaveFunction out = psi;
  for (auto& a : out.amps) a /= n;
  return out;
}

inline double edge_amplitude(const WaveFunction& psi) {
  return std::max(std::abs(psi.amps.front()), std::abs(psi.amps.back()));
}

// (p^power) psi via the discrete Fourier transform.
inline WaveFunction apply_momentum(const WaveFunction& psi, const OscillatorParams& params,
                                   int power) {
  const auto k = fourier_wavenumbers(psi.grid);
  WaveFunction out = psi;
  fft_forward(out.amps);
  const double scale = 1.0 / static_cast<double>(psi.grid.n_points);
  for (std::size_t j = 0; j < out.amps.size(); ++j) {
    double factor = 1.0;
    for (int q = 0; q < power; ++q) factor *= params.hbar * k[j];
    out.amps[j] *= factor * scale;
  }
  fft_inverse(out.amps);
  return out;
}

struct ObservableSet {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
  double dx_unc = 0.0;
  double dp_unc = 0.0;
  double product = 0.0;
  double norm = 0.0;
};

// Position moments by grid sums, momentum moments in the Fourier basis.
// Requires a normalized state (within 1e-6).
inline ObservableSet observables(const WaveFunction& psi, const OscillatorParams& params) {
  validate(params);
  ObservableSet obs;
  const double dx = psi.grid.dx();
  double nrm2 = 0.0, mx = 0.0, mxx = 0.0;
  for (std::size_t j = 0; j < psi.amps.size(); ++j) {
    const double w = std::norm(psi.amps[j]) * dx;
    const double x = psi.grid.x(j);
    nrm2 += w;
    mx += w * x;
    mxx += w * x * x;
  }
  obs.norm = std::sqrt(nrm2);
  if (std::abs(obs.norm - 1.0) > 1e-6) {
    throw std::invalid_argument("observables: state not normalized");
  }

  auto spectrum = psi.amps;
  fft_forward(spectrum);
  const auto k = fourier_wavenumbers(psi.grid);
  const double wk = dx / static_cast<double>(psi.grid.n_points);
  double mp = 0.0, mpp = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double w = std::norm(spectrum[j]) * wk;
    const double p = params.hbar * k[j];
    mp += w * p;
    mpp += w * p * p;
  }

  obs.mean_x = mx;
  obs.mean_p = mp;
  obs.var_x = std::max(0.0, mxx - mx * mx);
  obs.var_p = std::max(0.0, mpp - mp * mp);
  obs.dx_unc = std::sqrt(obs.var_x);
  obs.dp_unc = std::sqrt(obs.var_p);
  obs.product = obs.dx_unc * obs.dp_unc;
  return obs;
}

// Location of max |psi|^2, refined by a three-point parabola around the grid
// argmax. Ties resolve to the lowest index; a strict maximum sitting on the
// boundary signals a too-small domain and throws.
inline double peak_position(const WaveFunction& psi) {
  const auto& a = psi.amps;
  const std::size_t n = a.size();
  std::size_t best = 0;
  double best_val = std::norm(a[0]);
  for (std::size_t j = 1; j < n; ++j) {
    const double v = std::norm(a[j]);
    if (v > best_val) {
      best_val = v;
      best = j;
    }
  }
  if (best == 0 || best == n - 1) {
    bool strict = true;
    for (std::size_t j = 1; j + 1 < n; ++j) {
      if (std::norm(a[j]) >= best_val) {
        strict = false;
        break;
      }
    }
    if (strict) {
      throw numerical_error("peak_position: density maximum on domain boundary");
    }
    return psi.grid.x(best);
  }
  const double ym = std::norm(a[best - 1]);
  const double y0 = best_val;
  const double yp = std::norm(a[best + 1]);
  const double denom = ym - 2.0 * y0 + yp;
  double shift = 0.0;
  if (denom != 0.0) shift = 0.5 * (ym - yp) / denom;
  return psi.grid.x(best) + shift * psi.grid.dx();
}

}  // namespace drivenosc
