// Adaptive quadrature with absolute-error semantics, backed by Gauss-Kronrod
// panels. Used for the force overlap integrals and the exact-solution phase.
#pragma once

#include <cmath>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "drivenosc/common.hpp"

namespace drivenosc {

// Integrates f over [a, b] and guarantees the error estimate stays below
// abs_tol; throws numerical_error when the estimate does not converge.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, 15, 1e-14, &error);
  if (!(error <= abs_tol) && !(std::abs(error) <= abs_tol * (1.0 + std::abs(value)))) {
    throw numerical_error("integrate_adaptive: quadrature did not reach requested tolerance");
  }
  return value;
}

// Composite Simpson rule on [a, b] with panel doubling until two refinements
// agree within abs_tol. Used on tabulated-pulse mesh intervals, where the
// integrand is only piecewise smooth.
template <class F>
double integrate_simpson_doubling(F&& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  auto simpson = [&](std::size_t panels) {
    const double h = (b - a) / static_cast<double>(panels);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < panels; ++i) {
      sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    }
    return sum * h / 3.0;
  };
  std::size_t panels = 8;
  double prev = simpson(panels);
  for (int iter = 0; iter < 22; ++iter) {
    panels *= 2;
    const double cur = simpson(panels);
    if (std::abs(cur - prev) <= abs_tol) return cur;
    prev = cur;
  }
  throw numerical_error("integrate_simpson_doubling: no convergence");
}

}  // namespace drivenosc
