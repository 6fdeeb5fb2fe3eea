// Adaptive-step Adams-Bashforth-Moulton (order 4, PECE) for complex-valued
// ODE systems. The predictor-corrector gap drives the Milne error estimate;
// on a step-size change the derivative history is re-primed with RK4.
#pragma once

#include <cmath>
#include <limits>
#include <complex>
#include <cstddef>
#include <vector>

#include "drivenosc/common.hpp"

namespace drivenosc {

struct AbmOptions {
  double rel_tol = 1e-9;
  // Kept near the roundoff floor on purpose: for oscillatory stiff systems
  // the unstable parasitic modes start at roundoff amplitude, and only an
  // absolute weight this small lets the error estimate flag their growth
  // before they contaminate the solution.
  double abs_tol = 1e-14;
  double initial_dt = 1e-3;
  double min_dt = 1e-13;
  // Hard step ceiling. For y' = -iAy the Adams-Moulton PECE pair is stable
  // only up to |h lambda| ~ 1.2; callers who know the spectral radius should
  // set this to about 1/rho(A) so the controller never probes past it.
  double max_dt = std::numeric_limits<double>::infinity();
  std::size_t max_rhs_evals = 200'000'000;
};

namespace detail {

using CVec = std::vector<std::complex<double>>;

template <class Rhs>
class AbmIntegrator {
 public:
  AbmIntegrator(Rhs& rhs, CVec& y, const AbmOptions& opt) : rhs_(rhs), y_(y), opt_(opt) {
    const std::size_t n = y.size();
    for (auto& f : hist_) f.resize(n);
    scratch_.resize(n);
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    pred_.resize(n);
    corr_.resize(n);
    fpred_.resize(n);
  }

  void run(double t0, double t1) {
    t_ = t0;
    h_ = std::min({opt_.initial_dt, opt_.max_dt, (t1 - t0) / 4.0});
    if (!(h_ > 0.0)) {
      if (t1 == t0) return;
      throw std::invalid_argument("adaptive ABM: non-positive span");
    }
    prime(t1);
    while (t_ < t1) {
      if (t_ + h_ > t1) {
        finish_rk4(t1);
        return;
      }
      step(t1);
    }
  }

 private:
  void eval(double t, const CVec& y, CVec& out) {
    if (++evals_ > opt_.max_rhs_evals) {
      throw numerical_error("adaptive ABM: evaluation budget exceeded");
    }
    rhs_(t, y, out);
  }

  void rk4_step(double h) {
    const std::size_t n = y_.size();
    eval(t_, y_, k1_);
    for (std::size_t i = 0; i < n; ++i) scratch_[i] = y_[i] + 0.5 * h * k1_[i];
    eval(t_ + 0.5 * h, scratch_, k2_);
    for (std::size_t i = 0; i < n; ++i) scratch_[i] = y_[i] + 0.5 * h * k2_[i];
    eval(t_ + 0.5 * h, scratch_, k3_);
    for (std::size_t i = 0; i < n; ++i) scratch_[i] = y_[i] + h * k3_[i];
    eval(t_ + h, scratch_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      y_[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
    t_ += h;
  }

  // Build the four-deep derivative history at spacing h_ starting from the
  // current point, advancing the solution three RK4 steps.
  void prime(double t1) {
    if (t1 - t_ <= 0.0) return;
    if (t_ + 3.0 * h_ > t1) h_ = (t1 - t_) / 3.0;
    eval(t_, y_, hist_[0]);
    for (int i = 1; i < 4; ++i) {
      rk4_step(h_);
      eval(t_, y_, hist_[i]);
    }
  }

  void finish_rk4(double t1) {
    const double remaining = t1 - t_;
    if (remaining <= 0.0) return;
    const int steps = std::max(1, static_cast<int>(std::ceil(remaining / h_)));
    const double h = remaining / steps;
    for (int i = 0; i < steps; ++i) rk4_step(h);
    t_ = t1;
  }

  void step(double t1) {
    const std::size_t n = y_.size();
    const double h = h_;
    for (std::size_t i = 0; i < n; ++i) {
      pred_[i] = y_[i] + h / 24.0 *
                             (55.0 * hist_[3][i] - 59.0 * hist_[2][i] + 37.0 * hist_[1][i] -
                              9.0 * hist_[0][i]);
    }
    eval(t_ + h, pred_, fpred_);
    for (std::size_t i = 0; i < n; ++i) {
      corr_[i] = y_[i] + h / 24.0 *
                             (9.0 * fpred_[i] + 19.0 * hist_[3][i] - 5.0 * hist_[2][i] +
                              hist_[1][i]);
    }
    // Milne device: the corrector's local error is ~ (19/270)|corr - pred|.
    double err_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double scale =
          opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y_[i]), std::abs(corr_[i]));
      const double e = (19.0 / 270.0) * std::abs(corr_[i] - pred_[i]) / scale;
      err_sq += e * e;
    }
    const double err = std::sqrt(err_sq / static_cast<double>(n));

    if (err <= 1.0) {
      t_ += h;
      y_ = corr_;
      for (int i = 0; i < 3; ++i) hist_[i].swap(hist_[i + 1]);
      eval(t_, y_, hist_[3]);
      ++accepted_;
      // Grow only after a sustained quiet stretch and never back up to a
      // step size that was already rejected (the stability ceiling for
      // oscillatory systems sits at a fixed h, not a fixed error).
      if (err < 0.02 && accepted_ >= 16 && 2.0 * h_ <= std::min(h_ceiling_, opt_.max_dt)) {
        h_ *= 2.0;
        accepted_ = 0;
        if (t_ < t1) prime(t1);
      }
      return;
    }

    h_ceiling_ = h;
    const double factor = std::max(0.25, 0.9 * std::pow(err, -0.2));
    h_ *= factor;
    accepted_ = 0;
    if (h_ < opt_.min_dt) {
      throw numerical_error("adaptive ABM: step size underflow");
    }
    prime(t1);
  }

  Rhs& rhs_;
  CVec& y_;
  const AbmOptions& opt_;
  double t_ = 0.0;
  double h_ = 0.0;
  double h_ceiling_ = std::numeric_limits<double>::infinity();
  std::size_t evals_ = 0;
  int accepted_ = 0;
  CVec hist_[4];
  CVec scratch_, k1_, k2_, k3_, k4_, pred_, corr_, fpred_;
};

}  // namespace detail

// Integrates y' = rhs(t, y) from t0 to t1 in place.
template <class Rhs>
void integrate_adaptive_abm(Rhs&& rhs, std::vector<std::complex<double>>& y, double t0,
                            double t1, const AbmOptions& opt = {}) {
  if (t1 < t0) throw std::invalid_argument("integrate_adaptive_abm: t1 < t0");
  if (t1 == t0) return;
  detail::AbmIntegrator<std::remove_reference_t<Rhs>> integrator(rhs, y, opt);
  integrator.run(t0, t1);
}

}  // namespace drivenosc
