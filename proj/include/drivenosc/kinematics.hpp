// Classical kinematics of the driven oscillator: the force overlap integrals
// fs, fc, the trajectory d(t) solving d'' + omega^2 d = F/m from rest, and
// its closed forms for the sine-squared pulse.
//
// Quadrature is the ground truth for d(t); the closed forms are validated
// against it. The nonresonant expression survives that check as printed. The
// resonant one does not: the sign of its (omega+Lambda) term must be positive,
// so ClosedForm::Validated carries the corrected sign and ClosedForm::Literal
// keeps the original for reference.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "drivenosc/common.hpp"
#include "drivenosc/params.hpp"
#include "drivenosc/pulse.hpp"
#include "drivenosc/quadrature.hpp"

namespace drivenosc {

inline constexpr double kKinematicsTol = 1e-10;

namespace detail {

// Integral of F(tau)*weight(tau) over [0, t] clipped to the pulse support.
// Tabulated pulses integrate interval-by-interval on their own mesh with the
// composite Simpson rule; the linear interpolant has kinks at the nodes.
template <class W>
double force_integral(const Pulse& pulse, double t, W&& weight, double abs_tol) {
  if (std::holds_alternative<ZeroPulse>(pulse) || t <= 0.0) return 0.0;
  const auto f = [&](double tau) { return eval_force(pulse, tau) * weight(tau); };
  if (const auto* tab = std::get_if<TabulatedPulse>(&pulse)) {
    const double hi = std::min(t, tab->times.back());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < tab->times.size(); ++i) {
      const double a = std::max(0.0, tab->times[i]);
      const double b = std::min(hi, tab->times[i + 1]);
      if (b <= a) continue;
      sum += integrate_simpson_doubling(f, a, b, abs_tol / static_cast<double>(tab->times.size()));
    }
    return sum;
  }
  const double hi = std::min(t, support_end(pulse));
  if (hi <= 0.0) return 0.0;
  return integrate_adaptive(f, 0.0, hi, abs_tol);
}

}  // namespace detail

struct FourierWeights {
  double fs = 0.0;  // integral of F(tau) sin(omega tau)
  double fc = 0.0;  // integral of F(tau) cos(omega tau)
};

inline FourierWeights fourier_weights(const Pulse& pulse, const OscillatorParams& params,
                                      double t) {
  validate(params);
  if (t < 0.0) throw std::invalid_argument("fourier_weights: t must be non-negative");
  const double w = params.omega;
  FourierWeights out;
  out.fs = detail::force_integral(pulse, t, [w](double tau) { return std::sin(w * tau); },
                                  kKinematicsTol);
  out.fc = detail::force_integral(pulse, t, [w](double tau) { return std::cos(w * tau); },
                                  kKinematicsTol);
  return out;
}

struct Kinematics {
  double fs = 0.0;
  double fc = 0.0;
  double d = 0.0;
  double d_dot = 0.0;
  double d_ddot = 0.0;
};

// d(t) from the sine convolution of the force; d(0) = 0 and d'(0) = 0 hold by
// construction. Valid for all t >= 0 (after the pulse it continues as the
// free oscillation automatically, since fs and fc freeze).
inline Kinematics kinematics_quadrature(const Pulse& pulse, const OscillatorParams& params,
                                        double t) {
  validate(params);
  if (t < 0.0) throw std::invalid_argument("kinematics_quadrature: t must be non-negative");
  const double m = params.mass;
  const double w = params.omega;
  Kinematics kin;
  const auto weights = fourier_weights(pulse, params, t);
  kin.fs = weights.fs;
  kin.fc = weights.fc;
  kin.d = detail::force_integral(
              pulse, t, [w, t](double tau) { return std::sin(w * (t - tau)); }, kKinematicsTol) /
          (m * w);
  kin.d_dot = (std::cos(w * t) * kin.fc + std::sin(w * t) * kin.fs) / m;
  kin.d_ddot = eval_force(pulse, t) / m - w * w * kin.d;
  return kin;
}

enum class ClosedForm {
  Validated,  // matches the quadrature trajectory (default)
  Literal,    // original transcription, kept for reference
};

namespace detail {

inline void require_in_pulse(double t, double duration, const char* who) {
  if (t < 0.0 || t > duration) {
    throw std::invalid_argument(std::string(who) + ": closed form defined for 0 <= t <= T only");
  }
}

inline void require_nonzero(double denom, double scale, const char* who) {
  if (std::abs(denom) <= 1e-12 * scale) {
    throw std::invalid_argument(std::string(who) + ": degenerate denominator");
  }
}

}  // namespace detail

// Closed-form d(t) for nonresonant sine-squared excitation (carrier != omega),
// 0 <= t <= T. Identical for both forms: the transcription checks out against
// quadrature.
inline double d_closed_nonresonant(double peak_force, double carrier, double duration,
                                   const OscillatorParams& params, double t,
                                   ClosedForm /*form*/ = ClosedForm::Validated) {
  validate(params);
  detail::require_in_pulse(t, duration, "d_closed_nonresonant");
  const double m = params.mass;
  const double w = params.omega;
  const double lam = 2.0 * kPi / duration;
  const double scale = w * w;
  detail::require_nonzero(w * w - carrier * carrier, scale, "d_closed_nonresonant");
  detail::require_nonzero(w * w - (lam - carrier) * (lam - carrier), scale,
                          "d_closed_nonresonant");
  detail::require_nonzero(w * w - (lam + carrier) * (lam + carrier), scale,
                          "d_closed_nonresonant");

  const double dm = w * w - (lam - carrier) * (lam - carrier);
  const double dp = w * w - (lam + carrier) * (lam + carrier);
  const double main = peak_force / (2.0 * m * w * (w * w - carrier * carrier)) *
                      (w * std::sin(carrier * t) - carrier * std::sin(w * t));
  const double brace = (lam - carrier) * std::sin(w * t) / dm -
                       (lam + carrier) * std::sin(w * t) / dp -
                       w * std::sin((lam - carrier) * t) / dm +
                       w * std::sin((lam + carrier) * t) / dp;
  return main - peak_force / (4.0 * m * w) * brace;
}

inline double d_dot_closed_nonresonant(double peak_force, double carrier, double duration,
                                       const OscillatorParams& params, double t,
                                       ClosedForm /*form*/ = ClosedForm::Validated) {
  validate(params);
  detail::require_in_pulse(t, duration, "d_dot_closed_nonresonant");
  const double m = params.mass;
  const double w = params.omega;
  const double lam = 2.0 * kPi / duration;
  const double scale = w * w;
  detail::require_nonzero(w * w - carrier * carrier, scale, "d_dot_closed_nonresonant");
  const double dm = w * w - (lam - carrier) * (lam - carrier);
  const double dp = w * w - (lam + carrier) * (lam + carrier);
  detail::require_nonzero(dm, scale, "d_dot_closed_nonresonant");
  detail::require_nonzero(dp, scale, "d_dot_closed_nonresonant");
  const double main = peak_force * carrier / (2.0 * m * (w * w - carrier * carrier)) *
                      (std::cos(carrier * t) - std::cos(w * t));
  const double brace = (lam - carrier) * w * std::cos(w * t) / dm -
                       (lam + carrier) * w * std::cos(w * t) / dp -
                       w * (lam - carrier) * std::cos((lam - carrier) * t) / dm +
                       w * (lam + carrier) * std::cos((lam + carrier) * t) / dp;
  return main - peak_force / (4.0 * m * w) * brace;
}

// Closed-form d(t) for resonant excitation (carrier == omega), 0 <= t <= T.
// The secular -t*cos(omega t) term dominates late times.
inline double d_closed_resonant(double peak_force, double duration,
                                const OscillatorParams& params, double t,
                                ClosedForm form = ClosedForm::Validated) {
  validate(params);
  detail::require_in_pulse(t, duration, "d_closed_resonant");
  const double m = params.mass;
  const double w = params.omega;
  const double lam = 2.0 * kPi / duration;
  detail::require_nonzero(2.0 * w - lam, w, "d_closed_resonant");
  const double plus_sign = (form == ClosedForm::Validated) ? 1.0 : -1.0;
  const double brace = std::sin(w * t) / w - t * std::cos(w * t) -
                       2.0 * w * std::sin(w * t) / (4.0 * w * w - lam * lam) -
                       w * std::sin((w - lam) * t) / (lam * (2.0 * w - lam)) +
                       plus_sign * w * std::sin((w + lam) * t) / (lam * (2.0 * w + lam));
  return peak_force / (4.0 * m * w) * brace;
}

inline double d_dot_closed_resonant(double peak_force, double duration,
                                    const OscillatorParams& params, double t,
                                    ClosedForm form = ClosedForm::Validated) {
  validate(params);
  detail::require_in_pulse(t, duration, "d_dot_closed_resonant");
  const double m = params.mass;
  const double w = params.omega;
  const double lam = 2.0 * kPi / duration;
  detail::require_nonzero(2.0 * w - lam, w, "d_dot_closed_resonant");
  const double plus_sign = (form == ClosedForm::Validated) ? 1.0 : -1.0;
  const double brace = w * t * std::sin(w * t) -
                       2.0 * w * w * std::cos(w * t) / (4.0 * w * w - lam * lam) -
                       w * (w - lam) * std::cos((w - lam) * t) / (lam * (2.0 * w - lam)) +
                       plus_sign * w * (w + lam) * std::cos((w + lam) * t) / (lam * (2.0 * w + lam));
  return peak_force / (4.0 * m * w) * brace;
}

// Closed-form trajectory for a sine-squared pulse at any t >= 0; beyond the
// pulse it continues the free oscillation frozen at t = T.
inline double d_closed_sine_squared(const SineSquaredPulse& pulse, const OscillatorParams& params,
                                    double t, ClosedForm form = ClosedForm::Validated) {
  const double w = params.omega;
  const bool resonant = std::abs(pulse.carrier_frequency - w) <= 1e-12 * w;
  auto value = [&](double s) {
    return resonant
               ? d_closed_resonant(pulse.peak_force, pulse.duration, params, s, form)
               : d_closed_nonresonant(pulse.peak_force, pulse.carrier_frequency, pulse.duration,
                                      params, s, form);
  };
  auto slope = [&](double s) {
    return resonant
               ? d_dot_closed_resonant(pulse.peak_force, pulse.duration, params, s, form)
               : d_dot_closed_nonresonant(pulse.peak_force, pulse.carrier_frequency,
                                          pulse.duration, params, s, form);
  };
  if (t <= pulse.duration) return value(t);
  const double dT = value(pulse.duration);
  const double vT = slope(pulse.duration);
  const double tau = t - pulse.duration;
  return dT * std::cos(w * tau) + vT / w * std::sin(w * tau);
}

// |d'' + omega^2 d - F/m| with d'' from a central second difference of d_fn
// (step 1e-4 of a cycle; a forward stencil is used when t sits inside the
// first step).
inline double classical_residual(const Pulse& pulse, const OscillatorParams& params,
                                 const std::function<double(double)>& d_fn, double t) {
  validate(params);
  const double h = 1e-4 * params.cycle();
  double second;
  if (t >= h) {
    second = (d_fn(t + h) - 2.0 * d_fn(t) + d_fn(t - h)) / (h * h);
  } else {
    second = (d_fn(t) - 2.0 * d_fn(t + h) + d_fn(t + 2.0 * h)) / (h * h);
  }
  const double w = params.omega;
  return std::abs(second + w * w * d_fn(t) - eval_force(pulse, t) / params.mass);
}

}  // namespace drivenosc
