// Exact operator algebra for polynomials in (x, p) up to total degree 2 in
// the Weyl-symmetrized canonical basis {1, x, p, x^2, p^2, (xp+px)/2}. In
// this basis an operator is Hermitian iff its coefficients are real, and the
// state-changing part of the driven-oscillator Hamiltonian is linear with
// exactly zero quadratic coefficients.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "drivenosc/common.hpp"
#include "drivenosc/kinematics.hpp"
#include "drivenosc/params.hpp"
#include "drivenosc/pulse.hpp"
#include "drivenosc/wavefunction.hpp"

namespace drivenosc {

struct PhaseSpacePolynomial {
  std::complex<double> c1{};   // identity
  std::complex<double> cx{};   // x
  std::complex<double> cp{};   // p
  std::complex<double> cxx{};  // x^2
  std::complex<double> cpp{};  // p^2
  std::complex<double> cxp{};  // (xp + px)/2

  static PhaseSpacePolynomial identity() { return {{1.0, 0.0}}; }
  static PhaseSpacePolynomial position() {
    PhaseSpacePolynomial a;
    a.cx = 1.0;
    return a;
  }
  static PhaseSpacePolynomial momentum() {
    PhaseSpacePolynomial a;
    a.cp = 1.0;
    return a;
  }

  // Highest total degree carrying a nonzero coefficient.
  int degree() const {
    if (cxx != 0.0 || cpp != 0.0 || cxp != 0.0) return 2;
    if (cx != 0.0 || cp != 0.0) return 1;
    return 0;
  }

  double max_imag() const {
    double m = 0.0;
    for (const auto& c : {c1, cx, cp, cxx, cpp, cxp}) m = std::max(m, std::abs(c.imag()));
    return m;
  }

  bool is_hermitian(double tol = 0.0) const { return max_imag() <= tol; }

  double max_coeff_diff(const PhaseSpacePolynomial& other) const {
    double m = 0.0;
    m = std::max(m, std::abs(c1 - other.c1));
    m = std::max(m, std::abs(cx - other.cx));
    m = std::max(m, std::abs(cp - other.cp));
    m = std::max(m, std::abs(cxx - other.cxx));
    m = std::max(m, std::abs(cpp - other.cpp));
    m = std::max(m, std::abs(cxp - other.cxp));
    return m;
  }

  PhaseSpacePolynomial& operator+=(const PhaseSpacePolynomial& o) {
    c1 += o.c1;
    cx += o.cx;
    cp += o.cp;
    cxx += o.cxx;
    cpp += o.cpp;
    cxp += o.cxp;
    return *this;
  }
  PhaseSpacePolynomial& operator-=(const PhaseSpacePolynomial& o) {
    c1 -= o.c1;
    cx -= o.cx;
    cp -= o.cp;
    cxx -= o.cxx;
    cpp -= o.cpp;
    cxp -= o.cxp;
    return *this;
  }
  PhaseSpacePolynomial& operator*=(std::complex<double> s) {
    c1 *= s;
    cx *= s;
    cp *= s;
    cxx *= s;
    cpp *= s;
    cxp *= s;
    return *this;
  }

  friend PhaseSpacePolynomial operator+(PhaseSpacePolynomial a, const PhaseSpacePolynomial& b) {
    return a += b;
  }
  friend PhaseSpacePolynomial operator-(PhaseSpacePolynomial a, const PhaseSpacePolynomial& b) {
    return a -= b;
  }
  friend PhaseSpacePolynomial operator*(std::complex<double> s, PhaseSpacePolynomial a) {
    return a *= s;
  }
};

// Operator product expanded back into the canonical basis through
// x p = sym(xp) + i hbar/2 and p x = sym(xp) - i hbar/2. The product must fit
// in degree 2, so one factor has to be a scalar or both at most linear.
inline PhaseSpacePolynomial multiply(const PhaseSpacePolynomial& a,
                                     const PhaseSpacePolynomial& b, double hbar) {
  if (a.degree() == 0 || b.degree() == 0) {
    // One side is a scalar in operator content; cross terms with the other's
    // full polynomial stay in degree 2.
    PhaseSpacePolynomial out = (a.degree() == 0) ? b : a;
    out *= (a.degree() == 0) ? a.c1 : b.c1;
    return out;
  }
  if (a.degree() > 1 || b.degree() > 1) {
    throw std::invalid_argument("multiply: product would exceed degree 2");
  }
  PhaseSpacePolynomial out;
  out.c1 = a.c1 * b.c1;
  out.cx = a.c1 * b.cx + a.cx * b.c1;
  out.cp = a.c1 * b.cp + a.cp * b.c1;
  out.cxx = a.cx * b.cx;
  out.cpp = a.cp * b.cp;
  out.cxp = a.cx * b.cp + a.cp * b.cx;
  out.c1 += std::complex<double>{0.0, 0.5 * hbar} * (a.cx * b.cp - a.cp * b.cx);
  return out;
}

struct HeisenbergPair {
  PhaseSpacePolynomial x_t;
  PhaseSpacePolynomial p_t;
};

// The conjugated operators U x U^-1 and U p U^-1 for the driven oscillator:
//   x_t = cos(wt) x - sin(wt)/(m w) p + fs/(m w)
//   p_t = m w sin(wt) x + cos(wt) p - fc
inline HeisenbergPair heisenberg_xt_pt(const Pulse& pulse, const OscillatorParams& params,
                                       double t) {
  validate(params);
  const auto weights = fourier_weights(pulse, params, t);
  const double m = params.mass;
  const double w = params.omega;
  const double c = std::cos(w * t);
  const double s = std::sin(w * t);
  HeisenbergPair pair;
  pair.x_t.cx = c;
  pair.x_t.cp = -s / (m * w);
  pair.x_t.c1 = weights.fs / (m * w);
  pair.p_t.cx = m * w * s;
  pair.p_t.cp = c;
  pair.p_t.c1 = -weights.fc;
  return pair;
}

// H(t) = p^2/2m + m w^2 x^2 / 2 - F(t) x
inline PhaseSpacePolynomial build_hamiltonian(const Pulse& pulse, const OscillatorParams& params,
                                              double t) {
  validate(params);
  PhaseSpacePolynomial h;
  h.cpp = 0.5 / params.mass;
  h.cxx = 0.5 * params.mass * params.omega * params.omega;
  h.cx = -eval_force(pulse, t);
  return h;
}

// The state-preserving operator, built symbolically as
// p_t^2/2m + m w^2 x_t^2 / 2. Its sym(xp) coefficient cancels exactly and the
// result stays Hermitian.
inline PhaseSpacePolynomial build_h_tilde(const Pulse& pulse, const OscillatorParams& params,
                                          double t) {
  const auto pair = heisenberg_xt_pt(pulse, params, t);
  const double m = params.mass;
  const double w = params.omega;
  PhaseSpacePolynomial h = 0.5 / m * multiply(pair.p_t, pair.p_t, params.hbar);
  h += 0.5 * m * w * w * multiply(pair.x_t, pair.x_t, params.hbar);
  return h;
}

struct Decomposition {
  PhaseSpacePolynomial h_tilde;
  PhaseSpacePolynomial h_c;
};

// Splits H = H~ + H_c. H_c is assembled from the classical kinematics,
//   H_c = d' p - m d'' x - (fc^2 + fs^2)/2m,
// so its quadratic coefficients are zero by construction (the nonspreading
// criterion); the subtraction route H - H~ must agree within 1e-10 per
// coefficient and is checked here.
inline Decomposition decompose(const Pulse& pulse, const OscillatorParams& params, double t) {
  Decomposition out;
  out.h_tilde = build_h_tilde(pulse, params, t);
  const auto kin = kinematics_quadrature(pulse, params, t);
  out.h_c.cp = kin.d_dot;
  out.h_c.cx = -params.mass * kin.d_ddot;
  out.h_c.c1 = -(kin.fc * kin.fc + kin.fs * kin.fs) / (2.0 * params.mass);
  const PhaseSpacePolynomial subtracted =
      build_hamiltonian(pulse, params, t) - out.h_tilde;
  if (subtracted.max_coeff_diff(out.h_c) > 1e-10) {
    throw numerical_error("decompose: closed-form H_c disagrees with H - H~");
  }
  return out;
}

// Grid action of a polynomial operator: x terms pointwise, p terms spectrally,
// sym(xp) as (x(p psi) + p(x psi))/2.
inline WaveFunction apply_operator(const PhaseSpacePolynomial& a, const WaveFunction& psi,
                                   const OscillatorParams& params) {
  validate(params);
  if (edge_amplitude(psi) >= kEdgeAmplitudeLimit) {
    throw numerical_error("apply_operator: state amplitude not negligible at domain edges");
  }
  const std::size_t n = psi.grid.n_points;
  WaveFunction out = make_wavefunction(psi.grid);

  for (std::size_t j = 0; j < n; ++j) {
    const double x = psi.grid.x(j);
    out.amps[j] = (a.c1 + a.cx * x + a.cxx * x * x) * psi.amps[j];
  }

  if (a.cp != 0.0 || a.cpp != 0.0 || a.cxp != 0.0) {
    const auto k = fourier_wavenumbers(psi.grid);
    const double scale = 1.0 / static_cast<double>(n);
    auto spectrum = psi.amps;
    fft_forward(spectrum);
    auto first = spectrum;
    auto second = spectrum;
    for (std::size_t j = 0; j < n; ++j) {
      const double pj = params.hbar * k[j];
      first[j] *= pj * scale;
      second[j] *= pj * pj * scale;
    }
    fft_inverse(first);   // p psi
    fft_inverse(second);  // p^2 psi
    for (std::size_t j = 0; j < n; ++j) {
      out.amps[j] += a.cp * first[j] + a.cpp * second[j];
    }
    if (a.cxp != 0.0) {
      auto x_psi = psi.amps;
      for (std::size_t j = 0; j < n; ++j) x_psi[j] *= psi.grid.x(j);
      fft_forward(x_psi);
      for (std::size_t j = 0; j < n; ++j) x_psi[j] *= params.hbar * k[j] * scale;
      fft_inverse(x_psi);  // p (x psi)
      for (std::size_t j = 0; j < n; ++j) {
        out.amps[j] += 0.5 * a.cxp * (psi.grid.x(j) * first[j] + x_psi[j]);
      }
    }
  }
  return out;
}

}  // namespace drivenosc
