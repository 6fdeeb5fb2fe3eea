#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "drivenosc/eigenstates.hpp"
#include "drivenosc/kinematics.hpp"
#include "drivenosc/phase_space.hpp"
#include "oracles.hpp"

using namespace drivenosc;

namespace {
const OscillatorParams kDefaults{};
const Pulse kNonresonant = make_sine_squared(1.0, 0.5, 20.0 * kPi);
const Pulse kResonant = make_sine_squared(1.0, 1.0, 20.0 * kPi);

PhaseSpacePolynomial linear(std::complex<double> c1, std::complex<double> cx,
                            std::complex<double> cp) {
  PhaseSpacePolynomial a;
  a.c1 = c1;
  a.cx = cx;
  a.cp = cp;
  return a;
}

// Closed form of the state-preserving operator, assembled from kinematics:
// p^2/2m + m w^2 x^2/2 - d' p + (m d'' - F) x + (fc^2 + fs^2)/2m.
PhaseSpacePolynomial h_tilde_closed_form(const Pulse& pulse, const OscillatorParams& params,
                                         double t) {
  const auto kin = kinematics_quadrature(pulse, params, t);
  PhaseSpacePolynomial h;
  h.cpp = 0.5 / params.mass;
  h.cxx = 0.5 * params.mass * params.omega * params.omega;
  h.cp = -kin.d_dot;
  h.cx = params.mass * kin.d_ddot - eval_force(pulse, t);
  h.c1 = (kin.fc * kin.fc + kin.fs * kin.fs) / (2.0 * params.mass);
  return h;
}
}  // namespace

TEST_CASE("canonical products") {
  const auto x = PhaseSpacePolynomial::position();
  const auto p = PhaseSpacePolynomial::momentum();

  const auto xp = multiply(x, p, 1.0);
  CHECK(xp.cxp == 1.0);
  CHECK(xp.c1 == std::complex<double>{0.0, 0.5});

  const auto xx = multiply(x, x, 1.0);
  CHECK(xx.cxx == 1.0);
  CHECK(xx.c1 == 0.0);
  CHECK(xx.cxp == 0.0);
}

TEST_CASE("commutator of x and p is exactly i hbar") {
  for (double hbar : {1.0, 2.5}) {
    const auto x = PhaseSpacePolynomial::position();
    const auto p = PhaseSpacePolynomial::momentum();
    const auto comm = multiply(x, p, hbar) - multiply(p, x, hbar);
    CHECK(comm.c1 == std::complex<double>{0.0, hbar});
    CHECK(comm.cx == 0.0);
    CHECK(comm.cp == 0.0);
    CHECK(comm.cxx == 0.0);
    CHECK(comm.cpp == 0.0);
    CHECK(comm.cxp == 0.0);
  }
}

TEST_CASE("square of a linear combination has no commutator remnant") {
  const auto a = linear(0.0, 2.0, 3.0);
  const auto sq = multiply(a, a, 1.0);
  CHECK(sq.cxx == 4.0);
  CHECK(sq.cpp == 9.0);
  CHECK(sq.cxp == 12.0);
  CHECK(sq.c1 == 0.0);

  // Grid-matrix cross-check on 64 points: squaring commutes with the matrix
  // representation because the i hbar terms cancel in a square.
  const Grid grid = build_grid(-8.0, 8.0, 64);
  const Eigen::MatrixXcd direct = oracles::to_matrix(a, grid, kDefaults);
  const Eigen::MatrixXcd squared = oracles::to_matrix(sq, grid, kDefaults);
  CHECK((direct * direct - squared).norm() / squared.norm() < 1e-12);
}

TEST_CASE("degree overflow is rejected") {
  const auto x = PhaseSpacePolynomial::position();
  const auto xx = multiply(x, x, 1.0);
  CHECK_THROWS_AS(multiply(xx, x, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(multiply(xx, xx, 1.0), std::invalid_argument);
  // Scalars multiply anything.
  PhaseSpacePolynomial two;
  two.c1 = 2.0;
  CHECK(multiply(two, xx, 1.0).cxx == 2.0);
  CHECK(multiply(xx, two, 1.0).cxx == 2.0);
}

TEST_CASE("ring identities where degree permits") {
  std::mt19937_64 rng(991);
  std::normal_distribution<double> gauss;
  auto random_linear = [&] {
    return linear({gauss(rng), gauss(rng)}, {gauss(rng), gauss(rng)}, {gauss(rng), gauss(rng)});
  };
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_linear();
    const auto b = random_linear();
    const auto c = random_linear();
    PhaseSpacePolynomial scalar;
    scalar.c1 = {gauss(rng), gauss(rng)};

    // distributivity: a (b + c) = a b + a c
    const auto lhs = multiply(a, b + c, 1.0);
    const auto rhs = multiply(a, b, 1.0) + multiply(a, c, 1.0);
    CHECK(lhs.max_coeff_diff(rhs) < 1e-12);

    // scalar associativity and commutation: (s a) b = s (a b) = (a s) b
    const auto sab = multiply(multiply(scalar, a, 1.0), b, 1.0);
    const auto s_ab = scalar.c1 * multiply(a, b, 1.0);
    const auto as_b = multiply(multiply(a, scalar, 1.0), b, 1.0);
    CHECK(sab.max_coeff_diff(s_ab) < 1e-12);
    CHECK(as_b.max_coeff_diff(s_ab) < 1e-12);
  }
}

TEST_CASE("conjugated operators at t = 0 are the identity map") {
  const auto pair = heisenberg_xt_pt(kNonresonant, kDefaults, 0.0);
  CHECK(pair.x_t.cx == 1.0);
  CHECK(pair.x_t.cp == 0.0);
  CHECK(pair.x_t.c1 == 0.0);
  CHECK(pair.p_t.cp == 1.0);
  CHECK(pair.p_t.cx == 0.0);
  CHECK(pair.p_t.c1 == 0.0);
}

TEST_CASE("free evolution rotates x into -p at a quarter period") {
  const auto pair = heisenberg_xt_pt(Pulse{ZeroPulse{}}, kDefaults, kPi / 2.0);
  CHECK(std::abs(pair.x_t.cx) < 1e-15);
  CHECK(std::abs(pair.x_t.cp + 1.0) < 1e-15);
  CHECK(std::abs(pair.p_t.cx - 1.0) < 1e-15);
  CHECK(std::abs(pair.p_t.cp) < 1e-15);
  CHECK(pair.x_t.c1 == 0.0);
  CHECK(pair.p_t.c1 == 0.0);
}

TEST_CASE("hamiltonian construction") {
  const auto sho = build_hamiltonian(Pulse{ZeroPulse{}}, kDefaults, 1.0);
  CHECK(sho.cpp == 0.5);
  CHECK(sho.cxx == 0.5);
  CHECK(sho.cx == 0.0);
  CHECK(sho.is_hermitian());

  // Near the envelope peak the linear coefficient is minus the force.
  const double t = 0.5 * 20.0 * kPi + 0.2;
  const auto h = build_hamiltonian(kNonresonant, kDefaults, t);
  CHECK(h.cx == -eval_force(kNonresonant, t));
  CHECK(h.is_hermitian());
}

TEST_CASE("state-preserving operator at t = 0 is the bare oscillator") {
  const auto h = build_h_tilde(kNonresonant, kDefaults, 0.0);
  CHECK(h.cpp == 0.5);
  CHECK(h.cxx == 0.5);
  CHECK(h.cx == 0.0);
  CHECK(h.cp == 0.0);
  CHECK(h.c1 == 0.0);
  CHECK(h.cxp == 0.0);
}

TEST_CASE("free oscillator is invariant under its own evolution") {
  for (double t : {0.9, 4.0, 11.3}) {
    const auto h = build_h_tilde(Pulse{ZeroPulse{}}, kDefaults, t);
    PhaseSpacePolynomial sho;
    sho.cpp = 0.5;
    sho.cxx = 0.5;
    CHECK(h.max_coeff_diff(sho) < 1e-14);
  }
}

TEST_CASE("cross term cancels between the two squares") {
  const double t = 3.0 * 2.0 * kPi;
  const auto h = build_h_tilde(kNonresonant, kDefaults, t);
  CHECK(std::abs(h.cxp) < 1e-12);
  CHECK(h.max_imag() < 1e-15);
}

TEST_CASE("symbolic squares equal the closed form at random times") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(0.0, 20.0 * kPi + 10.0);
  for (const Pulse& pulse : {kNonresonant, kResonant}) {
    for (int i = 0; i < 50; ++i) {
      const double t = uni(rng);
      const auto symbolic = build_h_tilde(pulse, kDefaults, t);
      const auto closed = h_tilde_closed_form(pulse, kDefaults, t);
      CHECK(symbolic.max_coeff_diff(closed) < 1e-10);
    }
  }
}

TEST_CASE("decomposition: zero pulse leaves nothing state-changing") {
  for (double t : {0.0, 2.0, 9.0}) {
    const auto dec = decompose(Pulse{ZeroPulse{}}, kDefaults, t);
    CHECK(dec.h_c.c1 == 0.0);
    CHECK(dec.h_c.cx == 0.0);
    CHECK(dec.h_c.cp == 0.0);
  }
}

TEST_CASE("decomposition at t = 0 reduces to the instantaneous force") {
  const auto dec = decompose(Pulse{ConstantPulse{2.0}}, kDefaults, 0.0);
  CHECK(std::abs(dec.h_c.cx + 2.0) < 1e-12);  // -F(0) x
  CHECK(std::abs(dec.h_c.cp) < 1e-12);
  CHECK(std::abs(dec.h_c.c1) < 1e-12);

  // Sine-squared pulses switch on smoothly: F(0) = 0, so H_c(0) = 0.
  const auto smooth = decompose(kNonresonant, kDefaults, 0.0);
  CHECK(smooth.h_c.cx == 0.0);
  CHECK(smooth.h_c.cp == 0.0);
  CHECK(smooth.h_c.c1 == 0.0);
}

TEST_CASE("state-changing coefficients follow the classical kinematics") {
  const double t = 5.0 * 2.0 * kPi;
  const auto dec = decompose(kResonant, kDefaults, t);
  const auto kin = kinematics_quadrature(kResonant, kDefaults, t);
  CHECK(std::abs(dec.h_c.cp.real() - kin.d_dot) < 1e-9);
  CHECK(std::abs(dec.h_c.cx.real() + kin.d_ddot) < 1e-9);
}

TEST_CASE("decomposition exactness and linearity at random times") {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> uni(0.0, 20.0 * kPi);
  for (const Pulse& pulse : {kNonresonant, kResonant}) {
    for (int i = 0; i < 50; ++i) {
      const double t = uni(rng);
      const auto dec = decompose(pulse, kDefaults, t);
      const auto h = build_hamiltonian(pulse, kDefaults, t);
      const auto reassembled = dec.h_tilde + dec.h_c;
      CHECK(h.max_coeff_diff(reassembled) < 1e-12);
      // Linearity is structural, not approximate.
      CHECK(dec.h_c.cxx == 0.0);
      CHECK(dec.h_c.cpp == 0.0);
      CHECK(dec.h_c.cxp == 0.0);
    }
  }
}

TEST_CASE("operator application: eigen relation and identity") {
  const Grid grid = build_grid(-20.0, 20.0, 512);
  const auto h0 = build_h_tilde(kNonresonant, kDefaults, 0.0);
  for (int n : {0, 1, 4}) {
    const auto phi = eigenstate(n, kDefaults, grid);
    const auto h_phi = apply_operator(h0, phi, kDefaults);
    const double e_n = sho_energy(n, kDefaults);
    double res2 = 0.0, nrm2 = 0.0;
    for (std::size_t j = 0; j < phi.amps.size(); ++j) {
      res2 += std::norm(h_phi.amps[j] - e_n * phi.amps[j]);
      nrm2 += std::norm(e_n * phi.amps[j]);
    }
    CHECK(std::sqrt(res2 / nrm2) < 1e-6);
  }

  const auto phi2 = eigenstate(2, kDefaults, grid);
  const auto same = apply_operator(PhaseSpacePolynomial::identity(), phi2, kDefaults);
  for (std::size_t j = 0; j < phi2.amps.size(); ++j) {
    CHECK(same.amps[j] == phi2.amps[j]);
  }
}

TEST_CASE("operator application enforces the edge-amplitude precondition") {
  const Grid narrow = build_grid(-4.0, 4.0, 64);
  WaveFunction wide = make_wavefunction(narrow);
  for (std::size_t j = 0; j < narrow.n_points; ++j) {
    wide.amps[j] = 0.3;  // flat state touches the boundary
  }
  CHECK_THROWS_AS(apply_operator(PhaseSpacePolynomial::position(), wide, kDefaults),
                  numerical_error);
}

TEST_CASE("symmetrized cross term acts as the average of both orderings") {
  // On an even state, sym(xp) has purely imaginary expectation parts that
  // cancel; compare against explicit spectral application on a random state.
  const Grid grid = build_grid(-20.0, 20.0, 256);
  std::mt19937_64 rng(31);
  const auto psi = oracles::random_state(grid, kDefaults, rng);
  PhaseSpacePolynomial sym;
  sym.cxp = 1.0;
  const auto applied = apply_operator(sym, psi, kDefaults);

  const auto p_psi = apply_momentum(psi, kDefaults, 1);
  WaveFunction x_psi = psi;
  for (std::size_t j = 0; j < grid.n_points; ++j) x_psi.amps[j] *= grid.x(j);
  const auto p_x_psi = apply_momentum(x_psi, kDefaults, 1);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    const auto expected = 0.5 * (grid.x(j) * p_psi.amps[j] + p_x_psi.amps[j]);
    CHECK(std::abs(applied.amps[j] - expected) < 1e-12);
  }
}
