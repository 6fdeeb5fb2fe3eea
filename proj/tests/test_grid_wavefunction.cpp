#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "drivenosc/eigenstates.hpp"
#include "drivenosc/grid.hpp"
#include "drivenosc/phase_space.hpp"
#include "drivenosc/wavefunction.hpp"
#include "oracles.hpp"

using namespace drivenosc;

namespace {
const OscillatorParams kDefaults{};
const Grid kGrid = build_grid(-20.0, 20.0, 512);

WaveFunction displaced_ground_state(const Grid& grid, const OscillatorParams& params,
                                    double shift) {
  WaveFunction psi = make_wavefunction(grid);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    psi.amps[j] = eigenstate_value(0, grid.x(j) - shift, params);
  }
  return psi;
}
}  // namespace

TEST_CASE("build_grid spacing and validation") {
  CHECK(build_grid(-20.0, 20.0, 512).dx() == 0.078125);
  CHECK(build_grid(-64.0, 64.0, 2048).dx() == 0.0625);
  CHECK(build_grid(-20.0, 20.0, 512).x(0) == -20.0);
  CHECK_THROWS_AS(build_grid(0.0, 0.0, 512), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(-1.0, 1.0, 500), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(-1.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("ground state value and normalization") {
  const WaveFunction phi0 = eigenstate(0, kDefaults, kGrid);
  // (m w / pi hbar)^(1/4) at x = 0 with defaults
  const double expected = std::pow(kPi, -0.25);
  CHECK(std::abs(phi0.amps[256].real() - expected) < 1e-12);
  CHECK(std::abs(norm(phi0) - 1.0) < 1e-10);
  CHECK(sho_energy(0, kDefaults) == 0.5);
  CHECK(sho_energy(3, kDefaults) == 3.5);
}

TEST_CASE("eigenstate errors") {
  CHECK_THROWS_AS(eigenstate(-1, kDefaults, kGrid), std::invalid_argument);
  // Phi_0 at x = +-2 is ~0.14, far above the edge-amplitude limit.
  CHECK_THROWS_AS(eigenstate(0, kDefaults, build_grid(-2.0, 2.0, 64)), std::invalid_argument);
}

TEST_CASE("eigenstate residual under the spectral Hamiltonian") {
  const auto h0 = build_hamiltonian(ZeroPulse{}, kDefaults, 0.0);
  for (int n = 0; n <= 8; ++n) {
    const WaveFunction phi = eigenstate(n, kDefaults, kGrid);
    const WaveFunction h_phi = apply_operator(h0, phi, kDefaults);
    const double e_n = sho_energy(n, kDefaults);
    double res2 = 0.0, nrm2 = 0.0;
    for (std::size_t j = 0; j < phi.amps.size(); ++j) {
      res2 += std::norm(h_phi.amps[j] - e_n * phi.amps[j]);
      nrm2 += std::norm(phi.amps[j]);
    }
    CHECK(std::sqrt(res2 / nrm2) < 1e-6);
  }
}

TEST_CASE("orthonormality of the eigenbasis") {
  std::vector<WaveFunction> basis;
  for (int n = 0; n <= 8; ++n) basis.push_back(eigenstate(n, kDefaults, kGrid));
  for (int m = 0; m <= 8; ++m) {
    for (int n = 0; n <= 8; ++n) {
      const double expected = (m == n) ? 1.0 : 0.0;
      CHECK(std::abs(inner_product(basis[m], basis[n]) - expected) < 1e-8);
    }
  }
}

TEST_CASE("inner product basics") {
  const WaveFunction phi0 = eigenstate(0, kDefaults, kGrid);
  const WaveFunction phi1 = eigenstate(1, kDefaults, kGrid);
  CHECK(std::abs(inner_product(phi0, phi0) - 1.0) < 1e-10);
  CHECK(std::abs(inner_product(phi0, phi1)) < 1e-10);
  CHECK_THROWS_AS(inner_product(phi0, eigenstate(0, kDefaults, build_grid(-20.0, 20.0, 256))),
                  std::invalid_argument);
}

TEST_CASE("inner product conjugate symmetry on random states") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracles::random_state(kGrid, kDefaults, rng);
    const auto b = oracles::random_state(kGrid, kDefaults, rng);
    const auto lhs = inner_product(a, b);
    const auto rhs = std::conj(inner_product(b, a));
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("ground state observables against quadrature") {
  const WaveFunction phi0 = eigenstate(0, kDefaults, kGrid);
  const auto obs = observables(phi0, kDefaults);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(obs.mean_x) < 1e-9);
  CHECK(std::abs(obs.mean_p) < 1e-9);
  CHECK(std::abs(obs.dx_unc - inv_sqrt2) < 1e-6);
  CHECK(std::abs(obs.dp_unc - inv_sqrt2) < 1e-6);
  CHECK(std::abs(obs.product - 0.5) < 1e-6);
  // Independent route: <x^2> by composite Simpson over the analytic density.
  const double var_x_oracle = oracles::composite_simpson(
      [&](double x) {
        const double v = eigenstate_value(0, x, kDefaults);
        return x * x * v * v;
      },
      -20.0, 20.0, 20000);
  CHECK(std::abs(obs.var_x - var_x_oracle) < 1e-9);
}

TEST_CASE("displaced ground state keeps minimum uncertainty") {
  const WaveFunction psi = displaced_ground_state(kGrid, kDefaults, 2.0);
  const auto obs = observables(psi, kDefaults);
  CHECK(std::abs(obs.mean_x - 2.0) < 1e-8);
  CHECK(std::abs(obs.product - 0.5) < 1e-6);
}

TEST_CASE("first excited state uncertainty product, unit and non-unit constants") {
  const auto obs = observables(eigenstate(1, kDefaults, kGrid), kDefaults);
  CHECK(std::abs(obs.product - 1.5) < 1e-6);

  const OscillatorParams params{1.5, 0.7, 2.0};
  const auto obs2 = observables(eigenstate(1, params, kGrid), params);
  CHECK(std::abs(obs2.product - 1.5 * params.hbar) < 1e-6);
}

TEST_CASE("uncertainty product respects the Heisenberg bound") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 30; ++trial) {
    const auto psi = oracles::random_state(kGrid, kDefaults, rng);
    const auto obs = observables(psi, kDefaults);
    CHECK(obs.product >= 0.5 * kDefaults.hbar - 1e-6);
  }
}

TEST_CASE("observables rejects unnormalized input") {
  WaveFunction half = eigenstate(0, kDefaults, kGrid);
  for (auto& a : half.amps) a *= 0.5;
  CHECK_THROWS_AS(observables(half, kDefaults), std::invalid_argument);
}

TEST_CASE("peak position of centered and shifted packets") {
  const double dx = kGrid.dx();
  CHECK(std::abs(peak_position(eigenstate(0, kDefaults, kGrid))) < dx / 10.0);
  // 1.25 is exactly 16 grid cells; 1.23 falls between nodes.
  for (double shift : {1.25, 1.23}) {
    const auto psi = displaced_ground_state(kGrid, kDefaults, shift);
    CHECK(std::abs(peak_position(psi) - shift) < dx / 10.0);
  }
}

TEST_CASE("peak position translation property") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double shift = uni(rng);
    const double base = peak_position(displaced_ground_state(kGrid, kDefaults, 0.0));
    const double moved = peak_position(displaced_ground_state(kGrid, kDefaults, shift));
    CHECK(std::abs(moved - (base + shift)) < kGrid.dx() / 10.0);
  }
}

TEST_CASE("peak position degenerate and boundary cases") {
  WaveFunction flat = make_wavefunction(kGrid);
  for (auto& a : flat.amps) a = 1.0;
  CHECK(peak_position(flat) == kGrid.x(0));  // tie-break: lowest index

  WaveFunction ramp = make_wavefunction(kGrid);
  for (std::size_t j = 0; j < kGrid.n_points; ++j) {
    ramp.amps[j] = static_cast<double>(j + 1);
  }
  CHECK_THROWS_AS(peak_position(ramp), numerical_error);
}
