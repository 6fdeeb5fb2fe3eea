// Independent matrix-level route to the conjugated operators: builds dense
// x, p and H(t_i) on a small grid, accumulates the step-product of matrix
// exponentials U = Exp[-i H(t_{N-1}) dt/hbar] ... Exp[-i H(t_0) dt/hbar]
// (latest factor leftmost), conjugates, and least-squares-fits the result in
// the {1, x, p} basis.
//
// The fit runs inside the eigenspace of the static oscillator that the grid
// actually resolves (eigenvalue within 1e-8 of the analytic ladder). Beyond
// that block the periodic grid distorts the spectrum, the continuum operator
// identities cannot hold there, and those modes contaminate every spatial
// window; restricting the energy block instead isolates the physics.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

#include "drivenosc/common.hpp"
#include "drivenosc/grid.hpp"
#include "drivenosc/grid_operators.hpp"
#include "drivenosc/params.hpp"
#include "drivenosc/phase_space.hpp"
#include "drivenosc/pulse.hpp"

namespace drivenosc {

struct HeisenbergFit {
  PhaseSpacePolynomial x_t;
  PhaseSpacePolynomial p_t;
  double residual_x = 0.0;  // relative Frobenius fit residual
  double residual_p = 0.0;
  int resolved_modes = 0;   // dimension of the fitting subspace
};

namespace detail {

inline PhaseSpacePolynomial fit_linear_operator(const Eigen::MatrixXcd& m,
                                                const Eigen::MatrixXcd& one,
                                                const Eigen::MatrixXcd& x,
                                                const Eigen::MatrixXcd& p, double* residual) {
  const Eigen::MatrixXcd* basis[3] = {&one, &x, &p};
  Eigen::Matrix3cd gram;
  Eigen::Vector3cd rhs;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      gram(r, c) = (basis[r]->adjoint() * (*basis[c])).trace();
    }
    rhs(r) = (basis[r]->adjoint() * m).trace();
  }
  const Eigen::Vector3cd coeff = gram.fullPivLu().solve(rhs);
  const Eigen::MatrixXcd model = coeff(0) * one + coeff(1) * x + coeff(2) * p;
  *residual = (m - model).norm() / m.norm();
  PhaseSpacePolynomial out;
  out.c1 = coeff(0);
  out.cx = coeff(1);
  out.cp = coeff(2);
  return out;
}

}  // namespace detail

inline HeisenbergFit matrix_oracle_heisenberg(const Pulse& pulse, const OscillatorParams& params,
                                              const Grid& grid, double t, int n_steps) {
  validate(params);
  if (grid.n_points > 128) {
    throw std::invalid_argument("matrix_oracle_heisenberg: grid must stay small (<= 128 points)");
  }
  if (n_steps < 1000) {
    throw std::invalid_argument("matrix_oracle_heisenberg: need at least 1000 steps");
  }
  const auto n = static_cast<Eigen::Index>(grid.n_points);

  Eigen::MatrixXcd x_op = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) x_op(j, j) = grid.x(static_cast<std::size_t>(j));
  const Eigen::MatrixXcd p_op = detail::dense_momentum_matrix(grid, params);

  const Eigen::MatrixXd h0 = detail::dense_static_hamiltonian(grid, params);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> static_es(h0);
  int n_cut = 0;
  while (n_cut < n &&
         std::abs(static_es.eigenvalues()(n_cut) -
                  (n_cut + 0.5) * params.hbar * params.omega) < 1e-8 * params.hbar * params.omega) {
    ++n_cut;
  }
  if (n_cut < 8) {
    throw numerical_error("matrix_oracle_heisenberg: grid resolves too few oscillator modes");
  }
  const Eigen::MatrixXd modes = static_es.eigenvectors().leftCols(n_cut);

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  if (t != 0.0) {
    const double dt = t / static_cast<double>(n_steps);
    Eigen::MatrixXd h(n, n);
    for (int step = 0; step < n_steps; ++step) {
      const double ti = static_cast<double>(step) * dt;
      const double force = eval_force(pulse, ti);
      h = h0;
      for (Eigen::Index j = 0; j < n; ++j) {
        h(j, j) -= force * grid.x(static_cast<std::size_t>(j));
      }
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
      // u <- V diag(exp(-i e dt/hbar)) V^T u, accumulated in the eigenbasis.
      Eigen::MatrixXcd w = es.eigenvectors().transpose() * u;
      for (Eigen::Index j = 0; j < n; ++j) {
        w.row(j) *= std::polar(1.0, -es.eigenvalues()(j) * dt / params.hbar);
      }
      u.noalias() = es.eigenvectors() * w;
    }
  }

  const Eigen::MatrixXcd one_r = Eigen::MatrixXcd::Identity(n_cut, n_cut);
  const Eigen::MatrixXcd x_r = modes.transpose() * x_op * modes;
  const Eigen::MatrixXcd p_r = modes.transpose() * p_op * modes;
  const Eigen::MatrixXcd x_t = modes.transpose() * (u * x_op * u.adjoint()) * modes;
  const Eigen::MatrixXcd p_t = modes.transpose() * (u * p_op * u.adjoint()) * modes;

  HeisenbergFit fit;
  fit.resolved_modes = n_cut;
  fit.x_t = detail::fit_linear_operator(x_t, one_r, x_r, p_r, &fit.residual_x);
  fit.p_t = detail::fit_linear_operator(p_t, one_r, x_r, p_r, &fit.residual_p);
  if (fit.residual_x > 1e-3 || fit.residual_p > 1e-3) {
    throw numerical_error("matrix_oracle_heisenberg: fit residual above 1e-3");
  }
  return fit;
}

}  // namespace drivenosc
