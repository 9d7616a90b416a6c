#pragma once

#include <vector>

#include "cbdwr/model.hpp"
#include "cbdwr/sparse_lu.hpp"

namespace cbdwr {

struct NewtonConfig {
  double abs_tol = 1e-11;  ///< target for the free-dof residual ∞-norm
  int max_iters = 30;
  double damping = 0.5;    ///< backtracking factor
  int max_halvings = 10;

  /// Throws Error unless 0 < abs_tol ≤ 1e-10 and the other fields are sane.
  void validate() const;
};

struct NewtonResult {
  DiscreteField u;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> history;  ///< residual norm before each step, then the final one
};

/// Damped Newton for 𝒜(u)(v) = 0 on u0's space. u0 must satisfy the
/// constraints. A trial step is halved until the residual ∞-norm does not
/// grow; Error is thrown when that fails, on linear-solve breakdown, or when
/// max_iters is exhausted.
NewtonResult newton_solve(const ModelParams& params, DiscreteField u0, const NewtonConfig& cfg);

/// Solves 𝒜'(u)(v, z) = rhs(v): the transposed Jacobian system. rhs must be
/// condensed (zero on constrained dofs). Constrained entries of z are
/// reconstructed from their masters.
DiscreteField adjoint_solve(const DiscreteField& u, const Vector& rhs, const ModelParams& params,
                            LinearSolveStats* stats = nullptr);

/// -ρ(u)(z) = 𝒜(u)(z).
double iteration_error(const DiscreteField& u, const DiscreteField& z, const ModelParams& params);

}  // namespace cbdwr
