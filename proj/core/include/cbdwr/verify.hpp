#pragma once

#include <string>
#include <vector>

#include "cbdwr/config.hpp"

namespace cbdwr {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Condensed Jacobian against central differences of the residual along
/// random directions, at random states on the initial mesh and on a mesh
/// refined twice towards the point of interest. Worst relative error must
/// stay below tol.
SuiteResult check_jacobian_fd(const ModelParams& params, int states_per_mesh = 10, double tol = 1e-5,
                              unsigned seed = 7);

/// Runs `steps` adaptive steps and checks on every step: the partition of
/// unity sum, the iteration-error budget, the mesh invariants and constraint
/// idempotence.
std::vector<SuiteResult> check_adaptive_properties(const RunConfig& config, int steps = 10);

/// All-Laplace operator, J = integral over Omega4: the primal estimator part
/// must equal J(u_h2) - J(u_h). The adjoint part is reported.
SuiteResult check_linear_exactness(const ModelParams& base, double tol = 1e-10);

/// Tensor Gauss rules integrate x^a y^b exactly for a, b up to the order.
SuiteResult check_quadrature_exactness(int max_order = 12);

/// Applying the constraints twice equals applying them once, and
/// constrained fields are continuous across hanging edges (Q1 and Q2).
SuiteResult check_constraints(int refinements = 6);

std::vector<SuiteResult> verify_all(const RunConfig& config);

}  // namespace cbdwr
