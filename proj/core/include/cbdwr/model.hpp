#pragma once

#include <array>
#include <optional>

#include "cbdwr/space.hpp"

namespace cbdwr {

/// Operator acting on one subdomain.
enum class LocalOperator : std::uint8_t {
  CubicReaction,        ///< -Δu + u³
  VariableExponent,     ///< -div((|∇u|²+ε²)^((p-2)/2) ∇u)
  SaturatingDiffusion,  ///< -div((1/10 + 1/(1+u²)) ∇u)
  Laplace,              ///< -Δu
};

/// Arrangement of the local operators.
///   Published: -Δu+u³, p(x)-Laplace, -Δu, saturating diffusion on Omega1..4.
///     This is the arrangement under which the published reference values
///     are reproduced.
///   Stated: -Δu+u³, p(x)-Laplace, saturating diffusion, -Δu on Omega1..4,
///     as written in the model description.
enum class Layout : std::uint8_t { Published, Stated };

std::array<LocalOperator, 4> operators_for(Layout layout);

struct ModelParams {
  double source = 10.0;
  double epsilon = 1e-10;
  /// Gauss exactness order per subdomain; 0 selects the operator default
  /// (6 for the cubic and saturating terms, 8 for the p(x)-Laplacian,
  /// twice the element degree for -Δu).
  std::array<int, 4> quadrature_order{0, 0, 0, 0};
  std::array<LocalOperator, 4> operators = operators_for(Layout::Published);

  /// Throws Error on ε ≤ 0, non-finite source or negative orders.
  void validate() const;
  int order_for(Subdomain s, int degree) const;
  LocalOperator op(Subdomain s) const { return operators[static_cast<std::size_t>(index_of(s))]; }

  /// Every subdomain carries -Δu; same source and orders.
  static ModelParams all_laplace();
  static ModelParams with_layout(Layout layout);
};

/// p(x): 2 on Omega1, Omega3, Omega4 and (1+2x₁)(1+2x₂) on Omega2.
/// Throws Error on the interface lines.
double exponent(Point x);

/// Flux A = a·∇u and reaction c of the local operator, with the partial
/// derivatives needed for the linearization:
///   δA = a ∇w + (da_du w) ∇u + 2 da_dg2 (∇u·∇w) ∇u,   δc = dc_du w.
struct PointCoefficients {
  double a = 1.0;
  double da_du = 0.0;
  double da_dg2 = 0.0;
  double c = 0.0;
  double dc_du = 0.0;
};

PointCoefficients point_coefficients(const ModelParams& params, LocalOperator op, Point x, double u,
                                     std::array<double, 2> grad);

/// Condensed residual vector 𝒜(u)(φ_i) over the test space (which must live
/// on u's mesh). Entries of constrained test dofs are zero. With `only`, the
/// integrals are restricted to one subdomain.
Vector residual(const DiscreteField& u, const FunctionSpace& test_space, const ModelParams& params,
                std::optional<Subdomain> only = std::nullopt);
Vector residual(const DiscreteField& u, const ModelParams& params);

/// Condensed Jacobian J(i,j) = 𝒜'(u)(φ_j, φ_i) on u's space; constrained
/// rows and columns are replaced by the unit diagonal.
SparseMatrix jacobian(const DiscreteField& u, const ModelParams& params);

}  // namespace cbdwr
