#pragma once

#include <optional>
#include <vector>

#include "cbdwr/goals.hpp"
#include "cbdwr/model.hpp"

namespace cbdwr {

/// Budget for |ρ(ũ)(z̃)| below which the iteration error is neglected.
inline constexpr double kIterationErrorBudget = 1e-10;

/// The four discrete solutions of one adaptive step and the goal they were
/// computed for. ũ := u_h and z̃ := z_h.
struct EstimatorInputs {
  const DiscreteField& u_h;
  const DiscreteField& z_h;
  const DiscreteField& u_h2;
  const DiscreteField& z_h2;
  const QoiSet& qois;
  const CombinedWeights& weights;
  const ModelParams& params;
};

struct EstimatorReport {
  double eta_h = 0.0;
  double eta_primal = 0.0;   ///< ρ(ũ)(z_h2 - z̃)
  double eta_adjoint = 0.0;  ///< ρ*(ũ,z̃)(u_h2 - ũ)
  double iteration_error = 0.0;
  bool iteration_error_warning = false;
  std::vector<double> vertex_indicators;      ///< per Q1 dof, signed
  std::vector<double> vertex_primal;          ///< primal half of each vertex indicator
  std::vector<double> vertex_adjoint;         ///< adjoint half of each vertex indicator
  std::vector<double> cell_indicators;        ///< per active cell, nonnegative
  std::optional<double> effectivity;
};

/// Global estimator parts assembled in the Q2 space.
EstimatorReport estimate(const EstimatorInputs& in);

/// Partition-of-unity localization with the Q1 hats of the mesh; hanging hats
/// are folded into their masters. Returns the per-dof indicators together
/// with their primal/adjoint halves.
struct Localization {
  std::vector<double> total;
  std::vector<double> primal;
  std::vector<double> adjoint;
};
Localization localize_pu(const EstimatorInputs& in);

/// Cell value = Σ_corners |η_v| / (number of active cells sharing v).
std::vector<double> cell_indicators(const std::vector<double>& vertex_indicators, const FunctionSpace& q1);

/// η_h / (J_ref - J_h); empty when the denominator vanishes.
std::optional<double> effectivity(double eta_h, double j_ref, double j_h);

/// estimate + localize_pu + cell_indicators.
EstimatorReport estimate_and_localize(const EstimatorInputs& in);

}  // namespace cbdwr
