#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cbdwr/dwr.hpp"
#include "cbdwr/solver.hpp"

namespace cbdwr {

enum class RefinementMode { Adaptive, Uniform };

struct AdaptConfig {
  std::size_t max_dofs = 300000;  ///< stop once the Q1 dof count reaches this
  int max_steps = 40;
  double theta = 0.5;             ///< Dörfler bulk fraction
  RefinementMode mode = RefinementMode::Adaptive;
  NewtonConfig newton;
  QoiSet qois = QoiSet::checkerboard();

  void validate() const;
};

/// Reference values of J1..J5 used for errors and effectivity.
inline constexpr std::array<double, 5> kReferenceValues = {0.663674525018, 1.011855377549, 1.197302269110,
                                                           1.476574169174, 1.261144956935};

struct ConvergenceRecord {
  int step = 0;
  std::size_t dofs_primal = 0;
  std::size_t dofs_enriched = 0;
  double eta_h = 0.0;
  double eta_primal = 0.0;
  double eta_adjoint = 0.0;
  double iteration_error = 0.0;
  std::vector<double> J;       ///< J_k(u_h)
  double Jc = 0.0;             ///< J_c(u_h)
  std::vector<double> relerr;  ///< |J_k(ref) - J_k(u_h)| / |J_k(ref)|
  double abserr_Jc = 0.0;      ///< |J_c(ref) - J_c(u_h)|
  std::optional<double> effectivity;
  std::vector<double> weights;
  int newton_iterations_q1 = 0;
  int newton_iterations_q2 = 0;
  double newton_residual_q1 = 0.0;
  double newton_residual_q2 = 0.0;
};

/// Everything a caller may want to inspect after a step was estimated.
struct StepState {
  const ConvergenceRecord& record;
  const AdaptiveMesh& mesh;
  const DiscreteField& u_h;
  const DiscreteField& z_h;
  const DiscreteField& u_h2;
  const DiscreteField& z_h2;
  const EstimatorReport& report;
  /// Cells marked for refinement (empty on the last step and in uniform mode).
  std::span<const int> marked;
};

using StepObserver = std::function<void(const StepState&)>;

/// Dörfler marking: the shortest prefix of positions sorted by descending
/// indicator (ties by ascending position) whose sum reaches θ·total. All
/// positions are returned when every indicator is zero.
std::vector<int> mark(std::span<const double> indicators, double theta);

/// Solve, estimate, mark, refine until max_dofs or max_steps. The observer
/// runs once per step after estimation. Solver failures propagate as Error
/// with the step index prepended.
std::vector<ConvergenceRecord> run(const AdaptConfig& config, const ModelParams& params,
                                   std::span<const double> reference = kReferenceValues,
                                   const StepObserver& observer = {}, std::ostream* log = nullptr);

}  // namespace cbdwr
