#include "cbdwr/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace cbdwr {

void AdaptConfig::validate() const {
  if (!(theta > 0.0 && theta < 1.0)) throw Error("theta must lie in (0, 1)");
  if (max_steps < 0) throw Error("max_steps must be non-negative");
  if (max_dofs == 0) throw Error("max_dofs must be positive");
  newton.validate();
}

std::vector<int> mark(std::span<const double> indicators, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw Error("mark: theta must lie in (0, 1)");
  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  double total = 0.0;
  for (double v : indicators) {
    if (v < 0.0) throw Error("mark: indicators must be nonnegative");
    total += v;
  }
  if (total == 0.0) return order;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return indicators[static_cast<std::size_t>(a)] > indicators[static_cast<std::size_t>(b)];
  });
  const double target = theta * total;
  double sum = 0.0;
  std::size_t count = 0;
  while (count < order.size() && sum < target) sum += indicators[static_cast<std::size_t>(order[count++])];
  order.resize(count);
  return order;
}

namespace {

DiscreteField solve_primal(const ModelParams& params, DiscreteField start, const NewtonConfig& cfg, int step,
                           int& iterations, double& res, std::ostream* log) {
  NewtonResult nr = newton_solve(params, std::move(start), cfg);
  iterations = nr.iterations;
  res = nr.residual_norm;
  if (log != nullptr) {
    *log << "step " << step << "  Q" << nr.u.fs().degree() << "  newton " << nr.iterations << "  residual "
         << nr.residual_norm << '\n';
  }
  return std::move(nr.u);
}

}  // namespace

std::vector<ConvergenceRecord> run(const AdaptConfig& config, const ModelParams& params,
                                   std::span<const double> reference, const StepObserver& observer,
                                   std::ostream* log) {
  config.validate();
  params.validate();
  const QoiSet& qois = config.qois;
  if (reference.size() != qois.size()) throw Error("run: expected one reference value per quantity of interest");

  std::vector<ConvergenceRecord> records;
  auto mesh = std::make_shared<const AdaptiveMesh>(initial_mesh());
  std::optional<DiscreteField> previous;

  for (int step = 0;; ++step) {
    try {
      const SpacePtr v1 = build_space(mesh, 1);
      const SpacePtr v2 = build_space(mesh, 2);
      ConvergenceRecord rec;
      rec.step = step;
      rec.dofs_primal = v1->n_dofs();
      rec.dofs_enriched = v2->n_dofs();

      DiscreteField start = previous ? transfer(*previous, v1) : zero_field(v1);
      DiscreteField u_h = solve_primal(params, std::move(start), config.newton, step, rec.newton_iterations_q1,
                                       rec.newton_residual_q1, log);
      DiscreteField u_h2 = solve_primal(params, embed_q1_in_q2(u_h, v2), config.newton, step,
                                        rec.newton_iterations_q2, rec.newton_residual_q2, log);

      const CombinedWeights weights = combined_weights(qois, u_h, u_h2);
      DiscreteField z_h = adjoint_solve(u_h, combined_derivative(qois, weights, *v1), params);
      // Keep the iteration error inside its budget: tighten and continue Newton.
      NewtonConfig tight = config.newton;
      for (int extra = 0; extra < 3 && std::abs(iteration_error(u_h, z_h, params)) > kIterationErrorBudget; ++extra) {
        tight.abs_tol *= 1e-2;
        u_h = solve_primal(params, std::move(u_h), tight, step, rec.newton_iterations_q1, rec.newton_residual_q1, log);
        z_h = adjoint_solve(u_h, combined_derivative(qois, weights, *v1), params);
      }
      const DiscreteField z_h2 = adjoint_solve(u_h2, combined_derivative(qois, weights, *v2), params);

      const EstimatorInputs inputs{u_h, z_h, u_h2, z_h2, qois, weights, params};
      EstimatorReport report = estimate_and_localize(inputs);

      rec.eta_h = report.eta_h;
      rec.eta_primal = report.eta_primal;
      rec.eta_adjoint = report.eta_adjoint;
      rec.iteration_error = report.iteration_error;
      rec.J = evaluate_qois(qois, u_h);
      rec.weights = weights.w;
      rec.Jc = combined_value(weights, rec.J);
      for (std::size_t k = 0; k < qois.size(); ++k) {
        rec.relerr.push_back(std::abs(reference[k] - rec.J[k]) / std::abs(reference[k]));
      }
      const double jc_ref = combined_value(weights, reference);
      rec.abserr_Jc = std::abs(jc_ref - rec.Jc);
      rec.effectivity = effectivity(report.eta_h, jc_ref, rec.Jc);
      report.effectivity = rec.effectivity;

      const bool last = step >= config.max_steps || rec.dofs_primal >= config.max_dofs;
      std::vector<int> flags;
      if (!last && config.mode == RefinementMode::Adaptive) {
        for (int pos : mark(report.cell_indicators, config.theta)) {
          flags.push_back(mesh->active_cells()[static_cast<std::size_t>(pos)]);
        }
        std::sort(flags.begin(), flags.end());
      }
      if (log != nullptr) {
        *log << "step " << step << "  dofs " << rec.dofs_primal << "  eta " << rec.eta_h << "  Jc error "
             << rec.abserr_Jc << "  Ieff " << (rec.effectivity ? *rec.effectivity : NAN) << '\n';
      }
      records.push_back(rec);
      if (observer) observer({records.back(), *mesh, u_h, z_h, u_h2, z_h2, report, flags});
      if (last) break;

      previous = std::move(u_h);
      if (config.mode == RefinementMode::Uniform) {
        mesh = std::make_shared<const AdaptiveMesh>(refine_uniform(*mesh));
      } else {
        mesh = std::make_shared<const AdaptiveMesh>(refine(*mesh, flags));
      }
    } catch (const Error& err) {
      throw Error("step " + std::to_string(step) + ": " + err.what());
    }
  }
  return records;
}

}  // namespace cbdwr
