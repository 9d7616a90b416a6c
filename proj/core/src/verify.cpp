#include "cbdwr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cbdwr/cell_values.hpp"
#include "cbdwr/quadrature.hpp"

namespace cbdwr {

namespace {

std::shared_ptr<const AdaptiveMesh> refined_towards(Point p, int times) {
  auto mesh = std::make_shared<const AdaptiveMesh>(initial_mesh());
  for (int i = 0; i < times; ++i) {
    const std::vector<int> flags = locate_all(*mesh, p);
    mesh = std::make_shared<const AdaptiveMesh>(refine(*mesh, flags));
  }
  return mesh;
}

DiscreteField random_field(const SpacePtr& space, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  DiscreteField f = zero_field(space);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = dist(rng);
  space->constraints().distribute(f.values);
  return f;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

SuiteResult check_jacobian_fd(const ModelParams& params, int states_per_mesh, double tol, unsigned seed) {
  SuiteResult res{"jacobian_fd", true, ""};
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  const std::vector<std::shared_ptr<const AdaptiveMesh>> meshes{refined_towards(kPointOfInterest, 0),
                                                                refined_towards(kPointOfInterest, 2)};
  for (const auto& mesh : meshes) {
    for (int degree : {1, 2}) {
      const SpacePtr space = build_space(mesh, degree);
      for (int s = 0; s < states_per_mesh; ++s) {
        const DiscreteField u = random_field(space, rng, 1.0);
        const DiscreteField d = random_field(space, rng, 1.0);
        const double h = 1e-6;
        const Vector rp = residual(DiscreteField{space, u.values + h * d.values}, params);
        const Vector rm = residual(DiscreteField{space, u.values - h * d.values}, params);
        const Vector fd = (rp - rm) / (2.0 * h);
        Vector dfree = d.values;
        space->constraints().zero_constrained(dfree);
        Vector jd = jacobian(u, params) * dfree;
        space->constraints().zero_constrained(jd);
        const double scale = std::max(jd.lpNorm<Eigen::Infinity>(), 1e-300);
        worst = std::max(worst, (jd - fd).lpNorm<Eigen::Infinity>() / scale);
      }
    }
  }
  res.passed = worst <= tol;
  res.detail = "max relative error " + fmt(worst) + " (tol " + fmt(tol) + ")";
  return res;
}

std::vector<SuiteResult> check_adaptive_properties(const RunConfig& config, int steps) {
  SuiteResult pu{"pu_sum", true, ""};
  SuiteResult iter{"iteration_error", true, ""};
  SuiteResult inv{"mesh_invariants", true, ""};
  double pu_worst = 0.0;
  double iter_worst = 0.0;
  AdaptConfig ac = config.adapt;
  ac.mode = RefinementMode::Adaptive;
  ac.max_steps = steps - 1;
  ac.max_dofs = std::max<std::size_t>(ac.max_dofs, 1000000);
  int checked = 0;
  run(ac, config.model, config.reference, [&](const StepState& s) {
    ++checked;
    double sum = 0.0;
    for (double v : s.report.vertex_indicators) sum += v;
    pu_worst = std::max(pu_worst, std::abs(sum - s.report.eta_h) / (1.0 + std::abs(s.report.eta_h)));
    iter_worst = std::max(iter_worst, std::abs(s.report.iteration_error));
    const std::string msg = check_invariants(s.mesh);
    if (!msg.empty() && inv.passed) {
      inv.passed = false;
      inv.detail = "step " + std::to_string(s.record.step) + ": " + msg;
    }
    for (const DiscreteField* f : {&s.u_h, &s.u_h2}) {
      const ConstraintSet& cs = f->fs().constraints();
      Vector once = f->values;
      cs.distribute(once);
      Vector twice = once;
      cs.distribute(twice);
      if ((once - twice).lpNorm<Eigen::Infinity>() > 1e-14 && inv.passed) {
        inv.passed = false;
        inv.detail = "step " + std::to_string(s.record.step) + ": constraints not idempotent";
      }
    }
  });
  pu.passed = pu_worst <= 1e-10;
  pu.detail = "max |sum - eta_h|/(1+|eta_h|) = " + fmt(pu_worst) + " over " + std::to_string(checked) + " steps";
  iter.passed = iter_worst <= kIterationErrorBudget;
  iter.detail = "max |rho(u_h)(z_h)| = " + fmt(iter_worst);
  if (inv.passed) inv.detail = std::to_string(checked) + " meshes checked";
  return {pu, iter, inv};
}

SuiteResult check_linear_exactness(const ModelParams& base, double tol) {
  SuiteResult res{"linear_exactness", true, ""};
  ModelParams params = ModelParams::all_laplace();
  params.source = base.source;
  QoiSet qois;
  qois.members.push_back({Qoi::Kind::SubdomainIntegral, Subdomain::Omega4, {}, "J"});
  const CombinedWeights weights{{1.0}, 0};
  double worst = 0.0;
  double adjoint_gap = 0.0;
  for (int times : {0, 2, 4}) {
    const auto mesh = refined_towards({0.0, 0.0}, times);
    const SpacePtr v1 = build_space(mesh, 1);
    const SpacePtr v2 = build_space(mesh, 2);
    const NewtonConfig nc;
    const DiscreteField u_h = newton_solve(params, zero_field(v1), nc).u;
    const DiscreteField u_h2 = newton_solve(params, zero_field(v2), nc).u;
    const DiscreteField z_h = adjoint_solve(u_h, qoi_derivative(qois[0], *v1), params);
    const DiscreteField z_h2 = adjoint_solve(u_h2, qoi_derivative(qois[0], *v2), params);
    const EstimatorReport rep = estimate({u_h, z_h, u_h2, z_h2, qois, weights, params});
    const double exact = evaluate_qoi(qois[0], u_h2) - evaluate_qoi(qois[0], u_h);
    worst = std::max(worst, std::abs(rep.eta_primal - exact) / std::abs(exact));
    adjoint_gap = std::max(adjoint_gap, std::abs(rep.eta_adjoint - rep.eta_primal) / std::abs(rep.eta_primal));
  }
  res.passed = worst <= tol;
  res.detail = "max relative deviation " + fmt(worst) + ", adjoint/primal gap " + fmt(adjoint_gap);
  return res;
}

SuiteResult check_quadrature_exactness(int max_order) {
  SuiteResult res{"quadrature_exactness", true, ""};
  double worst = 0.0;
  for (int order = 1; order <= max_order; ++order) {
    const QuadratureRule rule = reference_quadrature(order);
    for (int a = 0; a <= order; ++a) {
      for (int b = 0; b <= order; ++b) {
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          sum += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
        }
        worst = std::max(worst, std::abs(sum - 1.0 / ((a + 1) * (b + 1))));
      }
    }
  }
  res.passed = worst <= 1e-14;
  res.detail = "max monomial error " + fmt(worst) + " up to order " + std::to_string(max_order);
  return res;
}

SuiteResult check_constraints(int refinements) {
  SuiteResult res{"constraint_idempotence", true, ""};
  std::mt19937_64 rng(11);
  double worst = 0.0;
  auto mesh = std::make_shared<const AdaptiveMesh>(initial_mesh());
  for (int i = 0; i < refinements; ++i) {
    // Refine a few scattered cells so hanging vertices appear in all quadrants.
    std::vector<int> flags;
    for (Point p : {Point{0.0, 0.5}, Point{0.0, 0.0}, Point{0.6, -0.3}, Point{-0.7, 0.2}}) {
      flags.push_back(locate(*mesh, p));
    }
    std::sort(flags.begin(), flags.end());
    flags.erase(std::unique(flags.begin(), flags.end()), flags.end());
    mesh = std::make_shared<const AdaptiveMesh>(refine(*mesh, flags));
    for (int degree : {1, 2}) {
      const SpacePtr space = build_space(mesh, degree);
      const ConstraintSet& cs = space->constraints();
      DiscreteField f = zero_field(space);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (Eigen::Index k = 0; k < f.values.size(); ++k) f.values[k] = dist(rng);
      cs.distribute(f.values);
      Vector again = f.values;
      cs.distribute(again);
      worst = std::max(worst, (again - f.values).lpNorm<Eigen::Infinity>());
      // Continuity: every dof value is reproduced by every active cell touching it.
      for (std::size_t d = 0; d < space->n_dofs(); ++d) {
        const Point x = space->dof_coords()[d];
        for (int c : locate_all(*mesh, x)) {
          worst = std::max(worst, std::abs(evaluate_on_cell(f, c, x) - f.values[static_cast<Eigen::Index>(d)]));
        }
      }
    }
  }
  res.passed = worst <= 1e-13;
  res.detail = "max deviation " + fmt(worst) + " over " + std::to_string(refinements) + " refinements";
  return res;
}

std::vector<SuiteResult> verify_all(const RunConfig& config) {
  std::vector<SuiteResult> out;
  // A suite that throws counts as failed; the others still run.
  auto guarded = [&](const char* name, auto&& suite) {
    try {
      suite();
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  };
  guarded("quadrature", [&] { out.push_back(check_quadrature_exactness()); });
  guarded("constraints", [&] { out.push_back(check_constraints()); });
  guarded("jacobian_fd", [&] { out.push_back(check_jacobian_fd(config.model)); });
  guarded("linear_exactness", [&] { out.push_back(check_linear_exactness(config.model)); });
  guarded("adaptive_properties", [&] {
    for (auto& r : check_adaptive_properties(config)) out.push_back(std::move(r));
  });
  return out;
}

}  // namespace cbdwr
