#include "cbdwr/dwr.hpp"

#include <cmath>

#include "cbdwr/cell_values.hpp"
#include "cbdwr/solver.hpp"

namespace cbdwr {

namespace {

void check_inputs(const EstimatorInputs& in) {
  const FunctionSpace& v1 = in.u_h.fs();
  const FunctionSpace& v2 = in.u_h2.fs();
  if (v1.degree() != 1 || in.z_h.fs().degree() != 1 || v2.degree() != 2 || in.z_h2.fs().degree() != 2) {
    throw Error("estimate: expected Q1 fields u_h, z_h and Q2 fields u_h2, z_h2");
  }
  if (!v1.same_mesh(v2) || !v1.same_mesh(in.z_h.fs()) || !v2.same_mesh(in.z_h2.fs())) {
    throw Error("estimate: fields live on different meshes");
  }
  if (in.weights.w.size() != in.qois.size()) throw Error("estimate: weights do not match the QoI set");
}

}  // namespace

EstimatorReport estimate(const EstimatorInputs& in) {
  check_inputs(in);
  const SpacePtr& v2 = in.u_h2.space;
  const ConstraintSet& cs2 = v2->constraints();
  const DiscreteField u_tilde = embed_q1_in_q2(in.u_h, v2);
  const DiscreteField z_tilde = embed_q1_in_q2(in.z_h, v2);

  EstimatorReport rep;
  // Primal part: -𝒜(ũ)(z_h2 - z̃).
  const Vector r2 = residual(u_tilde, in.params);
  const Vector z_weight = in.z_h2.values - z_tilde.values;
  rep.eta_primal = -free_dot(cs2, r2, z_weight);

  // Adjoint part: J_c'(e) - 𝒜'(ũ)(e, z̃) with e = u_h2 - ũ.
  DiscreteField e{v2, in.u_h2.values - u_tilde.values};
  const std::vector<double> je = evaluate_qois(in.qois, e);
  Vector e_free = e.values;
  cs2.zero_constrained(e_free);
  const Vector ke = jacobian(u_tilde, in.params) * e_free;
  rep.eta_adjoint = combined_value(in.weights, je) - free_dot(cs2, z_tilde.values, ke);

  rep.eta_h = 0.5 * (rep.eta_primal + rep.eta_adjoint);
  rep.iteration_error = iteration_error(in.u_h, in.z_h, in.params);
  rep.iteration_error_warning = std::abs(rep.iteration_error) > kIterationErrorBudget;
  return rep;
}

Localization localize_pu(const EstimatorInputs& in) {
  check_inputs(in);
  const FunctionSpace& v1 = in.u_h.fs();
  const SpacePtr& v2 = in.u_h2.space;
  const AdaptiveMesh& mesh = v1.mesh();
  const ModelParams& params = in.params;

  const DiscreteField u_tilde = embed_q1_in_q2(in.u_h, v2);
  const DiscreteField z_tilde = embed_q1_in_q2(in.z_h, v2);
  const DiscreteField z_weight{v2, in.z_h2.values - z_tilde.values};
  const DiscreteField e{v2, in.u_h2.values - u_tilde.values};

  // Weight of each subdomain integral in J_c.
  std::array<double, 4> subdomain_weight{};
  for (std::size_t k = 0; k < in.qois.size(); ++k) {
    const Qoi& q = in.qois[k];
    if (q.kind == Qoi::Kind::SubdomainIntegral) {
      subdomain_weight[static_cast<std::size_t>(index_of(q.subdomain))] += in.weights.w[k];
    }
  }

  const std::size_t n1 = v1.n_dofs();
  std::vector<double> primal_local(n1, 0.0);
  std::vector<double> adjoint_local(n1, 0.0);
  const ConstraintSet& cs1 = v1.constraints();
  auto scatter = [&](std::size_t a, int corner, double p, double d) {
    const int dof = v1.cell_dofs(a)[static_cast<std::size_t>(corner)];
    if (cs1.is_hanging(dof)) {
      for (const MasterWeight& m : cs1.hanging_masters(dof)) {
        primal_local[static_cast<std::size_t>(m.dof)] += m.weight * p;
        adjoint_local[static_cast<std::size_t>(m.dof)] += m.weight * d;
      }
    } else {
      primal_local[static_cast<std::size_t>(dof)] += p;
      adjoint_local[static_cast<std::size_t>(dof)] += d;
    }
  };

  CellValues c2(2);
  CellValues c1(1);
  std::array<double, 9> ul{};
  std::array<double, 9> zl{};
  std::array<double, 9> vl{};
  std::array<double, 9> el{};
  for (std::size_t a = 0; a < mesh.n_active_cells(); ++a) {
    const Cell& cell = mesh.cell(mesh.active_cells()[a]);
    const int order = params.order_for(cell.subdomain, 2);
    const LocalOperator op = params.op(cell.subdomain);
    const double jw = subdomain_weight[static_cast<std::size_t>(index_of(cell.subdomain))];
    c2.reinit(cell, order);
    c1.reinit(cell, order);
    gather(u_tilde, a, ul);
    gather(z_tilde, a, zl);
    gather(z_weight, a, vl);
    gather(e, a, el);
    std::array<double, 4> pc{};
    std::array<double, 4> dc{};
    for (std::size_t q = 0; q < c2.n_points(); ++q) {
      const double u = c2.value(ul, q);
      const auto gu = c2.gradient(ul, q);
      const double z = c2.value(zl, q);
      const auto gz = c2.gradient(zl, q);
      const double v = c2.value(vl, q);
      const auto gv = c2.gradient(vl, q);
      const double ev = c2.value(el, q);
      const auto ge = c2.gradient(el, q);
      const auto k = point_coefficients(params, op, c2.point(q), u, gu);
      const double w = c2.JxW(q);
      const double fx = k.a * gu[0];
      const double fy = k.a * gu[1];
      const double zero_order = k.c - params.source;
      for (int c = 0; c < 4; ++c) {
        const double psi = c1.shape(c, q);
        const auto gpsi = c1.grad(c, q);
        // ρ(ũ)(v ψ)
        const double gvx = psi * gv[0] + v * gpsi[0];
        const double gvy = psi * gv[1] + v * gpsi[1];
        pc[static_cast<std::size_t>(c)] -= w * (fx * gvx + fy * gvy + zero_order * psi * v);
        // J_c(e ψ) - 𝒜'(ũ)(e ψ, z̃)
        const double wv = ev * psi;
        const double gwx = psi * ge[0] + ev * gpsi[0];
        const double gwy = psi * ge[1] + ev * gpsi[1];
        const double s = 2.0 * k.da_dg2 * (gu[0] * gwx + gu[1] * gwy) + k.da_du * wv;
        const double dax = k.a * gwx + s * gu[0];
        const double day = k.a * gwy + s * gu[1];
        const double lin = dax * gz[0] + day * gz[1] + k.dc_du * wv * z;
        dc[static_cast<std::size_t>(c)] += w * (jw * wv - lin);
      }
    }
    for (int c = 0; c < 4; ++c) scatter(a, c, pc[static_cast<std::size_t>(c)], dc[static_cast<std::size_t>(c)]);
  }

  // Point functionals contribute w_k e(x_k) ψ_c(x_k) on the located cell.
  for (std::size_t k = 0; k < in.qois.size(); ++k) {
    const Qoi& q = in.qois[k];
    if (q.kind != Qoi::Kind::PointValue || in.weights.w[k] == 0.0) continue;
    const int cell = locate(mesh, q.point);
    const std::size_t a = static_cast<std::size_t>(mesh.active_index(cell));
    const double ev = evaluate_on_cell(e, cell, q.point);
    const Cell& c = mesh.cell(cell);
    const Point lo = c.lower_left();
    std::array<double, 4> psi{};
    shape_values(1, {(q.point.x - lo.x) / c.side(), (q.point.y - lo.y) / c.side()}, psi);
    for (int corner = 0; corner < 4; ++corner) {
      scatter(a, corner, 0.0, in.weights.w[k] * ev * psi[static_cast<std::size_t>(corner)]);
    }
  }

  Localization out;
  out.total.resize(n1);
  out.primal.resize(n1);
  out.adjoint.resize(n1);
  for (std::size_t i = 0; i < n1; ++i) {
    out.primal[i] = 0.5 * primal_local[i];
    out.adjoint[i] = 0.5 * adjoint_local[i];
    out.total[i] = out.primal[i] + out.adjoint[i];
  }
  return out;
}

std::vector<double> cell_indicators(const std::vector<double>& vertex_indicators, const FunctionSpace& q1) {
  if (q1.degree() != 1) throw Error("cell_indicators: expected the Q1 space");
  if (vertex_indicators.size() != q1.n_dofs()) throw Error("cell_indicators: indicator count mismatch");
  const AdaptiveMesh& mesh = q1.mesh();
  std::vector<int> valence(q1.n_dofs(), 0);
  for (std::size_t a = 0; a < mesh.n_active_cells(); ++a) {
    for (int d : q1.cell_dofs(a)) ++valence[static_cast<std::size_t>(d)];
  }
  std::vector<double> out(mesh.n_active_cells(), 0.0);
  for (std::size_t a = 0; a < mesh.n_active_cells(); ++a) {
    for (int d : q1.cell_dofs(a)) {
      const auto i = static_cast<std::size_t>(d);
      out[a] += std::abs(vertex_indicators[i]) / valence[i];
    }
  }
  return out;
}

std::optional<double> effectivity(double eta_h, double j_ref, double j_h) {
  const double denom = j_ref - j_h;
  if (denom == 0.0) return std::nullopt;
  return eta_h / denom;
}

EstimatorReport estimate_and_localize(const EstimatorInputs& in) {
  EstimatorReport rep = estimate(in);
  Localization loc = localize_pu(in);
  rep.vertex_indicators = std::move(loc.total);
  rep.vertex_primal = std::move(loc.primal);
  rep.vertex_adjoint = std::move(loc.adjoint);
  rep.cell_indicators = cell_indicators(rep.vertex_indicators, in.u_h.fs());
  return rep;
}

}  // namespace cbdwr
