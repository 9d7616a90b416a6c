#include "cbdwr/model.hpp"

#include <cmath>
#include <sstream>

#include "cbdwr/cell_values.hpp"

namespace cbdwr {

void ModelParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    std::ostringstream msg;
    msg << "epsilon must be positive and finite (got " << epsilon << ")";
    throw Error(msg.str());
  }
  if (!std::isfinite(source)) throw Error("source f must be finite");
  for (int order : quadrature_order) {
    if (order < 0) throw Error("quadrature orders must be positive (0 selects the default)");
  }
}

int ModelParams::order_for(Subdomain s, int degree) const {
  const int order = quadrature_order[static_cast<std::size_t>(index_of(s))];
  if (order > 0) return order;
  switch (op(s)) {
    case LocalOperator::CubicReaction:
    case LocalOperator::SaturatingDiffusion:
      return 6;
    case LocalOperator::VariableExponent:
      return 8;
    case LocalOperator::Laplace:
      break;
  }
  return 2 * degree;
}

std::array<LocalOperator, 4> operators_for(Layout layout) {
  using enum LocalOperator;
  if (layout == Layout::Stated) return {CubicReaction, VariableExponent, SaturatingDiffusion, Laplace};
  return {CubicReaction, VariableExponent, Laplace, SaturatingDiffusion};
}

ModelParams ModelParams::with_layout(Layout layout) {
  ModelParams p;
  p.operators = operators_for(layout);
  return p;
}

ModelParams ModelParams::all_laplace() {
  ModelParams p;
  p.operators.fill(LocalOperator::Laplace);
  return p;
}

double exponent(Point x) {
  if (subdomain_of(x) == Subdomain::Omega2) return (1.0 + 2.0 * x.x) * (1.0 + 2.0 * x.y);
  return 2.0;
}

PointCoefficients point_coefficients(const ModelParams& params, LocalOperator op, Point x, double u,
                                     std::array<double, 2> grad) {
  PointCoefficients k;
  switch (op) {
    case LocalOperator::Laplace:
      break;
    case LocalOperator::CubicReaction:
      k.c = u * u * u;
      k.dc_du = 3.0 * u * u;
      break;
    case LocalOperator::SaturatingDiffusion: {
      const double d = 1.0 + u * u;
      k.a = 0.1 + 1.0 / d;
      k.da_du = -2.0 * u / (d * d);
      break;
    }
    case LocalOperator::VariableExponent: {
      const double p = exponent(x);
      const double s = grad[0] * grad[0] + grad[1] * grad[1] + params.epsilon * params.epsilon;
      // s ≥ ε² > 0, so the power goes through exp/log without 0^negative.
      const double half = 0.5 * (p - 2.0);
      k.a = std::exp(half * std::log(s));
      k.da_dg2 = half * k.a / s;
      break;
    }
  }
  return k;
}

Vector residual(const DiscreteField& u, const FunctionSpace& test_space, const ModelParams& params,
                std::optional<Subdomain> only) {
  const FunctionSpace& trial = u.fs();
  if (!trial.same_mesh(test_space)) throw Error("residual: field and test space live on different meshes");
  const AdaptiveMesh& mesh = trial.mesh();
  const ConstraintSet& cs = test_space.constraints();

  CellValues uv(trial.degree());
  CellValues tv(test_space.degree());
  const int degree = std::max(trial.degree(), test_space.degree());
  std::array<double, 9> ul{};
  std::array<double, 9> rl{};
  const auto nt = static_cast<std::size_t>(tv.n_shape());

  Vector r = Vector::Zero(static_cast<Eigen::Index>(test_space.n_dofs()));
  for (std::size_t a = 0; a < mesh.n_active_cells(); ++a) {
    const Cell& cell = mesh.cell(mesh.active_cells()[a]);
    if (only && cell.subdomain != *only) continue;
    const int order = params.order_for(cell.subdomain, degree);
    const LocalOperator op = params.op(cell.subdomain);
    uv.reinit(cell, order);
    tv.reinit(cell, order);
    gather(u, a, std::span(ul.data(), static_cast<std::size_t>(uv.n_shape())));
    std::fill(rl.begin(), rl.end(), 0.0);
    for (std::size_t q = 0; q < uv.n_points(); ++q) {
      const double uq = uv.value(ul, q);
      const auto g = uv.gradient(ul, q);
      const auto k = point_coefficients(params, op, uv.point(q), uq, g);
      const double w = uv.JxW(q);
      const double fx = k.a * g[0];
      const double fy = k.a * g[1];
      const double zero_order = k.c - params.source;
      for (std::size_t i = 0; i < nt; ++i) {
        const auto gi = tv.grad(static_cast<int>(i), q);
        rl[i] += w * (fx * gi[0] + fy * gi[1] + zero_order * tv.shape(static_cast<int>(i), q));
      }
    }
    const auto dofs = test_space.cell_dofs(a);
    for (std::size_t i = 0; i < nt; ++i) {
      for (const MasterWeight& m : cs.expansion(dofs[i])) r[m.dof] += m.weight * rl[i];
    }
  }
  return r;
}

Vector residual(const DiscreteField& u, const ModelParams& params) { return residual(u, u.fs(), params); }

SparseMatrix jacobian(const DiscreteField& u, const ModelParams& params) {
  const FunctionSpace& fs = u.fs();
  const AdaptiveMesh& mesh = fs.mesh();
  const ConstraintSet& cs = fs.constraints();
  SparseMatrix K = fs.sparsity();

  CellValues cv(fs.degree());
  const auto n = static_cast<std::size_t>(cv.n_shape());
  std::array<double, 9> ul{};
  std::array<double, 81> kl{};

  for (std::size_t a = 0; a < mesh.n_active_cells(); ++a) {
    const Cell& cell = mesh.cell(mesh.active_cells()[a]);
    const LocalOperator op = params.op(cell.subdomain);
    cv.reinit(cell, params.order_for(cell.subdomain, fs.degree()));
    gather(u, a, std::span(ul.data(), n));
    std::fill(kl.begin(), kl.end(), 0.0);
    for (std::size_t q = 0; q < cv.n_points(); ++q) {
      const double uq = cv.value(ul, q);
      const auto g = cv.gradient(ul, q);
      const auto k = point_coefficients(params, op, cv.point(q), uq, g);
      const double w = cv.JxW(q);
      for (std::size_t j = 0; j < n; ++j) {
        const auto gj = cv.grad(static_cast<int>(j), q);
        const double pj = cv.shape(static_cast<int>(j), q);
        const double gdot = 2.0 * k.da_dg2 * (g[0] * gj[0] + g[1] * gj[1]) + k.da_du * pj;
        const double dfx = k.a * gj[0] + gdot * g[0];
        const double dfy = k.a * gj[1] + gdot * g[1];
        const double dc = k.dc_du * pj;
        for (std::size_t i = 0; i < n; ++i) {
          const auto gi = cv.grad(static_cast<int>(i), q);
          kl[i * n + j] += w * (dfx * gi[0] + dfy * gi[1] + dc * cv.shape(static_cast<int>(i), q));
        }
      }
    }
    const auto dofs = fs.cell_dofs(a);
    for (std::size_t i = 0; i < n; ++i) {
      for (const MasterWeight& mi : cs.expansion(dofs[i])) {
        for (std::size_t j = 0; j < n; ++j) {
          const double v = mi.weight * kl[i * n + j];
          for (const MasterWeight& mj : cs.expansion(dofs[j])) K.coeffRef(mi.dof, mj.dof) += v * mj.weight;
        }
      }
    }
  }
  for (std::size_t i = 0; i < fs.n_dofs(); ++i) {
    if (cs.is_constrained(static_cast<int>(i))) K.coeffRef(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return K;
}

}  // namespace cbdwr
