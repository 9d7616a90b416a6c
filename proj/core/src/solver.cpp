#include "cbdwr/solver.hpp"

#include <cmath>
#include <sstream>

namespace cbdwr {

namespace {

double free_inf_norm(const Vector& r) { return r.size() == 0 ? 0.0 : r.lpNorm<Eigen::Infinity>(); }

}  // namespace

void NewtonConfig::validate() const {
  if (!(abs_tol > 0.0 && abs_tol <= 1e-10)) throw Error("newton abs_tol must lie in (0, 1e-10]");
  if (max_iters < 1) throw Error("newton max_iters must be positive");
  if (!(damping > 0.0 && damping < 1.0)) throw Error("newton damping must lie in (0, 1)");
  if (max_halvings < 0) throw Error("newton max_halvings must be non-negative");
}

NewtonResult newton_solve(const ModelParams& params, DiscreteField u0, const NewtonConfig& cfg) {
  cfg.validate();
  NewtonResult out{std::move(u0), 0, 0.0, {}};
  DiscreteField& u = out.u;
  const ConstraintSet& cs = u.fs().constraints();

  Vector r = residual(u, params);
  double norm = free_inf_norm(r);
  out.history.push_back(norm);
  SparseLu lu;
  while (norm > cfg.abs_tol) {
    if (out.iterations == cfg.max_iters) {
      std::ostringstream msg;
      msg << "newton: no convergence after " << cfg.max_iters << " iterations (degree " << u.fs().degree()
          << ", " << u.fs().n_dofs() << " dofs); residual history:";
      for (double h : out.history) msg << ' ' << h;
      throw Error(msg.str());
    }
    lu.factorize(jacobian(u, params));
    Vector delta = lu.solve(-r);
    cs.distribute(delta);

    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= cfg.max_halvings; ++halving) {
      DiscreteField trial{u.space, u.values + step * delta};
      Vector r_trial = residual(trial, params);
      const double n_trial = free_inf_norm(r_trial);
      if (std::isfinite(n_trial) && n_trial <= norm) {
        u.values = std::move(trial.values);
        r = std::move(r_trial);
        norm = n_trial;
        accepted = true;
        break;
      }
      step *= cfg.damping;
    }
    ++out.iterations;
    if (!accepted) {
      std::ostringstream msg;
      msg << "newton: line search failed at iteration " << out.iterations << " (residual " << norm << ", degree "
          << u.fs().degree() << ", " << u.fs().n_dofs() << " dofs)";
      throw Error(msg.str());
    }
    out.history.push_back(norm);
  }
  out.residual_norm = norm;
  return out;
}

DiscreteField adjoint_solve(const DiscreteField& u, const Vector& rhs, const ModelParams& params,
                            LinearSolveStats* stats) {
  if (rhs.size() != static_cast<Eigen::Index>(u.fs().n_dofs())) throw Error("adjoint_solve: rhs has wrong size");
  Vector b = rhs;
  u.fs().constraints().zero_constrained(b);
  SparseLu lu;
  lu.factorize(jacobian(u, params));
  DiscreteField z{u.space, lu.solve_transposed(b, stats)};
  u.fs().constraints().distribute(z.values);
  return z;
}

double iteration_error(const DiscreteField& u, const DiscreteField& z, const ModelParams& params) {
  if (!u.fs().same_mesh(z.fs()) || u.fs().degree() != z.fs().degree()) {
    throw Error("iteration_error: fields live on different spaces");
  }
  const Vector r = residual(u, params);
  return free_dot(u.fs().constraints(), r, z.values);
}

}  // namespace cbdwr
