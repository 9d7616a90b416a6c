#include "cbdwr/goals.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "cbdwr/cell_values.hpp"

namespace cbdwr {

QoiSet QoiSet::checkerboard(Layout layout) {
  QoiSet set;
  std::array<int, 4> region{0, 1, 2, 3};
  if (layout == Layout::Published) std::swap(region[0], region[1]);
  for (int k = 0; k < 4; ++k) {
    set.members.push_back({Qoi::Kind::SubdomainIntegral, static_cast<Subdomain>(region[static_cast<std::size_t>(k)]),
                           {}, "J" + std::to_string(k + 1)});
  }
  set.members.push_back({Qoi::Kind::PointValue, Subdomain::Omega1, kPointOfInterest, "J5"});
  return set;
}

double evaluate_qoi(const Qoi& qoi, const DiscreteField& u) {
  if (qoi.kind == Qoi::Kind::PointValue) return evaluate(u, qoi.point);
  const FunctionSpace& fs = u.fs();
  const AdaptiveMesh& mesh = fs.mesh();
  CellValues cv(fs.degree());
  std::array<double, 9> ul{};
  double sum = 0.0;
  for (std::size_t a = 0; a < mesh.n_active_cells(); ++a) {
    const Cell& cell = mesh.cell(mesh.active_cells()[a]);
    if (cell.subdomain != qoi.subdomain) continue;
    cv.reinit(cell, fs.degree() + 2);
    gather(u, a, std::span(ul.data(), static_cast<std::size_t>(cv.n_shape())));
    for (std::size_t q = 0; q < cv.n_points(); ++q) sum += cv.JxW(q) * cv.value(ul, q);
  }
  return sum;
}

std::vector<double> evaluate_qois(const QoiSet& qois, const DiscreteField& u) {
  std::vector<double> out;
  out.reserve(qois.size());
  for (const Qoi& q : qois.members) out.push_back(evaluate_qoi(q, u));
  return out;
}

Vector qoi_derivative(const Qoi& qoi, const FunctionSpace& space, bool condense) {
  const AdaptiveMesh& mesh = space.mesh();
  const ConstraintSet& cs = space.constraints();
  Vector out = Vector::Zero(static_cast<Eigen::Index>(space.n_dofs()));
  const auto n = static_cast<std::size_t>(space.dofs_per_cell());
  auto scatter = [&](std::size_t a, std::span<const double> local) {
    const auto dofs = space.cell_dofs(a);
    for (std::size_t i = 0; i < n; ++i) {
      if (!condense) {
        out[dofs[i]] += local[i];
        continue;
      }
      for (const MasterWeight& m : cs.expansion(dofs[i])) out[m.dof] += m.weight * local[i];
    }
  };

  std::array<double, 9> local{};
  if (qoi.kind == Qoi::Kind::PointValue) {
    const int cell = locate(mesh, qoi.point);
    const Cell& c = mesh.cell(cell);
    const Point lo = c.lower_left();
    const Point ref{(qoi.point.x - lo.x) / c.side(), (qoi.point.y - lo.y) / c.side()};
    shape_values(space.degree(), ref, std::span(local.data(), n));
    scatter(static_cast<std::size_t>(mesh.active_index(cell)), std::span(local.data(), n));
    return out;
  }
  CellValues cv(space.degree());
  for (std::size_t a = 0; a < mesh.n_active_cells(); ++a) {
    const Cell& cell = mesh.cell(mesh.active_cells()[a]);
    if (cell.subdomain != qoi.subdomain) continue;
    cv.reinit(cell, space.degree() + 2);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < cv.n_points(); ++q) {
      for (std::size_t i = 0; i < n; ++i) local[i] += cv.JxW(q) * cv.shape(static_cast<int>(i), q);
    }
    scatter(a, std::span(local.data(), n));
  }
  return out;
}

CombinedWeights combined_weights(std::span<const double> base, std::span<const double> enriched,
                                 std::uint64_t mesh_generation) {
  if (base.size() != enriched.size()) throw Error("combined_weights: size mismatch");
  CombinedWeights cw;
  cw.mesh_generation = mesh_generation;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i] == 0.0) {
      std::ostringstream msg;
      msg << "combined_weights: J" << i + 1 << "(u_h) = 0, relative scaling is undefined";
      throw Error(msg.str());
    }
    cw.w.push_back(goal_sign(enriched[i] - base[i]) / std::abs(base[i]));
  }
  return cw;
}

CombinedWeights combined_weights(const QoiSet& qois, const DiscreteField& u_h, const DiscreteField& u_h2) {
  const auto base = evaluate_qois(qois, u_h);
  const auto enriched = evaluate_qois(qois, u_h2);
  return combined_weights(base, enriched, u_h.fs().mesh().generation());
}

double combined_value(const CombinedWeights& weights, std::span<const double> values) {
  double s = 0.0;
  for (std::size_t i = 0; i < weights.w.size(); ++i) s += weights.w[i] * values[i];
  return s;
}

Vector combined_derivative(const QoiSet& qois, const CombinedWeights& weights, const FunctionSpace& space) {
  if (weights.w.size() != qois.size()) throw Error("combined_derivative: weight count does not match the QoI set");
  if (weights.mesh_generation != 0 && weights.mesh_generation != space.mesh().generation()) {
    throw Error("combined_derivative: weights were frozen on a different mesh");
  }
  Vector out = Vector::Zero(static_cast<Eigen::Index>(space.n_dofs()));
  for (std::size_t i = 0; i < qois.size(); ++i) {
    if (weights.w[i] != 0.0) out += weights.w[i] * qoi_derivative(qois[i], space);
  }
  return out;
}

}  // namespace cbdwr
