#include "cbdwr/cell_values.hpp"

namespace cbdwr {

void CellValues::reinit(const Cell& cell, int order) {
  auto it = tables_.find(order);
  if (it == tables_.end()) {
    Table t;
    const QuadratureRule rule = reference_quadrature(order);
    t.points = rule.points;
    t.weights = rule.weights;
    const auto ns = static_cast<std::size_t>(n_shape_);
    t.values.resize(rule.size() * ns);
    t.grads.resize(rule.size() * ns);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      shape_values(degree_, rule.points[q], std::span(t.values.data() + q * ns, ns));
      shape_gradients(degree_, rule.points[q], std::span(t.grads.data() + q * ns, ns));
    }
    it = tables_.emplace(order, std::move(t)).first;
  }
  table_ = &it->second;
  origin_ = cell.lower_left();
  side_ = cell.side();
  inv_side_ = 1.0 / side_;
  area_ = side_ * side_;
}

double CellValues::value(std::span<const double> local, std::size_t q) const {
  double v = 0.0;
  for (int k = 0; k < n_shape_; ++k) v += local[static_cast<std::size_t>(k)] * shape(k, q);
  return v;
}

std::array<double, 2> CellValues::gradient(std::span<const double> local, std::size_t q) const {
  std::array<double, 2> g{0.0, 0.0};
  for (int k = 0; k < n_shape_; ++k) {
    const auto gk = grad(k, q);
    g[0] += local[static_cast<std::size_t>(k)] * gk[0];
    g[1] += local[static_cast<std::size_t>(k)] * gk[1];
  }
  return g;
}

void gather(const DiscreteField& field, std::size_t active_position, std::span<double> local) {
  const auto dofs = field.fs().cell_dofs(active_position);
  for (std::size_t k = 0; k < dofs.size(); ++k) local[k] = field.values[dofs[k]];
}

}  // namespace cbdwr
