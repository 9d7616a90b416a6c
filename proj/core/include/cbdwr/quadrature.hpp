#pragma once

#include <vector>

#include "cbdwr/mesh.hpp"

namespace cbdwr {

/// Points and weights. Reference rules live on [0,1]^2 with weights summing
/// to one; mapped rules carry physical points and weights summing to the
/// cell area.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre(int n_points, std::vector<double>& nodes, std::vector<double>& weights);

/// Points per direction needed for exactness of the given polynomial order.
constexpr int gauss_points_for_order(int order) { return (order + 2) / 2; }

/// Tensor Gauss rule on the reference square, exact up to `order` in each variable.
QuadratureRule reference_quadrature(int order);

/// Tensor Gauss rule mapped to the cell.
QuadratureRule cell_quadrature(const Cell& cell, int order);

}  // namespace cbdwr
