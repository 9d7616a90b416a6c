#include "cbdwr/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace cbdwr {

void gauss_legendre(int n_points, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n_points < 1) throw Error("gauss_legendre: need at least one point");
  const auto n = static_cast<std::size_t>(n_points);
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton on P_n from the Chebyshev-like initial guesses, then map [-1,1] -> [0,1].
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n_points; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n_points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
}

QuadratureRule reference_quadrature(int order) {
  if (order < 1) throw Error("quadrature order must be positive");
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(gauss_points_for_order(order), x, w);
  QuadratureRule rule;
  rule.points.reserve(x.size() * x.size());
  rule.weights.reserve(x.size() * x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      rule.points.push_back({x[i], x[j]});
      rule.weights.push_back(w[i] * w[j]);
    }
  }
  return rule;
}

QuadratureRule cell_quadrature(const Cell& cell, int order) {
  QuadratureRule rule = reference_quadrature(order);
  const Point lo = cell.lower_left();
  const double h = cell.side();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    rule.points[q] = {lo.x + h * rule.points[q].x, lo.y + h * rule.points[q].y};
    rule.weights[q] *= h * h;
  }
  return rule;
}

}  // namespace cbdwr
