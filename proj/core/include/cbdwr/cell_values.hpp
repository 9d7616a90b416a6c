#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

#include "cbdwr/quadrature.hpp"
#include "cbdwr/space.hpp"

namespace cbdwr {

/// Shape values, physical gradients and JxW on one cell for a tensor Gauss
/// rule. Reference tables are cached per quadrature order, so reinit on a new
/// cell only rescales.
class CellValues {
public:
  explicit CellValues(int degree) : degree_(degree), n_shape_(nodes_per_cell(degree)) {}

  void reinit(const Cell& cell, int order);

  int degree() const { return degree_; }
  int n_shape() const { return n_shape_; }
  std::size_t n_points() const { return table_->weights.size(); }

  double JxW(std::size_t q) const { return table_->weights[q] * area_; }
  Point point(std::size_t q) const {
    const Point r = table_->points[q];
    return {origin_.x + side_ * r.x, origin_.y + side_ * r.y};
  }
  double shape(int k, std::size_t q) const {
    return table_->values[q * static_cast<std::size_t>(n_shape_) + static_cast<std::size_t>(k)];
  }
  std::array<double, 2> grad(int k, std::size_t q) const {
    const auto& g = table_->grads[q * static_cast<std::size_t>(n_shape_) + static_cast<std::size_t>(k)];
    return {g[0] * inv_side_, g[1] * inv_side_};
  }

  /// Value and gradient of a field with the given local coefficients at point q.
  double value(std::span<const double> local, std::size_t q) const;
  std::array<double, 2> gradient(std::span<const double> local, std::size_t q) const;

private:
  struct Table {
    std::vector<Point> points;
    std::vector<double> weights;
    std::vector<double> values;
    std::vector<std::array<double, 2>> grads;
  };

  int degree_;
  int n_shape_;
  std::map<int, Table> tables_;
  const Table* table_ = nullptr;
  Point origin_;
  double side_ = 1.0;
  double inv_side_ = 1.0;
  double area_ = 1.0;
};

/// Gathers the coefficients of a field on the a-th active cell.
void gather(const DiscreteField& field, std::size_t active_position, std::span<double> local);

}  // namespace cbdwr
