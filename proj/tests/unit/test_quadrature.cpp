#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "cbdwr/quadrature.hpp"

using namespace cbdwr;

TEST(Quadrature, MidpointRule) {
  const QuadratureRule r = reference_quadrature(1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_DOUBLE_EQ(r.points[0].x, 0.5);
  EXPECT_DOUBLE_EQ(r.points[0].y, 0.5);
  EXPECT_DOUBLE_EQ(r.weights[0], 1.0);
}

TEST(Quadrature, OrderThreeOnUnitCell) {
  const QuadratureRule r = reference_quadrature(3);
  ASSERT_EQ(r.size(), 4u);
  double sum = 0.0;
  double xy = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) {
    sum += r.weights[q];
    xy += r.weights[q] * r.points[q].x * r.points[q].y;
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_NEAR(xy, 0.25, 1e-15);
}

TEST(Quadrature, LevelTwoCellScalesArea) {
  AdaptiveMesh m = refine_uniform(refine_uniform(initial_mesh()));
  const Cell& c = m.cell(m.active_cells().front());
  ASSERT_EQ(c.level, 2);
  const QuadratureRule r = cell_quadrature(c, 5);
  EXPECT_EQ(r.size(), 9u);
  EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 1.0 / 16.0, 1e-16);
}

TEST(Quadrature, GaussExactness) {
  for (int order = 1; order <= 12; ++order) {
    const QuadratureRule r = reference_quadrature(order);
    for (int a = 0; a <= order; ++a) {
      double s = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q].x, a);
      EXPECT_NEAR(s, 1.0 / (a + 1), 1e-14) << "order " << order << " power " << a;
    }
  }
}

TEST(Quadrature, RejectsOrderZero) { EXPECT_THROW(reference_quadrature(0), Error); }
