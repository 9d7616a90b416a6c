#include <gtest/gtest.h>

#include <random>

#include "cbdwr/goals.hpp"

using namespace cbdwr;

namespace {

std::shared_ptr<const AdaptiveMesh> mesh_ptr(AdaptiveMesh m) { return std::make_shared<const AdaptiveMesh>(std::move(m)); }

}  // namespace

TEST(Goals, CheckerboardSets) {
  const QoiSet stated = QoiSet::checkerboard(Layout::Stated);
  ASSERT_EQ(stated.size(), 5u);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(stated[static_cast<std::size_t>(k)].subdomain, static_cast<Subdomain>(k));
  EXPECT_EQ(stated[4].kind, Qoi::Kind::PointValue);
  EXPECT_EQ(stated[4].point.y, 0.5);
  const QoiSet published = QoiSet::checkerboard();
  EXPECT_EQ(published[0].subdomain, Subdomain::Omega2);
  EXPECT_EQ(published[1].subdomain, Subdomain::Omega1);
  EXPECT_EQ(published[2].subdomain, Subdomain::Omega3);
  EXPECT_EQ(published[3].subdomain, Subdomain::Omega4);
}

TEST(Goals, ValuesOfSimpleFields) {
  const SpacePtr s = build_space(mesh_ptr(initial_mesh()), 1);
  const QoiSet q = QoiSet::checkerboard(Layout::Stated);
  EXPECT_EQ(evaluate_qoi(q[0], zero_field(s)), 0.0);
  const DiscreteField one = interpolate(s, [](Point) { return 1.0; });
  EXPECT_NEAR(evaluate_qoi(q[3], one), 1.0, 1e-15);
}

TEST(Goals, PointDerivativeOnInitialMesh) {
  const SpacePtr s = build_space(mesh_ptr(initial_mesh()), 1);
  const Vector d = qoi_derivative(QoiSet::checkerboard()[4], *s);
  const int origin = s->find_dof({kUnitsPerLength, kUnitsPerLength});
  for (Eigen::Index i = 0; i < d.size(); ++i) EXPECT_DOUBLE_EQ(d[i], i == origin ? 0.5 : 0.0);
}

TEST(Goals, DerivativeIndependentOfState) {
  const SpacePtr s = build_space(mesh_ptr(refine_uniform(initial_mesh())), 2);
  const Qoi& q = QoiSet::checkerboard()[0];
  const Vector a = qoi_derivative(q, *s);
  const Vector b = qoi_derivative(q, *s);
  EXPECT_EQ((a - b).lpNorm<Eigen::Infinity>(), 0.0);
  // Linearity: J(u) = J'(φ) · u for any field.
  const DiscreteField u = interpolate(s, [](Point x) { return x.x * x.x + x.y; });
  const Vector full = qoi_derivative(q, *s, false);
  EXPECT_NEAR(full.dot(u.values), evaluate_qoi(q, u), 1e-14);
}

TEST(Goals, IntegralDerivativeSumsToArea) {
  AdaptiveMesh m0 = initial_mesh();
  const auto mesh = mesh_ptr(refine(m0, std::vector<int>{locate(m0, {0.5, 0.5})}));
  const SpacePtr s = build_space(mesh, 1);
  const Vector d = qoi_derivative(QoiSet::checkerboard(Layout::Stated)[1], *s, false);
  EXPECT_NEAR(d.sum(), 1.0, 1e-14);
}

TEST(Goals, WeightSigns) {
  const std::vector<double> base{2.0, -2.0};
  const std::vector<double> enriched{2.0, -2.1};
  const CombinedWeights w = combined_weights(base, enriched);
  EXPECT_DOUBLE_EQ(w.w[0], 0.5);
  EXPECT_DOUBLE_EQ(w.w[1], -0.5);
  EXPECT_THROW(combined_weights(std::vector<double>{0.0}, std::vector<double>{1.0}), Error);
}

TEST(Goals, CombinedValueUnitWeights) {
  const std::vector<double> base{1, 1, 1, 1, 1};
  const std::vector<double> enriched{2, 2, 2, 2, 2};
  const CombinedWeights w = combined_weights(base, enriched);
  const std::vector<double> v{0.3, 0.4, 0.5, 0.6, 0.7};
  EXPECT_DOUBLE_EQ(combined_value(w, v), 0.3 + 0.4 + 0.5 + 0.6 + 0.7);
}

TEST(Goals, CombinedDerivativeIdentities) {
  const SpacePtr s = build_space(mesh_ptr(refine_uniform(initial_mesh())), 1);
  const QoiSet q = QoiSet::checkerboard();
  CombinedWeights single{{1, 0, 0, 0, 0}, 0};
  EXPECT_EQ((combined_derivative(q, single, *s) - qoi_derivative(q[0], *s)).lpNorm<Eigen::Infinity>(), 0.0);
  CombinedWeights none{{0, 0, 0, 0, 0}, 0};
  EXPECT_EQ(combined_derivative(q, none, *s).lpNorm<Eigen::Infinity>(), 0.0);
  CombinedWeights generic{{0.7, -1.3, 2.1, -0.4, 0.9}, 0};
  const Vector d = combined_derivative(q, generic, *s);
  Vector manual = Vector::Zero(d.size());
  for (int k = 4; k >= 0; --k) manual += generic.w[static_cast<std::size_t>(k)] * qoi_derivative(q[static_cast<std::size_t>(k)], *s);
  EXPECT_LE((d - manual).lpNorm<Eigen::Infinity>(), 1e-14);
}

TEST(Goals, StaleWeightsRejected) {
  const auto m1 = mesh_ptr(initial_mesh());
  const auto m2 = mesh_ptr(refine_uniform(*m1));
  const SpacePtr s1 = build_space(m1, 1);
  const SpacePtr s2 = build_space(m2, 1);
  const QoiSet q = QoiSet::checkerboard();
  const DiscreteField u = interpolate(s1, [](Point x) { return 2 + x.x; });
  const CombinedWeights w = combined_weights(q, u, u);
  EXPECT_NO_THROW(combined_derivative(q, w, *s1));
  EXPECT_THROW(combined_derivative(q, w, *s2), Error);
}

TEST(Goals, ErrorCombinationIdentity) {
  const SpacePtr s = build_space(mesh_ptr(refine_uniform(initial_mesh())), 2);
  const QoiSet q = QoiSet::checkerboard();
  const DiscreteField a = interpolate(s, [](Point x) { return 1 + x.x * x.y; });
  const DiscreteField b = interpolate(s, [](Point x) { return 2 - x.x + x.y * x.y; });
  const auto ja = evaluate_qois(q, a);
  const auto jb = evaluate_qois(q, b);
  const CombinedWeights w = combined_weights(ja, jb);
  std::vector<double> diff;
  for (std::size_t k = 0; k < ja.size(); ++k) diff.push_back(ja[k] - jb[k]);
  const double lhs = combined_value(w, ja) - combined_value(w, jb);
  EXPECT_NEAR(lhs, combined_value(w, diff), 1e-12 * std::abs(lhs));
}
