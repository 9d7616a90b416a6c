#include <gtest/gtest.h>

#include <sstream>

#include "cbdwr/mesh.hpp"

using namespace cbdwr;

namespace {

double active_area(const AdaptiveMesh& m) {
  double a = 0.0;
  for (int c : m.active_cells()) a += m.cell(c).side() * m.cell(c).side();
  return a;
}

int cell_at_origin(const AdaptiveMesh& m, Point lo, double side) {
  for (int c : m.active_cells()) {
    const Cell& cell = m.cell(c);
    if (cell.lower_left().x == lo.x && cell.lower_left().y == lo.y && cell.side() == side) return c;
  }
  return -1;
}

}  // namespace

TEST(Mesh, InitialMesh) {
  const AdaptiveMesh m = initial_mesh();
  EXPECT_EQ(m.n_active_cells(), 4u);
  EXPECT_EQ(m.vertices().size(), 9u);
  EXPECT_TRUE(m.hanging_vertices().empty());
  EXPECT_DOUBLE_EQ(active_area(m), 4.0);
  EXPECT_EQ(m.cell(locate(m, {-0.5, 0.5})).subdomain, Subdomain::Omega1);
  EXPECT_EQ(check_invariants(m), "");
}

TEST(Mesh, RefineOneCornerCell) {
  const AdaptiveMesh m0 = initial_mesh();
  const int omega2 = locate(m0, {0.5, 0.5});
  const std::vector<int> flags{omega2};
  const AdaptiveMesh m = refine(m0, flags);
  EXPECT_EQ(m.n_active_cells(), 7u);
  ASSERT_EQ(m.hanging_vertices().size(), 2u);
  std::vector<std::pair<double, double>> hv;
  for (const auto& h : m.hanging_vertices()) hv.emplace_back(m.vertices()[h.vertex].x, m.vertices()[h.vertex].y);
  std::sort(hv.begin(), hv.end());
  EXPECT_EQ(hv[0], std::make_pair(0.0, 0.5));
  EXPECT_EQ(hv[1], std::make_pair(0.5, 0.0));
  EXPECT_EQ(check_invariants(m), "");
  for (int c : m.active_cells()) {
    if (m.cell(c).level == 1) EXPECT_EQ(m.cell(c).subdomain, Subdomain::Omega2);
  }
}

TEST(Mesh, UniformRefinementIsConforming) {
  const AdaptiveMesh m = refine_uniform(initial_mesh());
  EXPECT_EQ(m.n_active_cells(), 16u);
  EXPECT_TRUE(m.hanging_vertices().empty());
  EXPECT_DOUBLE_EQ(active_area(m), 4.0);
}

TEST(Mesh, EmptyFlagsKeepMesh) {
  const AdaptiveMesh m0 = initial_mesh();
  const AdaptiveMesh m = refine(m0, {});
  EXPECT_EQ(m.active_cells(), m0.active_cells());
  EXPECT_EQ(m.vertices().size(), m0.vertices().size());
}

TEST(Mesh, InactiveFlagThrows) {
  const AdaptiveMesh m0 = initial_mesh();
  const std::vector<int> flags{0};
  const AdaptiveMesh m = refine(m0, flags);
  EXPECT_THROW(refine(m, flags), Error);
}

TEST(Mesh, ClosureKeepsOneIrregularity) {
  AdaptiveMesh m = initial_mesh();
  for (int i = 0; i < 8; ++i) {
    const std::vector<int> flags{locate(m, {1e-3, 1e-3})};
    m = refine(m, flags);
    ASSERT_EQ(check_invariants(m), "") << "after " << i + 1 << " refinements";
  }
  EXPECT_DOUBLE_EQ(active_area(m), 4.0);
  // Cells far from the origin were refined by the closure.
  EXPECT_GT(m.n_active_cells(), 4u + 3u * 8u);
}

TEST(Mesh, RefinementIsDeterministic) {
  auto build = [] {
    AdaptiveMesh m = initial_mesh();
    for (int i = 0; i < 5; ++i) {
      const std::vector<int> flags{locate(m, {0.0, 0.5}), locate(m, {0.3, -0.7})};
      std::vector<int> sorted = flags;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      m = refine(m, sorted);
    }
    return m;
  };
  const AdaptiveMesh a = build();
  const AdaptiveMesh b = build();
  EXPECT_EQ(a.active_cells(), b.active_cells());
  EXPECT_EQ(a.vertex_keys(), b.vertex_keys());
}

TEST(Mesh, LocateTieBreakAndInterior) {
  const AdaptiveMesh m = initial_mesh();
  const std::vector<int> both = locate_all(m, {0.0, 0.5});
  ASSERT_EQ(both.size(), 2u);
  EXPECT_EQ(locate(m, {0.0, 0.5}), std::min(both[0], both[1]));
  EXPECT_EQ(m.cell(locate(m, {-0.5, -0.5})).subdomain, Subdomain::Omega4);
  EXPECT_THROW(locate(m, {1.5, 0.0}), Error);
}

TEST(Mesh, LocateAfterUniformRefinement) {
  const AdaptiveMesh m = refine_uniform(initial_mesh());
  const int c = locate(m, {0.25, 0.25});
  EXPECT_EQ(c, cell_at_origin(m, {0.0, 0.0}, 0.5));
  EXPECT_EQ(m.cell(c).subdomain, Subdomain::Omega2);
}

TEST(Mesh, SubdomainOfRejectsInterface) {
  EXPECT_EQ(subdomain_of({0.5, -0.5}), Subdomain::Omega3);
  EXPECT_THROW(subdomain_of({0.0, 0.3}), Error);
}

TEST(Mesh, ValenceOnInitialMesh) {
  const AdaptiveMesh m = initial_mesh();
  const std::vector<int> val = vertex_valence(m);
  const int origin = m.find_vertex({kUnitsPerLength, kUnitsPerLength});
  ASSERT_GE(origin, 0);
  EXPECT_EQ(val[static_cast<std::size_t>(origin)], 4);
}

TEST(Mesh, VtkOutput) {
  const AdaptiveMesh m = initial_mesh();
  std::ostringstream os;
  write_vtk(os, m);
  const std::string s = os.str();
  EXPECT_NE(s.find("# vtk DataFile Version"), std::string::npos);
  EXPECT_NE(s.find("POINTS 9"), std::string::npos);
  EXPECT_NE(s.find("CELLS 4 20"), std::string::npos);
  EXPECT_NE(s.find("CELL_TYPES 4\n9\n9\n9\n9"), std::string::npos);
  EXPECT_NE(s.find("CELL_DATA 4"), std::string::npos);
  EXPECT_NE(s.find("subdomain"), std::string::npos);
  EXPECT_NE(s.find("level"), std::string::npos);
}
