#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cbdwr/error.hpp"

namespace cbdwr {

/// The four quadrants of the checkerboard. Omega1 is the upper-left quadrant,
/// numbering proceeds clockwise: Omega2 upper-right, Omega3 lower-right,
/// Omega4 lower-left.
enum class Subdomain : std::uint8_t { Omega1 = 0, Omega2 = 1, Omega3 = 2, Omega4 = 3 };

constexpr int index_of(Subdomain s) { return static_cast<int>(s); }
std::string to_string(Subdomain s);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Refinement depth below which cells are not split. Keeps every Q2 node of
/// the finest cells on the integer lattice.
inline constexpr int kMaxLevel = 26;

/// Integer lattice coordinate. One unit is 2^-(kMaxLevel+1) domain lengths,
/// so all vertices, edge midpoints and cell centers of admissible cells are
/// represented exactly. (0,0) is the corner (-1,-1).
struct NodeKey {
  std::int64_t ix = 0;
  std::int64_t iy = 0;

  friend auto operator<=>(const NodeKey&, const NodeKey&) = default;
  std::uint64_t packed() const {
    return (static_cast<std::uint64_t>(ix) << 32) | static_cast<std::uint64_t>(iy);
  }
};

inline constexpr std::int64_t kUnitsPerLength = std::int64_t{1} << (kMaxLevel + 1);
inline constexpr std::int64_t kDomainUnits = 2 * kUnitsPerLength;

Point to_point(NodeKey k);

/// Side length of a level-l cell in lattice units.
constexpr std::int64_t cell_units(int level) { return kUnitsPerLength >> level; }

struct Cell {
  std::array<int, 4> vertices{};  ///< counterclockwise from lower-left
  NodeKey origin;                 ///< lower-left corner
  int level = 0;
  Subdomain subdomain = Subdomain::Omega1;
  int parent = -1;
  std::array<int, 4> children{-1, -1, -1, -1};  ///< counterclockwise from lower-left
  bool active = true;

  bool has_children() const { return children[0] >= 0; }
  double side() const { return 1.0 / static_cast<double>(std::int64_t{1} << level); }
  Point center() const;
  Point lower_left() const { return to_point(origin); }
};

/// A vertex sitting in the middle of an edge of a coarser active cell.
struct HangingVertex {
  int vertex = -1;
  std::array<int, 2> parents{};  ///< endpoints of the coarse edge
};

/// Quadtree mesh of (-1,1)^2 whose root cells are the four subdomains.
/// Refinement keeps the active cells 1-irregular across edges.
class AdaptiveMesh {
public:
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<NodeKey>& vertex_keys() const { return keys_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(int c) const { return cells_.at(static_cast<std::size_t>(c)); }

  /// Indices of active cells in ascending order.
  const std::vector<int>& active_cells() const { return active_; }
  /// Position of cell c in active_cells(), or -1 when inactive.
  int active_index(int c) const { return active_position_[static_cast<std::size_t>(c)]; }
  std::size_t n_active_cells() const { return active_.size(); }

  const std::vector<HangingVertex>& hanging_vertices() const { return hanging_; }
  /// Index into hanging_vertices(), or -1.
  int hanging_index(int vertex) const { return hanging_lookup_[static_cast<std::size_t>(vertex)]; }

  /// Vertex id at a lattice key, or -1.
  int find_vertex(NodeKey key) const;

  /// Active cell whose half-open box contains the lattice point.
  int leaf_at(NodeKey key) const;

  /// Unique counter bumped on every mutation; spaces record it to detect
  /// mismatched meshes.
  std::uint64_t generation() const { return generation_; }

  friend AdaptiveMesh initial_mesh();
  friend AdaptiveMesh refine(const AdaptiveMesh& mesh, std::span<const int> flags);

private:
  int vertex_at(NodeKey key);
  int add_cell(Cell cell);
  void split(int c);
  void refine_with_closure(int c);
  void finalize();

  std::vector<Point> vertices_;
  std::vector<NodeKey> keys_;
  std::unordered_map<std::uint64_t, int> vertex_index_;
  std::vector<Cell> cells_;
  std::vector<int> active_;
  std::vector<int> active_position_;
  std::vector<HangingVertex> hanging_;
  std::vector<int> hanging_lookup_;
  std::uint64_t generation_ = 0;
};

/// 3x3 vertices, one unit cell per subdomain.
AdaptiveMesh initial_mesh();

/// Splits every flagged active cell into four and closes the result so the
/// mesh stays 1-irregular. Throws Error when a flag names an inactive cell.
AdaptiveMesh refine(const AdaptiveMesh& mesh, std::span<const int> flags);

/// Refines every active cell once.
AdaptiveMesh refine_uniform(const AdaptiveMesh& mesh);

/// Active cell whose closure contains p; the lowest cell index wins ties.
/// Throws Error when p lies outside the closed domain.
int locate(const AdaptiveMesh& mesh, Point p);

/// All active cells whose closure contains p, ascending.
std::vector<int> locate_all(const AdaptiveMesh& mesh, Point p);

/// Subdomain of a point strictly inside one quadrant. Throws on the
/// interface lines.
Subdomain subdomain_of(Point p);

/// Empty string when the mesh satisfies 1-irregularity, tiling and the
/// hanging-vertex midpoint property; otherwise a diagnostic.
std::string check_invariants(const AdaptiveMesh& mesh);

/// Number of active cells having the vertex as one of their corners.
std::vector<int> vertex_valence(const AdaptiveMesh& mesh);

struct NamedData {
  std::string name;
  std::span<const double> values;
};

/// Legacy ASCII VTK unstructured grid: active cells as VTK_QUAD (type 9)
/// with subdomain and level cell data, plus optional extra point/cell data.
void write_vtk(std::ostream& os, const AdaptiveMesh& mesh,
               std::span<const NamedData> point_data = {},
               std::span<const NamedData> cell_data = {});

}  // namespace cbdwr
