#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "cbdwr/mesh.hpp"

namespace cbdwr {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

// ---------------------------------------------------------------------------
// Reference element
//
// Q1 nodes: the corners (0,0),(1,0),(1,1),(0,1).
// Q2 nodes: the Q1 corners, then the midpoints of the bottom, right, top and
// left edges, then the center.

int nodes_per_cell(int degree);
Point reference_node(int degree, int local);

/// Shape function values at a reference point; out.size() == nodes_per_cell.
void shape_values(int degree, Point ref, std::span<double> out);
/// Reference-coordinate gradients.
void shape_gradients(int degree, Point ref, std::span<std::array<double, 2>> out);

// ---------------------------------------------------------------------------

struct MasterWeight {
  int dof = -1;
  double weight = 0.0;
};

/// Homogeneous Dirichlet and hanging-node constraints of a space.
///
/// Every dof has an expansion into free dofs: a free dof expands to itself,
/// a Dirichlet dof to nothing, a hanging dof to its (chain-resolved) free
/// masters. Assembly scatters through the expansion, which condenses
/// constrained rows and columns onto their masters.
class ConstraintSet {
public:
  bool is_constrained(int dof) const { return kind_[idx(dof)] != Kind::Free; }
  bool is_dirichlet(int dof) const { return kind_[idx(dof)] == Kind::Dirichlet; }
  bool is_hanging(int dof) const { return kind_[idx(dof)] == Kind::Hanging; }

  /// Free masters of a dof (a free dof maps to itself with weight 1).
  std::span<const MasterWeight> expansion(int dof) const {
    return {expansion_.data() + offsets_[idx(dof)], expansion_.data() + offsets_[idx(dof) + 1]};
  }
  /// Hanging masters before dropping Dirichlet dofs; empty for non-hanging dofs.
  std::span<const MasterWeight> hanging_masters(int dof) const {
    return {hanging_.data() + hanging_offsets_[idx(dof)], hanging_.data() + hanging_offsets_[idx(dof) + 1]};
  }

  std::size_t size() const { return kind_.size(); }
  std::size_t n_constrained() const { return n_constrained_; }

  /// Overwrites constrained entries with their master combination (Dirichlet -> 0).
  void distribute(Vector& v) const;
  /// Overwrites hanging entries only; boundary values are kept.
  void distribute_hanging(Vector& v) const;
  /// Zeroes constrained entries.
  void zero_constrained(Vector& v) const;

  /// Builds from per-dof boundary flags and raw hanging constraints whose
  /// masters may themselves be hanging; chains are resolved here.
  static ConstraintSet build(const std::vector<bool>& boundary,
                             const std::vector<std::vector<MasterWeight>>& raw_hanging);

private:
  enum class Kind : std::uint8_t { Free, Dirichlet, Hanging };
  static std::size_t idx(int dof) { return static_cast<std::size_t>(dof); }

  std::vector<Kind> kind_;
  std::vector<std::size_t> offsets_;
  std::vector<MasterWeight> expansion_;
  std::vector<std::size_t> hanging_offsets_;
  std::vector<MasterWeight> hanging_;
  std::size_t n_constrained_ = 0;
};

/// Continuous nodal Q1 or Q2 space on an AdaptiveMesh. Dofs are numbered
/// lexicographically by lattice key. Immutable once built.
class FunctionSpace {
public:
  const AdaptiveMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const AdaptiveMesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int dofs_per_cell() const { return nodes_per_cell(degree_); }
  std::size_t n_dofs() const { return keys_.size(); }
  std::size_t n_free() const { return n_dofs() - constraints_.n_constrained(); }

  const std::vector<NodeKey>& dof_keys() const { return keys_; }
  const std::vector<Point>& dof_coords() const { return coords_; }
  const ConstraintSet& constraints() const { return constraints_; }
  bool on_boundary(int dof) const { return boundary_[static_cast<std::size_t>(dof)]; }

  /// Global dofs of the i-th active cell (local node order of the reference element).
  std::span<const int> cell_dofs(std::size_t active_position) const {
    const auto n = static_cast<std::size_t>(dofs_per_cell());
    return {cell_dofs_.data() + active_position * n, n};
  }

  /// Dof at a lattice key, or -1.
  int find_dof(NodeKey key) const;

  /// True when both spaces live on the same mesh object state.
  bool same_mesh(const FunctionSpace& other) const;

  /// Condensed sparsity pattern (values zero) including unit diagonals for
  /// constrained dofs. Built once on first use.
  const SparseMatrix& sparsity() const;

  friend std::shared_ptr<const FunctionSpace> build_space(std::shared_ptr<const AdaptiveMesh> mesh, int degree);

private:
  std::shared_ptr<const AdaptiveMesh> mesh_;
  int degree_ = 1;
  std::vector<NodeKey> keys_;
  std::vector<Point> coords_;
  std::vector<int> cell_dofs_;
  std::vector<bool> boundary_;
  ConstraintSet constraints_;
  mutable std::once_flag pattern_once_;
  mutable SparseMatrix pattern_;
};

using SpacePtr = std::shared_ptr<const FunctionSpace>;

/// Throws Error unless degree is 1 or 2.
SpacePtr build_space(std::shared_ptr<const AdaptiveMesh> mesh, int degree);

/// Coefficient vector over a space.
struct DiscreteField {
  SpacePtr space;
  Vector values;

  const FunctionSpace& fs() const { return *space; }
};

DiscreteField zero_field(SpacePtr space);

/// Nodal interpolant. Hanging dofs are made conforming; boundary dofs keep
/// the function values (no Dirichlet projection).
DiscreteField interpolate(SpacePtr space, const std::function<double(Point)>& g);

/// Value at a point, evaluated on the cell chosen by locate().
double evaluate(const DiscreteField& field, Point p);
std::array<double, 2> evaluate_gradient(const DiscreteField& field, Point p);
/// Value evaluated on a specific active cell (closure).
double evaluate_on_cell(const DiscreteField& field, int cell, Point p);

/// The same function represented in the Q2 space of the same mesh.
DiscreteField embed_q1_in_q2(const DiscreteField& q1, SpacePtr q2);

/// Interpolates a field from another (coarser) mesh into a space and
/// applies the target constraints. Used for warm starts after refinement.
DiscreteField transfer(const DiscreteField& from, SpacePtr to);

/// Nodal values at the mesh vertices (for VTK output).
std::vector<double> vertex_values(const DiscreteField& field);

/// Dot product over free dofs only.
double free_dot(const ConstraintSet& constraints, const Vector& a, const Vector& b);

}  // namespace cbdwr
