#include "cbdwr/space.hpp"

#include <algorithm>
#include <unordered_map>

namespace cbdwr {

namespace {

// Lattice offsets of the local nodes in units of (cell side / degree).
constexpr std::array<std::array<int, 2>, 4> kQ1Nodes = {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
constexpr std::array<std::array<int, 2>, 9> kQ2Nodes = {
    {{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 0}, {2, 1}, {1, 2}, {0, 1}, {1, 1}}};

std::array<int, 2> node_offset(int degree, int local) {
  return degree == 1 ? kQ1Nodes[static_cast<std::size_t>(local)] : kQ2Nodes[static_cast<std::size_t>(local)];
}

// 1D Lagrange bases on {0,1} and {0,1/2,1}.
double lagrange(int degree, int i, double t) {
  if (degree == 1) return i == 0 ? 1.0 - t : t;
  switch (i) {
    case 0: return (2.0 * t - 1.0) * (t - 1.0);
    case 1: return 4.0 * t * (1.0 - t);
    default: return t * (2.0 * t - 1.0);
  }
}

double lagrange_derivative(int degree, int i, double t) {
  if (degree == 1) return i == 0 ? -1.0 : 1.0;
  switch (i) {
    case 0: return 4.0 * t - 3.0;
    case 1: return 4.0 - 8.0 * t;
    default: return 4.0 * t - 1.0;
  }
}

void check_degree(int degree) {
  if (degree != 1 && degree != 2) throw Error("unsupported element degree " + std::to_string(degree));
}

std::vector<MasterWeight> merge(std::vector<MasterWeight> in) {
  std::sort(in.begin(), in.end(), [](const MasterWeight& a, const MasterWeight& b) { return a.dof < b.dof; });
  std::vector<MasterWeight> out;
  for (const MasterWeight& m : in) {
    if (!out.empty() && out.back().dof == m.dof) {
      out.back().weight += m.weight;
    } else {
      out.push_back(m);
    }
  }
  return out;
}

Point reference_coords(const Cell& cell, Point p) {
  const Point lo = cell.lower_left();
  const double h = cell.side();
  return {(p.x - lo.x) / h, (p.y - lo.y) / h};
}

}  // namespace

int nodes_per_cell(int degree) {
  check_degree(degree);
  return degree == 1 ? 4 : 9;
}

Point reference_node(int degree, int local) {
  const auto off = node_offset(degree, local);
  return {off[0] / static_cast<double>(degree), off[1] / static_cast<double>(degree)};
}

void shape_values(int degree, Point ref, std::span<double> out) {
  const int n = nodes_per_cell(degree);
  for (int k = 0; k < n; ++k) {
    const auto off = node_offset(degree, k);
    out[static_cast<std::size_t>(k)] = lagrange(degree, off[0], ref.x) * lagrange(degree, off[1], ref.y);
  }
}

void shape_gradients(int degree, Point ref, std::span<std::array<double, 2>> out) {
  const int n = nodes_per_cell(degree);
  for (int k = 0; k < n; ++k) {
    const auto off = node_offset(degree, k);
    out[static_cast<std::size_t>(k)] = {
        lagrange_derivative(degree, off[0], ref.x) * lagrange(degree, off[1], ref.y),
        lagrange(degree, off[0], ref.x) * lagrange_derivative(degree, off[1], ref.y)};
  }
}

// ---------------------------------------------------------------------------

ConstraintSet ConstraintSet::build(const std::vector<bool>& boundary,
                                   const std::vector<std::vector<MasterWeight>>& raw_hanging) {
  const std::size_t n = boundary.size();
  ConstraintSet cs;
  cs.kind_.assign(n, Kind::Free);
  for (std::size_t i = 0; i < n; ++i) {
    if (boundary[i]) {
      cs.kind_[i] = Kind::Dirichlet;
    } else if (!raw_hanging[i].empty()) {
      cs.kind_[i] = Kind::Hanging;
    }
  }

  // Resolve chains of hanging masters by substitution (depth is tiny).
  std::vector<std::vector<MasterWeight>> resolved(n);
  std::vector<bool> done(n, false);
  std::function<const std::vector<MasterWeight>&(std::size_t)> resolve = [&](std::size_t i) -> const std::vector<MasterWeight>& {
    if (done[i]) return resolved[i];
    std::vector<MasterWeight> acc;
    for (const MasterWeight& m : raw_hanging[i]) {
      const auto mi = static_cast<std::size_t>(m.dof);
      if (cs.kind_[mi] == Kind::Hanging) {
        for (const MasterWeight& mm : resolve(mi)) acc.push_back({mm.dof, m.weight * mm.weight});
      } else {
        acc.push_back(m);
      }
    }
    resolved[i] = merge(std::move(acc));
    done[i] = true;
    return resolved[i];
  };

  cs.offsets_.assign(n + 1, 0);
  cs.hanging_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    switch (cs.kind_[i]) {
      case Kind::Free:
        cs.expansion_.push_back({static_cast<int>(i), 1.0});
        break;
      case Kind::Dirichlet:
        ++cs.n_constrained_;
        break;
      case Kind::Hanging:
        ++cs.n_constrained_;
        for (const MasterWeight& m : resolve(i)) {
          cs.hanging_.push_back(m);
          if (!boundary[static_cast<std::size_t>(m.dof)]) cs.expansion_.push_back(m);
        }
        break;
    }
    cs.offsets_[i + 1] = cs.expansion_.size();
    cs.hanging_offsets_[i + 1] = cs.hanging_.size();
  }
  return cs;
}

void ConstraintSet::distribute(Vector& v) const {
  for (std::size_t i = 0; i < kind_.size(); ++i) {
    if (kind_[i] == Kind::Free) continue;
    double s = 0.0;
    for (const MasterWeight& m : expansion(static_cast<int>(i))) s += m.weight * v[m.dof];
    v[static_cast<Eigen::Index>(i)] = s;
  }
}

void ConstraintSet::distribute_hanging(Vector& v) const {
  for (std::size_t i = 0; i < kind_.size(); ++i) {
    if (kind_[i] != Kind::Hanging) continue;
    double s = 0.0;
    for (const MasterWeight& m : hanging_masters(static_cast<int>(i))) s += m.weight * v[m.dof];
    v[static_cast<Eigen::Index>(i)] = s;
  }
}

void ConstraintSet::zero_constrained(Vector& v) const {
  for (std::size_t i = 0; i < kind_.size(); ++i) {
    if (kind_[i] != Kind::Free) v[static_cast<Eigen::Index>(i)] = 0.0;
  }
}

// ---------------------------------------------------------------------------

int FunctionSpace::find_dof(NodeKey key) const {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return -1;
  return static_cast<int>(it - keys_.begin());
}

bool FunctionSpace::same_mesh(const FunctionSpace& other) const {
  return mesh_ == other.mesh_ || mesh_->generation() == other.mesh_->generation();
}

const SparseMatrix& FunctionSpace::sparsity() const {
  std::call_once(pattern_once_, [this] {
    const std::size_t n = n_dofs();
    std::vector<std::vector<int>> rows(n);
    std::vector<int> expanded;
    for (std::size_t a = 0; a < mesh_->n_active_cells(); ++a) {
      expanded.clear();
      for (int d : cell_dofs(a)) {
        for (const MasterWeight& m : constraints_.expansion(d)) expanded.push_back(m.dof);
      }
      std::sort(expanded.begin(), expanded.end());
      expanded.erase(std::unique(expanded.begin(), expanded.end()), expanded.end());
      for (int r : expanded) {
        auto& row = rows[static_cast<std::size_t>(r)];
        row.insert(row.end(), expanded.begin(), expanded.end());
      }
    }
    std::vector<int> outer(n + 1, 0);
    std::vector<int> inner;
    for (std::size_t i = 0; i < n; ++i) {
      auto& row = rows[i];
      if (constraints_.is_constrained(static_cast<int>(i))) row.push_back(static_cast<int>(i));
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
      inner.insert(inner.end(), row.begin(), row.end());
      outer[i + 1] = static_cast<int>(inner.size());
      std::vector<int>().swap(row);
    }
    std::vector<double> values(inner.size(), 0.0);
    const auto nn = static_cast<Eigen::Index>(n);
    pattern_ = Eigen::Map<const SparseMatrix>(nn, nn, static_cast<Eigen::Index>(inner.size()), outer.data(),
                                              inner.data(), values.data());
  });
  return pattern_;
}

SpacePtr build_space(std::shared_ptr<const AdaptiveMesh> mesh, int degree) {
  check_degree(degree);
  if (!mesh) throw Error("build_space: null mesh");
  auto fs = std::make_shared<FunctionSpace>();
  fs->mesh_ = mesh;
  fs->degree_ = degree;
  const int npc = nodes_per_cell(degree);
  const auto& active = mesh->active_cells();

  auto local_key = [&](const Cell& cell, int k) {
    const std::int64_t step = cell_units(cell.level) / degree;
    const auto off = node_offset(degree, k);
    return NodeKey{cell.origin.ix + off[0] * step, cell.origin.iy + off[1] * step};
  };

  fs->keys_.reserve(active.size() * static_cast<std::size_t>(degree * degree) + 16);
  for (int c : active) {
    for (int k = 0; k < npc; ++k) fs->keys_.push_back(local_key(mesh->cell(c), k));
  }
  std::sort(fs->keys_.begin(), fs->keys_.end());
  fs->keys_.erase(std::unique(fs->keys_.begin(), fs->keys_.end()), fs->keys_.end());
  fs->keys_.shrink_to_fit();

  const std::size_t n = fs->keys_.size();
  fs->coords_.resize(n);
  fs->boundary_.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeKey k = fs->keys_[i];
    fs->coords_[i] = to_point(k);
    fs->boundary_[i] = k.ix == 0 || k.iy == 0 || k.ix == kDomainUnits || k.iy == kDomainUnits;
  }

  fs->cell_dofs_.resize(active.size() * static_cast<std::size_t>(npc));
  for (std::size_t a = 0; a < active.size(); ++a) {
    const Cell& cell = mesh->cell(active[a]);
    for (int k = 0; k < npc; ++k) {
      fs->cell_dofs_[a * static_cast<std::size_t>(npc) + static_cast<std::size_t>(k)] = fs->find_dof(local_key(cell, k));
    }
  }

  std::vector<std::vector<MasterWeight>> raw(n);
  const auto& vkeys = mesh->vertex_keys();
  for (const HangingVertex& h : mesh->hanging_vertices()) {
    const NodeKey km = vkeys[static_cast<std::size_t>(h.vertex)];
    const NodeKey ka = vkeys[static_cast<std::size_t>(h.parents[0])];
    const NodeKey kb = vkeys[static_cast<std::size_t>(h.parents[1])];
    const int dm = fs->find_dof(km);
    const int da = fs->find_dof(ka);
    const int db = fs->find_dof(kb);
    if (degree == 1) {
      raw[static_cast<std::size_t>(dm)] = {{da, 0.5}, {db, 0.5}};
    } else {
      // The coarse edge's quadratic trace has nodes a, m, b; the fine side
      // adds the quarter points, which are interpolated from it.
      const int dq1 = fs->find_dof({(ka.ix + km.ix) / 2, (ka.iy + km.iy) / 2});
      const int dq3 = fs->find_dof({(km.ix + kb.ix) / 2, (km.iy + kb.iy) / 2});
      raw[static_cast<std::size_t>(dq1)] = {{da, 0.375}, {dm, 0.75}, {db, -0.125}};
      raw[static_cast<std::size_t>(dq3)] = {{da, -0.125}, {dm, 0.75}, {db, 0.375}};
    }
  }
  fs->constraints_ = ConstraintSet::build(fs->boundary_, raw);
  return fs;
}

// ---------------------------------------------------------------------------

DiscreteField zero_field(SpacePtr space) {
  const auto n = static_cast<Eigen::Index>(space->n_dofs());
  return {std::move(space), Vector::Zero(n)};
}

DiscreteField interpolate(SpacePtr space, const std::function<double(Point)>& g) {
  DiscreteField f = zero_field(space);
  for (std::size_t i = 0; i < space->n_dofs(); ++i) f.values[static_cast<Eigen::Index>(i)] = g(space->dof_coords()[i]);
  space->constraints().distribute_hanging(f.values);
  return f;
}

double evaluate_on_cell(const DiscreteField& field, int cell, Point p) {
  const FunctionSpace& fs = field.fs();
  const int pos = fs.mesh().active_index(cell);
  if (pos < 0) throw Error("evaluate_on_cell: inactive cell");
  std::array<double, 9> phi{};
  const int npc = fs.dofs_per_cell();
  shape_values(fs.degree(), reference_coords(fs.mesh().cell(cell), p), std::span(phi.data(), static_cast<std::size_t>(npc)));
  const auto dofs = fs.cell_dofs(static_cast<std::size_t>(pos));
  double v = 0.0;
  for (int k = 0; k < npc; ++k) v += phi[static_cast<std::size_t>(k)] * field.values[dofs[static_cast<std::size_t>(k)]];
  return v;
}

double evaluate(const DiscreteField& field, Point p) {
  return evaluate_on_cell(field, locate(field.fs().mesh(), p), p);
}

std::array<double, 2> evaluate_gradient(const DiscreteField& field, Point p) {
  const FunctionSpace& fs = field.fs();
  const int cell = locate(fs.mesh(), p);
  const Cell& c = fs.mesh().cell(cell);
  std::array<std::array<double, 2>, 9> grad{};
  const int npc = fs.dofs_per_cell();
  shape_gradients(fs.degree(), reference_coords(c, p), std::span(grad.data(), static_cast<std::size_t>(npc)));
  const auto dofs = fs.cell_dofs(static_cast<std::size_t>(fs.mesh().active_index(cell)));
  std::array<double, 2> g{0.0, 0.0};
  for (int k = 0; k < npc; ++k) {
    const double u = field.values[dofs[static_cast<std::size_t>(k)]];
    g[0] += grad[static_cast<std::size_t>(k)][0] * u;
    g[1] += grad[static_cast<std::size_t>(k)][1] * u;
  }
  const double h = c.side();
  return {g[0] / h, g[1] / h};
}

DiscreteField embed_q1_in_q2(const DiscreteField& q1, SpacePtr q2) {
  if (q1.fs().degree() != 1 || q2->degree() != 2) throw Error("embed_q1_in_q2: expected a Q1 field and a Q2 space");
  if (!q1.fs().same_mesh(*q2)) throw Error("embed_q1_in_q2: spaces live on different meshes");
  DiscreteField out = zero_field(q2);
  std::array<double, 4> phi{};
  for (std::size_t a = 0; a < q2->mesh().n_active_cells(); ++a) {
    const auto d1 = q1.fs().cell_dofs(a);
    const auto d2 = q2->cell_dofs(a);
    for (int k = 0; k < 9; ++k) {
      shape_values(1, reference_node(2, k), phi);
      double v = 0.0;
      for (std::size_t j = 0; j < 4; ++j) v += phi[j] * q1.values[d1[j]];
      out.values[d2[static_cast<std::size_t>(k)]] = v;
    }
  }
  return out;
}

DiscreteField transfer(const DiscreteField& from, SpacePtr to) {
  DiscreteField out = zero_field(to);
  const AdaptiveMesh& src = from.fs().mesh();
  for (std::size_t i = 0; i < to->n_dofs(); ++i) {
    const Point p = to->dof_coords()[i];
    out.values[static_cast<Eigen::Index>(i)] = evaluate_on_cell(from, locate(src, p), p);
  }
  to->constraints().distribute(out.values);
  return out;
}

std::vector<double> vertex_values(const DiscreteField& field) {
  const auto& keys = field.fs().mesh().vertex_keys();
  std::vector<double> out(keys.size(), 0.0);
  for (std::size_t v = 0; v < keys.size(); ++v) {
    const int d = field.fs().find_dof(keys[v]);
    if (d >= 0) out[v] = field.values[d];
  }
  return out;
}

double free_dot(const ConstraintSet& constraints, const Vector& a, const Vector& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!constraints.is_constrained(static_cast<int>(i))) s += a[i] * b[i];
  }
  return s;
}

}  // namespace cbdwr
