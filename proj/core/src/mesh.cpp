#include "cbdwr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace cbdwr {

namespace {

constexpr std::array<std::array<int, 2>, 4> kChildOffset = {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
// Probe directions: below, right, above, left.
constexpr std::array<std::array<int, 2>, 4> kNeighborDir = {{{0, -1}, {1, 0}, {0, 1}, {-1, 0}}};

std::uint64_t next_generation() {
  static std::uint64_t counter = 0;
  return ++counter;
}

bool inside_domain(NodeKey k) {
  return k.ix >= 0 && k.iy >= 0 && k.ix < kDomainUnits && k.iy < kDomainUnits;
}

bool closed_contains(const Cell& c, Point p) {
  const Point lo = c.lower_left();
  const double h = c.side();
  return p.x >= lo.x && p.x <= lo.x + h && p.y >= lo.y && p.y <= lo.y + h;
}

void collect_leaves(const AdaptiveMesh& mesh, int c, Point p, std::vector<int>& out) {
  const Cell& cell = mesh.cell(c);
  if (!closed_contains(cell, p)) return;
  if (cell.active) {
    out.push_back(c);
    return;
  }
  for (int child : cell.children) collect_leaves(mesh, child, p, out);
}

}  // namespace

std::string to_string(Subdomain s) {
  switch (s) {
    case Subdomain::Omega1: return "Omega1";
    case Subdomain::Omega2: return "Omega2";
    case Subdomain::Omega3: return "Omega3";
    case Subdomain::Omega4: return "Omega4";
  }
  return "?";
}

Point to_point(NodeKey k) {
  const double unit = 1.0 / static_cast<double>(kUnitsPerLength);
  return {-1.0 + static_cast<double>(k.ix) * unit, -1.0 + static_cast<double>(k.iy) * unit};
}

Point Cell::center() const {
  const Point lo = lower_left();
  const double h = side();
  return {lo.x + 0.5 * h, lo.y + 0.5 * h};
}

Subdomain subdomain_of(Point p) {
  if (p.x < 0.0 && p.y > 0.0) return Subdomain::Omega1;
  if (p.x > 0.0 && p.y > 0.0) return Subdomain::Omega2;
  if (p.x > 0.0 && p.y < 0.0) return Subdomain::Omega3;
  if (p.x < 0.0 && p.y < 0.0) return Subdomain::Omega4;
  std::ostringstream msg;
  msg << "point (" << p.x << ", " << p.y << ") lies on the subdomain interface";
  throw Error(msg.str());
}

int AdaptiveMesh::find_vertex(NodeKey key) const {
  const auto it = vertex_index_.find(key.packed());
  return it == vertex_index_.end() ? -1 : it->second;
}

int AdaptiveMesh::vertex_at(NodeKey key) {
  const auto [it, inserted] = vertex_index_.try_emplace(key.packed(), static_cast<int>(keys_.size()));
  if (inserted) {
    keys_.push_back(key);
    vertices_.push_back(to_point(key));
  }
  return it->second;
}

int AdaptiveMesh::add_cell(Cell cell) {
  const std::int64_t s = cell_units(cell.level);
  for (int k = 0; k < 4; ++k) {
    cell.vertices[static_cast<std::size_t>(k)] =
        vertex_at({cell.origin.ix + kChildOffset[static_cast<std::size_t>(k)][0] * s,
                   cell.origin.iy + kChildOffset[static_cast<std::size_t>(k)][1] * s});
  }
  cells_.push_back(cell);
  return static_cast<int>(cells_.size()) - 1;
}

int AdaptiveMesh::leaf_at(NodeKey key) const {
  if (!inside_domain(key)) throw Error("leaf_at: lattice point outside the domain");
  const bool right = key.ix >= kUnitsPerLength;
  const bool top = key.iy >= kUnitsPerLength;
  int c = top ? (right ? 1 : 0) : (right ? 2 : 3);
  while (!cells_[static_cast<std::size_t>(c)].active) {
    const Cell& cell = cells_[static_cast<std::size_t>(c)];
    const std::int64_t half = cell_units(cell.level + 1);
    const bool r = key.ix >= cell.origin.ix + half;
    const bool t = key.iy >= cell.origin.iy + half;
    c = cell.children[static_cast<std::size_t>(t ? (r ? 2 : 3) : (r ? 1 : 0))];
  }
  return c;
}

void AdaptiveMesh::split(int c) {
  const Cell parent = cells_[static_cast<std::size_t>(c)];
  if (parent.level + 1 > kMaxLevel) throw Error("refine: maximum refinement level exceeded");
  const std::int64_t s = cell_units(parent.level + 1);
  std::array<int, 4> kids{};
  for (std::size_t k = 0; k < 4; ++k) {
    Cell child;
    child.origin = {parent.origin.ix + kChildOffset[k][0] * s, parent.origin.iy + kChildOffset[k][1] * s};
    child.level = parent.level + 1;
    child.subdomain = parent.subdomain;
    child.parent = c;
    kids[k] = add_cell(child);
  }
  Cell& p = cells_[static_cast<std::size_t>(c)];
  p.children = kids;
  p.active = false;
}

void AdaptiveMesh::refine_with_closure(int c) {
  if (!cells_[static_cast<std::size_t>(c)].active) return;
  const int level = cells_[static_cast<std::size_t>(c)].level;
  const std::int64_t s = cell_units(level);
  for (const auto& dir : kNeighborDir) {
    const NodeKey origin = cells_[static_cast<std::size_t>(c)].origin;
    const NodeKey probe{origin.ix + s / 2 + dir[0] * s, origin.iy + s / 2 + dir[1] * s};
    if (!inside_domain(probe)) continue;
    for (int nb = leaf_at(probe); cells_[static_cast<std::size_t>(nb)].level < level; nb = leaf_at(probe)) {
      refine_with_closure(nb);
    }
  }
  split(c);
}

void AdaptiveMesh::finalize() {
  active_.clear();
  active_position_.assign(cells_.size(), -1);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (!cells_[c].active) continue;
    active_position_[c] = static_cast<int>(active_.size());
    active_.push_back(static_cast<int>(c));
  }
  hanging_.clear();
  for (int c : active_) {
    const Cell& cell = cells_[static_cast<std::size_t>(c)];
    for (std::size_t e = 0; e < 4; ++e) {
      const int a = cell.vertices[e];
      const int b = cell.vertices[(e + 1) % 4];
      const NodeKey ka = keys_[static_cast<std::size_t>(a)];
      const NodeKey kb = keys_[static_cast<std::size_t>(b)];
      const int mid = find_vertex({(ka.ix + kb.ix) / 2, (ka.iy + kb.iy) / 2});
      if (mid >= 0) hanging_.push_back({mid, {a, b}});
    }
  }
  std::sort(hanging_.begin(), hanging_.end(),
            [](const HangingVertex& l, const HangingVertex& r) { return l.vertex < r.vertex; });
  hanging_lookup_.assign(vertices_.size(), -1);
  for (std::size_t h = 0; h < hanging_.size(); ++h) {
    hanging_lookup_[static_cast<std::size_t>(hanging_[h].vertex)] = static_cast<int>(h);
  }
  generation_ = next_generation();
}

AdaptiveMesh initial_mesh() {
  AdaptiveMesh mesh;
  // Vertices of the 3x3 grid first so their ids are lexicographic.
  for (std::int64_t j = 0; j < 3; ++j) {
    for (std::int64_t i = 0; i < 3; ++i) mesh.vertex_at({i * kUnitsPerLength, j * kUnitsPerLength});
  }
  const std::array<std::pair<Subdomain, NodeKey>, 4> roots = {{
      {Subdomain::Omega1, {0, kUnitsPerLength}},
      {Subdomain::Omega2, {kUnitsPerLength, kUnitsPerLength}},
      {Subdomain::Omega3, {kUnitsPerLength, 0}},
      {Subdomain::Omega4, {0, 0}},
  }};
  for (const auto& [sub, origin] : roots) {
    Cell cell;
    cell.origin = origin;
    cell.level = 0;
    cell.subdomain = sub;
    mesh.add_cell(cell);
  }
  mesh.finalize();
  return mesh;
}

AdaptiveMesh refine(const AdaptiveMesh& mesh, std::span<const int> flags) {
  for (int c : flags) {
    if (c < 0 || static_cast<std::size_t>(c) >= mesh.cells_.size() || !mesh.cells_[static_cast<std::size_t>(c)].active) {
      throw Error("refine: flagged cell " + std::to_string(c) + " is not an active cell");
    }
  }
  AdaptiveMesh out = mesh;
  if (flags.empty()) return out;
  std::vector<int> sorted(flags.begin(), flags.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int c : sorted) out.refine_with_closure(c);
  out.finalize();
  return out;
}

AdaptiveMesh refine_uniform(const AdaptiveMesh& mesh) {
  return refine(mesh, mesh.active_cells());
}

std::vector<int> locate_all(const AdaptiveMesh& mesh, Point p) {
  if (!(p.x >= -1.0 && p.x <= 1.0 && p.y >= -1.0 && p.y <= 1.0)) {
    std::ostringstream msg;
    msg << "locate: point (" << p.x << ", " << p.y << ") outside the domain";
    throw Error(msg.str());
  }
  std::vector<int> out;
  for (int root = 0; root < 4; ++root) collect_leaves(mesh, root, p, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int locate(const AdaptiveMesh& mesh, Point p) {
  const auto candidates = locate_all(mesh, p);
  if (candidates.empty()) throw Error("locate: no active cell contains the point");
  return candidates.front();
}

std::string check_invariants(const AdaptiveMesh& mesh) {
  std::ostringstream err;
  double area = 0.0;
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    const Cell& cell = mesh.cells()[c];
    if (cell.active == cell.has_children()) {
      err << "cell " << c << ": active flag and children disagree\n";
    }
    if (!cell.active) continue;
    area += cell.side() * cell.side();
    const Point ctr = cell.center();
    if (subdomain_of(ctr) != cell.subdomain) err << "cell " << c << ": wrong subdomain tag\n";
    const std::int64_t s = cell_units(cell.level);
    for (const auto& dir : kNeighborDir) {
      const NodeKey probe{cell.origin.ix + s / 2 + dir[0] * s, cell.origin.iy + s / 2 + dir[1] * s};
      if (!inside_domain(probe)) continue;
      const int nb = mesh.leaf_at(probe);
      if (mesh.cell(nb).level < cell.level - 1) {
        err << "cells " << c << " and " << nb << " violate 1-irregularity\n";
      }
    }
  }
  if (std::abs(area - 4.0) > 1e-12) err << "active cells cover area " << area << " instead of 4\n";
  for (const HangingVertex& h : mesh.hanging_vertices()) {
    const NodeKey m = mesh.vertex_keys()[static_cast<std::size_t>(h.vertex)];
    const NodeKey a = mesh.vertex_keys()[static_cast<std::size_t>(h.parents[0])];
    const NodeKey b = mesh.vertex_keys()[static_cast<std::size_t>(h.parents[1])];
    if (2 * m.ix != a.ix + b.ix || 2 * m.iy != a.iy + b.iy) {
      err << "hanging vertex " << h.vertex << " is not the midpoint of its parent edge\n";
    }
  }
  return err.str();
}

std::vector<int> vertex_valence(const AdaptiveMesh& mesh) {
  std::vector<int> valence(mesh.vertices().size(), 0);
  for (int c : mesh.active_cells()) {
    for (int v : mesh.cell(c).vertices) ++valence[static_cast<std::size_t>(v)];
  }
  return valence;
}

void write_vtk(std::ostream& os, const AdaptiveMesh& mesh, std::span<const NamedData> point_data,
               std::span<const NamedData> cell_data) {
  const auto& active = mesh.active_cells();
  os << "# vtk DataFile Version 3.0\n"
     << "checkerboard adaptive mesh\n"
     << "ASCII\n"
     << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.vertices().size() << " double\n" << std::setprecision(17);
  for (const Point& p : mesh.vertices()) os << p.x << ' ' << p.y << " 0\n";
  os << "CELLS " << active.size() << ' ' << 5 * active.size() << '\n';
  for (int c : active) {
    const auto& v = mesh.cell(c).vertices;
    os << "4 " << v[0] << ' ' << v[1] << ' ' << v[2] << ' ' << v[3] << '\n';
  }
  os << "CELL_TYPES " << active.size() << '\n';
  for (std::size_t i = 0; i < active.size(); ++i) os << "9\n";

  os << "CELL_DATA " << active.size() << '\n';
  os << "SCALARS subdomain int 1\nLOOKUP_TABLE default\n";
  for (int c : active) os << index_of(mesh.cell(c).subdomain) + 1 << '\n';
  os << "SCALARS level int 1\nLOOKUP_TABLE default\n";
  for (int c : active) os << mesh.cell(c).level << '\n';
  for (const NamedData& d : cell_data) {
    if (d.values.size() != active.size()) throw Error("write_vtk: cell data '" + d.name + "' has wrong size");
    os << "SCALARS " << d.name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : d.values) os << v << '\n';
  }
  if (!point_data.empty()) {
    os << "POINT_DATA " << mesh.vertices().size() << '\n';
    for (const NamedData& d : point_data) {
      if (d.values.size() != mesh.vertices().size()) {
        throw Error("write_vtk: point data '" + d.name + "' has wrong size");
      }
      os << "SCALARS " << d.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : d.values) os << v << '\n';
    }
  }
}

}  // namespace cbdwr
