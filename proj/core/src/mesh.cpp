#include "vemeig/mesh.hpp"

#include "vemeig/errors.hpp"
#include "vemeig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>

namespace vemeig {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kAreaTol = 1e-12;

bool on_unit_boundary(const Eigen::Vector2d& p) {
  return std::abs(p.x()) <= kBoundaryTol || std::abs(p.x() - 1.0) <= kBoundaryTol ||
         std::abs(p.y()) <= kBoundaryTol || std::abs(p.y() - 1.0) <= kBoundaryTol;
}

} // namespace

PolygonalMesh PolygonalMesh::from_raw(std::vector<Eigen::Vector2d> vertices,
                                      std::vector<std::vector<int>> cells) {
  PolygonalMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.cells_ = std::move(cells);

  const int nv = mesh.num_vertices();
  const int nc = mesh.num_cells();
  if (nv < 3 || nc < 1) throw MeshError("mesh: too few vertices or cells");

  for (const Eigen::Vector2d& p : mesh.vertices_) {
    if (p.x() < -kBoundaryTol || p.x() > 1.0 + kBoundaryTol || p.y() < -kBoundaryTol ||
        p.y() > 1.0 + kBoundaryTol) {
      throw MeshError("mesh: vertex outside the unit square");
    }
  }

  long double area_sum = 0.0;
  double h_max = 0.0;
  for (int c = 0; c < nc; ++c) {
    const std::vector<int>& cell = mesh.cells_[c];
    if (cell.size() < 3) throw MeshError("mesh: cell " + std::to_string(c) + " has fewer than 3 vertices");
    std::set<int> seen;
    for (int v : cell) {
      if (v < 0 || v >= nv)
        throw MeshError("mesh: cell " + std::to_string(c) + " references invalid vertex " + std::to_string(v));
      if (!seen.insert(v).second)
        throw MeshError("mesh: cell " + std::to_string(c) + " repeats vertex " + std::to_string(v));
    }
    std::vector<Eigen::Vector2d> poly = mesh.cell_polygon(c);
    const double signed_area = polygon_signed_area(poly);
    if (signed_area <= 0.0)
      throw MeshError("mesh: cell " + std::to_string(c) + " is clockwise or has non-positive area");
    ElementGeometry geom;
    try {
      geom = element_geometry(poly);
    } catch (const GeometryError& err) {
      throw MeshError("mesh: cell " + std::to_string(c) + ": " + err.what());
    }
    area_sum += geom.area;
    h_max = std::max(h_max, geom.diameter);
  }
  if (std::abs(static_cast<double>(area_sum) - 1.0) > kAreaTol)
    throw MeshError("mesh: cell areas sum to " + std::to_string(static_cast<double>(area_sum)) +
                    ", not 1");
  mesh.h_max_ = h_max;

  // Edge table from cell boundaries; conformity means every edge appears in
  // exactly one or two cells, with opposite orientations.
  for (int c = 0; c < nc; ++c) {
    const std::vector<int>& cell = mesh.cells_[c];
    const int n = static_cast<int>(cell.size());
    for (int i = 0; i < n; ++i) {
      const int a = cell[i];
      const int b = cell[(i + 1) % n];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = mesh.edge_lookup_.find(key);
      if (it == mesh.edge_lookup_.end()) {
        MeshEdge edge;
        edge.v0 = key.first;
        edge.v1 = key.second;
        edge.cell_left = c;
        mesh.edge_lookup_.emplace(key, static_cast<int>(mesh.edges_.size()));
        mesh.edges_.push_back(edge);
      } else {
        MeshEdge& edge = mesh.edges_[it->second];
        if (edge.cell_right >= 0)
          throw MeshError("mesh: edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") shared by more than two cells");
        edge.cell_right = c;
      }
    }
  }

  const int ne = mesh.num_edges();
  if (nv - ne + nc != 1)
    throw MeshError("mesh: Euler relation violated: V-E+C = " +
                    std::to_string(nv - ne + nc));

  mesh.boundary_vertex_.assign(nv, false);
  for (int v = 0; v < nv; ++v) mesh.boundary_vertex_[v] = on_unit_boundary(mesh.vertices_[v]);
  for (const MeshEdge& edge : mesh.edges_) {
    if (edge.boundary() &&
        (!mesh.boundary_vertex_[edge.v0] || !mesh.boundary_vertex_[edge.v1])) {
      throw MeshError("mesh: boundary edge (" + std::to_string(edge.v0) + "," +
                      std::to_string(edge.v1) + ") has an interior endpoint");
    }
  }

  return mesh;
}

std::vector<Eigen::Vector2d> PolygonalMesh::cell_polygon(int cell) const {
  const std::vector<int>& ids = cells_[cell];
  std::vector<Eigen::Vector2d> poly(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) poly[i] = vertices_[ids[i]];
  return poly;
}

int PolygonalMesh::find_edge(int a, int b) const {
  auto it = edge_lookup_.find({std::min(a, b), std::max(a, b)});
  return it == edge_lookup_.end() ? -1 : it->second;
}

std::string family_name(MeshFamilyKind kind) {
  switch (kind) {
    case MeshFamilyKind::Triangle: return "triangle";
    case MeshFamilyKind::Square: return "square";
    case MeshFamilyKind::Voronoi: return "voronoi";
    case MeshFamilyKind::Hexagon: return "hexagon";
    case MeshFamilyKind::Dyadic: return "dyadic";
  }
  return "unknown";
}

MeshFamilyKind family_from_name(const std::string& name) {
  if (name == "triangle" || name == "T") return MeshFamilyKind::Triangle;
  if (name == "square" || name == "S") return MeshFamilyKind::Square;
  if (name == "voronoi" || name == "V") return MeshFamilyKind::Voronoi;
  if (name == "hexagon" || name == "H") return MeshFamilyKind::Hexagon;
  if (name == "dyadic" || name == "D") return MeshFamilyKind::Dyadic;
  throw ParameterError("unknown mesh family '" + name + "'");
}

MeshStats mesh_stats(const PolygonalMesh& mesh) {
  MeshStats stats;
  stats.h_max = mesh.h_max();
  stats.min_edge_to_h = std::numeric_limits<double>::infinity();
  stats.min_area = std::numeric_limits<double>::infinity();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const ElementGeometry geom = element_geometry(mesh.cell_polygon(c));
    stats.min_area = std::min(stats.min_area, geom.area);
    for (const EdgeGeometry& e : geom.edges)
      stats.min_edge_to_h = std::min(stats.min_edge_to_h, e.length / geom.diameter);
    stats.cell_edge_histogram[geom.num_vertices()] += 1;
  }
  return stats;
}

void MeshBuilder::add_cell(const std::vector<Eigen::Vector2d>& polygon) {
  raw_cells_.push_back(polygon);
}

namespace {

struct VertexMerger {
  double tol;
  std::vector<Eigen::Vector2d> points;
  std::unordered_map<std::int64_t, std::vector<int>> grid;

  explicit VertexMerger(double t) : tol(t) {}

  std::int64_t key(long gx, long gy) const { return (gx << 32) ^ (gy & 0xffffffffL); }

  int insert(const Eigen::Vector2d& p) {
    const long gx = std::lround(p.x() / tol);
    const long gy = std::lround(p.y() / tol);
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(key(gx + dx, gy + dy));
        if (it == grid.end()) continue;
        for (int id : it->second)
          if ((points[id] - p).norm() <= tol) return id;
      }
    }
    const int id = static_cast<int>(points.size());
    points.push_back(p);
    grid[key(gx, gy)].push_back(id);
    return id;
  }
};

Eigen::Vector2d snap_to_unit_boundary(Eigen::Vector2d p) {
  if (std::abs(p.x()) <= kBoundaryTol) p.x() = 0.0;
  if (std::abs(p.x() - 1.0) <= kBoundaryTol) p.x() = 1.0;
  if (std::abs(p.y()) <= kBoundaryTol) p.y() = 0.0;
  if (std::abs(p.y() - 1.0) <= kBoundaryTol) p.y() = 1.0;
  return p;
}

} // namespace

PolygonalMesh MeshBuilder::finalize() {
  VertexMerger merger(merge_tol_);
  std::vector<std::vector<int>> cells;
  cells.reserve(raw_cells_.size());
  for (const auto& poly : raw_cells_) {
    std::vector<int> cell;
    cell.reserve(poly.size());
    for (const Eigen::Vector2d& p : poly) {
      const int id = merger.insert(snap_to_unit_boundary(p));
      if (cell.empty() || cell.back() != id) cell.push_back(id);
    }
    while (cell.size() > 1 && cell.back() == cell.front()) cell.pop_back();
    if (cell.size() < 3)
      throw MeshError("mesh builder: cell " + std::to_string(cells.size()) +
                      " collapsed during vertex merging");
    cells.push_back(std::move(cell));
  }

  // Collapse edges much shorter than their element diameter: both endpoints
  // are replaced by the midpoint everywhere (keeps the subdivision exact).
  std::vector<Eigen::Vector2d> points = merger.points;
  std::vector<int> remap(points.size());
  bool changed = true;
  int rounds = 0;
  while (changed && rounds++ < 16) {
    changed = false;
    for (std::size_t i = 0; i < points.size(); ++i) remap[i] = static_cast<int>(i);
    for (const auto& cell : cells) {
      const int n = static_cast<int>(cell.size());
      if (n <= 3) continue;
      double diam2 = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          diam2 = std::max(diam2, (points[cell[i]] - points[cell[j]]).squaredNorm());
      const double limit = 1e-10 * std::sqrt(diam2);
      for (int i = 0; i < n; ++i) {
        const int a = cell[i];
        const int b = cell[(i + 1) % n];
        if (remap[a] != a || remap[b] != b || a == b) continue;
        if ((points[a] - points[b]).norm() < limit) {
          const Eigen::Vector2d mid = snap_to_unit_boundary(0.5 * (points[a] + points[b]));
          points[a] = mid;
          points[b] = mid;
          remap[std::max(a, b)] = std::min(a, b);
          changed = true;
        }
      }
    }
    if (!changed) break;
    for (auto& cell : cells) {
      std::vector<int> out;
      out.reserve(cell.size());
      for (int v : cell) {
        const int w = remap[v];
        if (out.empty() || out.back() != w) out.push_back(w);
      }
      while (out.size() > 1 && out.back() == out.front()) out.pop_back();
      cell = std::move(out);
    }
  }

  // Drop unused vertices and renumber.
  std::vector<int> new_id(points.size(), -1);
  std::vector<Eigen::Vector2d> used;
  for (auto& cell : cells) {
    for (int& v : cell) {
      if (new_id[v] < 0) {
        new_id[v] = static_cast<int>(used.size());
        used.push_back(points[v]);
      }
      v = new_id[v];
    }
  }
  return PolygonalMesh::from_raw(std::move(used), std::move(cells));
}

} // namespace vemeig
