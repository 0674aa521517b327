#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vemeig {

/// Undirected mesh edge with canonical vertex order (v0 < v1) and the cells
/// on each side; cell_right == -1 on the boundary.
struct MeshEdge {
  int v0 = -1;
  int v1 = -1;
  int cell_left = -1;
  int cell_right = -1;
  bool boundary() const { return cell_right < 0; }
};

/// Conforming polygonal mesh of the unit square. Immutable after
/// construction and safe to share across threads read-only.
class PolygonalMesh {
public:
  /// Validates all structural invariants: simple CCW cells with positive
  /// area, conforming edges, Euler relation, unit tiling.
  static PolygonalMesh from_raw(std::vector<Eigen::Vector2d> vertices,
                                std::vector<std::vector<int>> cells);

  const std::vector<Eigen::Vector2d>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const std::vector<bool>& boundary_vertex() const { return boundary_vertex_; }
  const std::vector<MeshEdge>& edges() const { return edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  double h_max() const { return h_max_; }

  std::vector<Eigen::Vector2d> cell_polygon(int cell) const;

  /// Edge index for the canonical pair (min(a,b), max(a,b)); -1 if absent.
  int find_edge(int a, int b) const;

private:
  PolygonalMesh() = default;

  std::vector<Eigen::Vector2d> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<bool> boundary_vertex_;
  std::vector<MeshEdge> edges_;
  std::map<std::pair<int, int>, int> edge_lookup_;
  double h_max_ = 0.0;
};

enum class MeshFamilyKind { Triangle, Square, Voronoi, Hexagon, Dyadic };

std::string family_name(MeshFamilyKind kind);
MeshFamilyKind family_from_name(const std::string& name);

/// Deterministic structured families. Triangle/Square/Dyadic take the
/// per-side subdivision count N; Hexagon takes the horizontal and vertical
/// hexagon counts (n, m).
PolygonalMesh generate_structured(MeshFamilyKind kind, int n, int m = -1);

/// Clipped Voronoi diagram of num_cells seeded generators in the unit
/// square, regularized by lloyd_iters centroidal sweeps. Deterministic for a
/// fixed (num_cells, seed, lloyd_iters).
PolygonalMesh generate_voronoi(int num_cells, std::uint64_t seed, int lloyd_iters = 3);

struct MeshStats {
  double h_max = 0.0;
  double min_edge_to_h = 0.0; // min over edges of h_e / h_E
  double min_area = 0.0;
  std::map<int, int> cell_edge_histogram;
};

MeshStats mesh_stats(const PolygonalMesh& mesh);

void write_mesh(const PolygonalMesh& mesh, const std::string& path);
PolygonalMesh read_mesh(const std::string& path);
std::string mesh_to_json(const PolygonalMesh& mesh);
PolygonalMesh mesh_from_json(const std::string& text);

/// Assembles a conforming mesh from per-cell polygons that may repeat
/// vertices with tiny coordinate discrepancies (Voronoi / clipped tilings).
class MeshBuilder {
public:
  explicit MeshBuilder(double merge_tol = 1e-10) : merge_tol_(merge_tol) {}

  void add_cell(const std::vector<Eigen::Vector2d>& polygon);
  int num_cells() const { return static_cast<int>(raw_cells_.size()); }

  /// Merge coincident vertices, snap to the unit-square boundary, collapse
  /// edges shorter than collapse_rel * h_E, and validate.
  PolygonalMesh finalize();

private:
  double merge_tol_;
  std::vector<std::vector<Eigen::Vector2d>> raw_cells_;
};

} // namespace vemeig
