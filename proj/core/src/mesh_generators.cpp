#include "vemeig/errors.hpp"
#include "vemeig/geometry.hpp"
#include "vemeig/mesh.hpp"

#include <cmath>
#include <vector>

namespace vemeig {

namespace {

PolygonalMesh generate_square(int n) {
  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return PolygonalMesh::from_raw(std::move(vertices), std::move(cells));
}

PolygonalMesh generate_triangle(int n) {
  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(2 * static_cast<std::size_t>(n) * n);
  // Each square is split along the diagonal (i,j) -> (i+1,j+1).
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return PolygonalMesh::from_raw(std::move(vertices), std::move(cells));
}

// Uniform squares seen as octagons: all edge midpoints are vertices of the
// cell, so the mesh has (3N+1)(N+1) vertices and N^2 eight-edge cells.
PolygonalMesh generate_dyadic(int n) {
  std::vector<Eigen::Vector2d> vertices;
  const auto coord = [](int twice, int n_) { return static_cast<double>(twice) / (2 * n_); };
  // Corner grid first, then horizontal-edge midpoints, then vertical ones.
  auto corner = [n](int i, int j) { return j * (n + 1) + i; };
  const int corner_count = (n + 1) * (n + 1);
  auto hmid = [n, corner_count](int i, int j) { return corner_count + j * n + i; };
  const int hmid_count = n * (n + 1);
  auto vmid = [n, corner_count, hmid_count](int i, int j) {
    return corner_count + hmid_count + j * (n + 1) + i;
  };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) vertices.emplace_back(coord(2 * i, n), coord(2 * j, n));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i < n; ++i) vertices.emplace_back(coord(2 * i + 1, n), coord(2 * j, n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= n; ++i) vertices.emplace_back(coord(2 * i, n), coord(2 * j + 1, n));

  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({corner(i, j), hmid(i, j), corner(i + 1, j), vmid(i + 1, j),
                       corner(i + 1, j + 1), hmid(i, j + 1), corner(i, j + 1), vmid(i, j)});
    }
  }
  return PolygonalMesh::from_raw(std::move(vertices), std::move(cells));
}

// Flat-top hexagons with x-period 1/n and y-period 1/m, clipped to the unit
// square. Boundary cells come out as cut polygons; near-boundary vertices are
// snapped by the builder.
PolygonalMesh generate_hexagon(int n, int m) {
  // In unscaled units a flat-top hexagon of circumradius 1 tiles the plane
  // with x-period 1.5 and y-period sqrt(3).
  const double sx = 1.0 / (1.5 * n);
  const double sy = 1.0 / (std::sqrt(3.0) * m);
  std::vector<Eigen::Vector2d> hex_unit = {
      {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0},  {-0.5, std::sqrt(3.0) / 2.0},
      {-1.0, 0.0}, {-0.5, -std::sqrt(3.0) / 2.0}, {0.5, -std::sqrt(3.0) / 2.0}};

  MeshBuilder builder;
  for (int i = -1; i <= 2 * n + 1; ++i) {
    for (int j = -1; j <= m + 1; ++j) {
      const double cx = 1.5 * i;
      const double cy = std::sqrt(3.0) * (j + ((i % 2 + 2) % 2) * 0.5);
      std::vector<Eigen::Vector2d> poly;
      poly.reserve(6);
      for (const Eigen::Vector2d& v : hex_unit)
        poly.emplace_back((cx + v.x()) * sx, (cy + v.y()) * sy);
      // Clip to the unit square.
      static const Eigen::Vector2d normals[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
      static const double offsets[4] = {0.0, 1.0, 0.0, 1.0};
      std::vector<Eigen::Vector2d> clipped = poly;
      for (int s = 0; s < 4 && !clipped.empty(); ++s) {
        std::vector<Eigen::Vector2d> next;
        const Eigen::Vector2d nrm = normals[s];
        const double off = offsets[s];
        const int cnt = static_cast<int>(clipped.size());
        for (int e = 0; e < cnt; ++e) {
          const Eigen::Vector2d& p = clipped[e];
          const Eigen::Vector2d& q = clipped[(e + 1) % cnt];
          const double dp = nrm.dot(p) - off;
          const double dq = nrm.dot(q) - off;
          if (dp <= 0) next.push_back(p);
          if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
            const double t = dp / (dp - dq);
            next.push_back(p + t * (q - p));
          }
        }
        clipped = std::move(next);
      }
      if (clipped.size() >= 3 && polygon_signed_area(clipped) > 1e-14)
        builder.add_cell(clipped);
    }
  }
  return builder.finalize();
}

} // namespace

PolygonalMesh generate_structured(MeshFamilyKind kind, int n, int m) {
  switch (kind) {
    case MeshFamilyKind::Square:
      if (n < 1) throw ParameterError("square mesh: level must be >= 1");
      return generate_square(n);
    case MeshFamilyKind::Triangle:
      if (n < 1) throw ParameterError("triangle mesh: level must be >= 1");
      return generate_triangle(n);
    case MeshFamilyKind::Dyadic:
      if (n < 1) throw ParameterError("dyadic mesh: level must be >= 1");
      return generate_dyadic(n);
    case MeshFamilyKind::Hexagon:
      if (n < 2 || m < 2) throw ParameterError("hexagon mesh: need n >= 2 and m >= 2");
      return generate_hexagon(n, m);
    case MeshFamilyKind::Voronoi:
      throw ParameterError("voronoi meshes are produced by generate_voronoi");
  }
  throw ParameterError("unknown mesh family");
}

} // namespace vemeig
