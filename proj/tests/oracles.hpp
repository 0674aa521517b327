// Test-only reference implementations. They deliberately avoid the code
// paths they are used to check: polygon moments go through a triangulated
// Duffy rule instead of the divergence theorem, and the P1 assembly below is
// a plain hand-written FEM.
#pragma once

#include "vemeig/geometry.hpp"
#include "vemeig/mesh.hpp"
#include "vemeig/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <cstdint>
#include <vector>

namespace vemeig::testing {

struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

/// Vertices on a circle in angular order: always convex.
inline std::vector<Eigen::Vector2d> random_convex_polygon(TestRng& rng, int n_vertices,
                                                          double radius = 1.0,
                                                          Eigen::Vector2d center = {0.0, 0.0}) {
  std::vector<double> angles(n_vertices);
  for (double& a : angles) a = rng.uniform(0.0, 2.0 * M_PI);
  std::sort(angles.begin(), angles.end());
  // Reject clustered angles so edges stay non-degenerate.
  for (int i = 0; i < n_vertices; ++i) {
    const double next = (i + 1 < n_vertices) ? angles[i + 1] : angles[0] + 2.0 * M_PI;
    if (next - angles[i] < 1e-2) return random_convex_polygon(rng, n_vertices, radius, center);
  }
  std::vector<Eigen::Vector2d> poly(n_vertices);
  for (int i = 0; i < n_vertices; ++i)
    poly[i] = center + radius * Eigen::Vector2d(std::cos(angles[i]), std::sin(angles[i]));
  return poly;
}

/// Star-shaped (about its polar center) polygon with jagged radii:
/// non-convex. Angular gaps are kept below pi so the center stays interior
/// and the orientation is CCW.
inline std::vector<Eigen::Vector2d> random_star_polygon(TestRng& rng, int n_vertices,
                                                        double radius = 1.0,
                                                        Eigen::Vector2d center = {0.0, 0.0}) {
  std::vector<double> angles(n_vertices);
  for (;;) {
    for (double& a : angles) a = rng.uniform(0.0, 2.0 * M_PI);
    std::sort(angles.begin(), angles.end());
    bool ok = true;
    for (int i = 0; i < n_vertices; ++i) {
      const double next = (i + 1 < n_vertices) ? angles[i + 1] : angles[0] + 2.0 * M_PI;
      const double gap = next - angles[i];
      if (gap < 5e-2 || gap > 0.9 * M_PI) ok = false;
    }
    if (ok) break;
  }
  std::vector<Eigen::Vector2d> poly(n_vertices);
  for (int i = 0; i < n_vertices; ++i) {
    const double r = radius * rng.uniform(0.45, 1.0);
    poly[i] = center + r * Eigen::Vector2d(std::cos(angles[i]), std::sin(angles[i]));
  }
  return poly;
}

/// Jittered regular polygon: the shape quality a mesh generator under the
/// usual star-shapedness assumptions would produce. Used where tolerances
/// assume regular elements.
inline std::vector<Eigen::Vector2d> random_regular_polygon(TestRng& rng, int n_vertices,
                                                           double radius = 1.0,
                                                           Eigen::Vector2d center = {0.0, 0.0}) {
  const double base = rng.uniform(0.0, 2.0 * M_PI);
  std::vector<Eigen::Vector2d> poly(n_vertices);
  for (int i = 0; i < n_vertices; ++i) {
    const double angle =
        base + (i + rng.uniform(-0.25, 0.25)) * 2.0 * M_PI / n_vertices;
    const double r = radius * rng.uniform(0.7, 1.0);
    poly[i] = center + r * Eigen::Vector2d(std::cos(angle), std::sin(angle));
  }
  return poly;
}

/// Reference integral of ((x-c)/h)^ax ((y-c)/h)^ay over the polygon:
/// centroid fan plus a tensor Gauss rule collapsed onto each triangle.
inline double oracle_scaled_monomial_integral(const std::vector<Eigen::Vector2d>& poly,
                                              const Eigen::Vector2d& center, double scale,
                                              int ax, int ay) {
  const int degree = ax + ay;
  const int n_gauss = degree / 2 + 2;
  const QuadratureRule1D& line = gauss_legendre(n_gauss);

  Eigen::Vector2d fan_center = Eigen::Vector2d::Zero();
  for (const auto& p : poly) fan_center += p;
  fan_center /= static_cast<double>(poly.size());

  double total = 0.0;
  const int n = static_cast<int>(poly.size());
  for (int t = 0; t < n; ++t) {
    const Eigen::Vector2d a = fan_center;
    const Eigen::Vector2d b = poly[t];
    const Eigen::Vector2d c = poly[(t + 1) % n];
    const double jac = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    for (int i = 0; i < line.size(); ++i) {
      const double u = 0.5 * (line.points[i] + 1.0);
      for (int j = 0; j < line.size(); ++j) {
        const double v = 0.5 * (line.points[j] + 1.0);
        const Eigen::Vector2d p = a + u * (b - a) + (v * (1.0 - u)) * (c - a);
        const double w = 0.25 * line.weights[i] * line.weights[j] * (1.0 - u) * jac;
        total += w * std::pow((p.x() - center.x()) / scale, ax) *
                 std::pow((p.y() - center.y()) / scale, ay);
      }
    }
  }
  return total;
}

/// Plain P1 FEM on a triangle mesh with homogeneous Dirichlet data,
/// eliminated to interior vertices in ascending vertex order.
struct P1System {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::SparseMatrix<double> mass;
  std::vector<int> vertex_to_interior;
};

inline P1System p1_fem_assemble(const PolygonalMesh& mesh) {
  const int nv = mesh.num_vertices();
  std::vector<int> interior(nv, -1);
  int count = 0;
  for (int v = 0; v < nv; ++v)
    if (!mesh.boundary_vertex()[v]) interior[v] = count++;

  std::vector<Eigen::Triplet<double>> a_trip, b_trip;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const std::vector<int>& cell = mesh.cells()[c];
    const Eigen::Vector2d p0 = mesh.vertices()[cell[0]];
    const Eigen::Vector2d p1 = mesh.vertices()[cell[1]];
    const Eigen::Vector2d p2 = mesh.vertices()[cell[2]];
    const double area = 0.5 * ((p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x());
    Eigen::Matrix<double, 2, 3> grads;
    grads.col(0) = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / (2.0 * area);
    grads.col(1) = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / (2.0 * area);
    grads.col(2) = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / (2.0 * area);
    for (int i = 0; i < 3; ++i) {
      const int gi = interior[cell[i]];
      if (gi < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int gj = interior[cell[j]];
        if (gj < 0) continue;
        a_trip.emplace_back(gi, gj, area * grads.col(i).dot(grads.col(j)));
        b_trip.emplace_back(gi, gj, area / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
  }
  P1System system;
  system.stiffness.resize(count, count);
  system.stiffness.setFromTriplets(a_trip.begin(), a_trip.end());
  system.mass.resize(count, count);
  system.mass.setFromTriplets(b_trip.begin(), b_trip.end());
  system.vertex_to_interior = std::move(interior);
  return system;
}

} // namespace vemeig::testing
