#include "vemeig/geometry.hpp"

#include "vemeig/errors.hpp"

#include <cmath>
#include <string>

namespace vemeig {

double polygon_signed_area(const std::vector<Eigen::Vector2d>& polygon) {
  const std::size_t n = polygon.size();
  double twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& p = polygon[i];
    const Eigen::Vector2d& q = polygon[(i + 1) % n];
    twice_area += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice_area;
}

namespace {

double cross2(const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
  return u.x() * v.y() - u.y() * v.x();
}

int orientation_sign(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     const Eigen::Vector2d& c, double scale) {
  const double d = cross2(b - a, c - a);
  const double eps = 1e-14 * scale;
  if (d > eps) return 1;
  if (d < -eps) return -1;
  return 0;
}

bool on_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                const Eigen::Vector2d& p) {
  return p.x() >= std::min(a.x(), b.x()) && p.x() <= std::max(a.x(), b.x()) &&
         p.y() >= std::min(a.y(), b.y()) && p.y() <= std::max(a.y(), b.y());
}

} // namespace

bool segments_properly_intersect(const Eigen::Vector2d& a0, const Eigen::Vector2d& a1,
                                 const Eigen::Vector2d& b0, const Eigen::Vector2d& b1) {
  const double scale = (a1 - a0).norm() * (b1 - b0).norm() + 1e-300;
  const int o1 = orientation_sign(a0, a1, b0, scale);
  const int o2 = orientation_sign(a0, a1, b1, scale);
  const int o3 = orientation_sign(b0, b1, a0, scale);
  const int o4 = orientation_sign(b0, b1, a1, scale);
  if (o1 != o2 && o3 != o4 && o1 * o2 != 0 && o3 * o4 != 0) return true;
  // Collinear overlap cases.
  if (o1 == 0 && on_segment(a0, a1, b0) && (b0 - a0).norm() > 0 && (b0 - a1).norm() > 0) return true;
  if (o2 == 0 && on_segment(a0, a1, b1) && (b1 - a0).norm() > 0 && (b1 - a1).norm() > 0) return true;
  if (o3 == 0 && on_segment(b0, b1, a0) && (a0 - b0).norm() > 0 && (a0 - b1).norm() > 0) return true;
  if (o4 == 0 && on_segment(b0, b1, a1) && (a1 - b0).norm() > 0 && (a1 - b1).norm() > 0) return true;
  return false;
}

ElementGeometry element_geometry(const std::vector<Eigen::Vector2d>& polygon) {
  const int n = static_cast<int>(polygon.size());
  if (n < 3) throw GeometryError("element_geometry: polygon with fewer than 3 vertices");

  const double signed_area = polygon_signed_area(polygon);
  if (signed_area <= 0.0) {
    throw GeometryError("element_geometry: polygon is clockwise or degenerate (signed area " +
                        std::to_string(signed_area) + ")");
  }

  ElementGeometry geom;
  geom.vertices = polygon;
  geom.area = signed_area;

  // Centroid of the polygon interior.
  double cx = 0.0, cy = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& p = polygon[i];
    const Eigen::Vector2d& q = polygon[(i + 1) % n];
    const double w = p.x() * q.y() - q.x() * p.y();
    cx += (p.x() + q.x()) * w;
    cy += (p.y() + q.y()) * w;
  }
  geom.centroid = Eigen::Vector2d(cx, cy) / (6.0 * signed_area);

  double diam2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      diam2 = std::max(diam2, (polygon[i] - polygon[j]).squaredNorm());
  geom.diameter = std::sqrt(diam2);

  geom.edges.resize(n);
  for (int i = 0; i < n; ++i) {
    EdgeGeometry& e = geom.edges[i];
    e.start = polygon[i];
    e.end = polygon[(i + 1) % n];
    const Eigen::Vector2d d = e.end - e.start;
    e.length = d.norm();
    if (e.length <= 1e-300 || e.length < 1e-14 * geom.diameter) {
      throw GeometryError("element_geometry: degenerate edge " + std::to_string(i));
    }
    // CCW boundary: outward normal is the tangent rotated by -90 degrees.
    e.normal = Eigen::Vector2d(d.y(), -d.x()) / e.length;
    geom.perimeter += e.length;
  }

  // Simplicity: no two non-adjacent edges may touch.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_properly_intersect(geom.edges[i].start, geom.edges[i].end,
                                      geom.edges[j].start, geom.edges[j].end)) {
        throw GeometryError("element_geometry: self-intersecting polygon (edges " +
                            std::to_string(i) + " and " + std::to_string(j) + ")");
      }
    }
  }
  return geom;
}

} // namespace vemeig
