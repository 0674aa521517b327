#pragma once

#include <Eigen/Dense>
#include <vector>

namespace vemeig {

struct EdgeGeometry {
  Eigen::Vector2d start;
  Eigen::Vector2d end;
  double length;
  Eigen::Vector2d normal; // outward unit normal
  Eigen::Vector2d midpoint() const { return 0.5 * (start + end); }
  Eigen::Vector2d tangent() const { return (end - start) / length; }
};

/// Exact area/centroid/diameter data for one polygonal element, plus its edge
/// list in CCW order. All projector builds run off this structure.
struct ElementGeometry {
  double area = 0.0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  double diameter = 0.0;
  double perimeter = 0.0;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<EdgeGeometry> edges;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
};

/// Build geometry for a simple CCW polygon. Throws GeometryError for CW,
/// degenerate or self-intersecting input.
ElementGeometry element_geometry(const std::vector<Eigen::Vector2d>& polygon);

/// Shoelace signed area (positive for CCW).
double polygon_signed_area(const std::vector<Eigen::Vector2d>& polygon);

/// True if two closed segments [a0,a1], [b0,b1] intersect in a point that is
/// not a shared endpoint.
bool segments_properly_intersect(const Eigen::Vector2d& a0, const Eigen::Vector2d& a1,
                                 const Eigen::Vector2d& b0, const Eigen::Vector2d& b1);

} // namespace vemeig
