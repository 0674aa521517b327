#pragma once

#include <Eigen/Dense>
#include <vector>

namespace vemeig {

/// One-dimensional rule on the reference interval [-1, 1].
struct QuadratureRule1D {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
  int size() const { return static_cast<int>(points.size()); }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
const QuadratureRule1D& gauss_legendre(int n);

/// Interior nodes of the (n_interior + 2)-point Gauss-Lobatto rule on [-1, 1],
/// in ascending order. These are the edge degree-of-freedom locations.
std::vector<double> gauss_lobatto_interior(int n_interior);

struct QuadraturePoint2D {
  Eigen::Vector2d point;
  double weight;
};

/// Quadrature on the triangle (a, b, c), exact for total degree <= degree.
std::vector<QuadraturePoint2D> triangle_quadrature(const Eigen::Vector2d& a,
                                                   const Eigen::Vector2d& b,
                                                   const Eigen::Vector2d& c,
                                                   int degree);

} // namespace vemeig
