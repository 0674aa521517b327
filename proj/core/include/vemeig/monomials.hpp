#pragma once

#include "vemeig/geometry.hpp"

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace vemeig {

/// Monomial exponent pair; ordering is graded lexicographic
/// (1; x, y; x^2, xy, y^2; ...).
struct MultiIndex {
  int ax = 0;
  int ay = 0;
  int degree() const { return ax + ay; }
};

/// Dimension of P_k in two variables: (k+1)(k+2)/2.
inline int monomial_count(int k) { return (k + 1) * (k + 2) / 2; }

/// Position of x^ax y^ay in the graded-lex ordering.
inline int monomial_index(int ax, int ay) {
  const int d = ax + ay;
  return d * (d + 1) / 2 + ay;
}

/// Exponent table for all |alpha| <= k in graded-lex order.
const std::vector<MultiIndex>& monomial_exponents(int k);

/// Scaled monomials m_alpha(x) = ((x - center)/h)^alpha.
struct ScaledMonomialBasis {
  int degree = 0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double length_scale = 1.0;

  ScaledMonomialBasis() = default;
  ScaledMonomialBasis(int k, const ElementGeometry& geom)
      : degree(k), center(geom.centroid), length_scale(geom.diameter) {}

  int size() const { return monomial_count(degree); }

  double value(int index, const Eigen::Vector2d& p) const;
  Eigen::Vector2d gradient(int index, const Eigen::Vector2d& p) const;

  /// Values of all basis members at p, as a vector of length size().
  Eigen::VectorXd values(const Eigen::Vector2d& p) const;
};

/// Exact integrals of scaled monomials over one element, and the derived
/// polynomial Gram matrices. Everything here is exact up to roundoff:
/// area integrals are reduced to edge integrals by the divergence theorem
/// and each edge is handled by Gauss-Legendre of sufficient order.
struct MomentTable {
  int degree = 0;           // k
  int edge_rule_points = 0; // Gauss points used per edge
  Eigen::VectorXd integrals; // \int_E m_gamma dx for all |gamma| <= 2k
  Eigen::MatrixXd mass;            // H(a,b)  = \int_E m_a m_b dx
  Eigen::MatrixXd grad_stiffness;  // Gt(a,b) = \int_E grad m_a . grad m_b dx
};

MomentTable monomial_moments(const ElementGeometry& geom, int k);

/// \int_e f(s) ds for a polynomial f given by ascending coefficients in the
/// arclength parameter s in [0, length].
double edge_polynomial_integral(const EdgeGeometry& edge, std::span<const double> coeffs);

} // namespace vemeig
