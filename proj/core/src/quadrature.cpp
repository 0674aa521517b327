#include "vemeig/quadrature.hpp"

#include "vemeig/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace vemeig {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
// three-term recurrence, weights come from the first eigenvector components.
QuadratureRule1D compute_gauss_legendre(int n) {
  if (n < 1) throw ParameterError("gauss_legendre: need at least one point");
  QuadratureRule1D rule;
  if (n == 1) {
    rule.points = Eigen::VectorXd::Zero(1);
    rule.weights = Eigen::VectorXd::Constant(1, 2.0);
    return rule;
  }
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  rule.points = es.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = 2.0 * v0 * v0;
  }
  return rule;
}

} // namespace

const QuadratureRule1D& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule1D> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

std::vector<double> gauss_lobatto_interior(int n_interior) {
  if (n_interior < 0) throw ParameterError("gauss_lobatto_interior: negative count");
  if (n_interior == 0) return {};
  // Interior Lobatto nodes are the Gauss nodes of the Jacobi(1,1) weight.
  const int n = n_interior;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double num = static_cast<double>(i) * (i + 2);
    const double den = (2.0 * i + 1.0) * (2.0 * i + 3.0);
    const double b = std::sqrt(num / den);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  std::vector<double> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = es.eigenvalues()[i];
  // Exact symmetry about 0 keeps reversed edges consistent to the bit.
  for (int i = 0; i < n / 2; ++i) {
    const double s = 0.5 * (nodes[n - 1 - i] - nodes[i]);
    nodes[i] = -s;
    nodes[n - 1 - i] = s;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
  return nodes;
}

std::vector<QuadraturePoint2D> triangle_quadrature(const Eigen::Vector2d& a,
                                                   const Eigen::Vector2d& b,
                                                   const Eigen::Vector2d& c,
                                                   int degree) {
  // Duffy transform of a tensor Gauss rule on [0,1]^2; the collapsed map adds
  // one to the u-degree, hence the +3 margin in the point count.
  const int n = std::max(1, (degree + 3) / 2 + 1);
  const QuadratureRule1D& line = gauss_legendre(n);
  const double jac = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
  std::vector<QuadraturePoint2D> points;
  points.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (line.points[i] + 1.0);
    const double wu = 0.5 * line.weights[i];
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (line.points[j] + 1.0);
      const double wv = 0.5 * line.weights[j];
      const double x = u;
      const double y = v * (1.0 - u);
      QuadraturePoint2D q;
      q.point = a + x * (b - a) + y * (c - a);
      q.weight = wu * wv * (1.0 - u) * jac;
      points.push_back(q);
    }
  }
  return points;
}

} // namespace vemeig
