#include "vemeig/monomials.hpp"

#include "vemeig/errors.hpp"
#include "vemeig/quadrature.hpp"

#include <cmath>
#include <mutex>

namespace vemeig {

const std::vector<MultiIndex>& monomial_exponents(int k) {
  static std::mutex mutex;
  static std::vector<std::vector<MultiIndex>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  while (static_cast<int>(cache.size()) <= k) {
    const int deg = static_cast<int>(cache.size());
    std::vector<MultiIndex> table;
    table.reserve(monomial_count(deg));
    for (int d = 0; d <= deg; ++d)
      for (int ay = 0; ay <= d; ++ay) table.push_back({d - ay, ay});
    cache.push_back(std::move(table));
  }
  return cache[k];
}

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

} // namespace

double ScaledMonomialBasis::value(int index, const Eigen::Vector2d& p) const {
  const MultiIndex& a = monomial_exponents(degree)[index];
  const double xi = (p.x() - center.x()) / length_scale;
  const double eta = (p.y() - center.y()) / length_scale;
  return ipow(xi, a.ax) * ipow(eta, a.ay);
}

Eigen::Vector2d ScaledMonomialBasis::gradient(int index, const Eigen::Vector2d& p) const {
  const MultiIndex& a = monomial_exponents(degree)[index];
  const double xi = (p.x() - center.x()) / length_scale;
  const double eta = (p.y() - center.y()) / length_scale;
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  if (a.ax > 0) g.x() = a.ax * ipow(xi, a.ax - 1) * ipow(eta, a.ay) / length_scale;
  if (a.ay > 0) g.y() = a.ay * ipow(xi, a.ax) * ipow(eta, a.ay - 1) / length_scale;
  return g;
}

Eigen::VectorXd ScaledMonomialBasis::values(const Eigen::Vector2d& p) const {
  const auto& table = monomial_exponents(degree);
  Eigen::VectorXd v(size());
  const double xi = (p.x() - center.x()) / length_scale;
  const double eta = (p.y() - center.y()) / length_scale;
  for (int i = 0; i < size(); ++i) v[i] = ipow(xi, table[i].ax) * ipow(eta, table[i].ay);
  return v;
}

MomentTable monomial_moments(const ElementGeometry& geom, int k) {
  if (k < 1) throw ParameterError("monomial_moments: degree must be >= 1");

  MomentTable table;
  table.degree = k;
  const int ext_deg = 2 * k;               // highest monomial degree integrated
  const int n_ext = monomial_count(ext_deg);
  const auto& exps = monomial_exponents(ext_deg);

  // Edge integrand degree is ext_deg + 1; k+2 Gauss points are exact up to
  // degree 2k+3.
  table.edge_rule_points = k + 2;
  const QuadratureRule1D& rule = gauss_legendre(table.edge_rule_points);

  const double h = geom.diameter;
  const Eigen::Vector2d c = geom.centroid;

  // Divergence theorem with F = h/(|gamma|+2) * (xi^{a+1} eta^b, xi^a eta^{b+1}):
  // \int_E m_gamma dx = h/(|gamma|+2) * sum_e \int_e (xi^{a+1} eta^b n_x
  //                                               + xi^a eta^{b+1} n_y) ds.
  table.integrals = Eigen::VectorXd::Zero(n_ext);
  std::vector<double> pow_xi(static_cast<std::size_t>(ext_deg) + 2);
  std::vector<double> pow_eta(static_cast<std::size_t>(ext_deg) + 2);
  for (const EdgeGeometry& edge : geom.edges) {
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d p =
          edge.midpoint() + 0.5 * rule.points[q] * (edge.end - edge.start);
      const double w = 0.5 * rule.weights[q] * edge.length;
      const double xi = (p.x() - c.x()) / h;
      const double eta = (p.y() - c.y()) / h;
      pow_xi[0] = pow_eta[0] = 1.0;
      for (int d = 1; d <= ext_deg + 1; ++d) {
        pow_xi[d] = pow_xi[d - 1] * xi;
        pow_eta[d] = pow_eta[d - 1] * eta;
      }
      for (int g = 0; g < n_ext; ++g) {
        const MultiIndex& a = exps[g];
        const double flux = pow_xi[a.ax + 1] * pow_eta[a.ay] * edge.normal.x() +
                            pow_xi[a.ax] * pow_eta[a.ay + 1] * edge.normal.y();
        table.integrals[g] += w * flux;
      }
    }
  }
  for (int g = 0; g < n_ext; ++g) table.integrals[g] *= h / (exps[g].degree() + 2);

  const int nk = monomial_count(k);
  table.mass.resize(nk, nk);
  table.grad_stiffness.setZero(nk, nk);
  const auto& basis_exps = monomial_exponents(k);
  for (int a = 0; a < nk; ++a) {
    for (int b = 0; b < nk; ++b) {
      const MultiIndex& ma = basis_exps[a];
      const MultiIndex& mb = basis_exps[b];
      table.mass(a, b) = table.integrals[monomial_index(ma.ax + mb.ax, ma.ay + mb.ay)];
      double g = 0.0;
      if (ma.ax > 0 && mb.ax > 0)
        g += ma.ax * mb.ax * table.integrals[monomial_index(ma.ax + mb.ax - 2, ma.ay + mb.ay)];
      if (ma.ay > 0 && mb.ay > 0)
        g += ma.ay * mb.ay * table.integrals[monomial_index(ma.ax + mb.ax, ma.ay + mb.ay - 2)];
      table.grad_stiffness(a, b) = g / (h * h);
    }
  }
  return table;
}

double edge_polynomial_integral(const EdgeGeometry& edge, std::span<const double> coeffs) {
  if (coeffs.empty()) return 0.0;
  const int deg = static_cast<int>(coeffs.size()) - 1;
  const QuadratureRule1D& rule = gauss_legendre(deg / 2 + 1);
  double sum = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    const double s = 0.5 * (rule.points[q] + 1.0) * edge.length;
    double f = 0.0;
    for (int i = deg; i >= 0; --i) f = f * s + coeffs[i];
    sum += 0.5 * rule.weights[q] * edge.length * f;
  }
  return sum;
}

} // namespace vemeig
