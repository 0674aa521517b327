#include "vemeig/local_element.hpp"

#include "vemeig/errors.hpp"
#include "vemeig/quadrature.hpp"

#include <cmath>
#include <string>

namespace vemeig {

DofLayout DofLayout::make(int k, int n_vertices) {
  if (k < 1 || k > 4) throw ParameterError("local space degree must be in {1,2,3,4}");
  if (n_vertices < 3) throw ParameterError("local space needs at least 3 vertices");
  DofLayout layout;
  layout.degree = k;
  layout.num_vertices = n_vertices;
  layout.per_edge = k - 1;
  layout.num_internal = k * (k - 1) / 2;
  layout.total = n_vertices * k + layout.num_internal;
  return layout;
}

std::vector<Eigen::Vector2d> edge_dof_points(const EdgeGeometry& edge, int k) {
  const std::vector<double> nodes = gauss_lobatto_interior(k - 1);
  std::vector<Eigen::Vector2d> points;
  points.reserve(nodes.size());
  for (double s : nodes)
    points.push_back(edge.midpoint() + 0.5 * s * (edge.end - edge.start));
  return points;
}

Eigen::MatrixXd build_dof_matrix(const ElementGeometry& geom, const MomentTable& moments, int k) {
  const DofLayout layout = DofLayout::make(k, geom.num_vertices());
  const ScaledMonomialBasis basis(k, geom);
  const int nk = basis.size();
  Eigen::MatrixXd D(layout.total, nk);

  for (int v = 0; v < layout.num_vertices; ++v)
    D.row(layout.vertex_dof(v)) = basis.values(geom.vertices[v]).transpose();

  for (int e = 0; e < layout.num_vertices; ++e) {
    const auto points = edge_dof_points(geom.edges[e], k);
    for (int t = 0; t < layout.per_edge; ++t)
      D.row(layout.edge_dof(e, t)) = basis.values(points[t]).transpose();
  }

  // Moment DOFs of a monomial are rows of H scaled by 1/|E|.
  for (int m = 0; m < layout.num_internal; ++m)
    D.row(layout.internal_dof(m)) = moments.mass.row(m) / geom.area;

  return D;
}

namespace {

// Residual computed in extended precision; one refinement step then pushes
// the solve error well below kappa * eps even for the k=4 monomial Gram.
Eigen::MatrixXd residual_extended(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& x,
                                  const Eigen::MatrixXd& rhs) {
  const Eigen::Index n = lhs.rows();
  const Eigen::Index m = rhs.cols();
  Eigen::MatrixXd res(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      long double acc = rhs(i, j);
      for (Eigen::Index l = 0; l < n; ++l)
        acc -= static_cast<long double>(lhs(i, l)) * static_cast<long double>(x(l, j));
      res(i, j) = static_cast<double>(acc);
    }
  }
  return res;
}

// Lagrange basis values on the k+1 edge trace nodes {-1, lobatto..., +1},
// evaluated at parameter t.
Eigen::VectorXd edge_lagrange_values(const std::vector<double>& nodes, double t) {
  const int n = static_cast<int>(nodes.size());
  Eigen::VectorXd values(n);
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int m = 0; m < n; ++m) {
      if (m == j) continue;
      prod *= (t - nodes[m]) / (nodes[j] - nodes[m]);
    }
    values[j] = prod;
  }
  return values;
}

} // namespace

PinablaProjector build_projector_pinabla(const ElementGeometry& geom,
                                         const MomentTable& moments, int k) {
  const DofLayout layout = DofLayout::make(k, geom.num_vertices());
  const ScaledMonomialBasis basis(k, geom);
  const int nk = basis.size();
  const int nv = layout.num_vertices;

  // Trace nodes on the reference edge [-1, 1].
  std::vector<double> trace_nodes;
  trace_nodes.push_back(-1.0);
  for (double s : gauss_lobatto_interior(k - 1)) trace_nodes.push_back(s);
  trace_nodes.push_back(1.0);

  // rhs matrix: row alpha holds a^E(m_alpha, phi_j) expressed in the DOFs,
  // via -\int_E phi Delta m_alpha + \oint phi (grad m_alpha . n).
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nk, layout.total);
  const QuadratureRule1D& rule = gauss_legendre(k + 2);

  for (int e = 0; e < nv; ++e) {
    const EdgeGeometry& edge = geom.edges[e];
    // Local DOFs carrying the trace on this edge, in trace-node order.
    std::vector<int> trace_dofs;
    trace_dofs.push_back(layout.vertex_dof(e));
    for (int t = 0; t < layout.per_edge; ++t) trace_dofs.push_back(layout.edge_dof(e, t));
    trace_dofs.push_back(layout.vertex_dof((e + 1) % nv));

    for (int q = 0; q < rule.size(); ++q) {
      const double t = rule.points[q];
      const double w = 0.5 * rule.weights[q] * edge.length;
      const Eigen::Vector2d p = edge.midpoint() + 0.5 * t * (edge.end - edge.start);
      const Eigen::VectorXd lag = edge_lagrange_values(trace_nodes, t);
      for (int alpha = 1; alpha < nk; ++alpha) {
        const double flux = basis.gradient(alpha, p).dot(edge.normal);
        for (std::size_t j = 0; j < trace_dofs.size(); ++j)
          rhs(alpha, trace_dofs[j]) += w * flux * lag[static_cast<int>(j)];
      }
      if (k == 1) {
        // Mean-on-the-boundary condition closes the constant mode.
        for (std::size_t j = 0; j < trace_dofs.size(); ++j)
          rhs(0, trace_dofs[j]) += w * lag[static_cast<int>(j)] / geom.perimeter;
      }
    }
  }

  // Volume part: Delta m_alpha has degree <= k-2, so it pairs with internal
  // moment DOFs directly.
  const auto& exps = monomial_exponents(k);
  const double h2 = geom.diameter * geom.diameter;
  for (int alpha = 0; alpha < nk; ++alpha) {
    const MultiIndex& a = exps[alpha];
    if (a.ax >= 2) {
      const int target = monomial_index(a.ax - 2, a.ay);
      rhs(alpha, layout.internal_dof(target)) -= a.ax * (a.ax - 1) * geom.area / h2;
    }
    if (a.ay >= 2) {
      const int target = monomial_index(a.ax, a.ay - 2);
      rhs(alpha, layout.internal_dof(target)) -= a.ay * (a.ay - 1) * geom.area / h2;
    }
  }
  if (k >= 2) rhs(0, layout.internal_dof(0)) = 1.0; // mean-on-E condition

  // Left hand side: grad-grad Gram with the first row replaced by the
  // projection-fixing functional.
  Eigen::MatrixXd lhs = moments.grad_stiffness;
  if (k == 1) {
    for (int beta = 0; beta < nk; ++beta) {
      double boundary_mean = 0.0;
      for (const EdgeGeometry& edge : geom.edges) {
        for (int q = 0; q < rule.size(); ++q) {
          const Eigen::Vector2d p =
              edge.midpoint() + 0.5 * rule.points[q] * (edge.end - edge.start);
          boundary_mean += 0.5 * rule.weights[q] * edge.length * basis.value(beta, p);
        }
      }
      lhs(0, beta) = boundary_mean / geom.perimeter;
    }
  } else {
    for (int beta = 0; beta < nk; ++beta) lhs(0, beta) = moments.integrals[beta] / geom.area;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
  if (!lu.isInvertible())
    throw NumericalError("energy projector: rank-deficient system (degenerate element)");

  PinablaProjector projector;
  projector.D = build_dof_matrix(geom, moments, k);
  projector.star = lu.solve(rhs);
  projector.star += lu.solve(residual_extended(lhs, projector.star, rhs));
  projector.dof_form = projector.D * projector.star;
  return projector;
}

Eigen::MatrixXd build_projector_pi0(const ElementGeometry& geom, const MomentTable& moments,
                                    int k, const Eigen::MatrixXd& pinabla_star) {
  const DofLayout layout = DofLayout::make(k, geom.num_vertices());
  const int nk = monomial_count(k);

  // The k=4 monomial Gram is poorly conditioned (kappa up to ~1e8), so the
  // moment substitution and the solve run in extended precision.
  using MatrixLd = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const MatrixLd mass_ld = moments.mass.cast<long double>();
  const MatrixLd pinabla_ld = pinabla_star.cast<long double>();

  MatrixLd rhs(nk, layout.total);
  // Moments against m_alpha with |alpha| <= k-2 are internal DOFs times |E|;
  // degrees k-1 and k are moments of the energy projection instead.
  const MatrixLd enhanced = mass_ld * pinabla_ld;
  for (int alpha = 0; alpha < nk; ++alpha) {
    if (alpha < layout.num_internal) {
      rhs.row(alpha).setZero();
      rhs(alpha, layout.internal_dof(alpha)) = static_cast<long double>(geom.area);
    } else {
      rhs.row(alpha) = enhanced.row(alpha);
    }
  }

  Eigen::LLT<MatrixLd> llt(mass_ld);
  if (llt.info() != Eigen::Success)
    throw NumericalError("L2 projector: monomial Gram matrix is not positive definite");
  MatrixLd star = llt.solve(rhs);
  star += llt.solve(MatrixLd(rhs - mass_ld * star));
  return star.cast<double>();
}

Eigen::MatrixXd local_stiffness(const PinablaProjector& projector, const MomentTable& moments,
                                double alpha) {
  if (alpha <= 0.0) throw ParameterError("stabilization parameter must be positive");
  const Eigen::MatrixXd consistency =
      projector.star.transpose() * moments.grad_stiffness * projector.star;
  const Eigen::MatrixXd complement =
      Eigen::MatrixXd::Identity(projector.dof_form.rows(), projector.dof_form.cols()) -
      projector.dof_form;
  Eigen::MatrixXd a_loc = consistency + alpha * complement.transpose() * complement;
  a_loc = 0.5 * (a_loc + a_loc.transpose()).eval();
  return a_loc;
}

Eigen::MatrixXd local_mass(const Eigen::MatrixXd& pi0_star, const MomentTable& moments) {
  Eigen::MatrixXd b_loc = pi0_star.transpose() * moments.mass * pi0_star;
  b_loc = 0.5 * (b_loc + b_loc.transpose()).eval();
  return b_loc;
}

LocalVemBlocks build_local_blocks(const ElementGeometry& geom, int k, double alpha) {
  LocalVemBlocks blocks;
  blocks.layout = DofLayout::make(k, geom.num_vertices());
  blocks.basis = ScaledMonomialBasis(k, geom);
  const MomentTable moments = monomial_moments(geom, k);
  PinablaProjector projector = build_projector_pinabla(geom, moments, k);
  blocks.pi0_star = build_projector_pi0(geom, moments, k, projector.star);
  blocks.stiffness = local_stiffness(projector, moments, alpha);
  blocks.mass = local_mass(blocks.pi0_star, moments);
  blocks.D = std::move(projector.D);
  blocks.pinabla_star = std::move(projector.star);
  blocks.pinabla = std::move(projector.dof_form);
  return blocks;
}

} // namespace vemeig
