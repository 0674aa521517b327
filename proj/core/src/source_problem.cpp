#include "vemeig/eigensolve.hpp"
#include "vemeig/errors.hpp"
#include "vemeig/quadrature.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace vemeig {

namespace {

// Signed fan decomposition about the centroid; valid for any simple polygon
// because the signed pieces cancel outside.
std::vector<QuadraturePoint2D> polygon_quadrature(const ElementGeometry& geom, int degree) {
  std::vector<QuadraturePoint2D> points;
  const int n = geom.num_vertices();
  for (int i = 0; i < n; ++i) {
    const auto tri = triangle_quadrature(geom.centroid, geom.vertices[i],
                                         geom.vertices[(i + 1) % n], degree);
    points.insert(points.end(), tri.begin(), tri.end());
  }
  return points;
}

Eigen::VectorXd scatter_local_to_interior(const GlobalDofMap& map, int cell,
                                          const Eigen::VectorXd& local, Eigen::VectorXd& global) {
  const std::vector<int>& dofs = map.cell_to_global[cell];
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const int gi = map.full_to_interior[dofs[i]];
    if (gi >= 0) global[gi] += local[static_cast<int>(i)];
  }
  return global;
}

Eigen::VectorXd gather_interior_to_local(const GlobalDofMap& map, int cell,
                                         const Eigen::VectorXd& interior) {
  const std::vector<int>& dofs = map.cell_to_global[cell];
  Eigen::VectorXd local = Eigen::VectorXd::Zero(static_cast<int>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const int gi = map.full_to_interior[dofs[i]];
    if (gi >= 0) local[static_cast<int>(i)] = interior[gi];
  }
  return local;
}

} // namespace

Eigen::VectorXd solve_source(const PolygonalMesh& mesh, const AssembledSystem& system,
                             const std::function<double(const Eigen::Vector2d&)>& f) {
  const int k = system.dofmap.degree;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(system.dofmap.interior_dofs);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const ElementGeometry geom = element_geometry(mesh.cell_polygon(c));
    const MomentTable moments = monomial_moments(geom, k);
    const PinablaProjector projector = build_projector_pinabla(geom, moments, k);
    const Eigen::MatrixXd pi0_star = build_projector_pi0(geom, moments, k, projector.star);
    const ScaledMonomialBasis basis(k, geom);

    // Moments of f against the scaled monomials; b_h(f, phi_i) then equals
    // pi0_star^T times that moment vector.
    Eigen::VectorXd f_moments = Eigen::VectorXd::Zero(basis.size());
    for (const QuadraturePoint2D& q : polygon_quadrature(geom, 2 * k + 4)) {
      f_moments += q.weight * f(q.point) * basis.values(q.point);
    }
    const Eigen::VectorXd local_rhs = pi0_star.transpose() * f_moments;
    scatter_local_to_interior(system.dofmap, c, local_rhs, rhs);
  }

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(system.stiffness.mat);
  if (llt.info() != Eigen::Success)
    throw NumericalError("source problem: stiffness matrix is not positive definite");
  return llt.solve(rhs);
}

Eigen::VectorXd solve_source_discrete(const AssembledSystem& system, const Eigen::VectorXd& f_dofs) {
  if (f_dofs.size() != system.dofmap.interior_dofs)
    throw ParameterError("source problem: DOF vector has wrong size");
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(system.stiffness.mat);
  if (llt.info() != Eigen::Success)
    throw NumericalError("source problem: stiffness matrix is not positive definite");
  return llt.solve(Eigen::VectorXd(system.mass.mat * f_dofs));
}

FieldError projection_errors(const PolygonalMesh& mesh, const AssembledSystem& system,
                             const Eigen::VectorXd& u_interior,
                             const std::function<double(const Eigen::Vector2d&)>& exact,
                             const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& exact_grad) {
  const int k = system.dofmap.degree;
  double l2 = 0.0;
  double h1 = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const ElementGeometry geom = element_geometry(mesh.cell_polygon(c));
    const MomentTable moments = monomial_moments(geom, k);
    const PinablaProjector projector = build_projector_pinabla(geom, moments, k);
    const ScaledMonomialBasis basis(k, geom);

    const Eigen::VectorXd local = gather_interior_to_local(system.dofmap, c, u_interior);
    const Eigen::VectorXd coeffs = projector.star * local;

    for (const QuadraturePoint2D& q : polygon_quadrature(geom, 2 * k + 8)) {
      double value = 0.0;
      Eigen::Vector2d grad = Eigen::Vector2d::Zero();
      for (int b = 0; b < basis.size(); ++b) {
        value += coeffs[b] * basis.value(b, q.point);
        grad += coeffs[b] * basis.gradient(b, q.point);
      }
      const double dv = value - exact(q.point);
      const Eigen::Vector2d dg = grad - exact_grad(q.point);
      l2 += q.weight * dv * dv;
      h1 += q.weight * dg.squaredNorm();
    }
  }
  return {std::sqrt(std::abs(l2)), std::sqrt(std::abs(h1))};
}

} // namespace vemeig
