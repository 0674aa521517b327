#pragma once

#include "vemeig/geometry.hpp"
#include "vemeig/monomials.hpp"

#include <Eigen/Dense>
#include <vector>

namespace vemeig {

/// Degree-of-freedom layout of the enhanced local space of order k on a
/// polygon with n_v vertices:
///   - values at the vertices (CCW),
///   - values at k-1 Gauss-Lobatto points interior to each edge (CCW, ordered
///     along the edge),
///   - scaled internal moments (1/|E|) \int_E v m_alpha, |alpha| <= k-2,
///     graded-lex.
struct DofLayout {
  int degree = 0;
  int num_vertices = 0;
  int per_edge = 0;     // k - 1
  int num_internal = 0; // k(k-1)/2
  int total = 0;        // N_E

  static DofLayout make(int k, int n_vertices);

  int vertex_dof(int v) const { return v; }
  int edge_dof(int edge, int node) const {
    return num_vertices + edge * per_edge + node;
  }
  int internal_dof(int moment) const {
    return num_vertices * degree + moment;
  }
};

/// All per-element matrices: DOFs of monomials (D), the energy projector in
/// coefficient (pinabla_star) and DOF (pinabla) form, the L2 projector
/// coefficients (pi0_star), and the stabilized stiffness / unstabilized mass
/// blocks.
struct LocalVemBlocks {
  DofLayout layout;
  ScaledMonomialBasis basis;
  Eigen::MatrixXd D;            // N_E x n_k
  Eigen::MatrixXd pinabla_star; // n_k x N_E
  Eigen::MatrixXd pinabla;      // N_E x N_E
  Eigen::MatrixXd pi0_star;     // n_k x N_E
  Eigen::MatrixXd stiffness;    // N_E x N_E
  Eigen::MatrixXd mass;         // N_E x N_E
};

/// Physical locations of the k-1 interior edge nodes, ordered from edge.start
/// to edge.end.
std::vector<Eigen::Vector2d> edge_dof_points(const EdgeGeometry& edge, int k);

/// DOF matrix D: row i holds dof_i applied to every scaled monomial.
Eigen::MatrixXd build_dof_matrix(const ElementGeometry& geom, const MomentTable& moments, int k);

struct PinablaProjector {
  Eigen::MatrixXd star;     // n_k x N_E
  Eigen::MatrixXd dof_form; // N_E x N_E
  Eigen::MatrixXd D;        // N_E x n_k
};

/// Energy projector: for any DOF vector v, star * v holds the scaled-monomial
/// coefficients of the H1 projection of v_h onto P_k(E). The right hand side
/// is integrated by parts; edge traces are known polynomials of the DOFs and
/// the volume term reads off internal moment DOFs.
PinablaProjector build_projector_pinabla(const ElementGeometry& geom,
                                         const MomentTable& moments, int k);

/// L2 projector coefficients. Moments of degree <= k-2 come from internal
/// DOFs; degrees k-1 and k are replaced by moments of the energy projection,
/// which is what the enhanced space constrains them to equal.
Eigen::MatrixXd build_projector_pi0(const ElementGeometry& geom, const MomentTable& moments,
                                    int k, const Eigen::MatrixXd& pinabla_star);

/// A_loc = pinabla_star^T Gt pinabla_star + alpha (I - pinabla)^T (I - pinabla)
/// (consistency term plus dofi-dofi stabilization of the complement).
Eigen::MatrixXd local_stiffness(const PinablaProjector& projector, const MomentTable& moments,
                                double alpha);

/// B_loc = pi0_star^T H pi0_star, with no stabilization term.
Eigen::MatrixXd local_mass(const Eigen::MatrixXd& pi0_star, const MomentTable& moments);

LocalVemBlocks build_local_blocks(const ElementGeometry& geom, int k, double alpha = 1.0);

} // namespace vemeig
