#pragma once

#include "vemeig/assembly.hpp"
#include "vemeig/rank.hpp"

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

namespace vemeig {

/// dim(ker B) = N_h - rank(B), by rank-revealing symmetric factorization.
/// Dense pivoted Cholesky below dense_limit, thresholded sparse LDL^T above.
int kernel_dimension(const SparseSymmetric& B, int dense_limit = 1024);
RankResult kernel_rank_result(const SparseSymmetric& B, int dense_limit = 1024);

struct PencilOptions {
  /// Matrices up to this size take the dense full-spectrum route; larger
  /// pencils go through Cholesky + Lanczos for the top of L^-1 B L^-T.
  int dense_threshold = 2000;
  bool want_vectors = false;
  /// dim(ker B) when the caller already computed it; spares the iterative
  /// path its own rank factorization. Negative means unknown.
  int known_kernel_dim = -1;
  /// Residual target for Lanczos Ritz pairs, relative to mu_max.
  double lanczos_tol = 1e-12;
  std::uint64_t lanczos_seed = 0x5eed;
  int max_lanczos_iterations = 2000;
};

/// Finite part of the spectrum of A x = lambda B x with A SPD and B PSD.
/// Zero modes of M = L^-1 B L^-T (the kernel of b_h) carry lambda = infinity
/// and are never returned; `kernel_dim` counts them.
struct PencilSolution {
  int dim = 0;                     // N_h
  int kernel_dim = 0;              // dim K_b
  std::vector<double> eigenvalues; // finite lambda, ascending
  double tau_eig = 0.0;            // mu classification threshold
  /// Smallest kept mu over largest dropped mu (dense path); +inf for an
  /// empty kernel, NaN when the full spectrum was not computed.
  double kernel_gap_ratio = 0.0;
  int spectral_kernel_dim = -1;    // dense path only; -1 otherwise
  double mu_min = 0.0;             // dense path: smallest mu (0 if kernel)
  double mu_max = 0.0;             // largest mu = 1 / smallest lambda
  bool dense_path = true;
  int lanczos_iterations = 0;

  Eigen::MatrixXd eigenvectors;    // columns match eigenvalues, if requested
  std::vector<double> residuals;   // ||A x - lambda B x|| / ||A x||

  int finite_count() const { return dim - kernel_dim; }
};

PencilSolution solve_pencil(const SparseSymmetric& A, const SparseSymmetric& B, int num_wanted,
                            const PencilOptions& options = {});

/// Discrete source problem a_h(u_h, v_h) = b_h(f, v_h) for f given as a
/// function; the right hand side uses the elementwise L2 projection of f.
/// Returns the interior DOF vector.
Eigen::VectorXd solve_source(const PolygonalMesh& mesh, const AssembledSystem& system,
                             const std::function<double(const Eigen::Vector2d&)>& f);

/// Same problem with discrete data f_h (interior DOF vector): rhs = B f_h.
Eigen::VectorXd solve_source_discrete(const AssembledSystem& system, const Eigen::VectorXd& f_dofs);

struct FieldError {
  double l2 = 0.0;
  double h1_seminorm = 0.0;
};

/// Errors of the computable reconstruction Pi-nabla u_h against an exact
/// field, integrated elementwise on a triangulated copy of each polygon.
FieldError projection_errors(const PolygonalMesh& mesh, const AssembledSystem& system,
                             const Eigen::VectorXd& u_interior,
                             const std::function<double(const Eigen::Vector2d&)>& exact,
                             const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& exact_grad);

} // namespace vemeig
