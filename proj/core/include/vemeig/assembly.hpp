#pragma once

#include "vemeig/local_element.hpp"
#include "vemeig/mesh.hpp"

#include <Eigen/Sparse>
#include <string>
#include <vector>

namespace vemeig {

enum class DofKind { Vertex, Edge, Internal };

/// Map from per-element local DOFs to a global numbering:
/// vertices, then (k-1) DOFs per mesh edge ordered along the canonical
/// (min vertex -> max vertex) direction, then cell moments. Boundary vertex
/// and boundary edge DOFs are eliminated; the pencil lives on the interior
/// numbering.
struct GlobalDofMap {
  int degree = 0;
  int total_dofs = 0;
  int boundary_dofs = 0;
  int interior_dofs = 0; // N_h

  std::vector<std::vector<int>> cell_to_global; // full numbering
  std::vector<int> full_to_interior;            // -1 for eliminated DOFs
  std::vector<int> interior_to_full;
  std::vector<DofKind> kind;                    // by full index
};

GlobalDofMap build_dof_map(const PolygonalMesh& mesh, int k);

/// Symmetric sparse matrix; symmetry is exact by construction (each element
/// block is symmetrized before accumulation and every (i,j) entry receives
/// the same contributions as (j,i), in the same order).
struct SparseSymmetric {
  Eigen::SparseMatrix<double> mat;

  int dim() const { return static_cast<int>(mat.rows()); }
  std::size_t non_zeros() const { return static_cast<std::size_t>(mat.nonZeros()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return mat * x; }

  /// Densification, guarded by a capacity threshold.
  Eigen::MatrixXd to_dense(int max_dim = 20000) const;
};

struct AssembledSystem {
  SparseSymmetric stiffness; // A, SPD on interior DOFs
  SparseSymmetric mass;      // B, PSD (possibly singular)
  GlobalDofMap dofmap;
};

/// Assemble the interior-DOF pencil for the Laplace eigenproblem with
/// dofi-dofi stabilized stiffness and unstabilized mass.
AssembledSystem assemble(const PolygonalMesh& mesh, int k, double alpha = 1.0);

/// Symmetric coordinate MatrixMarket export (lower triangle, 1-based).
void write_matrix_market(const SparseSymmetric& matrix, const std::string& path);

} // namespace vemeig
