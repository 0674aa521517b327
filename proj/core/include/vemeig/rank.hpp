#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace vemeig {

/// Outcome of a rank-revealing symmetric factorization of a PSD matrix.
/// Pivots at or below `threshold` are treated as kernel directions; the gap
/// between the weakest accepted and the strongest rejected pivot tells how
/// clean the split was.
struct RankResult {
  int dim = 0;
  int rank = 0;
  double threshold = 0.0;       // n * eps * max diagonal
  double min_kept_pivot = 0.0;  // +inf when rank == 0
  double max_dropped_pivot = 0.0;
  /// False when the factorization saw pivots it could not classify safely
  /// (unpivoted route only); callers should redo the work with pivoting.
  bool trustworthy = true;

  int kernel_dim() const { return dim - rank; }
  double pivot_gap_ratio() const;
};

/// Greedy max-diagonal pivoted Cholesky, stopping when every remaining
/// pivot falls at or below the threshold. Throws NumericalError if a
/// diagonal drops below -1e-10 * max_diag (the matrix is not PSD).
RankResult rank_pivoted_cholesky_dense(Eigen::MatrixXd matrix);

/// Up-looking sparse LDL^T on the AMD-permuted matrix with threshold pivot
/// skipping: a pivot at or below the threshold marks an exact kernel column
/// (valid for PSD matrices, where a vanishing pivot forces a vanishing
/// column). Cost is that of a sparse Cholesky.
RankResult rank_thresholded_ldlt_sparse(const Eigen::SparseMatrix<double>& matrix);

} // namespace vemeig
