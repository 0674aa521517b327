#include "vemeig/rank.hpp"

#include "vemeig/errors.hpp"

#include <Eigen/OrderingMethods>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace vemeig {

namespace {

constexpr double kNegativeTol = 1e-10;

double max_diagonal(const Eigen::VectorXd& diag) {
  double m = 0.0;
  for (int i = 0; i < diag.size(); ++i) m = std::max(m, diag[i]);
  return m;
}

} // namespace

double RankResult::pivot_gap_ratio() const {
  if (rank == 0) return 0.0;
  if (rank == dim || max_dropped_pivot <= 0.0)
    return std::numeric_limits<double>::infinity();
  return min_kept_pivot / max_dropped_pivot;
}

// Blocked max-diagonal pivoted Cholesky (the dpstrf scheme): pivots are
// chosen on incrementally updated diagonals, panel columns update inside the
// panel, and each finished panel hits the trailing matrix with one rank-nb
// update. Stops as soon as every remaining pivot is at or below the
// threshold, so heavily rank-deficient matrices cost only O(n^2 r).
RankResult rank_pivoted_cholesky_dense(Eigen::MatrixXd matrix) {
  const int n = static_cast<int>(matrix.rows());
  RankResult result;
  result.dim = n;
  if (n == 0) return result;

  const double max_diag = max_diagonal(matrix.diagonal());
  result.threshold = n * std::numeric_limits<double>::epsilon() * max_diag;
  result.min_kept_pivot = std::numeric_limits<double>::infinity();

  const int block = 64;
  Eigen::VectorXd dots = Eigen::VectorXd::Zero(n); // panel-local diagonal updates
  int rank = n;

  for (int k0 = 0; k0 < n && rank == n; k0 += block) {
    const int jb = std::min(block, n - k0);
    dots.segment(k0, n - k0).setZero();
    int j = k0;
    for (; j < k0 + jb; ++j) {
      int p = j;
      double pivot = matrix(j, j) - dots[j];
      for (int i = j + 1; i < n; ++i) {
        const double candidate = matrix(i, i) - dots[i];
        if (candidate > pivot) {
          pivot = candidate;
          p = i;
        }
      }
      if (pivot < -kNegativeTol * std::max(max_diag, 1e-300))
        throw NumericalError("pivoted Cholesky: matrix is not positive semidefinite (pivot " +
                             std::to_string(pivot) + ")");
      if (pivot <= result.threshold) {
        result.max_dropped_pivot = std::max(0.0, pivot);
        rank = j;
        break;
      }
      if (p != j) {
        matrix.row(j).swap(matrix.row(p));
        matrix.col(j).swap(matrix.col(p));
        std::swap(dots[j], dots[p]);
      }
      result.min_kept_pivot = std::min(result.min_kept_pivot, pivot);

      // Apply the panel columns k0..j-1 to column j, then scale.
      const int tail = n - j;
      const int done = j - k0;
      if (done > 0) {
        matrix.block(j, j, tail, 1).noalias() -=
            matrix.block(j, k0, tail, done) * matrix.block(j, k0, 1, done).transpose();
      }
      const double root = std::sqrt(pivot);
      matrix(j, j) = root;
      if (tail > 1) {
        matrix.block(j + 1, j, tail - 1, 1) /= root;
        dots.segment(j + 1, tail - 1) +=
            matrix.block(j + 1, j, tail - 1, 1).array().square().matrix();
      }
    }
    // Trailing update with the finished panel, lower triangle then mirrored
    // so the row/column pivot swaps stay consistent.
    const int finished = std::min(j, k0 + jb) - k0;
    const int t0 = k0 + finished;
    const int tn = n - t0;
    if (finished > 0 && tn > 0 && rank == n) {
      auto trailing = matrix.block(t0, t0, tn, tn);
      trailing.selfadjointView<Eigen::Lower>().rankUpdate(
          matrix.block(t0, k0, tn, finished), -1.0);
      trailing.triangularView<Eigen::StrictlyUpper>() = trailing.transpose();
    }
  }

  result.rank = rank;
  if (rank == 0) result.min_kept_pivot = std::numeric_limits<double>::infinity();
  return result;
}

RankResult rank_thresholded_ldlt_sparse(const Eigen::SparseMatrix<double>& matrix) {
  const int n = static_cast<int>(matrix.rows());
  RankResult result;
  result.dim = n;
  if (n == 0) return result;

  const double max_diag = max_diagonal(Eigen::VectorXd(matrix.diagonal()));
  result.threshold = n * std::numeric_limits<double>::epsilon() * max_diag;
  result.min_kept_pivot = std::numeric_limits<double>::infinity();

  // AMD fill-reducing order, then work on the upper triangle of P B P^T.
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
  Eigen::AMDOrdering<int> ordering;
  Eigen::SparseMatrix<double> pattern = matrix;
  ordering(pattern.selfadjointView<Eigen::Lower>(), perm);
  Eigen::SparseMatrix<double> permuted;
  permuted = matrix.selfadjointView<Eigen::Lower>().twistedBy(
      Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int>(perm.inverse()));
  Eigen::SparseMatrix<double> upper = permuted.triangularView<Eigen::Upper>();
  upper.makeCompressed();

  const int* col_ptr = upper.outerIndexPtr();
  const int* row_idx = upper.innerIndexPtr();
  const double* values = upper.valuePtr();

  // Elimination tree and L column counts (symbolic pass).
  std::vector<int> parent(n, -1), ancestor(n, -1), flag(n, -1);
  std::vector<int> l_count(n, 0);
  for (int k = 0; k < n; ++k) {
    flag[k] = k;
    for (int p = col_ptr[k]; p < col_ptr[k + 1]; ++p) {
      int i = row_idx[p];
      if (i >= k) continue;
      // Walk from i to the root of the partially built tree.
      for (; flag[i] != k; i = ancestor[i]) {
        if (ancestor[i] == -1) {
          ancestor[i] = k;
          if (parent[i] == -1) parent[i] = k;
        }
        ++l_count[i];
        flag[i] = k;
      }
    }
  }

  std::vector<int> l_col_ptr(n + 1, 0);
  for (int i = 0; i < n; ++i) l_col_ptr[i + 1] = l_col_ptr[i] + l_count[i];
  std::vector<int> l_row(static_cast<std::size_t>(l_col_ptr[n]));
  std::vector<double> l_val(static_cast<std::size_t>(l_col_ptr[n]));
  std::vector<int> l_next(n, 0);
  for (int i = 0; i < n; ++i) l_next[i] = l_col_ptr[i];

  std::vector<double> diag(n, 0.0);
  std::vector<char> dead(n, 0);
  std::vector<double> work(n, 0.0);
  std::vector<int> pattern_stack(n, 0);
  std::fill(flag.begin(), flag.end(), -1);

  int rank = 0;
  for (int k = 0; k < n; ++k) {
    // Nonzero pattern of row k of L: union of etree paths from the entries
    // of column k of the upper triangle, in topological order.
    int top = n;
    flag[k] = k;
    double dk = 0.0;
    for (int p = col_ptr[k]; p < col_ptr[k + 1]; ++p) {
      const int i = row_idx[p];
      if (i > k) continue;
      if (i == k) {
        dk += values[p];
        continue;
      }
      work[i] += values[p];
      int len = 0;
      for (int t = i; flag[t] != k; t = parent[t]) {
        pattern_stack[len++] = t;
        flag[t] = k;
      }
      while (len > 0) pattern_stack[--top] = pattern_stack[--len];
    }

    // Sparse triangular solve against the rows already factored.
    for (; top < n; ++top) {
      const int i = pattern_stack[top];
      const double yi = work[i];
      work[i] = 0.0;
      const int p2 = l_next[i];
      double lki = 0.0;
      if (!dead[i]) {
        lki = yi / diag[i];
        dk -= lki * yi;
      }
      for (int p = l_col_ptr[i]; p < p2; ++p) work[l_row[p]] -= l_val[p] * yi;
      l_row[p2] = k;
      l_val[p2] = lki;
      ++l_next[i];
    }

    // A clearly negative pivot in the fixed ordering means either an
    // indefinite matrix or an elimination that went unstable across a large
    // kernel; both are for the pivoted fallback to decide. Bail out.
    if (dk < -kNegativeTol * std::max(max_diag, 1e-300)) {
      result.trustworthy = false;
      result.rank = rank;
      return result;
    }
    if (dk <= result.threshold) {
      dead[k] = 1;
      diag[k] = 0.0;
      result.max_dropped_pivot = std::max(result.max_dropped_pivot, std::max(dk, 0.0));
    } else {
      diag[k] = dk;
      result.min_kept_pivot = std::min(result.min_kept_pivot, dk);
      ++rank;
    }
  }

  result.rank = rank;
  if (rank == 0) result.min_kept_pivot = std::numeric_limits<double>::infinity();
  return result;
}

} // namespace vemeig
