#include "vemeig/eigensolve.hpp"

#include "vemeig/errors.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vemeig {

RankResult kernel_rank_result(const SparseSymmetric& B, int dense_limit) {
  if (B.dim() <= dense_limit) return rank_pivoted_cholesky_dense(B.to_dense());
  const RankResult result = rank_thresholded_ldlt_sparse(B.mat);
  // The unpivoted sparse route is only trusted when the pivot split is
  // unambiguous; otherwise redo the work with full diagonal pivoting.
  const bool ambiguous =
      !result.trustworthy || (result.kernel_dim() > 0 && result.pivot_gap_ratio() < 1e3);
  if (ambiguous) {
    if (B.dim() <= 24000) return rank_pivoted_cholesky_dense(B.to_dense(B.dim()));
    throw NumericalError("kernel_dimension: ambiguous pivot split (gap ratio " +
                         std::to_string(result.pivot_gap_ratio()) +
                         ") on a matrix too large for the dense fallback");
  }
  return result;
}

int kernel_dimension(const SparseSymmetric& B, int dense_limit) {
  return kernel_rank_result(B, dense_limit).kernel_dim();
}

namespace {

constexpr double kNotPsdTol = 1e-10;

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double normalish() { return static_cast<double>(next() >> 11) * 0x1.0p-53 - 0.5; }
};

PencilSolution solve_pencil_dense(const SparseSymmetric& A, const SparseSymmetric& B,
                                  int num_wanted, const PencilOptions& options) {
  const int n = A.dim();
  PencilSolution sol;
  sol.dim = n;
  sol.dense_path = true;

  const Eigen::MatrixXd a_dense = A.to_dense(std::max(options.dense_threshold, n));
  const Eigen::MatrixXd b_dense = B.to_dense(std::max(options.dense_threshold, n));
  Eigen::LLT<Eigen::MatrixXd> llt(a_dense);
  if (llt.info() != Eigen::Success)
    throw NumericalError("pencil: stiffness matrix is not positive definite (lost coercivity)");

  // M = L^-1 B L^-T shares the finite spectrum with the pencil via mu = 1/lambda.
  Eigen::MatrixXd m = llt.matrixL().solve(b_dense);
  m = llt.matrixL().solve(m.transpose()).eval();
  m = (0.5 * (m + m.transpose())).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      m, options.want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& mu = es.eigenvalues(); // ascending
  const double mu_max = mu[n - 1];
  if (mu_max <= 0.0) throw NumericalError("pencil: mass matrix vanishes");
  if (mu[0] < -kNotPsdTol * mu_max)
    throw NumericalError("pencil: mass matrix is not positive semidefinite (mu_min " +
                         std::to_string(mu[0]) + ")");

  sol.tau_eig = n * std::numeric_limits<double>::epsilon() * mu_max;
  sol.mu_min = mu[0];
  sol.mu_max = mu_max;
  int kernel = 0;
  while (kernel < n && mu[kernel] <= sol.tau_eig) ++kernel;
  sol.kernel_dim = kernel;
  sol.spectral_kernel_dim = kernel;
  if (kernel == 0) {
    sol.kernel_gap_ratio = std::numeric_limits<double>::infinity();
  } else {
    const double dropped = std::max(std::abs(mu[kernel - 1]), 1e-300);
    sol.kernel_gap_ratio = mu[kernel] / dropped;
  }

  if (num_wanted > sol.finite_count())
    throw ParameterError("pencil: requested " + std::to_string(num_wanted) +
                         " eigenvalues but only " + std::to_string(sol.finite_count()) +
                         " finite ones exist");

  sol.eigenvalues.resize(num_wanted);
  for (int i = 0; i < num_wanted; ++i) sol.eigenvalues[i] = 1.0 / mu[n - 1 - i];

  if (options.want_vectors) {
    sol.eigenvectors.resize(n, num_wanted);
    sol.residuals.resize(num_wanted);
    for (int i = 0; i < num_wanted; ++i) {
      Eigen::VectorXd x = llt.matrixL().transpose().solve(es.eigenvectors().col(n - 1 - i));
      x.normalize();
      sol.eigenvectors.col(i) = x;
      const Eigen::VectorXd ax = A.apply(x);
      sol.residuals[i] = (ax - sol.eigenvalues[i] * B.apply(x)).norm() / ax.norm();
    }
  }
  return sol;
}

// Lanczos with full reorthogonalization, locking, and deflated restart
// sweeps. A sweep starts from a random vector orthogonal to every locked
// eigenvector, so its Krylov space lives in the remaining invariant subspace;
// once the top of that subspace converges below the num_wanted-th locked
// value, the locked set provably leads the spectrum. Hidden second copies of
// multiple eigenvalues surface as fresh top eigenvalues of a later sweep, so
// multiplicities cannot be missed.
class TopLanczos {
public:
  TopLanczos(std::function<Eigen::VectorXd(const Eigen::VectorXd&)> op, int n,
             const PencilOptions& options)
      : op_(std::move(op)), n_(n), options_(options), rng_(options.lanczos_seed) {}

  void run(int num_wanted) {
    const int max_passes = 32;
    for (int pass = 0; pass < max_passes; ++pass) {
      if (run_single_pass(num_wanted) && converged_count() >= num_wanted) return;
      if (converged_count() >= n_) return;
      if (total_iterations_ >= options_.max_lanczos_iterations)
        throw NumericalError("lanczos: iteration budget exhausted with " +
                             std::to_string(converged_count()) + " converged eigenvalues");
    }
    throw NumericalError("lanczos: restart sweep budget exhausted");
  }

  std::vector<double> top_values(int count) const {
    std::vector<int> order = sorted_order();
    std::vector<double> vals(count);
    for (int i = 0; i < count; ++i) vals[i] = locked_values_[order[i]];
    return vals;
  }

  Eigen::MatrixXd top_vectors(int count) const {
    std::vector<int> order = sorted_order();
    Eigen::MatrixXd vecs(n_, count);
    for (int i = 0; i < count; ++i) vecs.col(i) = locked_vectors_.col(order[i]);
    return vecs;
  }

  int converged_count() const { return static_cast<int>(locked_values_.size()); }
  int iterations() const { return total_iterations_; }

private:
  std::vector<int> sorted_order() const {
    std::vector<int> order(locked_values_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return locked_values_[a] > locked_values_[b]; });
    return order;
  }

  /// num_wanted-th largest locked value; -inf while fewer are locked.
  double acceptance_line(int num_wanted) const {
    if (converged_count() < num_wanted) return -std::numeric_limits<double>::infinity();
    return locked_values_[sorted_order()[num_wanted - 1]];
  }

  Eigen::VectorXd random_start() {
    Eigen::VectorXd v(n_);
    for (int i = 0; i < n_; ++i) v[i] = rng_.normalish();
    orthogonalize_against_locked(v);
    const double norm = v.norm();
    if (norm <= 0.0) throw NumericalError("lanczos: degenerate start vector");
    return v / norm;
  }

  void orthogonalize_against_locked(Eigen::VectorXd& v) const {
    if (locked_vectors_.cols() == 0) return;
    v -= locked_vectors_ * (locked_vectors_.transpose() * v);
    v -= locked_vectors_ * (locked_vectors_.transpose() * v);
  }

  void lock(double value, Eigen::VectorXd vector) {
    locked_values_.push_back(value);
    locked_vectors_.conservativeResize(n_, locked_vectors_.cols() + 1);
    locked_vectors_.col(locked_vectors_.cols() - 1) = std::move(vector);
  }

  /// One Krylov sweep. Returns true when it certified that nothing above the
  /// acceptance line remains outside the locked set.
  bool run_single_pass(int num_wanted) {
    const int locked0 = converged_count();
    const int still_needed = std::max(1, num_wanted - locked0);
    const int m_cap = std::min({n_ - locked0, std::max(60, 12 * still_needed + 140),
                                options_.max_lanczos_iterations - total_iterations_});
    if (m_cap < 1) return false;

    Eigen::MatrixXd basis(n_, m_cap + 1);
    std::vector<double> alpha, beta;
    alpha.reserve(m_cap);
    beta.reserve(m_cap);
    basis.col(0) = random_start();

    int m = 0;
    while (m < m_cap) {
      Eigen::VectorXd w = op_(basis.col(m));
      ++total_iterations_;
      const double a = basis.col(m).dot(w);
      alpha.push_back(a);
      w -= a * basis.col(m);
      if (m > 0) w -= beta[m - 1] * basis.col(m - 1);
      // Full reorthogonalization, twice, against the pass basis and the locks.
      for (int sweep = 0; sweep < 2; ++sweep) {
        w -= basis.leftCols(m + 1) * (basis.leftCols(m + 1).transpose() * w);
        orthogonalize_against_locked(w);
      }
      const double b = w.norm();
      ++m;

      const bool breakdown = b < 1e-13;
      if (breakdown || m == m_cap || m % 6 == 0) {
        if (harvest(basis, alpha, beta, m, breakdown ? 0.0 : b, num_wanted)) return true;
        // A breakdown means the Krylov space went invariant: everything in it
        // is harvested, but completeness still needs a fresh certified sweep.
        if (breakdown) return false;
      }
      if (m < m_cap) {
        beta.push_back(b);
        basis.col(m) = w / b;
      }
    }
    return false;
  }

  /// Rayleigh-Ritz on the current tridiagonal matrix. Locks converged pairs
  /// from the top down; certifies completeness when a converged, genuinely
  /// new Ritz value lands strictly below the acceptance line.
  bool harvest(const Eigen::MatrixXd& basis, const std::vector<double>& alpha,
               const std::vector<double>& beta, int m, double next_beta, int num_wanted) {
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) tri(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) {
      tri(i, i + 1) = beta[i];
      tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    if (es.info() != Eigen::Success) throw NumericalError("lanczos: tridiagonal solve failed");

    double scale = es.eigenvalues()[m - 1];
    for (double v : locked_values_) scale = std::max(scale, v);
    const double tol = options_.lanczos_tol * std::max(scale, 1e-300);

    for (int r = m - 1; r >= 0; --r) {
      const double theta = es.eigenvalues()[r];
      const double resid = std::abs(next_beta * es.eigenvectors()(m - 1, r));
      if (resid > tol) return false; // cannot see past an unconverged value
      Eigen::VectorXd x = basis.leftCols(m) * es.eigenvectors().col(r);
      orthogonalize_against_locked(x);
      const double norm = x.norm();
      if (norm < 0.5) continue; // already represented among the locks
      const double line = acceptance_line(num_wanted);
      if (theta < line - std::max(tol, 1e-12 * std::abs(line))) {
        // Converged, new, and strictly below the line: nothing above the
        // line remains in this deflated subspace.
        return converged_count() >= num_wanted;
      }
      lock(theta, x / norm);
    }
    return false; // whole basis locked; let a fresh sweep certify
  }

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> op_;
  int n_;
  PencilOptions options_;
  SplitMix64 rng_;
  std::vector<double> locked_values_;
  Eigen::MatrixXd locked_vectors_;
  int total_iterations_ = 0;
};

PencilSolution solve_pencil_lanczos(const SparseSymmetric& A, const SparseSymmetric& B,
                                    int num_wanted, const PencilOptions& options) {
  const int n = A.dim();
  PencilSolution sol;
  sol.dim = n;
  sol.dense_path = false;

  sol.kernel_dim = options.known_kernel_dim >= 0 ? options.known_kernel_dim
                                                 : kernel_rank_result(B).kernel_dim();
  if (num_wanted > sol.finite_count())
    throw ParameterError("pencil: requested " + std::to_string(num_wanted) +
                         " eigenvalues but only " + std::to_string(sol.finite_count()) +
                         " finite ones exist");
  if (num_wanted == 0) return sol;

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(A.mat);
  if (llt.info() != Eigen::Success)
    throw NumericalError("pencil: stiffness matrix is not positive definite (lost coercivity)");

  const auto apply_m = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd u = llt.matrixU().solve(v);
    Eigen::VectorXd a = llt.permutationPinv() * u;
    Eigen::VectorXd b = B.mat * a;
    Eigen::VectorXd c = llt.permutationP() * b;
    return llt.matrixL().solve(c);
  };

  TopLanczos lanczos(apply_m, n, options);
  lanczos.run(num_wanted);
  sol.lanczos_iterations = lanczos.iterations();

  const std::vector<double> mu = lanczos.top_values(num_wanted);
  const double mu_max = mu.front();
  sol.tau_eig = n * std::numeric_limits<double>::epsilon() * mu_max;
  sol.mu_min = std::numeric_limits<double>::quiet_NaN();
  sol.mu_max = mu_max;
  sol.kernel_gap_ratio = std::numeric_limits<double>::quiet_NaN();
  sol.eigenvalues.resize(num_wanted);
  for (int i = 0; i < num_wanted; ++i) {
    if (mu[i] <= sol.tau_eig)
      throw NumericalError("lanczos: converged into the kernel cluster; rank detection disagrees");
    sol.eigenvalues[i] = 1.0 / mu[i];
  }

  if (options.want_vectors) {
    const Eigen::MatrixXd y = lanczos.top_vectors(num_wanted);
    sol.eigenvectors.resize(n, num_wanted);
    sol.residuals.resize(num_wanted);
    for (int i = 0; i < num_wanted; ++i) {
      Eigen::VectorXd x = llt.permutationPinv() * Eigen::VectorXd(llt.matrixU().solve(y.col(i)));
      x.normalize();
      sol.eigenvectors.col(i) = x;
      const Eigen::VectorXd ax = A.apply(x);
      sol.residuals[i] = (ax - sol.eigenvalues[i] * B.apply(x)).norm() / ax.norm();
    }
  }
  return sol;
}

} // namespace

PencilSolution solve_pencil(const SparseSymmetric& A, const SparseSymmetric& B, int num_wanted,
                            const PencilOptions& options) {
  if (A.dim() != B.dim()) throw ParameterError("pencil: dimension mismatch");
  if (num_wanted < 0) throw ParameterError("pencil: negative eigenvalue count");
  if (A.dim() <= options.dense_threshold) return solve_pencil_dense(A, B, num_wanted, options);
  return solve_pencil_lanczos(A, B, num_wanted, options);
}

} // namespace vemeig
