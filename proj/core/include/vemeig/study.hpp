#pragma once

#include "vemeig/eigensolve.hpp"
#include "vemeig/mesh.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vemeig {

/// Refinement level: N for triangle/square/dyadic, the generator count for
/// Voronoi, the (n, m) hexagon counts for hexagonal meshes (m < 0 otherwise).
struct StudyLevel {
  int n = 0;
  int m = -1;
  std::string label() const;
};

enum class ReportFormat { Csv, Markdown };

struct StudyConfig {
  MeshFamilyKind family = MeshFamilyKind::Square;
  std::vector<StudyLevel> levels;
  std::vector<int> degrees = {1, 2, 3, 4};
  int num_eigs = 10;
  double alpha = 1.0;
  std::uint64_t seed = 1;
  int lloyd_iters = 3;
  ReportFormat format = ReportFormat::Markdown;
  PencilOptions pencil;

  void validate() const;
};

PolygonalMesh make_family_mesh(MeshFamilyKind family, const StudyLevel& level,
                               std::uint64_t seed = 1, int lloyd_iters = 3);

/// First `count` exact Dirichlet eigenvalues of the unit square divided by
/// pi^2: the sorted multiset {i^2 + j^2 : i, j >= 1}.
std::vector<double> exact_laplace_eigenvalues(int count);

/// log(e_prev / e_cur) / log(h_prev / h_cur).
double convergence_rate(double e_prev, double e_cur, double h_prev, double h_cur);

/// Errors below this sit in roundoff; rates there are meaningless.
constexpr double kPrecisionFloor = 1e-11;

struct KernelTable {
  MeshFamilyKind family;
  std::vector<StudyLevel> levels;
  std::vector<int> degrees;
  // entries[level][degree]: (dim K_b, N_h)
  std::vector<std::vector<std::pair<int, int>>> entries;
};

KernelTable run_kernel_study(const StudyConfig& config);

struct LevelResult {
  StudyLevel level;
  double h = 0.0;
  int dim_vh = 0;
  int kernel_dim = 0;
  std::vector<double> computed_over_pi2; // finite eigenvalues / pi^2, ascending
  std::vector<double> errors;            // |computed - exact| / pi^2 normalization
  std::vector<double> rates;             // NaN where undefined
  std::vector<bool> at_floor;
};

struct SpectralReport {
  MeshFamilyKind family;
  int degree = 0;
  int num_eigs = 0;
  std::vector<double> exact_over_pi2;
  std::vector<LevelResult> levels;
};

/// Eigenvalue errors and rates for one family and one degree across levels.
SpectralReport run_convergence(const StudyConfig& config, int degree);

std::string kernel_table_to_markdown(const KernelTable& table);
std::string kernel_table_to_csv(const KernelTable& table);
std::string report_to_markdown(const SpectralReport& report);
/// Pinned schema:
/// family,k,level,h,eig_index,exact_over_pi2,error_over_pi2,rate,kernel_dim,dim_Vh
std::string report_to_csv(const SpectralReport& report);

/// index, exact_over_pi2, computed_over_pi2, abs_error_over_pi2
std::string eigenvalues_to_csv(const PencilSolution& solution);

} // namespace vemeig
