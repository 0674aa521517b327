#include "vemeig/study.hpp"

#include "vemeig/errors.hpp"
#include "vemeig/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace vemeig {

std::string StudyLevel::label() const {
  if (m >= 0) return std::to_string(n) + "x" + std::to_string(m);
  return std::to_string(n);
}

void StudyConfig::validate() const {
  if (levels.empty()) throw ParameterError("study: no levels given");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const bool increasing = levels[i].n > levels[i - 1].n ||
                            (levels[i].n == levels[i - 1].n && levels[i].m > levels[i - 1].m);
    if (!increasing) throw ParameterError("study: levels must be strictly increasing");
  }
  if (degrees.empty()) throw ParameterError("study: no degrees given");
  for (int k : degrees)
    if (k < 1 || k > 4) throw ParameterError("study: degree " + std::to_string(k) + " out of range");
  if (num_eigs < 1) throw ParameterError("study: need at least one eigenvalue");
  if (alpha <= 0.0) throw ParameterError("study: stabilization parameter must be positive");
}

PolygonalMesh make_family_mesh(MeshFamilyKind family, const StudyLevel& level,
                               std::uint64_t seed, int lloyd_iters) {
  switch (family) {
    case MeshFamilyKind::Voronoi:
      return generate_voronoi(level.n, seed, lloyd_iters);
    case MeshFamilyKind::Hexagon: {
      if (level.m < 0) throw ParameterError("hexagon level needs the n x m pair");
      return generate_structured(family, level.n, level.m);
    }
    default:
      return generate_structured(family, level.n);
  }
}

std::vector<double> exact_laplace_eigenvalues(int count) {
  std::vector<double> values;
  // i, j <= 64 covers far more than any requested window here.
  const int cap = 64;
  values.reserve(cap * cap);
  for (int i = 1; i <= cap; ++i)
    for (int j = 1; j <= cap; ++j) values.push_back(static_cast<double>(i * i + j * j));
  std::sort(values.begin(), values.end());
  if (count > static_cast<int>(values.size()))
    throw ParameterError("exact_laplace_eigenvalues: count too large");
  values.resize(count);
  return values;
}

double convergence_rate(double e_prev, double e_cur, double h_prev, double h_cur) {
  return std::log(e_prev / e_cur) / std::log(h_prev / h_cur);
}

KernelTable run_kernel_study(const StudyConfig& config) {
  config.validate();
  KernelTable table;
  table.family = config.family;
  table.levels = config.levels;
  table.degrees = config.degrees;
  table.entries.assign(config.levels.size(),
                       std::vector<std::pair<int, int>>(config.degrees.size(), {0, 0}));

  const int cases = static_cast<int>(config.levels.size() * config.degrees.size());
  parallel_for(cases, [&](int index) {
    const int li = index / static_cast<int>(config.degrees.size());
    const int ki = index % static_cast<int>(config.degrees.size());
    const PolygonalMesh mesh =
        make_family_mesh(config.family, config.levels[li], config.seed, config.lloyd_iters);
    const AssembledSystem system = assemble(mesh, config.degrees[ki], config.alpha);
    const int kernel = kernel_dimension(system.mass);
    table.entries[li][ki] = {kernel, system.dofmap.interior_dofs};
  });
  return table;
}

SpectralReport run_convergence(const StudyConfig& config, int degree) {
  config.validate();
  SpectralReport report;
  report.family = config.family;
  report.degree = degree;
  report.num_eigs = config.num_eigs;
  report.exact_over_pi2 = exact_laplace_eigenvalues(config.num_eigs);
  report.levels.resize(config.levels.size());

  const double pi2 = M_PI * M_PI;
  parallel_for(static_cast<int>(config.levels.size()), [&](int li) {
    LevelResult& result = report.levels[li];
    result.level = config.levels[li];
    const PolygonalMesh mesh =
        make_family_mesh(config.family, result.level, config.seed, config.lloyd_iters);
    result.h = mesh.h_max();
    const AssembledSystem system = assemble(mesh, degree, config.alpha);
    result.dim_vh = system.dofmap.interior_dofs;

    const int kernel = kernel_dimension(system.mass);
    const int wanted = std::min(config.num_eigs, system.dofmap.interior_dofs - kernel);
    PencilOptions options = config.pencil;
    options.known_kernel_dim = kernel;
    const PencilSolution solution = solve_pencil(system.stiffness, system.mass, wanted, options);
    result.kernel_dim = kernel;

    result.computed_over_pi2.resize(wanted);
    result.errors.resize(wanted);
    result.at_floor.resize(wanted);
    for (int i = 0; i < wanted; ++i) {
      result.computed_over_pi2[i] = solution.eigenvalues[i] / pi2;
      result.errors[i] = std::abs(result.computed_over_pi2[i] - report.exact_over_pi2[i]);
      result.at_floor[i] = result.errors[i] < kPrecisionFloor;
    }
  });

  for (std::size_t li = 0; li < report.levels.size(); ++li) {
    LevelResult& result = report.levels[li];
    result.rates.assign(result.errors.size(), std::numeric_limits<double>::quiet_NaN());
    if (li == 0) continue;
    const LevelResult& prev = report.levels[li - 1];
    for (std::size_t i = 0; i < result.errors.size() && i < prev.errors.size(); ++i) {
      if (prev.errors[i] > 0 && result.errors[i] > 0)
        result.rates[i] = convergence_rate(prev.errors[i], result.errors[i], prev.h, result.h);
    }
  }
  return report;
}

namespace {

std::string format_double(const char* fmt, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), fmt, value);
  return buffer;
}

std::string exact_label(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", value);
  return buffer;
}

} // namespace

std::string kernel_table_to_markdown(const KernelTable& table) {
  std::ostringstream out;
  out << "# dim K_b (N_h), " << family_name(table.family) << " family\n\n";
  out << "| level |";
  for (int k : table.degrees) out << " k=" << k << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < table.degrees.size(); ++i) out << "---|";
  out << "\n";
  for (std::size_t li = 0; li < table.levels.size(); ++li) {
    out << "| " << table.levels[li].label() << " |";
    for (std::size_t ki = 0; ki < table.degrees.size(); ++ki) {
      out << " " << table.entries[li][ki].first << " (" << table.entries[li][ki].second << ") |";
    }
    out << "\n";
  }
  return out.str();
}

std::string kernel_table_to_csv(const KernelTable& table) {
  std::ostringstream out;
  out << "family,level,k,kernel_dim,dim_Vh\n";
  for (std::size_t li = 0; li < table.levels.size(); ++li)
    for (std::size_t ki = 0; ki < table.degrees.size(); ++ki)
      out << family_name(table.family) << "," << table.levels[li].label() << ","
          << table.degrees[ki] << "," << table.entries[li][ki].first << ","
          << table.entries[li][ki].second << "\n";
  return out.str();
}

std::string report_to_markdown(const SpectralReport& report) {
  std::ostringstream out;
  out << "# First " << report.num_eigs << " eigenvalues, " << family_name(report.family)
      << " family, k=" << report.degree << "\n\n";
  out << "| Exact |";
  for (const LevelResult& level : report.levels) out << " " << level.level.label() << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < report.levels.size(); ++i) out << "---|";
  out << "\n|  | ";
  out << "Errors (rate)";
  for (std::size_t i = 1; i < report.levels.size(); ++i) out << " |";
  out << " |\n";
  for (int i = 0; i < report.num_eigs; ++i) {
    out << "| " << exact_label(report.exact_over_pi2[i]) << " |";
    for (const LevelResult& level : report.levels) {
      if (i >= static_cast<int>(level.errors.size())) {
        out << " - |";
        continue;
      }
      out << " " << format_double("%.1e", level.errors[i]);
      if (!std::isnan(level.rates[i])) out << " (" << format_double("%.2f", level.rates[i]) << ")";
      if (level.at_floor[i]) out << " *";
      out << " |";
    }
    out << "\n";
  }
  bool any_floor = false;
  for (const LevelResult& level : report.levels)
    for (bool f : level.at_floor) any_floor = any_floor || f;
  if (any_floor) out << "\n`*` precision floor: error below 1e-11, rate not meaningful\n";
  out << "\nkernel dim (N_h):";
  for (const LevelResult& level : report.levels)
    out << " " << level.kernel_dim << " (" << level.dim_vh << ")";
  out << "\n";
  return out.str();
}

std::string report_to_csv(const SpectralReport& report) {
  std::ostringstream out;
  out << "family,k,level,h,eig_index,exact_over_pi2,error_over_pi2,rate,kernel_dim,dim_Vh\n";
  for (const LevelResult& level : report.levels) {
    for (std::size_t i = 0; i < level.errors.size(); ++i) {
      out << family_name(report.family) << "," << report.degree << "," << level.level.label()
          << "," << format_double("%.12e", level.h) << "," << (i + 1) << ","
          << exact_label(report.exact_over_pi2[i]) << ","
          << format_double("%.6e", level.errors[i]) << ",";
      if (!std::isnan(level.rates[i])) out << format_double("%.4f", level.rates[i]);
      out << "," << level.kernel_dim << "," << level.dim_vh << "\n";
    }
  }
  return out.str();
}

std::string eigenvalues_to_csv(const PencilSolution& solution) {
  const double pi2 = M_PI * M_PI;
  const std::vector<double> exact =
      exact_laplace_eigenvalues(static_cast<int>(solution.eigenvalues.size()));
  std::ostringstream out;
  out << "index,exact_over_pi2,computed_over_pi2,abs_error_over_pi2\n";
  for (std::size_t i = 0; i < solution.eigenvalues.size(); ++i) {
    const double computed = solution.eigenvalues[i] / pi2;
    out << (i + 1) << "," << exact_label(exact[i]) << "," << format_double("%.12e", computed)
        << "," << format_double("%.6e", std::abs(computed - exact[i])) << "\n";
  }
  return out.str();
}

} // namespace vemeig
