// vemeig: polygonal VEM studies for the Dirichlet Laplace eigenproblem on
// the unit square, with a stabilized stiffness form and an unstabilized mass
// form. Subcommands: mesh gen/validate/stats, kernel, eig, study, source.
#include "vemeig/assembly.hpp"
#include "vemeig/eigensolve.hpp"
#include "vemeig/errors.hpp"
#include "vemeig/mesh.hpp"
#include "vemeig/study.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace vemeig;

constexpr int kLargeDofCap = 20000;

struct PaperPreset {
  MeshFamilyKind family;
  int degree; // -1 for kernel tables
  std::vector<StudyLevel> levels;
};

std::vector<StudyLevel> structured_levels() {
  return {{4, -1}, {8, -1}, {16, -1}, {32, -1}, {64, -1}};
}
std::vector<StudyLevel> voronoi_levels() {
  return {{50, -1}, {100, -1}, {200, -1}, {400, -1}, {800, -1}};
}
std::vector<StudyLevel> hexagon_eig_levels() {
  return {{8, 10}, {18, 20}, {34, 40}, {52, 60}, {70, 80}};
}
std::vector<StudyLevel> hexagon_kernel_levels() {
  return {{8, 10}, {18, 20}, {26, 30}, {34, 40}, {44, 50}, {52, 60}, {60, 70}, {70, 80}};
}

std::optional<PaperPreset> paper_preset(const std::string& name) {
  if (name.size() == 3 && name[1] == 'k' && name[2] >= '1' && name[2] <= '4') {
    const int degree = name[2] - '0';
    switch (name[0]) {
      case 't': return PaperPreset{MeshFamilyKind::Triangle, degree, structured_levels()};
      case 's': return PaperPreset{MeshFamilyKind::Square, degree, structured_levels()};
      case 'd': return PaperPreset{MeshFamilyKind::Dyadic, degree, structured_levels()};
      case 'v': return PaperPreset{MeshFamilyKind::Voronoi, degree, voronoi_levels()};
      case 'h': return PaperPreset{MeshFamilyKind::Hexagon, degree, hexagon_eig_levels()};
      default: break;
    }
  }
  if (name.rfind("kernel", 0) == 0 && name.size() == 7) {
    switch (name[6]) {
      case 'T': return PaperPreset{MeshFamilyKind::Triangle, -1, structured_levels()};
      case 'S': return PaperPreset{MeshFamilyKind::Square, -1, structured_levels()};
      case 'D': return PaperPreset{MeshFamilyKind::Dyadic, -1, structured_levels()};
      case 'V': return PaperPreset{MeshFamilyKind::Voronoi, -1, voronoi_levels()};
      case 'H': return PaperPreset{MeshFamilyKind::Hexagon, -1, hexagon_kernel_levels()};
      default: break;
    }
  }
  return std::nullopt;
}

std::vector<StudyLevel> parse_levels(const std::vector<std::string>& tokens,
                                     MeshFamilyKind family) {
  std::vector<StudyLevel> levels;
  for (const std::string& token : tokens) {
    const auto cross = token.find('x');
    if (cross != std::string::npos) {
      levels.push_back({std::stoi(token.substr(0, cross)),
                        std::stoi(token.substr(cross + 1))});
    } else if (family == MeshFamilyKind::Hexagon) {
      // A bare hexagon number means m rows with the near-regular horizontal
      // count.
      const int m = std::stoi(token);
      levels.push_back({std::max(2, static_cast<int>(std::lround(m * std::sqrt(3.0) / 1.5))), m});
    } else {
      levels.push_back({std::stoi(token), -1});
    }
  }
  return levels;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw NumericalError("cannot open '" + path + "' for writing");
  out << text;
}

/// Drops levels whose pencil would exceed the dense-work cap unless --large.
std::vector<StudyLevel> gate_levels(const StudyConfig& config, int degree, bool large_ok) {
  std::vector<StudyLevel> kept;
  for (const StudyLevel& level : config.levels) {
    const PolygonalMesh mesh =
        make_family_mesh(config.family, level, config.seed, config.lloyd_iters);
    const GlobalDofMap map = build_dof_map(mesh, degree < 0 ? 4 : degree);
    if (!large_ok && map.interior_dofs > kLargeDofCap) {
      std::cerr << "note: skipping level " << level.label() << " (N_h = " << map.interior_dofs
                << " exceeds " << kLargeDofCap << "; pass --large to run it)\n";
      continue;
    }
    kept.push_back(level);
  }
  if (kept.empty()) throw ParameterError("all requested levels were gated out");
  return kept;
}

int run_mesh_gen(const std::string& kind, int n, int m, int p, std::uint64_t seed, int lloyd,
                 const std::string& output) {
  const MeshFamilyKind family = family_from_name(kind);
  PolygonalMesh mesh = family == MeshFamilyKind::Voronoi
                           ? generate_voronoi(p, seed, lloyd)
                           : generate_structured(family, n, family == MeshFamilyKind::Hexagon ? m : -1);
  write_mesh(mesh, output);
  std::cout << "wrote " << output << ": " << mesh.num_vertices() << " vertices, "
            << mesh.num_cells() << " cells, h_max = " << mesh.h_max() << "\n";
  return 0;
}

int run_mesh_stats(const std::string& path) {
  const PolygonalMesh mesh = read_mesh(path);
  const MeshStats stats = mesh_stats(mesh);
  std::cout << mesh.num_vertices() << " vertices, " << mesh.num_cells() << " cells, "
            << mesh.num_edges() << " edges\n";
  std::cout << "h_max = " << stats.h_max << "\n";
  std::cout << "min edge/h_E = " << stats.min_edge_to_h << "\n";
  std::cout << "min cell area = " << stats.min_area << "\n";
  std::cout << "cell edge histogram:";
  for (const auto& [edges, count] : stats.cell_edge_histogram)
    std::cout << " " << edges << ":" << count;
  std::cout << "\n";
  return 0;
}

int run_kernel(StudyConfig config, bool large_ok) {
  const int max_degree = *std::max_element(config.degrees.begin(), config.degrees.end());
  config.levels = gate_levels(config, max_degree, large_ok);
  const KernelTable table = run_kernel_study(config);
  write_output(config.format == ReportFormat::Csv ? kernel_table_to_csv(table)
                                                  : kernel_table_to_markdown(table),
               "");
  return 0;
}

int run_eig(const std::string& mesh_path, int degree, int num, double alpha,
            const std::string& output) {
  const PolygonalMesh mesh = read_mesh(mesh_path);
  const AssembledSystem system = assemble(mesh, degree, alpha);
  const int kernel = kernel_dimension(system.mass);
  const int wanted = std::min(num, system.dofmap.interior_dofs - kernel);
  const PencilSolution sol = solve_pencil(system.stiffness, system.mass, wanted);
  write_output(eigenvalues_to_csv(sol), output);
  std::cerr << "N_h = " << system.dofmap.interior_dofs << ", dim K_b = " << kernel << "\n";
  return 0;
}

int run_study(StudyConfig config, const std::vector<int>& degrees, bool large_ok,
              const std::string& output) {
  std::string text;
  for (int degree : degrees) {
    StudyConfig gated = config;
    gated.levels = gate_levels(config, degree, large_ok);
    const SpectralReport report = run_convergence(gated, degree);
    text += config.format == ReportFormat::Csv ? report_to_csv(report)
                                               : report_to_markdown(report) + "\n";
  }
  write_output(text, output);
  return 0;
}

int run_source(const std::string& mesh_path, int degree, double alpha) {
  const PolygonalMesh mesh = read_mesh(mesh_path);
  const AssembledSystem system = assemble(mesh, degree, alpha);
  const double pi = M_PI;
  const Eigen::VectorXd u = solve_source(mesh, system, [pi](const Eigen::Vector2d& x) {
    return 2.0 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y());
  });
  const FieldError err = projection_errors(
      mesh, system, u,
      [pi](const Eigen::Vector2d& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); },
      [pi](const Eigen::Vector2d& x) {
        return Eigen::Vector2d(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                               pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
      });
  std::cout << "source problem, f = 2 pi^2 sin(pi x) sin(pi y), exact u = sin(pi x) sin(pi y)\n";
  std::cout << "h_max = " << mesh.h_max() << ", N_h = " << system.dofmap.interior_dofs << "\n";
  std::cout << "L2 error (Pi-nabla reconstruction)  = " << err.l2 << "\n";
  std::cout << "H1 seminorm error (Pi-nabla)        = " << err.h1_seminorm << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual element studies for the unit-square Laplace eigenproblem "
               "(stabilized stiffness, unstabilized mass)"};
  app.require_subcommand(1);

  CLI::App* mesh_cmd = app.add_subcommand("mesh", "Generate, validate, or inspect meshes");
  mesh_cmd->require_subcommand(1);

  CLI::App* gen = mesh_cmd->add_subcommand("gen", "Generate a mesh file");
  std::string gen_kind = "square";
  int gen_n = 4, gen_m = -1, gen_p = 50, gen_lloyd = 3;
  std::uint64_t gen_seed = 1;
  std::string gen_output;
  gen->add_option("--kind", gen_kind, "triangle|square|voronoi|hexagon|dyadic")->required();
  gen->add_option("--n", gen_n, "subdivisions per side (T/S/D) or horizontal hexagons");
  gen->add_option("--m", gen_m, "vertical hexagon count (hexagon only)");
  gen->add_option("--p", gen_p, "generator count (voronoi only)");
  gen->add_option("--seed", gen_seed, "random seed (voronoi only)");
  gen->add_option("--lloyd", gen_lloyd, "Lloyd relaxation sweeps (voronoi only)");
  gen->add_option("-o,--output", gen_output, "output mesh JSON path")->required();

  CLI::App* validate = mesh_cmd->add_subcommand("validate", "Validate a mesh file");
  std::string validate_path;
  validate->add_option("file", validate_path, "mesh JSON path")->required();

  CLI::App* stats = mesh_cmd->add_subcommand("stats", "Print mesh statistics");
  std::string stats_path;
  stats->add_option("file", stats_path, "mesh JSON path")->required();

  CLI::App* kernel_cmd = app.add_subcommand("kernel", "Mass-matrix kernel dimension table");
  std::string kernel_family = "dyadic", kernel_format = "md", kernel_preset;
  std::vector<std::string> kernel_levels = {"4", "8", "16"};
  std::vector<int> kernel_degrees = {1, 2, 3, 4};
  std::uint64_t kernel_seed = 1;
  int kernel_lloyd = 3;
  bool kernel_large = false;
  kernel_cmd->add_option("--family", kernel_family, "mesh family");
  kernel_cmd->add_option("--levels", kernel_levels, "levels (N, P, or n x m pairs)")->delimiter(',');
  kernel_cmd->add_option("--degrees", kernel_degrees, "VEM degrees, subset of 1..4")->delimiter(',');
  kernel_cmd->add_option("--format", kernel_format, "md|csv");
  kernel_cmd->add_option("--seed", kernel_seed, "voronoi seed");
  kernel_cmd->add_option("--lloyd", kernel_lloyd, "voronoi Lloyd sweeps");
  kernel_cmd->add_option("--paper-table", kernel_preset,
                         "preset: kernelT|kernelS|kernelV|kernelH|kernelD");
  kernel_cmd->add_flag("--large", kernel_large, "allow N_h beyond 20000");

  CLI::App* eig_cmd = app.add_subcommand("eig", "Eigenvalues of one mesh");
  std::string eig_mesh, eig_output;
  int eig_degree = 1, eig_num = 10;
  double eig_alpha = 1.0;
  eig_cmd->add_option("--mesh", eig_mesh, "mesh JSON path")->required();
  eig_cmd->add_option("--degree", eig_degree, "VEM degree")->check(CLI::Range(1, 4));
  eig_cmd->add_option("--num", eig_num, "eigenvalue count");
  eig_cmd->add_option("--alpha", eig_alpha, "dofi-dofi stabilization parameter");
  eig_cmd->add_option("-o,--output", eig_output, "CSV output path (default stdout)");

  CLI::App* study_cmd = app.add_subcommand("study", "Eigenvalue convergence study");
  std::string study_family = "square", study_format = "md", study_preset, study_output;
  std::vector<std::string> study_levels = {"4", "8", "16"};
  std::vector<int> study_degrees = {1};
  int study_num = 10, study_lloyd = 3;
  double study_alpha = 1.0;
  std::uint64_t study_seed = 1;
  bool study_large = false;
  study_cmd->add_option("--family", study_family, "mesh family");
  study_cmd->add_option("--levels", study_levels, "levels (N, P, or n x m pairs)")->delimiter(',');
  study_cmd->add_option("--degree,--degrees", study_degrees, "VEM degrees")->delimiter(',');
  study_cmd->add_option("--num-eigs", study_num, "eigenvalues per level");
  study_cmd->add_option("--alpha", study_alpha, "dofi-dofi stabilization parameter");
  study_cmd->add_option("--seed", study_seed, "voronoi seed");
  study_cmd->add_option("--lloyd", study_lloyd, "voronoi Lloyd sweeps");
  study_cmd->add_option("--format", study_format, "md|csv");
  study_cmd->add_option("--paper-table", study_preset, "preset: tk1..tk4, sk*, vk*, hk*, dk*");
  study_cmd->add_option("-o,--output", study_output, "output path (default stdout)");
  study_cmd->add_flag("--large", study_large, "allow N_h beyond 20000");

  CLI::App* source_cmd = app.add_subcommand("source", "Manufactured-solution source problem");
  std::string source_mesh;
  int source_degree = 2;
  double source_alpha = 1.0;
  source_cmd->add_option("--mesh", source_mesh, "mesh JSON path")->required();
  source_cmd->add_option("--degree", source_degree, "VEM degree")->check(CLI::Range(1, 4));
  source_cmd->add_option("--alpha", source_alpha, "dofi-dofi stabilization parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 1;
  }

  try {
    if (gen->parsed()) return run_mesh_gen(gen_kind, gen_n, gen_m, gen_p, gen_seed, gen_lloyd, gen_output);
    if (validate->parsed()) {
      read_mesh(validate_path);
      std::cout << "ok: " << validate_path << " is a valid mesh\n";
      return 0;
    }
    if (stats->parsed()) return run_mesh_stats(stats_path);

    if (kernel_cmd->parsed()) {
      StudyConfig config;
      if (!kernel_preset.empty()) {
        const auto preset = paper_preset(kernel_preset);
        if (!preset) throw ParameterError("unknown paper table '" + kernel_preset + "'");
        config.family = preset->family;
        config.levels = preset->levels;
      } else {
        config.family = family_from_name(kernel_family);
        config.levels = parse_levels(kernel_levels, config.family);
      }
      config.degrees = kernel_degrees;
      config.seed = kernel_seed;
      config.lloyd_iters = kernel_lloyd;
      config.format = kernel_format == "csv" ? ReportFormat::Csv : ReportFormat::Markdown;
      return run_kernel(config, kernel_large);
    }

    if (eig_cmd->parsed()) return run_eig(eig_mesh, eig_degree, eig_num, eig_alpha, eig_output);

    if (study_cmd->parsed()) {
      StudyConfig config;
      std::vector<int> degrees = study_degrees;
      if (!study_preset.empty()) {
        const auto preset = paper_preset(study_preset);
        if (!preset || preset->degree < 0)
          throw ParameterError("unknown paper table '" + study_preset + "'");
        config.family = preset->family;
        config.levels = preset->levels;
        degrees = {preset->degree};
      } else {
        config.family = family_from_name(study_family);
        config.levels = parse_levels(study_levels, config.family);
      }
      config.num_eigs = study_num;
      config.alpha = study_alpha;
      config.seed = study_seed;
      config.lloyd_iters = study_lloyd;
      config.format = study_format == "csv" ? ReportFormat::Csv : ReportFormat::Markdown;
      config.degrees = degrees;
      return run_study(config, degrees, study_large, study_output);
    }

    if (source_cmd->parsed()) return run_source(source_mesh, source_degree, source_alpha);
  } catch (const ParameterError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 1;
}
