#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vemeig/errors.hpp"
#include "vemeig/study.hpp"

#include <cmath>

using namespace vemeig;

TEST_CASE("exact eigenvalue list") {
  const std::vector<double> exact = exact_laplace_eigenvalues(10);
  const std::vector<double> expected = {2, 5, 5, 8, 10, 10, 13, 13, 17, 17};
  REQUIRE(exact.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(exact[i] == expected[i]);
}

TEST_CASE("rate formula recovers synthetic orders exactly") {
  for (double p : {1.0, 2.0, 4.0, 6.0, 8.0}) {
    const double h0 = 0.25, h1 = 0.125;
    const double c = 3.7;
    const double rate = convergence_rate(c * std::pow(h0, p), c * std::pow(h1, p), h0, h1);
    CHECK(rate == doctest::Approx(p).epsilon(1e-13));
  }
}

TEST_CASE("config validation") {
  StudyConfig config;
  config.levels = {{8, -1}, {4, -1}};
  CHECK_THROWS_AS(config.validate(), ParameterError);
  config.levels = {{4, -1}, {8, -1}};
  config.degrees = {5};
  CHECK_THROWS_AS(config.validate(), ParameterError);
  config.degrees = {2};
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("kernel study reproduces the dyadic table rows for k=1,2") {
  StudyConfig config;
  config.family = MeshFamilyKind::Dyadic;
  config.levels = {{4, -1}, {8, -1}, {16, -1}};
  config.degrees = {1, 2};
  const KernelTable table = run_kernel_study(config);
  const std::pair<int, int> expected[3][2] = {
      {{9, 33}, {42, 97}}, {{49, 161}, {210, 449}}, {{225, 705}, {930, 1921}}};
  for (int li = 0; li < 3; ++li)
    for (int ki = 0; ki < 2; ++ki) {
      CHECK(table.entries[li][ki].first == expected[li][ki].first);
      CHECK(table.entries[li][ki].second == expected[li][ki].second);
    }
}

TEST_CASE("kernel study: square and triangle families have empty kernels") {
  for (MeshFamilyKind family : {MeshFamilyKind::Square, MeshFamilyKind::Triangle}) {
    StudyConfig config;
    config.family = family;
    config.levels = {{4, -1}, {8, -1}};
    config.degrees = {1, 2, 3, 4};
    const KernelTable table = run_kernel_study(config);
    for (const auto& row : table.entries)
      for (const auto& [kernel, dim] : row) CHECK(kernel == 0);
  }
}

TEST_CASE("convergence study on the square family") {
  StudyConfig config;
  config.family = MeshFamilyKind::Square;
  config.levels = {{4, -1}, {8, -1}, {16, -1}};
  config.degrees = {2};
  config.num_eigs = 6;
  const SpectralReport report = run_convergence(config, 2);
  REQUIRE(report.levels.size() == 3);

  SUBCASE("errors decrease monotonically") {
    for (int i = 0; i < 6; ++i)
      for (std::size_t li = 1; li < report.levels.size(); ++li)
        CHECK(report.levels[li].errors[i] < report.levels[li - 1].errors[i]);
  }
  SUBCASE("rates settle near 2k = 4") {
    for (int i = 0; i < 6; ++i) CHECK(report.levels[2].rates[i] == doctest::Approx(4.0).epsilon(0.1));
  }
  SUBCASE("markdown carries the table layout") {
    const std::string md = report_to_markdown(report);
    CHECK(md.find("Errors (rate)") != std::string::npos);
    CHECK(md.find("| 2 |") != std::string::npos);
  }
  SUBCASE("csv schema is pinned") {
    const std::string csv = report_to_csv(report);
    CHECK(csv.rfind("family,k,level,h,eig_index,exact_over_pi2,error_over_pi2,rate,kernel_dim,dim_Vh\n",
                    0) == 0);
  }
  SUBCASE("reruns are byte-identical") {
    const SpectralReport again = run_convergence(config, 2);
    CHECK(report_to_csv(report) == report_to_csv(again));
    CHECK(report_to_markdown(report) == report_to_markdown(again));
  }
}

TEST_CASE("kernel table and eigensolver kernel count agree") {
  StudyConfig config;
  config.family = MeshFamilyKind::Dyadic;
  config.levels = {{4, -1}};
  config.degrees = {2};
  config.num_eigs = 5;
  const KernelTable table = run_kernel_study(config);
  const SpectralReport report = run_convergence(config, 2);
  CHECK(table.entries[0][0].first == report.levels[0].kernel_dim);
}

TEST_CASE("precision floor entries are flagged in markdown") {
  SpectralReport report;
  report.family = MeshFamilyKind::Triangle;
  report.degree = 3;
  report.num_eigs = 2;
  report.exact_over_pi2 = {2, 5};
  LevelResult level;
  level.level = {64, -1};
  level.h = std::sqrt(2.0) / 64;
  level.dim_vh = 100;
  level.errors = {3.9e-12, 2.0e-3};
  level.computed_over_pi2 = {2 + 3.9e-12, 5.002};
  level.rates = {std::numeric_limits<double>::quiet_NaN(),
                 std::numeric_limits<double>::quiet_NaN()};
  level.at_floor = {true, false};
  report.levels.push_back(level);
  const std::string md = report_to_markdown(report);
  CHECK(md.find("*") != std::string::npos);
  CHECK(md.find("precision floor") != std::string::npos);
}

TEST_CASE("results are bitwise identical across thread counts") {
  StudyConfig config;
  config.family = MeshFamilyKind::Dyadic;
  config.levels = {{4, -1}, {8, -1}};
  config.degrees = {2};
  config.num_eigs = 5;
  setenv("VEMEIG_THREADS", "1", 1);
  const std::string serial = report_to_csv(run_convergence(config, 2));
  setenv("VEMEIG_THREADS", "4", 1);
  const std::string threaded = report_to_csv(run_convergence(config, 2));
  unsetenv("VEMEIG_THREADS");
  CHECK(serial == threaded);
}

TEST_CASE("voronoi study levels are deterministic") {
  StudyConfig config;
  config.family = MeshFamilyKind::Voronoi;
  config.levels = {{50, -1}};
  config.degrees = {1};
  config.num_eigs = 4;
  config.seed = 1;
  const SpectralReport a = run_convergence(config, 1);
  const SpectralReport b = run_convergence(config, 1);
  CHECK(report_to_csv(a) == report_to_csv(b));
}
