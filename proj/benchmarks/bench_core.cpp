#include "vemeig/assembly.hpp"
#include "vemeig/eigensolve.hpp"
#include "vemeig/local_element.hpp"
#include "vemeig/mesh.hpp"

#include <benchmark/benchmark.h>

using namespace vemeig;

namespace {

void BM_monomial_moments(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::vector<Eigen::Vector2d> hex;
  for (int i = 0; i < 6; ++i)
    hex.emplace_back(0.5 + 0.3 * std::cos(i * M_PI / 3.0), 0.5 + 0.3 * std::sin(i * M_PI / 3.0));
  const ElementGeometry geom = element_geometry(hex);
  for (auto _ : state) benchmark::DoNotOptimize(monomial_moments(geom, k));
}
BENCHMARK(BM_monomial_moments)->DenseRange(1, 4);

void BM_local_blocks(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::vector<Eigen::Vector2d> hex;
  for (int i = 0; i < 6; ++i)
    hex.emplace_back(0.5 + 0.3 * std::cos(i * M_PI / 3.0), 0.5 + 0.3 * std::sin(i * M_PI / 3.0));
  const ElementGeometry geom = element_geometry(hex);
  for (auto _ : state) benchmark::DoNotOptimize(build_local_blocks(geom, k));
}
BENCHMARK(BM_local_blocks)->DenseRange(1, 4);

void BM_voronoi_generation(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_voronoi(p, 1, 3));
}
BENCHMARK(BM_voronoi_generation)->Arg(50)->Arg(200);

void BM_assemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PolygonalMesh mesh = generate_structured(MeshFamilyKind::Square, n);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh, 2, 1.0));
}
BENCHMARK(BM_assemble)->Arg(8)->Arg(16)->Arg(32);

void BM_kernel_dimension(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PolygonalMesh mesh = generate_structured(MeshFamilyKind::Dyadic, n);
  const AssembledSystem system = assemble(mesh, 2, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_dimension(system.mass));
}
BENCHMARK(BM_kernel_dimension)->Arg(4)->Arg(8);

void BM_solve_pencil(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PolygonalMesh mesh = generate_structured(MeshFamilyKind::Square, n);
  const AssembledSystem system = assemble(mesh, 2, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_pencil(system.stiffness, system.mass, 10));
}
BENCHMARK(BM_solve_pencil)->Arg(8)->Arg(16);

} // namespace

BENCHMARK_MAIN();
