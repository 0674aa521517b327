#include "vemeig/errors.hpp"
#include "vemeig/geometry.hpp"
#include "vemeig/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace vemeig {

namespace {

// splitmix64: portable deterministic generator, independent of the standard
// library's distribution implementations.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::vector<Eigen::Vector2d> clip_halfplane(const std::vector<Eigen::Vector2d>& poly,
                                            const Eigen::Vector2d& normal, double offset) {
  std::vector<Eigen::Vector2d> out;
  const int n = static_cast<int>(poly.size());
  out.reserve(poly.size() + 2);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& p = poly[i];
    const Eigen::Vector2d& q = poly[(i + 1) % n];
    const double dp = normal.dot(p) - offset;
    const double dq = normal.dot(q) - offset;
    if (dp <= 0) out.push_back(p);
    if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
      const double t = dp / (dp - dq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

// Voronoi cell of generator i, clipped to the unit square. Generators sorted
// by distance allow an early exit: once every remaining generator is farther
// than twice the cell radius it cannot cut the cell.
std::vector<Eigen::Vector2d> voronoi_cell(const std::vector<Eigen::Vector2d>& gens,
                                          const std::vector<int>& order, int i) {
  std::vector<Eigen::Vector2d> cell = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Eigen::Vector2d gi = gens[i];
  for (int j : order) {
    if (j == i) continue;
    const Eigen::Vector2d gj = gens[j];
    double radius2 = 0.0;
    for (const Eigen::Vector2d& v : cell) radius2 = std::max(radius2, (v - gi).squaredNorm());
    if ((gj - gi).squaredNorm() > 4.0 * radius2) break;
    const Eigen::Vector2d mid = 0.5 * (gi + gj);
    const Eigen::Vector2d normal = (gj - gi).normalized();
    cell = clip_halfplane(cell, normal, normal.dot(mid));
    if (cell.size() < 3)
      throw MeshError("voronoi: generator " + std::to_string(i) +
                      " produced an empty cell after clipping");
  }
  return cell;
}

std::vector<std::vector<Eigen::Vector2d>> voronoi_cells(const std::vector<Eigen::Vector2d>& gens) {
  const int p = static_cast<int>(gens.size());
  std::vector<std::vector<Eigen::Vector2d>> cells(p);
  for (int i = 0; i < p; ++i) {
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    const Eigen::Vector2d gi = gens[i];
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double da = (gens[a] - gi).squaredNorm();
      const double db = (gens[b] - gi).squaredNorm();
      return da != db ? da < db : a < b;
    });
    cells[i] = voronoi_cell(gens, order, i);
  }
  return cells;
}

Eigen::Vector2d polygon_centroid(const std::vector<Eigen::Vector2d>& poly) {
  const int n = static_cast<int>(poly.size());
  double area2 = 0.0, cx = 0.0, cy = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& p = poly[i];
    const Eigen::Vector2d& q = poly[(i + 1) % n];
    const double w = p.x() * q.y() - q.x() * p.y();
    area2 += w;
    cx += (p.x() + q.x()) * w;
    cy += (p.y() + q.y()) * w;
  }
  return Eigen::Vector2d(cx, cy) / (3.0 * area2);
}

} // namespace

PolygonalMesh generate_voronoi(int num_cells, std::uint64_t seed, int lloyd_iters) {
  if (num_cells < 4) throw ParameterError("voronoi mesh: need at least 4 generators");
  if (lloyd_iters < 0) throw ParameterError("voronoi mesh: negative Lloyd iteration count");

  SplitMix64 rng(seed);
  std::vector<Eigen::Vector2d> gens(num_cells);
  for (auto& g : gens) g = Eigen::Vector2d(rng.uniform(), rng.uniform());

  for (int sweep = 0; sweep < lloyd_iters; ++sweep) {
    const auto cells = voronoi_cells(gens);
    for (int i = 0; i < num_cells; ++i) gens[i] = polygon_centroid(cells[i]);
  }

  const auto cells = voronoi_cells(gens);
  MeshBuilder builder;
  for (const auto& cell : cells) builder.add_cell(cell);
  return builder.finalize();
}

} // namespace vemeig
