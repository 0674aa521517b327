#include "vemeig/assembly.hpp"

#include "vemeig/errors.hpp"
#include "vemeig/parallel.hpp"

#include <cstdio>
#include <fstream>
#include <string>

namespace vemeig {

GlobalDofMap build_dof_map(const PolygonalMesh& mesh, int k) {
  if (k < 1 || k > 4) throw ParameterError("assembly degree must be in {1,2,3,4}");

  GlobalDofMap map;
  map.degree = k;
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_edges();
  const int nc = mesh.num_cells();
  const int per_edge = k - 1;
  const int per_cell = k * (k - 1) / 2;
  map.total_dofs = nv + ne * per_edge + nc * per_cell;

  map.kind.resize(map.total_dofs);
  for (int v = 0; v < nv; ++v) map.kind[v] = DofKind::Vertex;
  for (int i = nv; i < nv + ne * per_edge; ++i) map.kind[i] = DofKind::Edge;
  for (int i = nv + ne * per_edge; i < map.total_dofs; ++i) map.kind[i] = DofKind::Internal;

  map.cell_to_global.resize(nc);
  for (int c = 0; c < nc; ++c) {
    const std::vector<int>& cell = mesh.cells()[c];
    const int n = static_cast<int>(cell.size());
    std::vector<int>& dofs = map.cell_to_global[c];
    dofs.reserve(static_cast<std::size_t>(n) * k + per_cell);
    for (int v : cell) dofs.push_back(v);
    for (int e = 0; e < n; ++e) {
      const int a = cell[e];
      const int b = cell[(e + 1) % n];
      const int edge_id = mesh.find_edge(a, b);
      if (edge_id < 0)
        throw MeshError("dof map: cell " + std::to_string(c) + " uses unknown edge (" +
                        std::to_string(a) + "," + std::to_string(b) + ")");
      const bool forward = a < b; // local direction matches the canonical one
      for (int t = 0; t < per_edge; ++t) {
        const int slot = forward ? t : per_edge - 1 - t;
        dofs.push_back(nv + edge_id * per_edge + slot);
      }
    }
    for (int m = 0; m < per_cell; ++m) dofs.push_back(nv + ne * per_edge + c * per_cell + m);
  }

  // Homogeneous Dirichlet data: boundary vertices and boundary edges go.
  std::vector<bool> eliminated(map.total_dofs, false);
  for (int v = 0; v < nv; ++v) eliminated[v] = mesh.boundary_vertex()[v];
  for (int e = 0; e < ne; ++e) {
    if (!mesh.edges()[e].boundary()) continue;
    for (int t = 0; t < per_edge; ++t) eliminated[nv + e * per_edge + t] = true;
  }

  map.full_to_interior.assign(map.total_dofs, -1);
  for (int i = 0; i < map.total_dofs; ++i) {
    if (eliminated[i]) {
      ++map.boundary_dofs;
    } else {
      map.full_to_interior[i] = map.interior_dofs++;
      map.interior_to_full.push_back(i);
    }
  }
  return map;
}

Eigen::MatrixXd SparseSymmetric::to_dense(int max_dim) const {
  if (dim() > max_dim)
    throw NumericalError("matrix dimension " + std::to_string(dim()) +
                         " exceeds the dense threshold " + std::to_string(max_dim) +
                         "; use the sparse path or a smaller mesh");
  return Eigen::MatrixXd(mat);
}

AssembledSystem assemble(const PolygonalMesh& mesh, int k, double alpha) {
  AssembledSystem system;
  system.dofmap = build_dof_map(mesh, k);
  const GlobalDofMap& map = system.dofmap;
  const int nc = mesh.num_cells();

  // Element blocks computed in parallel, accumulated serially in element
  // order so the result is reproducible bit for bit.
  std::vector<LocalVemBlocks> blocks(nc);
  parallel_for(nc, [&](int c) { blocks[c] = build_local_blocks(element_geometry(mesh.cell_polygon(c)), k, alpha); });

  std::vector<Eigen::Triplet<double>> a_trip;
  std::vector<Eigen::Triplet<double>> b_trip;
  for (int c = 0; c < nc; ++c) {
    const std::vector<int>& dofs = map.cell_to_global[c];
    const int n = static_cast<int>(dofs.size());
    if (n != blocks[c].layout.total)
      throw MeshError("assembly: local/global DOF count mismatch on cell " + std::to_string(c));
    for (int i = 0; i < n; ++i) {
      const int gi = map.full_to_interior[dofs[i]];
      if (gi < 0) continue;
      for (int j = 0; j < n; ++j) {
        const int gj = map.full_to_interior[dofs[j]];
        if (gj < 0) continue;
        a_trip.emplace_back(gi, gj, blocks[c].stiffness(i, j));
        b_trip.emplace_back(gi, gj, blocks[c].mass(i, j));
      }
    }
  }

  system.stiffness.mat.resize(map.interior_dofs, map.interior_dofs);
  system.stiffness.mat.setFromTriplets(a_trip.begin(), a_trip.end());
  system.stiffness.mat.makeCompressed();
  system.mass.mat.resize(map.interior_dofs, map.interior_dofs);
  system.mass.mat.setFromTriplets(b_trip.begin(), b_trip.end());
  system.mass.mat.makeCompressed();
  return system;
}

void write_matrix_market(const SparseSymmetric& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw NumericalError("cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  std::size_t lower_count = 0;
  for (int col = 0; col < matrix.mat.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix.mat, col); it; ++it)
      if (it.row() >= it.col()) ++lower_count;
  out << matrix.dim() << " " << matrix.dim() << " " << lower_count << "\n";
  char line[96];
  for (int col = 0; col < matrix.mat.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix.mat, col); it; ++it) {
      if (it.row() < it.col()) continue;
      std::snprintf(line, sizeof(line), "%ld %ld %.17g\n", static_cast<long>(it.row() + 1),
                    static_cast<long>(it.col() + 1), it.value());
      out << line;
    }
  }
}

} // namespace vemeig
