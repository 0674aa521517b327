#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "vemeig/assembly.hpp"
#include "vemeig/errors.hpp"

#include <Eigen/SparseCholesky>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace vemeig;

TEST_CASE("interior DOF counts match the published table dimensions") {
  const PolygonalMesh square4 = generate_structured(MeshFamilyKind::Square, 4);
  CHECK(build_dof_map(square4, 1).interior_dofs == 9);
  CHECK(build_dof_map(square4, 2).interior_dofs == 49);
  CHECK(build_dof_map(square4, 3).interior_dofs == 105);
  CHECK(build_dof_map(square4, 4).interior_dofs == 177);

  const PolygonalMesh tri4 = generate_structured(MeshFamilyKind::Triangle, 4);
  CHECK(build_dof_map(tri4, 1).interior_dofs == 9);
  CHECK(build_dof_map(tri4, 2).interior_dofs == 81);
  CHECK(build_dof_map(tri4, 3).interior_dofs == 185);
  CHECK(build_dof_map(tri4, 4).interior_dofs == 321);

  const PolygonalMesh dyadic8 = generate_structured(MeshFamilyKind::Dyadic, 8);
  CHECK(build_dof_map(dyadic8, 2).interior_dofs == 449);
}

TEST_CASE("closed-form interior counts") {
  for (int n : {3, 4, 6, 8}) {
    const PolygonalMesh tri = generate_structured(MeshFamilyKind::Triangle, n);
    const PolygonalMesh square = generate_structured(MeshFamilyKind::Square, n);
    const PolygonalMesh dyadic = generate_structured(MeshFamilyKind::Dyadic, n);
    CHECK(build_dof_map(tri, 1).interior_dofs == (n - 1) * (n - 1));
    CHECK(build_dof_map(square, 1).interior_dofs == (n - 1) * (n - 1));
    CHECK(build_dof_map(dyadic, 1).interior_dofs == (3 * n + 1) * (n + 1) - 8 * n);
  }
}

TEST_CASE("degree is validated") {
  const PolygonalMesh mesh = generate_structured(MeshFamilyKind::Square, 2);
  CHECK_THROWS_AS(build_dof_map(mesh, 0), ParameterError);
  CHECK_THROWS_AS(build_dof_map(mesh, 5), ParameterError);
}

TEST_CASE("dense extraction") {
  SparseSymmetric m;
  m.mat.resize(3, 3);
  std::vector<Eigen::Triplet<double>> trip = {{0, 0, 2.0}};
  m.mat.setFromTriplets(trip.begin(), trip.end());
  const Eigen::MatrixXd dense = m.to_dense();
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected(0, 0) = 2.0;
  CHECK((dense - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(m.to_dense(2), NumericalError);
}

TEST_CASE("assembled matrices are exactly symmetric") {
  const PolygonalMesh mesh = generate_voronoi(30, 2, 2);
  for (int k : {1, 2, 3}) {
    const AssembledSystem system = assemble(mesh, k);
    const Eigen::MatrixXd a = system.stiffness.to_dense();
    const Eigen::MatrixXd b = system.mass.to_dense();
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((b - b.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("triangle k=1 assembly equals the P1 FEM oracle entrywise") {
  for (int n : {4, 8}) {
    const PolygonalMesh mesh = generate_structured(MeshFamilyKind::Triangle, n);
    const AssembledSystem system = assemble(mesh, 1);
    const testing::P1System fem = testing::p1_fem_assemble(mesh);
    const Eigen::MatrixXd a_vem = system.stiffness.to_dense();
    const Eigen::MatrixXd a_fem = Eigen::MatrixXd(fem.stiffness);
    const Eigen::MatrixXd b_vem = system.mass.to_dense();
    const Eigen::MatrixXd b_fem = Eigen::MatrixXd(fem.mass);
    REQUIRE(a_vem.rows() == a_fem.rows());
    CHECK((a_vem - a_fem).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((b_vem - b_fem).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("stiffness is SPD and mass is PSD across families and degrees") {
  const std::vector<PolygonalMesh> meshes = {
      generate_structured(MeshFamilyKind::Triangle, 4),
      generate_structured(MeshFamilyKind::Square, 4),
      generate_structured(MeshFamilyKind::Dyadic, 3),
      generate_structured(MeshFamilyKind::Hexagon, 4, 5),
      generate_voronoi(25, 1, 3),
  };
  for (const PolygonalMesh& mesh : meshes) {
    for (int k = 1; k <= 4; ++k) {
      const AssembledSystem system = assemble(mesh, k);
      Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(system.stiffness.mat);
      CHECK(llt.info() == Eigen::Success); // discrete coercivity
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(system.mass.to_dense());
      CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("global kernel bound: dim K_b >= N_h - cells * n_k") {
  const PolygonalMesh mesh = generate_structured(MeshFamilyKind::Dyadic, 4);
  for (int k = 1; k <= 2; ++k) {
    const AssembledSystem system = assemble(mesh, k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(system.mass.to_dense());
    const double tau = es.eigenvalues().size() *
                       std::numeric_limits<double>::epsilon() *
                       es.eigenvalues().maxCoeff();
    int kernel = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      kernel += es.eigenvalues()[i] <= tau ? 1 : 0;
    const int bound = system.dofmap.interior_dofs -
                      mesh.num_cells() * monomial_count(k);
    CHECK(kernel >= std::max(0, bound));
  }
}

TEST_CASE("matrix market export") {
  const PolygonalMesh mesh = generate_structured(MeshFamilyKind::Square, 3);
  const AssembledSystem system = assemble(mesh, 1);
  const std::string path = (std::filesystem::temp_directory_path() / "vemeig_mm.mtx").string();
  write_matrix_market(system.stiffness, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real symmetric");
  int rows = 0, cols = 0;
  std::size_t entries = 0;
  in >> rows >> cols >> entries;
  CHECK(rows == system.stiffness.dim());
  CHECK(cols == rows);
  // Lower triangle reconstructs the matrix.
  Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(rows, cols);
  for (std::size_t e = 0; e < entries; ++e) {
    int i = 0, j = 0;
    double v = 0.0;
    in >> i >> j >> v;
    rebuilt(i - 1, j - 1) = v;
    rebuilt(j - 1, i - 1) = v;
  }
  CHECK((rebuilt - system.stiffness.to_dense()).cwiseAbs().maxCoeff() < 1e-15);
  std::remove(path.c_str());
}
