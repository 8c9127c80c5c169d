#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "aklt/eigensolver.hpp"
#include "aklt/hamiltonian.hpp"
#include "aklt/state_builder.hpp"

using namespace aklt;

namespace {

SparseOperator diag_op(int n) {
  SparseOperator op;
  std::vector<Eigen::Triplet<Complex>> t;
  for (int k = 0; k < n; ++k) t.emplace_back(k, k, double(k));
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(t.begin(), t.end());
  return op;
}

SparseOperator random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = Complex(g(rng), g(rng));
  Matrix h = 0.5 * (a + a.adjoint());
  SparseOperator op;
  op.matrix = h.sparseView();
  return op;
}

}  // namespace

TEST_CASE("lowest eigenvalues of a diagonal operator") {
  SparseOperator op = diag_op(200);
  SpectrumResult r = lowest_eigs(op, 4, 1e-10, 7);
  REQUIRE(r.converged);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(r.eigenvalues(k) - k) < 1e-9);
  for (int k = 0; k < 4; ++k) CHECK(r.residuals(k) < 1e-9);
}

TEST_CASE("degenerate levels are found with deflation") {
  SparseOperator op;
  std::vector<Eigen::Triplet<Complex>> t;
  for (int k = 0; k < 50; ++k) t.emplace_back(k, k, k < 3 ? 1.0 : 5.0 + k);
  op.matrix.resize(50, 50);
  op.matrix.setFromTriplets(t.begin(), t.end());
  SpectrumResult r = lowest_eigs(op, 3, 1e-10, 11);
  REQUIRE(r.converged);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(r.eigenvalues(k) - 1.0) < 1e-9);
}

TEST_CASE("cluster Hamiltonian gap is exactly one") {
  LatticeGraph g = build_lattice(LatticeKind::ring, {6, 1}, Boundary::periodic);
  SparseOperator hc = cluster_hamiltonian(g);
  GapResult gr = gap(hc, 1e-10, 3);
  CHECK(gr.spectrum.converged);
  CHECK(std::abs(gr.e0) < 1e-9);
  CHECK(std::abs(gr.e1 - 1.0) < 1e-9);
  CHECK(std::abs(gr.gap - 1.0) < 1e-9);
}

TEST_CASE("iterative matches dense") {
  std::mt19937_64 rng(2024);
  for (int n : {64, 257, 700}) {
    SparseOperator op = random_hermitian(n, rng);
    RealVector dense = dense_eigenvalues(Matrix(op.matrix));
    SpectrumResult it = lowest_eigs(op, 5, 1e-10, 99);
    REQUIRE(it.converged);
    for (int k = 0; k < 5; ++k) CHECK(std::abs(it.eigenvalues(k) - dense(k)) < 1e-8);
  }
}

TEST_CASE("deterministic given the seed") {
  std::mt19937_64 rng(5);
  SparseOperator op = random_hermitian(300, rng);
  SpectrumResult a = lowest_eigs(op, 3, 1e-10, 4242);
  SpectrumResult b = lowest_eigs(op, 3, 1e-10, 4242);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(a.seed == b.seed);
  for (int k = 0; k < 3; ++k) CHECK(a.eigenvalues(k) == b.eigenvalues(k));
}

TEST_CASE("frustration-free operators have zero ground energy") {
  LatticeGraph g = build_lattice(LatticeKind::ring, {6, 1}, Boundary::periodic);
  Coloring c = three_colouring(g);
  for (double delta : {0.3, 1.0}) {
    SparseOperator h = assemble_H(g, c, delta);
    SpectrumResult r = lowest_eigs(h, 1, 1e-10, 17);
    REQUIRE(r.converged);
    CHECK(std::abs(r.eigenvalues(0)) < 1e-9);
  }
}

TEST_CASE("degeneracy counting") {
  LatticeGraph g = build_lattice(LatticeKind::ring, {6, 1}, Boundary::periodic);
  Coloring c = three_colouring(g);
  SparseOperator h0 = assemble_H(g, c, 0.0);
  CHECK(degeneracy_count(h0, 0.0, 1e-8) >= 64);

  auto cov = injective_covering(g);
  SparseOperator hb0 = assemble_HB(g, c, *cov, 0.0);
  CHECK(degeneracy_count(hb0, 0.0, 1e-8) == 1);

  SparseOperator eye;
  eye.matrix.resize(37, 37);
  eye.matrix.setIdentity();
  CHECK(degeneracy_count(eye, 1.0, 1e-10) == 37);

  CHECK_THROWS(degeneracy_count(eye, 1.0, 1e-10, 10));
}

TEST_CASE("dense minimum eigenvalue") {
  Matrix p = Matrix::Zero(3, 3);
  p(0, 0) = 1.0;
  CHECK(std::abs(min_eig(p)) < 1e-13);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = 2;
  CHECK(std::abs(min_eig(d) - 1.0) < 1e-13);

  std::mt19937_64 rng(8);
  SparseOperator op = random_hermitian(500, rng);
  double dense_min = min_eig(Matrix(op.matrix));
  SpectrumResult it = lowest_eigs(op, 1, 1e-10, 55);
  REQUIRE(it.converged);
  CHECK(std::abs(dense_min - it.eigenvalues(0)) < 1e-8);

  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS(min_eig(nh));
}
