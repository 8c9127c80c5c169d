#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "aklt/eigensolver.hpp"
#include "aklt/gap_certifier.hpp"
#include "aklt/tensor_core.hpp"

using namespace aklt;

namespace {

LatticeGraph star1() { return build_lattice(LatticeKind::star, {1, 1}, Boundary::periodic); }

std::pair<double, double> dense_btb(const LatticeGraph& g, const Coloring& c,
                                    const Region& region, double delta, double scale = 1.0) {
  LinearMap bm = block_map(g, c, region, delta);
  Matrix b = scale * bm.matrix;
  RealVector w = dense_eigenvalues(Matrix(b.adjoint() * b));
  return {w(0), w(w.size() - 1)};
}

}  // namespace

TEST_CASE("threshold ratio") {
  CHECK(std::abs(1.0 / mu0(3) - 0.828427) < 5e-7);
  CHECK(std::abs(1.0 / mu0(4) - 0.872983) < 5e-7);
  CHECK(std::abs(1.0 / mu0(5) - 0.898979) < 5e-7);
  CHECK(std::abs(1.0 / mu0(6) - 0.916080) < 5e-7);
  CHECK_THROWS(mu0(1));
  double prev = mu0(2);
  for (int r = 3; r < 60; ++r) {
    CHECK(mu0(r) < prev);
    CHECK(mu0(r) > 1.0);
    prev = mu0(r);
  }
  CHECK(mu0(100000) - 1.0 < 1e-4);
}

TEST_CASE("doubled network against the dense product") {
  LatticeGraph g = star1();
  Coloring c = three_colouring(g);
  Region tri = make_region(g, {0, 1, 2});

  auto [g0min, g0max] = btb_spectrum(g, c, tri, 0.0);
  CHECK(std::abs(g0max / g0min - 1.0) < 1e-10);

  for (double delta : {0.1, 0.5, 0.9}) {
    auto [fmin, fmax] = btb_spectrum(g, c, tri, delta);
    auto [dmin, dmax] = dense_btb(g, c, tri, delta);
    CHECK(std::abs(fmin - dmin) < 1e-10 * dmax);
    CHECK(std::abs(fmax - dmax) < 1e-10 * dmax);
  }

  // ratio is scale free: rescaling the map leaves it unchanged
  auto [smin, smax] = dense_btb(g, c, tri, 0.5, 2.0);
  auto [fmin, fmax] = btb_spectrum(g, c, tri, 0.5);
  CHECK(std::abs(smax / smin - fmax / fmin) < 1e-10);

  // non-injective region rejected
  LatticeGraph honey = build_lattice(LatticeKind::honeycomb, {2, 2}, Boundary::periodic);
  Coloring hc = three_colouring(honey);
  CHECK_THROWS(btb_spectrum(honey, hc, make_region(honey, {0}), 0.5));
}

TEST_CASE("certificates") {
  LatticeGraph g = star1();
  Coloring c = three_colouring(g);
  Region tri = make_region(g, {0, 1, 2});

  GapCertificate low = certify(g, c, tri, 0.1);
  CHECK(low.verdict == Verdict::certified_gapped);
  CHECK(low.r == 3);
  CHECK(low.ratio < low.mu0);

  GapCertificate aklt = certify(g, c, tri, 1.0);
  CHECK(aklt.verdict == Verdict::not_certified);
  CHECK(std::abs(aklt.ratio - 5.0 / 3.0) < 1e-9);

  GapCertificate zero = certify(g, c, tri, 0.0);
  CHECK(zero.verdict == Verdict::certified_gapped);
  CHECK(std::abs(zero.ratio - 1.0) < 1e-9);
}

TEST_CASE("certified boundary of the star triangle") {
  LatticeGraph g = star1();
  Coloring c = three_colouring(g);
  Region tri = make_region(g, {0, 1, 2});
  DeltaCResult dc = find_delta_c(g, c, tri, 1e-5);
  CHECK(std::abs(dc.delta_c - 0.264728) < 1e-3);
  CHECK(dc.bracket_lo <= dc.delta_c);
  CHECK(dc.delta_c <= dc.bracket_hi);

  // verdicts flip across the boundary
  CHECK(certify(g, c, tri, dc.delta_c - 0.01).verdict == Verdict::certified_gapped);
  CHECK(certify(g, c, tri, dc.delta_c + 0.01).verdict == Verdict::not_certified);
}

TEST_CASE("certified boundaries of the cycle regions") {
  // 4-cycle region as on the square-octagon lattice
  LatticeGraph so = build_lattice(LatticeKind::square_octagon, {2, 2}, Boundary::periodic);
  Coloring soc = three_colouring(so);
  Region sq = make_region(so, {0, 1, 2, 3});
  CHECK(sq.r() == 4);
  DeltaCResult dsq = find_delta_c(so, soc, sq, 1e-5);
  CHECK(std::abs(dsq.delta_c - 0.134103) < 1e-3);

  // 5-cycle region with one outgoing leg per vertex (nearest trivalent host)
  {
    std::vector<Edge> edges;
    for (int k = 0; k < 5; ++k) edges.push_back({k, (k + 1) % 5});
    for (int k = 0; k < 5; ++k) edges.push_back({k, 5 + k});  // pendant legs
    for (int k = 0; k < 5; ++k) edges.push_back({5 + k, 10 + k});
    LatticeGraph host(15, edges);
    Coloring hc;
    hc.colour = {Axis::X, Axis::Y, Axis::Z, Axis::X, Axis::Y,
                 Axis::Z, Axis::X, Axis::Y, Axis::Z, Axis::X,
                 Axis::X, Axis::Y, Axis::Z, Axis::X, Axis::Y};
    REQUIRE(hc.valid_for(host));
    Region pent = make_region(host, {0, 1, 2, 3, 4});
    CHECK(pent.r() == 5);
    DeltaCResult dp = find_delta_c(host, hc, pent, 1e-5);
    CHECK(std::abs(dp.delta_c - 0.119933) < 1e-3);
  }

  // honeycomb hexagon
  LatticeGraph honey = build_lattice(LatticeKind::honeycomb, {3, 3}, Boundary::periodic);
  Coloring hcol = three_colouring(honey);
  auto hcov = injective_covering(honey);
  REQUIRE(hcov.has_value());
  DeltaCResult dh = find_delta_c(honey, hcol, hcov->regions.front(), 1e-5);
  CHECK(std::abs(dh.delta_c - 0.088527) < 1e-3);
}

TEST_CASE("flat ratio curves are refused") {
  // spin-1/2 site: the colour projector is the identity, so the block map is
  // an isometry at every delta and the ratio stays 1
  LatticeGraph pair(2, {{0, 1}});
  Coloring c;
  c.colour = {Axis::X, Axis::Y};
  Region single = make_region(pair, {0});
  CHECK(single.r() == 1);
  auto [gmin, gmax] = btb_spectrum(pair, c, single, 0.7);
  CHECK(std::abs(gmax / gmin - 1.0) < 1e-12);
  bool no_sign_change = false;
  try {
    find_delta_c(pair, c, single, 1e-4);
  } catch (const std::runtime_error& e) {
    no_sign_change = std::string(e.what()).find("does not change sign") != std::string::npos;
  }
  CHECK(no_sign_change);
}

TEST_CASE("polar route to the deformation size") {
  // mu = largest eigenvalue of Lambda^2 with Lambda = gamma^{-1} Q^{-1} from
  // the polar decomposition equals the eigenvalue ratio of B^dag B
  LatticeGraph g = star1();
  Coloring c = three_colouring(g);
  Region tri = make_region(g, {0, 1, 2});
  LinearMap bm = block_map(g, c, tri, 0.5);
  Eigen::JacobiSVD<Matrix> svd(bm.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  // Q = U diag(s) U^dag on the image; Lambda = s_max Q^{-1}
  Matrix u = svd.matrixU();
  Matrix lambda = Matrix::Zero(u.rows(), u.rows());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    lambda += (s(0) / s(k)) * u.col(k) * u.col(k).adjoint();
  double mu_polar = dense_eigenvalues(Matrix(lambda * lambda)).maxCoeff();
  auto [gmin, gmax] = btb_spectrum(g, c, tri, 0.5);
  CHECK(std::abs(mu_polar - gmax / gmin) < 1e-10);
}

TEST_CASE("stability margin") {
  CHECK(std::abs(stability_delta_prime(1.0, 1.0, 3) - 1.0) < 1e-15);
  CHECK(std::abs(stability_delta_prime(0.5, 1.0, 4) - 0.5) < 1e-15);

  for (int r : {3, 4, 5, 6}) {
    const double m0 = mu0(r);
    CHECK(stability_delta_prime(1.0, m0 - 1e-6, r) > 0.0);
    CHECK(stability_delta_prime(1.0, m0 + 1e-6, r) < 0.0);
    CHECK(std::abs(stability_delta_prime(1.0, m0, r)) < 1e-10);
  }

  CHECK_THROWS(stability_delta_prime(0.0, 1.0, 3));
  CHECK_THROWS(stability_delta_prime(1.0, 0.5, 3));
  CHECK_THROWS(stability_delta_prime(1.0, 1.0, 1));
}
