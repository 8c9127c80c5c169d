#include "aklt/verification.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <set>
#include <numeric>
#include <sstream>

#include "aklt/eigensolver.hpp"
#include "aklt/gap_certifier.hpp"
#include "aklt/spin_algebra.hpp"
#include "aklt/tensor_core.hpp"

namespace aklt {

namespace {

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

Matrix dense_of(const SparseOperator& op) { return Matrix(op.matrix); }

}  // namespace

CheckReport check_reduced_density(const LatticeGraph& g) {
  CheckReport rep;
  rep.name = "reduced_density";
  rep.anchor = "graph-state-pair-marginals-maximally-mixed";
  rep.params = "N=" + std::to_string(g.num_vertices());

  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.degree(v) < 2)
      throw std::invalid_argument("check_reduced_density: vertex of degree < 2");
  for (int u = 0; u < g.num_vertices(); ++u)
    for (int v = u + 1; v < g.num_vertices(); ++v)
      if (g.neighbours(u) == g.neighbours(v))
        throw std::invalid_argument("check_reduced_density: vertices share a neighbourhood");

  StateVector gs = qubit_graph_state(g);
  double worst = 0.0;
  const Matrix quarter = Matrix::Identity(4, 4) / 4.0;
  for (int u = 0; u < g.num_vertices(); ++u)
    for (int v = u + 1; v < g.num_vertices(); ++v) {
      DensityMatrix rho = reduced_density(gs, {u, v});
      worst = std::max(worst, (rho.entries - quarter).cwiseAbs().maxCoeff());
    }
  rep.residual = worst;
  rep.pass = worst < 1e-12;
  return rep;
}

CheckReport check_gap_collapse(const LatticeGraph& g, const Coloring& coloring,
                               const std::vector<double>& delta_grid) {
  CheckReport rep;
  rep.name = "gap_collapse";
  rep.anchor = "two-body-gap-vanishes-with-deformation";
  rep.params = "grid=" + join_doubles(delta_grid);

  std::vector<double> grid = delta_grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  std::vector<double> gaps;
  for (double d : grid) {
    RealVector w = dense_eigenvalues(dense_of(assemble_H(g, coloring, d)));
    gaps.push_back(w(1) - w(0));
  }
  bool decreasing = true;
  for (size_t k = 1; k < gaps.size(); ++k)
    if (gaps[k] >= gaps[k - 1]) decreasing = false;
  bool collapsed = gaps.back() < gaps.front() / 3.0;

  RealVector w0 = dense_eigenvalues(dense_of(assemble_H(g, coloring, 0.0)));
  int deg = 0;
  for (Eigen::Index i = 0; i < w0.size(); ++i)
    if (w0(i) < 1e-8) ++deg;
  bool degenerate = deg >= (std::int64_t(1) << g.num_vertices());

  bool hb_stable = true;
  double hb_min_gap = -1.0;
  if (auto cov = injective_covering(g)) {
    hb_min_gap = 1e300;
    for (double d : grid) {
      RealVector w = dense_eigenvalues(dense_of(assemble_HB(g, coloring, *cov, d)));
      hb_min_gap = std::min(hb_min_gap, w(1) - w(0));
    }
    hb_stable = hb_min_gap >= 0.5;
  }

  rep.pass = decreasing && collapsed && degenerate && hb_stable;
  rep.residual = gaps.back();
  std::ostringstream os;
  os << rep.params << " gaps=" << join_doubles(gaps) << " deg0=" << deg
     << " hb_min_gap=" << hb_min_gap;
  rep.params = os.str();
  return rep;
}

CheckReport check_injectivity(const LatticeGraph& g, const Coloring& coloring,
                              const std::vector<Region>& regions) {
  CheckReport rep;
  rep.name = "injectivity";
  rep.anchor = "one-outgoing-edge-criterion";
  double worst = 0.0;
  bool pass = true;
  std::ostringstream os;
  for (const Region& region : regions) {
    const bool criterion = region_is_injective(region);
    for (double d : {0.0, 0.5, 1.0}) {
      LinearMap bm = block_map(g, coloring, region, d);
      Eigen::JacobiSVD<Matrix> svd(bm.matrix);
      const auto& s = svd.singularValues();
      Eigen::Index rank = 0;
      for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > 1e-10 * s(0)) ++rank;
      const bool full = rank == bm.matrix.cols();
      if (full != criterion) {
        pass = false;
        worst = std::max(worst, 1.0);
      }
      os << "r" << region.r() << (criterion ? "+" : "-") << "rank" << rank << "/"
         << bm.matrix.cols() << " ";
    }
  }
  rep.pass = pass;
  rep.residual = worst;
  rep.params = os.str();
  return rep;
}

CheckReport check_conversion(const LatticeGraph& g, const Coloring& coloring,
                             const std::vector<double>& deltas) {
  CheckReport rep;
  rep.name = "conversion";
  rep.anchor = "colour-projection-maps-to-graph-state";
  rep.params = "deltas=" + join_doubles(deltas);
  double worst = 0.0;
  for (double d : deltas) {
    StateVector psi = build_psi(g, coloring, d);
    ProjectFitResult fit = project_and_fit(psi, g, coloring);
    worst = std::max(worst, 1.0 - fit.fidelity);
  }
  rep.residual = worst;
  rep.pass = worst <= 1e-9;
  return rep;
}

CheckReport check_block_equivalence(const LatticeGraph& g, const Coloring& coloring,
                                    const InjectiveCovering& covering,
                                    const std::vector<double>& deltas) {
  CheckReport rep;
  rep.name = "block_equivalence";
  rep.anchor = "grouped-term-kernel-and-sandwich";
  rep.params = "deltas=" + join_doubles(deltas);

  CoarseGraph cg = coarse_grain(g, covering);
  if (cg.edges.empty()) throw std::invalid_argument("check_block_equivalence: no coarse edges");

  double worst = 0.0;
  bool pass = true;
  std::ostringstream os;
  std::vector<double> sorted = deltas;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> lambda_mins;

  for (double d : sorted) {
    if (d <= 0.0) throw std::invalid_argument("check_block_equivalence: deltas must be positive");
    double lam_min_edge = 1e300;
    for (auto& [a, b] : cg.edges) {
      GroupedTerm h = grouped_term(g, coloring, covering, a, b, d);
      Matrix pi = blocked_projector(g, coloring, covering.regions[a], covering.regions[b], d);

      RealVector w = dense_eigenvalues(h.matrix);
      const double scale = std::max(1.0, w(w.size() - 1));
      Eigen::Index ker_h = 0;
      while (ker_h < w.size() && w(ker_h) < 1e-9 * scale) ++ker_h;
      Eigen::Index ker_pi = pi.rows() - static_cast<Eigen::Index>(std::llround(pi.trace().real()));
      if (ker_h != ker_pi) {
        pass = false;
        os << "kernel mismatch " << ker_h << " vs " << ker_pi << " at delta=" << d << " ";
        continue;
      }
      const double lam_min = w(ker_h);
      const double lam_max = w(w.size() - 1);
      lam_min_edge = std::min(lam_min_edge, lam_min);

      double m1 = min_eig(h.matrix - lam_min * pi);
      double m2 = min_eig(lam_max * pi - h.matrix);
      worst = std::max(worst, std::max(-m1, -m2));
      if (m1 < -1e-9 || m2 < -1e-9) pass = false;
    }
    lambda_mins.push_back(lam_min_edge);
  }
  for (size_t k = 1; k < lambda_mins.size(); ++k)
    if (lambda_mins[k] >= lambda_mins[k - 1]) pass = false;  // smaller delta, smaller lambda_min

  rep.pass = pass;
  rep.residual = worst;
  os << "lambda_min=" << join_doubles(lambda_mins);
  rep.params += " " + os.str();
  return rep;
}

namespace {

// Product over the region's interior edges of CZ gates on the logical
// subspaces (identity elsewhere), embedded on the union block.
Matrix region_cz_product(const LatticeGraph& g, const Encoding& enc, const Region& region,
                         const std::vector<int>& block_sites, const std::vector<int>& site_dims) {
  std::int64_t block = 1;
  for (int v : block_sites) block *= site_dims[v];
  Matrix w = Matrix::Identity(block, block);
  std::set<int> inside(region.members.begin(), region.members.end());
  for (auto& [i, j] : g.edges()) {
    if (!inside.count(i) || !inside.count(j)) continue;
    const Matrix& bi = enc[i];
    const Matrix& bj = enc[j];
    Matrix pli = bi * bi.adjoint();
    Matrix plj = bj * bj.adjoint();
    const Eigen::Index di = site_dims[i], dj = site_dims[j];
    Matrix cz = Matrix::Zero(di * dj, di * dj);
    for (int a = 0; a < 2; ++a)
      for (int bq = 0; bq < 2; ++bq) {
        Matrix term(di * dj, di * dj);
        Matrix pi_a = bi.col(a) * bi.col(a).adjoint();
        Matrix pj_b = bj.col(bq) * bj.col(bq).adjoint();
        // site i varies fastest
        for (Eigen::Index r2 = 0; r2 < dj; ++r2)
          for (Eigen::Index c2 = 0; c2 < dj; ++c2)
            term.block(r2 * di, c2 * di, di, di) = pj_b(r2, c2) * pi_a;
        cz += ((a == 1 && bq == 1) ? -1.0 : 1.0) * term;
      }
    Matrix rest = Matrix::Identity(di * dj, di * dj);
    for (Eigen::Index r2 = 0; r2 < dj; ++r2)
      for (Eigen::Index c2 = 0; c2 < dj; ++c2)
        rest.block(r2 * di, c2 * di, di, di) -= plj(r2, c2) * pli;
    // CZ on the logical subspace, identity on the complement
    Matrix op = cz + rest;
    w = embed_in_block(op, {i, j}, block_sites, site_dims) * w;
  }
  return w;
}

}  // namespace

CheckReport check_commuting_blocked(const LatticeGraph& g, const Coloring& coloring,
                                    const InjectiveCovering& covering) {
  CheckReport rep;
  rep.name = "commuting_blocked";
  rep.anchor = "conjugated-blocked-terms-commute";

  CoarseGraph cg = coarse_grain(g, covering);
  std::vector<int> site_dims;
  std::int64_t total = 1;
  for (int v = 0; v < g.num_vertices(); ++v) {
    site_dims.push_back(g.degree(v) + 1);
    total *= site_dims.back();
  }
  if (total > 4096) throw std::invalid_argument("check_commuting_blocked: instance too large");
  std::vector<int> all_sites(g.num_vertices());
  std::iota(all_sites.begin(), all_sites.end(), 0);

  Encoding enc = colour_encoding(g, coloring);
  Matrix w_total = Matrix::Identity(total, total);
  for (const Region& reg : covering.regions)
    w_total = region_cz_product(g, enc, reg, all_sites, site_dims) * w_total;

  std::vector<Matrix> raw, conj;
  for (auto& [a, b] : cg.edges) {
    Matrix pi = blocked_projector(g, coloring, covering.regions[a], covering.regions[b], 0.0);
    Region ab = make_region(
        g, [&] {
          std::vector<int> m = covering.regions[a].members;
          m.insert(m.end(), covering.regions[b].members.begin(),
                   covering.regions[b].members.end());
          return m;
        }());
    Matrix full = embed_in_block(pi, ab.members, all_sites, site_dims);
    raw.push_back(full);
    conj.push_back(w_total * full * w_total.adjoint());
  }

  double worst = 0.0, worst_raw = 0.0;
  for (size_t p = 0; p < conj.size(); ++p)
    for (size_t q = p + 1; q < conj.size(); ++q) {
      worst = std::max(worst, (conj[p] * conj[q] - conj[q] * conj[p]).cwiseAbs().maxCoeff());
      worst_raw =
          std::max(worst_raw, (raw[p] * raw[q] - raw[q] * raw[p]).cwiseAbs().maxCoeff());
    }

  Matrix hb = Matrix::Zero(total, total);
  for (const Matrix& m : raw) hb += m;
  RealVector w = dense_eigenvalues(hb);
  const double gap0 = w(1) - w(0);

  // ground state should factorize over crossing pairs after conjugation
  RealVector values;
  Matrix vectors;
  dense_eigensystem(hb, values, vectors);
  StateVector ground;
  ground.amplitudes = w_total * vectors.col(0);
  ground.site_dims = site_dims;
  double purity_dev = 0.0;
  for (auto& [key, crossing] : cg.crossing_edges)
    for (auto& [u, v] : crossing) {
      DensityMatrix rho = reduced_density(ground, {u, v});
      Matrix r2 = rho.entries * rho.entries;
      purity_dev = std::max(purity_dev, std::abs(1.0 - r2.trace().real()));
    }

  rep.residual = worst;
  rep.pass = worst < 1e-10 && gap0 >= 1.0 - 1e-9 && purity_dev < 1e-9;
  std::ostringstream os;
  os << "commutator=" << worst << " raw_commutator=" << worst_raw << " hb0_gap=" << gap0
     << " ground_pair_purity_dev=" << purity_dev;
  rep.params = os.str();
  return rep;
}

CheckReport check_sufficient_condition(const Matrix& h1, const Matrix& h2, int r,
                                       double delta_gap) {
  CheckReport rep;
  rep.name = "sufficient_condition";
  rep.anchor = "overlapping-pair-anticommutator-bound";
  if (r < 2) throw std::invalid_argument("check_sufficient_condition: r must be >= 2");
  Matrix lhs = h1 * h2 + h2 * h1 + (1.0 - delta_gap) / (2.0 * (r - 1)) * (h1 + h2);
  const double m = min_eig(lhs);
  rep.residual = std::max(0.0, -m);
  rep.pass = m >= -1e-9;
  std::ostringstream os;
  os << "min_eig=" << m << " Delta=" << delta_gap << " r=" << r;
  rep.params = os.str();
  return rep;
}

namespace {

CheckReport check_sparse_frustration_free() {
  CheckReport rep;
  rep.name = "sparse_frustration_free";
  rep.anchor = "frustration-free-at-sparse-scale";
  LatticeGraph g = build_lattice(LatticeKind::ring, {9, 1}, Boundary::periodic);
  Coloring c = three_colouring(g);
  const double delta = 0.5;
  SparseOperator h = assemble_H(g, c, delta);
  StateVector psi = build_psi(g, c, delta);
  const double state_resid = (h.matrix * psi.amplitudes).norm();
  SpectrumResult s = lowest_eigs(h, 2, 1e-10, 2718);
  const double e0 = s.converged ? std::abs(s.eigenvalues(0)) : 1.0;
  rep.residual = std::max(state_resid, e0);
  rep.pass = s.converged && rep.residual < 1e-9;
  std::ostringstream os;
  os << "dim=" << h.dim() << " |H psi|=" << state_resid << " E0=" << (s.converged ? s.eigenvalues(0) : 0.0)
     << " E1=" << (s.converged && s.eigenvalues.size() > 1 ? s.eigenvalues(1) : 0.0);
  rep.params = os.str();
  return rep;
}

}  // namespace

std::vector<CheckReport> run_suite(const std::string& selector) {
  std::vector<CheckReport> reports;

  const bool all = selector == "lemmas" || selector == "all";
  LatticeGraph ring6 = build_lattice(LatticeKind::ring, {6, 1}, Boundary::periodic);
  Coloring ring6_col = three_colouring(ring6);
  LatticeGraph star1 = build_lattice(LatticeKind::star, {1, 1}, Boundary::periodic);
  Coloring star1_col = three_colouring(star1);

  if (all || selector == "reduced_density") {
    reports.push_back(check_reduced_density(ring6));
    reports.push_back(check_reduced_density(star1));
  }
  if (all || selector == "gap_collapse")
    reports.push_back(check_gap_collapse(ring6, ring6_col, {0.3, 0.1, 0.03, 0.01, 0.003}));
  if (all || selector == "injectivity") {
    LatticeGraph honey = build_lattice(LatticeKind::honeycomb, {3, 3}, Boundary::periodic);
    Coloring hcol = three_colouring(honey);
    auto hcov = injective_covering(honey);
    std::vector<Region> regions;
    regions.push_back(hcov->regions.front());           // hexagon, satisfies the criterion
    regions.push_back(make_region(honey, {0}));         // single vertex, 3 outgoing: violates
    regions.push_back(make_region(honey, {0, 1}));      // adjacent pair, 2+2 outgoing: violates
    reports.push_back(check_injectivity(honey, hcol, regions));
    Region tri = make_region(star1, {0, 1, 2});
    reports.push_back(check_injectivity(star1, star1_col, {tri}));
  }
  if (all || selector == "conversion") {
    reports.push_back(check_conversion(ring6, ring6_col, {1.0, 0.3, 0.0}));
    reports.push_back(check_conversion(star1, star1_col, {1.0, 0.3, 0.0}));
  }
  if (all || selector == "block_equivalence") {
    auto cov = injective_covering(ring6);
    reports.push_back(check_block_equivalence(ring6, ring6_col, *cov, {0.3, 0.1, 0.03}));
  }
  if (all || selector == "commuting_blocked") {
    auto cov = injective_covering(ring6);
    reports.push_back(check_commuting_blocked(ring6, ring6_col, *cov));
  }
  if (all || selector == "sparse_frustration_free")
    reports.push_back(check_sparse_frustration_free());
  if (all || selector == "sufficient_condition") {
    // commuting pair on three qubits sharing the middle site
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    Matrix i2 = Matrix::Identity(2, 2);
    auto kron3 = [](const Matrix& a, const Matrix& b, const Matrix& c) {
      Matrix ab(a.rows() * b.rows(), a.cols() * b.cols());
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
          ab.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
      Matrix out(ab.rows() * c.rows(), ab.cols() * c.cols());
      for (Eigen::Index i = 0; i < ab.rows(); ++i)
        for (Eigen::Index j = 0; j < ab.cols(); ++j)
          out.block(i * c.rows(), j * c.cols(), c.rows(), c.cols()) = ab(i, j) * c;
      return out;
    };
    // site 0 fastest: operator on sites (0,1) is kron(I_2 ⊗ pair) in this order
    Matrix h1 = kron3(i2, p0, p0);  // acts on sites 0,1 (slow order: site2, site1, site0)
    Matrix h2 = kron3(p0, p0, i2);  // acts on sites 1,2
    reports.push_back(check_sufficient_condition(h1, h2, 3, 1.0));
  }
  if (reports.empty()) throw std::invalid_argument("run_suite: unknown selector " + selector);
  return reports;
}

std::string format_report(const CheckReport& r) {
  std::ostringstream os;
  os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.anchor << ") residual="
     << r.residual << " " << r.params;
  return os.str();
}

}  // namespace aklt
