#include "aklt/gap_certifier.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "aklt/eigensolver.hpp"
#include "aklt/spin_algebra.hpp"
#include "aklt/tensor_core.hpp"

namespace aklt {

double mu0(int r) {
  if (r < 2) throw std::invalid_argument("mu0: r must be at least 2");
  return 0.5 + 0.5 * std::sqrt(double(r + 1) / double(r - 1));
}

namespace {

// Doubled site tensor: physical leg contracted between the deformed tensor
// and its conjugate; each virtual leg becomes a fused (ket, bra) leg of
// dimension 4 with ket varying fastest.
DenseTensor doubled_site_tensor(const LatticeGraph& g, const Coloring& coloring, int v,
                                double delta) {
  DenseTensor t = deformed_site_tensor(g.degree(v), coloring.colour[v], delta, v);
  DenseTensor tc = t;  // conjugate copy with shifted leg ids for the bra layer
  tc.data() = tc.data().conjugate();
  // relabel bra legs: leg -> leg + 100 (site kept)
  {
    std::vector<Label> labels = tc.labels();
    std::vector<Eigen::Index> dims = tc.dims();
    for (auto& l : labels)
      if (l.kind == LegKind::virt) l.leg += 100;
    DenseTensor renamed(labels, dims);
    renamed.data() = tc.data();
    tc = std::move(renamed);
  }
  DenseTensor dbl = contract(t, tc, {{phys(v), phys(v)}});
  // fuse (ket leg k, bra leg k+100) -> leg k of dimension 4, ket fastest
  std::vector<Label> order;
  std::vector<Label> fused_labels;
  std::vector<Eigen::Index> fused_dims;
  for (int k = 0; k < g.degree(v); ++k) {
    order.push_back(virt(v, k));
    order.push_back(virt(v, k + 100));
    fused_labels.push_back(virt(v, k));
    fused_dims.push_back(4);
  }
  DenseTensor p = dbl.permuted(order);
  DenseTensor fused(fused_labels, fused_dims);
  fused.data() = p.data();
  return fused;
}

}  // namespace

std::pair<double, double> btb_spectrum(const LatticeGraph& g, const Coloring& coloring,
                                       const Region& region, double delta) {
  if (region.members.empty()) throw std::invalid_argument("btb_spectrum: empty region");
  std::set<int> inside(region.members.begin(), region.members.end());

  const Matrix iy = singlet_edge();
  Matrix iy_doubled(4, 4);
  for (int r1 = 0; r1 < 2; ++r1)
    for (int r2 = 0; r2 < 2; ++r2)
      for (int c1 = 0; c1 < 2; ++c1)
        for (int c2 = 0; c2 < 2; ++c2)
          iy_doubled(r1 + 2 * r2, c1 + 2 * c2) = iy(r1, c1) * std::conj(iy(r2, c2));

  DenseTensor acc = DenseTensor::scalar(1.0);
  for (int v : region.members) {
    acc = contract(acc, doubled_site_tensor(g, coloring, v, delta), {});
    for (int u : g.neighbours(v)) {
      if (!inside.count(u) || u >= v) continue;
      Label lu = virt(u, g.leg_index(u, v));
      Label lv = virt(v, g.leg_index(v, u));
      Label tmp{LegKind::virt, -1, 0};
      acc = contract(acc, DenseTensor::from_matrix(iy_doubled, lu, tmp), {{lu, lu}});
      acc = trace_pair(acc, tmp, lv);
    }
  }

  // open fused legs, ordered by (vertex, leg); unfuse into (ket..., bra...)
  std::vector<Label> legs;
  for (auto& [in, out] : region.outgoing_edges) legs.push_back(virt(in, g.leg_index(in, out)));
  std::sort(legs.begin(), legs.end());
  const int r = static_cast<int>(legs.size());
  DenseTensor p = acc.permuted(legs);

  const Eigen::Index dim = Eigen::Index(1) << r;
  Matrix m(dim, dim);
  for (Eigen::Index lin = 0; lin < p.size(); ++lin) {
    Eigen::Index ket = 0, bra = 0, rem = lin;
    for (int k = 0; k < r; ++k) {
      Eigen::Index q = rem % 4;
      rem /= 4;
      ket |= (q & 1) << k;
      bra |= (q >> 1) << k;
    }
    // entry = sum_phys B(phys, ket) conj(B(phys, bra)) = (B^dag B)^T(ket, bra)
    m(bra, ket) = p.data()(lin);
  }
  double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw std::runtime_error("btb_spectrum: doubled network is not hermitian");
  Matrix h = 0.5 * (m + m.adjoint());
  RealVector w = dense_eigenvalues(h);
  const double gmin = w(0), gmax = w(w.size() - 1);
  if (gmin <= 1e-10 * gmax)
    throw std::runtime_error("btb_spectrum: region is not injective (gamma_min at rank tolerance)");
  return {gmin, gmax};
}

GapCertificate certify(const LatticeGraph& g, const Coloring& coloring, const Region& region,
                       double delta) {
  auto [gmin, gmax] = btb_spectrum(g, coloring, region, delta);
  GapCertificate cert;
  cert.lattice = lattice_kind_name(g.kind());
  std::ostringstream rs;
  rs << "region{";
  for (size_t k = 0; k < region.members.size(); ++k)
    rs << (k ? "," : "") << region.members[k];
  rs << "}";
  cert.region = rs.str();
  cert.r = region.r();
  cert.delta = delta;
  cert.gamma_min = gmin;
  cert.gamma_max = gmax;
  cert.ratio = gmax / gmin;
  cert.mu0 = mu0(cert.r);
  cert.verdict = cert.ratio < cert.mu0 ? Verdict::certified_gapped : Verdict::not_certified;
  return cert;
}

DeltaCResult find_delta_c(const LatticeGraph& g, const Coloring& coloring, const Region& region,
                          double tol) {
  // r < 2 has an unbounded threshold, so the ratio can never cross it
  const double target =
      region.r() >= 2 ? mu0(region.r()) : std::numeric_limits<double>::infinity();
  auto ratio_at = [&](double d) {
    auto [gmin, gmax] = btb_spectrum(g, coloring, region, d);
    return gmax / gmin;
  };

  // 21-point prescan: locate the first crossing and verify the ratio is
  // monotone on the approach, so the bisection bracket is trustworthy
  const int grid_n = 21;
  std::vector<double> grid_ratio(grid_n);
  int cross = -1;
  for (int k = 0; k < grid_n; ++k) {
    grid_ratio[k] = ratio_at(double(k) / (grid_n - 1));
    if (cross < 0 && grid_ratio[k] >= target) cross = k;
  }
  if (cross < 0)
    throw std::runtime_error("find_delta_c: ratio - mu0 does not change sign on [0, 1]");
  if (cross == 0) throw std::runtime_error("find_delta_c: ratio already above mu0 at delta = 0");
  for (int k = 1; k <= cross; ++k)
    if (grid_ratio[k] < grid_ratio[k - 1] - 1e-9)
      throw std::runtime_error("find_delta_c: ratio is not monotone on the bisection approach");

  double lo = double(cross - 1) / (grid_n - 1), hi = double(cross) / (grid_n - 1);
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (ratio_at(mid) > target) hi = mid;
    else lo = mid;
  }
  return {0.5 * (lo + hi), lo, hi};
}

double stability_delta_prime(double delta_gap, double mu, int r) {
  if (delta_gap <= 0.0 || delta_gap > 1.0)
    throw std::invalid_argument("stability_delta_prime: Delta must lie in (0, 1]");
  if (mu < 1.0) throw std::invalid_argument("stability_delta_prime: mu must be >= 1");
  if (r < 2) throw std::invalid_argument("stability_delta_prime: r must be >= 2");
  return 1.0 - mu * (1.0 - delta_gap + 2.0 * (r - 1) * (mu - 1.0));
}

}  // namespace aklt
