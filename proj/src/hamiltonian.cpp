#include "aklt/hamiltonian.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <fstream>
#include <set>
#include <sstream>

#include "aklt/spin_algebra.hpp"
#include "aklt/tensor_core.hpp"

namespace aklt {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Two-site operators act on (i, j) with site i varying fastest, matching the
// column-major state layout; kron(A_j, A_i) realizes A_i x A_j in that layout.
Matrix pair_op(const Matrix& on_i, const Matrix& on_j) { return kron(on_j, on_i); }

constexpr double kRankTol = 1e-10;

}  // namespace

Matrix deformed_interaction(Spin si, Spin sj, Axis axis_i, Axis axis_j, double delta) {
  if (delta <= 0.0)
    throw std::invalid_argument("deformed_interaction: delta must be positive (see q_projector)");
  Matrix p = total_spin_projector(si, sj, Spin(si.twice + sj.twice));
  Matrix di = deformation(si, axis_i, delta).inverse();
  Matrix dj = deformation(sj, axis_j, delta).inverse();
  Matrix dd = pair_op(di, dj);
  return dd * p * dd;
}

TwoSiteTerm q_projector(Spin si, Spin sj, Axis axis_i, Axis axis_j, double delta) {
  if (delta < 0.0) throw std::invalid_argument("q_projector: delta must be non-negative");
  Spin j_top(si.twice + sj.twice);
  const int expected_rank = j_top.dim();
  Matrix basis = coupled_basis(si, sj, j_top);  // image of P^{S_tot}, orthonormal columns
  // coupled_basis orders the pair as (site1 slow, site2 fast); our layout
  // wants site i fastest, so swap the tensor factors.
  {
    const int ni = si.dim(), nj = sj.dim();
    Matrix swapped(ni * nj, basis.cols());
    for (int a = 0; a < ni; ++a)
      for (int b = 0; b < nj; ++b)
        swapped.row(a + ni * b) = basis.row(a * nj + b);
    basis = std::move(swapped);
  }

  TwoSiteTerm term;
  term.delta = delta;
  if (delta > 0.0) {
    Matrix di = deformation(si, axis_i, delta).inverse();
    Matrix dj = deformation(sj, axis_j, delta).inverse();
    Matrix m = pair_op(di, dj) * basis;
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    int rank = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
      if (svd.singularValues()(k) > kRankTol * svd.singularValues()(0)) ++rank;
    if (rank != expected_rank)
      throw std::runtime_error("q_projector: numerical rank deviates from 2J+1");
    Matrix u = svd.matrixU().leftCols(rank);
    term.matrix = u * u.adjoint();
    term.rank = rank;
    return term;
  }

  // delta = 0: graded limit. D^{-1} x D^{-1} = Pi_0 + delta^{-1} Pi_1 +
  // delta^{-2} Pi_2 with Pi_g projecting onto the grade-g eigenspace of the
  // pair of colour projectors. The limiting column span is assembled from the
  // leading-grade components, cascading through the null combinations.
  Matrix pi = pc_projector(si, axis_i);
  Matrix pj = pc_projector(sj, axis_j);
  Matrix pli = pair_op(pi, pj);                                             // grade 0
  Matrix one = Matrix::Identity(si.dim() * sj.dim(), si.dim() * sj.dim());
  Matrix qi = Matrix::Identity(si.dim(), si.dim()) - pi;
  Matrix qj = Matrix::Identity(sj.dim(), sj.dim()) - pj;
  Matrix grade1 = pair_op(qi, pj) + pair_op(pi, qj);
  Matrix grade2 = pair_op(qi, qj);

  std::vector<Matrix> grades{grade2, grade1, pli};
  Matrix current = basis;
  std::vector<Matrix> leads;
  int collected = 0;
  for (const Matrix& gproj : grades) {
    if (current.cols() == 0) break;
    Matrix comp = gproj * current;
    Eigen::JacobiSVD<Matrix> svd(comp, Eigen::ComputeThinU | Eigen::ComputeThinV);
    int r = 0;
    if (svd.singularValues().size() > 0 && svd.singularValues()(0) > 1e-12)
      for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) > kRankTol * svd.singularValues()(0)) ++r;
    if (r > 0) {
      leads.push_back(svd.matrixU().leftCols(r));
      collected += r;
      // continue with the combinations whose grade-g part vanishes
      Matrix v = svd.matrixV();
      current = current * v.rightCols(v.cols() - r);
    }
  }
  if (collected != expected_rank)
    throw std::runtime_error("q_projector: graded limit rank deviates from 2J+1");
  Matrix span(basis.rows(), collected);
  int col = 0;
  for (const Matrix& l : leads) {
    span.middleCols(col, l.cols()) = l;
    col += static_cast<int>(l.cols());
  }
  Eigen::HouseholderQR<Matrix> qr(span);
  Matrix q = qr.householderQ() * Matrix::Identity(span.rows(), collected);
  term.matrix = q * q.adjoint();
  term.rank = collected;
  return term;
}

void add_embedded_two_site(std::vector<Eigen::Triplet<Complex>>& triplets, const Matrix& op,
                           int i, int j, const std::vector<int>& site_dims) {
  const int n = static_cast<int>(site_dims.size());
  if (i >= j) throw std::invalid_argument("add_embedded_two_site: need i < j");
  std::vector<std::int64_t> stride(n);
  std::int64_t total = 1;
  for (int v = 0; v < n; ++v) {
    stride[v] = total;
    total *= site_dims[v];
  }
  const int di = site_dims[i], dj = site_dims[j];
  if (op.rows() != di * dj) throw std::invalid_argument("add_embedded_two_site: size mismatch");

  // enumerate the complement space once; add op entries relative to it
  std::vector<int> rest;
  for (int v = 0; v < n; ++v)
    if (v != i && v != j) rest.push_back(v);
  std::int64_t rest_dim = 1;
  for (int v : rest) rest_dim *= site_dims[v];

  for (std::int64_t e = 0; e < rest_dim; ++e) {
    std::int64_t base = 0, rem = e;
    for (int v : rest) {
      base += (rem % site_dims[v]) * stride[v];
      rem /= site_dims[v];
    }
    for (int r = 0; r < di * dj; ++r) {
      const std::int64_t row = base + (r % di) * stride[i] + (r / di) * stride[j];
      for (int c = 0; c < di * dj; ++c) {
        if (op(r, c) == Complex(0, 0)) continue;
        const std::int64_t col = base + (c % di) * stride[i] + (c / di) * stride[j];
        triplets.emplace_back(row, col, op(r, c));
      }
    }
  }
}

SparseOperator assemble_H(const LatticeGraph& g, const Coloring& coloring, double delta,
                          std::int64_t dim_cap) {
  if (!coloring.valid_for(g)) throw std::invalid_argument("assemble_H: invalid colouring");
  SparseOperator op;
  std::int64_t total = 1;
  for (int v = 0; v < g.num_vertices(); ++v) {
    op.site_dims.push_back(g.degree(v) + 1);
    total *= op.site_dims.back();
    if (total > dim_cap) throw std::invalid_argument("assemble_H: dimension cap exceeded");
  }
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (auto& [i, j] : g.edges()) {
    TwoSiteTerm q = q_projector(g.spin(i), g.spin(j), coloring.colour[i], coloring.colour[j], delta);
    add_embedded_two_site(triplets, q.matrix, i, j, op.site_dims);
  }
  op.matrix.resize(total, total);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.hermitian = true;
  return op;
}

SparseOperator cluster_hamiltonian(const LatticeGraph& g) {
  const int n = g.num_vertices();
  if (n > 24) throw std::invalid_argument("cluster_hamiltonian: too many qubits");
  SparseOperator op;
  op.site_dims.assign(n, 2);
  const std::int64_t dim = std::int64_t(1) << n;
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<size_t>(dim) * (n + 1));
  for (std::int64_t b = 0; b < dim; ++b) triplets.emplace_back(b, b, 0.5 * n);
  for (int i = 0; i < n; ++i) {
    for (std::int64_t b = 0; b < dim; ++b) {
      int sign = 0;
      for (int j : g.neighbours(i)) sign ^= static_cast<int>((b >> j) & 1);
      // -K_i/2 contribution: K_i |b> = (-1)^{sum znb} |b ^ ei>
      triplets.emplace_back(b ^ (std::int64_t(1) << i), b, sign ? 0.5 : -0.5);
    }
  }
  op.matrix.resize(dim, dim);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.hermitian = true;
  return op;
}

namespace {

Region union_region(const LatticeGraph& g, const Region& a, const Region& b) {
  std::vector<int> members = a.members;
  members.insert(members.end(), b.members.begin(), b.members.end());
  return make_region(g, std::move(members));
}

}  // namespace

Matrix blocked_projector(const LatticeGraph& g, const Coloring& coloring, const Region& region_a,
                         const Region& region_b, double delta) {
  Region ab = union_region(g, region_a, region_b);
  LinearMap bmap = block_map(g, coloring, ab, delta);
  const Eigen::Index out_dim = bmap.matrix.rows();
  Eigen::JacobiSVD<Matrix> svd(bmap.matrix, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > kRankTol * s(0)) ++rank;
  if (rank != bmap.matrix.cols())
    throw std::runtime_error("blocked_projector: block map numerically non-injective");
  Matrix u = svd.matrixU().leftCols(rank);
  return Matrix::Identity(out_dim, out_dim) - u * u.adjoint();
}

SparseOperator assemble_HB(const LatticeGraph& g, const Coloring& coloring,
                           const InjectiveCovering& covering, double delta,
                           std::int64_t dim_cap) {
  CoarseGraph cg = coarse_grain(g, covering);
  SparseOperator op;
  std::int64_t total = 1;
  for (int v = 0; v < g.num_vertices(); ++v) {
    op.site_dims.push_back(g.degree(v) + 1);
    total *= op.site_dims.back();
    if (total > dim_cap) throw std::invalid_argument("assemble_HB: dimension cap exceeded");
  }
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (auto& [a, b] : cg.edges) {
    Matrix pi = blocked_projector(g, coloring, covering.regions[a], covering.regions[b], delta);
    Region ab = union_region(g, covering.regions[a], covering.regions[b]);
    std::vector<int> sites = ab.members;
    std::vector<std::int64_t> stride(g.num_vertices());
    std::int64_t t = 1;
    for (int v = 0; v < g.num_vertices(); ++v) {
      stride[v] = t;
      t *= op.site_dims[v];
    }
    std::vector<int> rest;
    for (int v = 0; v < g.num_vertices(); ++v)
      if (!std::binary_search(sites.begin(), sites.end(), v)) rest.push_back(v);
    std::int64_t rest_dim = 1;
    for (int v : rest) rest_dim *= op.site_dims[v];
    std::int64_t block_dim = pi.rows();

    auto block_to_base = [&](std::int64_t idx) {
      std::int64_t base = 0, rem = idx;
      for (int v : sites) {
        base += (rem % op.site_dims[v]) * stride[v];
        rem /= op.site_dims[v];
      }
      return base;
    };
    std::vector<std::int64_t> offsets(block_dim);
    for (std::int64_t k = 0; k < block_dim; ++k) offsets[k] = block_to_base(k);

    for (std::int64_t e = 0; e < rest_dim; ++e) {
      std::int64_t base = 0, rem = e;
      for (int v : rest) {
        base += (rem % op.site_dims[v]) * stride[v];
        rem /= op.site_dims[v];
      }
      for (std::int64_t r = 0; r < block_dim; ++r)
        for (std::int64_t c = 0; c < block_dim; ++c) {
          if (std::abs(pi(r, c)) < 1e-15) continue;
          triplets.emplace_back(base + offsets[r], base + offsets[c], pi(r, c));
        }
    }
  }
  op.matrix.resize(total, total);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.hermitian = true;
  return op;
}

GroupedTerm grouped_term(const LatticeGraph& g, const Coloring& coloring,
                         const InjectiveCovering& covering, int a, int b, double delta) {
  CoarseGraph cg = coarse_grain(g, covering);
  Edge key{std::min(a, b), std::max(a, b)};
  auto it = cg.crossing_edges.find(key);
  if (it == cg.crossing_edges.end())
    throw std::invalid_argument("grouped_term: regions are not adjacent");

  const Region& ra = covering.regions[a];
  const Region& rb = covering.regions[b];
  Region ab = union_region(g, ra, rb);
  const double r = covering.uniform_r;

  std::vector<int> sites = ab.members;
  std::vector<int> dims;
  std::vector<int> site_dims_all;
  for (int v = 0; v < g.num_vertices(); ++v) site_dims_all.push_back(g.degree(v) + 1);
  std::int64_t block = 1;
  for (int v : sites) {
    dims.push_back(site_dims_all[v]);
    block *= site_dims_all[v];
  }

  GroupedTerm out;
  out.sites = sites;
  out.matrix = Matrix::Zero(block, block);
  std::set<int> in_a(ra.members.begin(), ra.members.end());
  std::set<int> in_b(rb.members.begin(), rb.members.end());
  for (auto& [u, v] : g.edges()) {
    bool ua = in_a.count(u), va = in_a.count(v), ub = in_b.count(u), vb = in_b.count(v);
    double weight;
    if ((ua && va) || (ub && vb)) weight = 1.0 / r;        // inside E_a or E_b
    else if ((ua && vb) || (ub && va)) weight = 1.0;       // crossing E_ab
    else continue;
    TwoSiteTerm q = q_projector(g.spin(u), g.spin(v), coloring.colour[u], coloring.colour[v], delta);
    out.matrix += weight * embed_in_block(q.matrix, {u, v}, sites, site_dims_all);
  }
  return out;
}

Matrix embed_in_block(const Matrix& op, const std::vector<int>& op_sites,
                      const std::vector<int>& block_sites, const std::vector<int>& site_dims) {
  std::vector<int> osites = op_sites;
  std::sort(osites.begin(), osites.end());
  std::int64_t block = 1;
  for (int v : block_sites) block *= site_dims[v];
  std::int64_t odim = 1;
  for (int v : osites) odim *= site_dims[v];
  if (op.rows() != odim) throw std::invalid_argument("embed_in_block: size mismatch");

  // strides of each block site within the block index
  std::vector<std::int64_t> bstride(block_sites.size());
  std::int64_t t = 1;
  for (size_t k = 0; k < block_sites.size(); ++k) {
    bstride[k] = t;
    t *= site_dims[block_sites[k]];
  }
  std::vector<std::int64_t> ostride;  // stride of op sites inside the block
  std::vector<int> odims;
  for (int v : osites) {
    auto it = std::find(block_sites.begin(), block_sites.end(), v);
    if (it == block_sites.end()) throw std::invalid_argument("embed_in_block: site not in block");
    ostride.push_back(bstride[it - block_sites.begin()]);
    odims.push_back(site_dims[v]);
  }
  std::vector<int> rest;
  std::vector<std::int64_t> rstride;
  for (size_t k = 0; k < block_sites.size(); ++k)
    if (std::find(osites.begin(), osites.end(), block_sites[k]) == osites.end()) {
      rest.push_back(site_dims[block_sites[k]]);
      rstride.push_back(bstride[k]);
    }
  std::int64_t rest_dim = 1;
  for (int d : rest) rest_dim *= d;

  auto op_to_offset = [&](std::int64_t idx) {
    std::int64_t off = 0, rem = idx;
    for (size_t k = 0; k < odims.size(); ++k) {
      off += (rem % odims[k]) * ostride[k];
      rem /= odims[k];
    }
    return off;
  };
  std::vector<std::int64_t> off(odim);
  for (std::int64_t k = 0; k < odim; ++k) off[k] = op_to_offset(k);

  Matrix out = Matrix::Zero(block, block);
  for (std::int64_t e = 0; e < rest_dim; ++e) {
    std::int64_t base = 0, rem = e;
    for (size_t k = 0; k < rest.size(); ++k) {
      base += (rem % rest[k]) * rstride[k];
      rem /= rest[k];
    }
    for (std::int64_t r = 0; r < odim; ++r)
      for (std::int64_t c = 0; c < odim; ++c) {
        if (op(r, c) == Complex(0, 0)) continue;
        out(base + off[r], base + off[c]) += op(r, c);
      }
  }
  return out;
}

void export_operator(const SparseOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_operator: cannot open " + path);
  out << "dim " << op.dim() << " hermitian " << (op.hermitian ? 1 : 0) << "\n";
  out.precision(17);
  for (int k = 0; k < op.matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(op.matrix, k); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag()
          << '\n';
}

SparseOperator import_operator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("import_operator: cannot open " + path);
  std::string word;
  std::int64_t dim;
  int herm;
  in >> word >> dim >> word >> herm;
  std::vector<Eigen::Triplet<Complex>> triplets;
  std::int64_t r, c;
  double re, im;
  while (in >> r >> c >> re >> im) triplets.emplace_back(r, c, Complex(re, im));
  SparseOperator op;
  op.matrix.resize(dim, dim);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.hermitian = herm != 0;
  return op;
}

}  // namespace aklt
