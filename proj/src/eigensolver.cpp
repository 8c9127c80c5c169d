#include "aklt/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include <algorithm>
#include <random>

namespace aklt {

namespace {

constexpr Eigen::Index kLapackCutoff = 65;

void check_hermitian(const Matrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigensolver: matrix not square");
  double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (dev > 1e-10 * scale) throw std::invalid_argument("eigensolver: matrix not hermitian");
}

RealVector lapack_eigh(const Matrix& h, Matrix* vectors) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  Matrix a = h;  // overwritten
  RealVector w(n);
  lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
  if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
  if (vectors) *vectors = std::move(a);
  return w;
}

}  // namespace

RealVector dense_eigenvalues(const Matrix& h) {
  check_hermitian(h);
  if (h.rows() >= kLapackCutoff) return lapack_eigh(h, nullptr);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

void dense_eigensystem(const Matrix& h, RealVector& values, Matrix& vectors) {
  check_hermitian(h);
  if (h.rows() >= kLapackCutoff) {
    values = lapack_eigh(h, &vectors);
    return;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  values = es.eigenvalues();
  vectors = es.eigenvectors();
}

double min_eig(const Matrix& h) {
  return dense_eigenvalues(h)(0);
}

SpectrumResult lowest_eigs(const SparseOperator& op, int k, double tol, std::uint64_t seed) {
  if (!op.hermitian) throw std::invalid_argument("lowest_eigs: operator must be hermitian");
  const SparseMatrix& m = op.matrix;
  return lowest_eigs([&m](const Vector& x, Vector& y) { y.noalias() = m * x; }, m.rows(), k, tol,
                     seed);
}

SpectrumResult lowest_eigs(const std::function<void(const Vector&, Vector&)>& apply,
                           Eigen::Index dim, int k, double tol, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("lowest_eigs: k must be >= 1");
  k = static_cast<int>(std::min<Eigen::Index>(k, dim));

  SpectrumResult result;
  result.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vector = [&]() {
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return v;
  };

  std::vector<Vector> converged_vecs;
  std::vector<double> converged_vals;
  Vector work(dim);
  int total_iters = 0;
  const int max_rounds = 4 * k + 12;
  int krylov_dim = 4 * k + 20;

  auto orth_against = [&](Vector& v, const std::vector<Vector>& basis) {
    for (const auto& b : basis) v -= b * b.dot(v);
  };

  for (int round = 0; round < max_rounds && static_cast<int>(converged_vals.size()) < k;
       ++round) {
    const int m = static_cast<int>(
        std::min<Eigen::Index>(dim - static_cast<Eigen::Index>(converged_vecs.size()),
                               krylov_dim));
    if (m < 1) break;

    std::vector<Vector> basis;
    basis.reserve(m);
    Vector v = random_vector();
    orth_against(v, converged_vecs);
    if (v.norm() < 1e-14) continue;
    v.normalize();
    basis.push_back(v);

    RealVector alpha = RealVector::Zero(m);
    RealVector beta = RealVector::Zero(m);  // beta(j) links j and j+1
    int built = 1;
    for (int j = 0; j < m; ++j) {
      apply(basis[j], work);
      Vector w = work;
      alpha(j) = std::real(basis[j].dot(w));
      // full reorthogonalization, twice, against deflated and current bases
      for (int rep = 0; rep < 2; ++rep) {
        orth_against(w, converged_vecs);
        orth_against(w, basis);
      }
      double b = w.norm();
      if (j + 1 < m) {
        if (b < 1e-13) { built = j + 1; break; }
        beta(j) = b;
        basis.push_back(w / b);
        built = j + 2;
      }
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(built, built);
    for (int j = 0; j < built; ++j) {
      tri(j, j) = alpha(j);
      if (j + 1 < built) tri(j, j + 1) = tri(j + 1, j) = beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    total_iters += built;

    // Accept converged Ritz pairs from the bottom of the spectrum; grow the
    // Krylov space for the next round if this one was unproductive.
    const size_t before = converged_vals.size();
    const int want = k - static_cast<int>(before);
    for (int j = 0; j < std::min(built, want + 4) &&
                    static_cast<int>(converged_vals.size()) < k;
         ++j) {
      Vector ritz = Vector::Zero(dim);
      for (int p = 0; p < built; ++p) ritz += es.eigenvectors()(p, j) * basis[p];
      orth_against(ritz, converged_vecs);
      double nrm = ritz.norm();
      if (nrm < 1e-10) continue;
      ritz /= nrm;
      apply(ritz, work);
      double theta = std::real(ritz.dot(work));
      double resid = (work - theta * ritz).norm();
      if (resid <= std::max(tol, 1e-13)) {
        converged_vecs.push_back(ritz);
        converged_vals.push_back(theta);
      }
    }
    if (converged_vals.size() == before)
      krylov_dim = std::min<int>(2 * krylov_dim, 2000);
  }

  std::vector<int> order(converged_vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return converged_vals[a] < converged_vals[b]; });

  const int found = std::min<int>(k, static_cast<int>(order.size()));
  result.eigenvalues.resize(found);
  result.residuals.resize(found);
  for (int i = 0; i < found; ++i) {
    const Vector& v = converged_vecs[order[i]];
    apply(v, work);
    result.eigenvalues(i) = converged_vals[order[i]];
    result.residuals(i) = (work - converged_vals[order[i]] * v).norm();
  }
  result.iterations = total_iters;
  result.converged = found == k;
  return result;
}

GapResult gap(const SparseOperator& op, double tol, std::uint64_t seed,
              double degeneracy_threshold) {
  GapResult g;
  int k = std::max(2, 4);
  for (; k <= 64; k *= 2) {
    SpectrumResult s = lowest_eigs(op, k, tol, seed);
    if (!s.converged) { g.spectrum = s; return g; }
    double e0 = s.eigenvalues(0);
    for (int i = 1; i < s.eigenvalues.size(); ++i) {
      if (s.eigenvalues(i) - e0 > degeneracy_threshold) {
        g.e0 = e0;
        g.e1 = s.eigenvalues(i);
        g.gap = g.e1 - g.e0;
        g.spectrum = s;
        return g;
      }
    }
    if (k >= op.dim()) break;
  }
  g.spectrum.converged = false;
  return g;
}

int degeneracy_count(const SparseOperator& op, double energy, double threshold,
                     std::int64_t dense_cap) {
  if (op.dim() > dense_cap)
    throw std::invalid_argument("degeneracy_count: dimension exceeds the dense cap");
  Matrix dense = Matrix(op.matrix);
  RealVector w = dense_eigenvalues(dense);
  int count = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (std::abs(w(i) - energy) <= threshold) ++count;
  return count;
}

}  // namespace aklt
