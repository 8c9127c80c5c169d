#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <functional>

#include "aklt/types.hpp"

namespace aklt {

struct SpectrumResult {
  RealVector eigenvalues;   // ascending
  RealVector residuals;     // ||A v - lambda v|| per pair
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Hermitian sparse operator on a product of site spaces.
struct SparseOperator {
  SparseMatrix matrix;
  std::vector<int> site_dims;
  bool hermitian = true;

  Eigen::Index dim() const { return matrix.rows(); }
};

/// Eigenvalues (and optionally vectors) of a dense Hermitian matrix,
/// ascending. LAPACK backs dimensions above a small cutoff.
RealVector dense_eigenvalues(const Matrix& h);
void dense_eigensystem(const Matrix& h, RealVector& values, Matrix& vectors);

/// Smallest eigenvalue of a dense Hermitian matrix.
double min_eig(const Matrix& h);

/// k smallest eigenvalues of a Hermitian operator by Lanczos iteration with
/// full reorthogonalization and deflated restarts; deterministic given seed.
SpectrumResult lowest_eigs(const SparseOperator& op, int k, double tol, std::uint64_t seed);

/// Matrix-free variant.
SpectrumResult lowest_eigs(const std::function<void(const Vector&, Vector&)>& apply,
                           Eigen::Index dim, int k, double tol, std::uint64_t seed);

struct GapResult {
  double e0 = 0, e1 = 0, gap = 0;
  SpectrumResult spectrum;
};

/// E0, E1 and the gap, where E1 is the lowest level separated from E0 by more
/// than degeneracy_threshold.
GapResult gap(const SparseOperator& op, double tol, std::uint64_t seed,
              double degeneracy_threshold = 1e-8);

/// Number of eigenvalues within `threshold` of `energy` (dense path).
int degeneracy_count(const SparseOperator& op, double energy, double threshold,
                     std::int64_t dense_cap = 4096);

}  // namespace aklt
