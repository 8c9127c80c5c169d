#include "aklt/spin_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>

namespace aklt {

std::array<Matrix, 3> spin_operators(Spin s) {
  const int n = s.dim();
  const double S = s.value();
  Matrix sz = Matrix::Zero(n, n);
  Matrix sp = Matrix::Zero(n, n);  // raising operator S+
  for (int k = 0; k < n; ++k) sz(k, k) = S - k;
  for (int k = 1; k < n; ++k) {
    const double m = S - k;  // S+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>
    sp(k - 1, k) = std::sqrt(S * (S + 1) - m * (m + 1));
  }
  Matrix sx = 0.5 * (sp + sp.adjoint());
  Matrix sy = Complex(0, -0.5) * (sp - sp.adjoint());
  return {sx, sy, sz};
}

Matrix spin_operator(Spin s, Axis axis) {
  return spin_operators(s)[static_cast<int>(axis)];
}

namespace {

Matrix herm_exp(const Matrix& h, Complex t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases = (t * es.eigenvalues().cast<Complex>().array()).exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Vector extremal_state(Spin s, Axis axis, int sign) {
  const int n = s.dim();
  Vector ez = Vector::Zero(n);
  ez(sign > 0 ? 0 : n - 1) = 1.0;
  switch (axis) {
    case Axis::Z: return ez;
    case Axis::X: return herm_exp(spin_operator(s, Axis::Y), Complex(0, -M_PI / 2)) * ez;
    case Axis::Y: return herm_exp(spin_operator(s, Axis::X), Complex(0, +M_PI / 2)) * ez;
  }
  throw std::logic_error("unreachable");
}

Matrix pc_projector(Spin s, Axis axis) {
  Vector vp = extremal_state(s, axis, +1);
  Vector vm = extremal_state(s, axis, -1);
  return vp * vp.adjoint() + vm * vm.adjoint();
}

Matrix deformation(Spin s, Axis axis, double delta) {
  if (delta < 0.0 || delta > 1.0)
    throw std::invalid_argument("deformation: delta must lie in [0, 1]");
  const int n = s.dim();
  return (1.0 - delta) * pc_projector(s, axis) + delta * Matrix::Identity(n, n);
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

int product_index(Spin s1, Spin s2, int twice_m1, int twice_m2) {
  const int i1 = (s1.twice - twice_m1) / 2;
  const int i2 = (s2.twice - twice_m2) / 2;
  return i1 * s2.dim() + i2;
}

}  // namespace

Matrix coupled_basis(Spin s1, Spin s2, Spin j) {
  if (j.twice > s1.twice + s2.twice || j.twice < std::abs(s1.twice - s2.twice) ||
      ((s1.twice + s2.twice - j.twice) % 2) != 0)
    throw std::invalid_argument("coupled_basis: J outside the triangle range");

  const int n1 = s1.dim(), n2 = s2.dim();
  auto ops1 = spin_operators(s1);
  auto ops2 = spin_operators(s2);
  Matrix minus1 = ops1[0] - Complex(0, 1) * ops1[1];
  Matrix minus2 = ops2[0] - Complex(0, 1) * ops2[1];
  Matrix lower = kron(minus1, Matrix::Identity(n2, n2)) + kron(Matrix::Identity(n1, n1), minus2);

  // Highest-weight states for all J' >= J, built from the top down.
  std::map<int, Vector> highest;  // key: 2J'
  for (int tj = s1.twice + s2.twice; tj >= j.twice; tj -= 2) {
    // M = J' subspace: product states with m1 + m2 = J'.
    std::vector<int> members;
    for (int tm1 = -s1.twice; tm1 <= s1.twice; tm1 += 2) {
      int tm2 = tj - tm1;
      if (tm2 < -s2.twice || tm2 > s2.twice) continue;
      members.push_back(product_index(s1, s2, tm1, tm2));
    }
    Vector v;
    if (tj == s1.twice + s2.twice) {
      v = Vector::Zero(n1 * n2);
      v(product_index(s1, s2, s1.twice, s2.twice)) = 1.0;
    } else {
      // Orthogonalize against the lowered copies of all higher-J highest states.
      Matrix span(n1 * n2, 0);
      for (auto& [tjp, hw] : highest) {
        Vector w = hw;
        for (int k = 0; k < (tjp - tj) / 2; ++k) w = lower * w;
        span.conservativeResize(Eigen::NoChange, span.cols() + 1);
        span.col(span.cols() - 1) = w.normalized();
      }
      Eigen::HouseholderQR<Matrix> qr(span);
      Matrix qfull = qr.householderQ();
      Matrix qspan = qfull.leftCols(span.cols());
      v = Vector::Zero(n1 * n2);
      // Any member direction orthogonal to the span works; project the one
      // maximizing the remainder for numerical stability.
      double best = -1.0;
      for (int idx : members) {
        Vector e = Vector::Zero(n1 * n2);
        e(idx) = 1.0;
        Vector r = e - qspan * (qspan.adjoint() * e);
        if (r.norm() > best) { best = r.norm(); v = r; }
      }
      v.normalize();
      // Condon-Shortley: coefficient at m1 = s1 is real positive.
      Complex lead = v(product_index(s1, s2, s1.twice, tj - s1.twice));
      if (std::abs(lead) < 1e-14)
        throw std::runtime_error("coupled_basis: vanishing Condon-Shortley pivot");
      v *= std::conj(lead) / std::abs(lead);
    }
    highest[tj] = v;
  }

  Matrix basis(n1 * n2, j.dim());
  Vector v = highest[j.twice];
  basis.col(0) = v;
  for (int m = 1; m < j.dim(); ++m) {
    v = lower * v;
    v.normalize();
    basis.col(m) = v;
  }
  return basis;
}

Matrix total_spin_projector(Spin s1, Spin s2, Spin j) {
  Matrix b = coupled_basis(s1, s2, j);
  return b * b.adjoint();
}

double clebsch_gordan(Spin s1, Spin s2, Spin j, int twice_m, int twice_m1, int twice_m2) {
  if (std::abs(twice_m1) > s1.twice || std::abs(twice_m2) > s2.twice ||
      std::abs(twice_m) > j.twice || ((s1.twice - twice_m1) % 2) != 0 ||
      ((s2.twice - twice_m2) % 2) != 0 || ((j.twice - twice_m) % 2) != 0)
    throw std::invalid_argument("clebsch_gordan: invalid quantum numbers");
  if (twice_m != twice_m1 + twice_m2) return 0.0;
  Matrix b = coupled_basis(s1, s2, j);
  const int col = (j.twice - twice_m) / 2;
  Complex c = b(product_index(s1, s2, twice_m1, twice_m2), col);
  if (std::abs(c.imag()) > 1e-12)
    throw std::runtime_error("clebsch_gordan: non-real coefficient");
  return c.real();
}

Matrix z_rotation(double theta) {
  Matrix z = Matrix::Identity(2, 2);
  z(1, 1) = std::exp(Complex(0, theta));
  return z;
}

}  // namespace aklt
