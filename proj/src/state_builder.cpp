#include "aklt/state_builder.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <numeric>
#include <set>

#include "aklt/spin_algebra.hpp"
#include "aklt/tensor_core.hpp"

namespace aklt {

Encoding colour_encoding(const LatticeGraph& g, const Coloring& coloring) {
  Encoding enc;
  enc.reserve(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    Spin s = g.spin(v);
    Matrix basis(s.dim(), 2);
    basis.col(0) = extremal_state(s, coloring.colour[v], +1);
    basis.col(1) = extremal_state(s, coloring.colour[v], -1);
    enc.push_back(basis);
  }
  return enc;
}

StateVector build_psi(const LatticeGraph& g, const Coloring& coloring, double delta,
                      std::int64_t dim_cap) {
  const int n = g.num_vertices();
  std::int64_t total = 1;
  for (int v = 0; v < n; ++v) {
    total *= g.degree(v) + 1;
    if (total > dim_cap) throw std::invalid_argument("build_psi: dimension cap exceeded");
  }
  if (!coloring.valid_for(g)) throw std::invalid_argument("build_psi: invalid colouring");

  const Matrix iy = singlet_edge();
  DenseTensor acc = DenseTensor::scalar(1.0);
  for (int v = 0; v < n; ++v) {
    acc = contract(acc, deformed_site_tensor(g.degree(v), coloring.colour[v], delta, v), {});
    for (int u : g.neighbours(v)) {
      if (u >= v) continue;
      Label lu = virt(u, g.leg_index(u, v));
      Label lv = virt(v, g.leg_index(v, u));
      Label tmp{LegKind::virt, -1, 0};
      acc = contract(acc, DenseTensor::from_matrix(iy, lu, tmp), {{lu, lu}});
      acc = trace_pair(acc, tmp, lv);
    }
  }

  std::vector<Label> order;
  for (int v = 0; v < n; ++v) order.push_back(phys(v));
  DenseTensor p = acc.permuted(order);

  StateVector s;
  s.amplitudes = p.data();
  double nrm = s.amplitudes.norm();
  if (nrm < 1e-300) throw std::runtime_error("build_psi: contraction produced the zero vector");
  s.amplitudes /= nrm;
  for (int v = 0; v < n; ++v) s.site_dims.push_back(g.degree(v) + 1);
  return s;
}

StateVector qubit_graph_state(const LatticeGraph& g) {
  const int n = g.num_vertices();
  if (n > 26) throw std::invalid_argument("qubit_graph_state: too many vertices");
  StateVector s;
  s.site_dims.assign(n, 2);
  const std::int64_t dim = std::int64_t(1) << n;
  s.amplitudes.resize(dim);
  const double norm = std::pow(2.0, -0.5 * n);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    int sign = 0;
    for (auto& [u, v] : g.edges()) sign ^= static_cast<int>(((idx >> u) & 1) & ((idx >> v) & 1));
    s.amplitudes(idx) = sign ? -norm : norm;
  }
  return s;
}

StateVector build_graph_state(const LatticeGraph& g, const Encoding& encoding) {
  const int n = g.num_vertices();
  if (static_cast<int>(encoding.size()) != n)
    throw std::invalid_argument("build_graph_state: encoding size mismatch");
  for (int v = 0; v < n; ++v) {
    const Matrix& b = encoding[v];
    if (b.cols() != 2) throw std::invalid_argument("build_graph_state: encoding needs 2 columns");
    Matrix gram = b.adjoint() * b;
    if ((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("build_graph_state: encoding not orthonormal");
  }

  StateVector qubit = qubit_graph_state(g);
  StateVector s;
  std::int64_t total = 1;
  for (int v = 0; v < n; ++v) {
    s.site_dims.push_back(static_cast<int>(encoding[v].rows()));
    total *= s.site_dims.back();
  }
  s.amplitudes = Vector::Zero(total);
  const std::int64_t configs = std::int64_t(1) << n;
  for (std::int64_t c = 0; c < configs; ++c) {
    Complex amp = qubit.amplitudes(c);
    // accumulate the product state; site v joins as the slowest index so
    // site 0 stays fastest
    Vector acc = Vector::Constant(1, amp);
    for (int v = 0; v < n; ++v) {
      const Vector& col = encoding[v].col((c >> v) & 1);
      Vector next(acc.size() * col.size());
      for (Eigen::Index i = 0; i < col.size(); ++i)
        next.segment(i * acc.size(), acc.size()) = col(i) * acc;
      acc = std::move(next);
    }
    s.amplitudes += acc;
  }
  s.amplitudes.normalize();
  return s;
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  double na = a.amplitudes.norm(), nb = b.amplitudes.norm();
  if (na < 1e-300 || nb < 1e-300) throw std::invalid_argument("fidelity: zero vector");
  return std::abs(a.amplitudes.dot(b.amplitudes)) / (na * nb);
}

DensityMatrix reduced_density(const StateVector& state, std::vector<int> sites) {
  std::sort(sites.begin(), sites.end());
  if (std::adjacent_find(sites.begin(), sites.end()) != sites.end())
    throw std::invalid_argument("reduced_density: repeated site");
  const int n = static_cast<int>(state.site_dims.size());
  for (int s : sites)
    if (s < 0 || s >= n) throw std::invalid_argument("reduced_density: site out of range");

  std::int64_t keep_dim = 1;
  for (int s : sites) keep_dim *= state.site_dims[s];
  if (keep_dim > 10'000) throw std::invalid_argument("reduced_density: subset dimension too large");

  // strides of each site in the full index
  std::vector<std::int64_t> stride(n);
  std::int64_t acc = 1;
  for (int v = 0; v < n; ++v) {
    stride[v] = acc;
    acc *= state.site_dims[v];
  }
  std::vector<int> env;
  for (int v = 0; v < n; ++v)
    if (!std::binary_search(sites.begin(), sites.end(), v)) env.push_back(v);
  std::int64_t env_dim = 1;
  for (int v : env) env_dim *= state.site_dims[v];

  // M(keep, env) then rho = M M^dagger
  Matrix m(keep_dim, env_dim);
  std::vector<int> keep_idx(sites.size(), 0), env_idx(env.size(), 0);
  for (std::int64_t e = 0; e < env_dim; ++e) {
    std::int64_t ebase = 0;
    { std::int64_t rem = e;
      for (size_t k = 0; k < env.size(); ++k) {
        int d = state.site_dims[env[k]];
        ebase += (rem % d) * stride[env[k]];
        rem /= d;
      } }
    for (std::int64_t kidx = 0; kidx < keep_dim; ++kidx) {
      std::int64_t base = ebase;
      std::int64_t rem = kidx;
      for (size_t k = 0; k < sites.size(); ++k) {
        int d = state.site_dims[sites[k]];
        base += (rem % d) * stride[sites[k]];
        rem /= d;
      }
      m(kidx, e) = state.amplitudes(base);
    }
  }
  double nrm2 = state.amplitudes.squaredNorm();
  DensityMatrix rho;
  rho.entries = (m * m.adjoint()) / nrm2;
  rho.sites = sites;
  return rho;
}

namespace {

// Pauli string as X^a Z^b per site with a global sign; graph-state stabilizer
// generators and their products stay in this form (signs only).
struct PauliString {
  std::vector<unsigned char> x, z;
  int sign = +1;  // +1 or -1

  explicit PauliString(int n) : x(n, 0), z(n, 0) {}

  void multiply_right(const PauliString& other) {
    // (X^a Z^b)(X^c Z^d) = (-1)^{b.c} X^{a+c} Z^{b+d} per site
    for (size_t i = 0; i < x.size(); ++i) {
      if (z[i] && other.x[i]) sign = -sign;
      x[i] ^= other.x[i];
      z[i] ^= other.z[i];
    }
    sign *= other.sign;
  }
};

Matrix pauli_site_matrix(int xbit, int zbit) {
  Matrix m = Matrix::Identity(2, 2);
  if (zbit) { m(1, 1) = -1; }
  if (xbit) {
    Matrix xm(2, 2);
    xm << 0, 1, 1, 0;
    m = xm * m;
  }
  return m;
}

}  // namespace

DensityMatrix stabilizer_reduced_density(const LatticeGraph& g, const std::vector<int>& region) {
  const int n = g.num_vertices();
  if (n > 24) throw std::invalid_argument("stabilizer_reduced_density: graph too large");
  std::vector<int> sites = region;
  std::sort(sites.begin(), sites.end());
  const int a = static_cast<int>(sites.size());
  if (a > 12) throw std::invalid_argument("stabilizer_reduced_density: region too large");

  std::vector<PauliString> gens;
  for (int i = 0; i < n; ++i) {
    PauliString k(n);
    k.x[i] = 1;
    for (int j : g.neighbours(i)) k.z[j] ^= 1;
    gens.push_back(k);
  }

  const std::int64_t adim = std::int64_t(1) << a;
  Matrix rho = Matrix::Zero(adim, adim);
  std::vector<char> in_region(n, 0);
  for (int s : sites) in_region[s] = 1;

  const std::int64_t subsets = std::int64_t(1) << n;
  for (std::int64_t sub = 0; sub < subsets; ++sub) {
    PauliString sigma(n);
    for (int i = 0; i < n; ++i)
      if ((sub >> i) & 1) sigma.multiply_right(gens[i]);
    bool supported = true;
    for (int i = 0; i < n && supported; ++i)
      if (!in_region[i] && (sigma.x[i] || sigma.z[i])) supported = false;
    if (!supported) continue;
    Matrix term = Matrix::Identity(1, 1);
    for (int k = a - 1; k >= 0; --k) {
      Matrix site = pauli_site_matrix(sigma.x[sites[k]], sigma.z[sites[k]]);
      Matrix next(term.rows() * 2, term.cols() * 2);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          next.block(r * term.rows(), c * term.cols(), term.rows(), term.cols()) =
              site(r, c) * term;
      term = std::move(next);
    }
    rho += double(sigma.sign) * term;
  }
  DensityMatrix out;
  out.entries = rho / double(adim);
  out.sites = sites;
  return out;
}

ProjectFitResult project_and_fit(const StateVector& state, const LatticeGraph& g,
                                 const Coloring& coloring) {
  const int n = g.num_vertices();
  if (n > 16) throw std::invalid_argument("project_and_fit: graph too large");

  // apply the colour projectors site by site
  Vector w = state.amplitudes;
  std::vector<std::int64_t> stride(n);
  std::int64_t acc = 1;
  for (int v = 0; v < n; ++v) {
    stride[v] = acc;
    acc *= state.site_dims[v];
  }
  for (int v = 0; v < n; ++v) {
    Matrix p = pc_projector(g.spin(v), coloring.colour[v]);
    const int d = state.site_dims[v];
    Vector next = Vector::Zero(w.size());
    const std::int64_t inner = stride[v];
    const std::int64_t outer = w.size() / (inner * d);
    for (std::int64_t o = 0; o < outer; ++o)
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          if (p(r, c) == Complex(0, 0)) continue;
          next.segment(o * inner * d + r * inner, inner) +=
              p(r, c) * w.segment(o * inner * d + c * inner, inner);
        }
    w = std::move(next);
  }
  double wn = w.norm();
  if (wn < 1e-13) throw std::runtime_error("project_and_fit: projected state has zero norm");
  w /= wn;

  // per-configuration overlaps with the encoded basis states
  Encoding enc = colour_encoding(g, coloring);
  StateVector qgs = qubit_graph_state(g);
  const std::int64_t configs = std::int64_t(1) << n;
  Vector overlap(configs);
  for (std::int64_t c = 0; c < configs; ++c) {
    // <enc(c)|w>: contract w against the conjugated basis vectors
    Vector cur = w;
    std::vector<int> dims = state.site_dims;
    for (int v = n - 1; v >= 0; --v) {
      const Vector& basis = enc[v].col((c >> v) & 1);
      const int d = dims[v];
      const std::int64_t block = cur.size() / d;
      Vector next = Vector::Zero(block);
      for (int r = 0; r < d; ++r) next += std::conj(basis(r)) * cur.segment(r * block, block);
      cur = std::move(next);
    }
    overlap(c) = std::conj(qgs.amplitudes(c)) * cur(0);
  }

  // exhaustive theta search, theta_i in {0, pi/2, pi, 3pi/2}
  ProjectFitResult best;
  std::vector<int> steps(n, 0);
  const std::int64_t combos = std::int64_t(1) << (2 * n);
  const Complex im(0, 1);
  for (std::int64_t combo = 0; combo < combos; ++combo) {
    { std::int64_t rem = combo;
      for (int v = 0; v < n; ++v) { steps[v] = rem & 3; rem >>= 2; } }
    Complex f = 0;
    for (std::int64_t c = 0; c < configs; ++c) {
      int quarter = 0;
      for (int v = 0; v < n; ++v)
        if ((c >> v) & 1) quarter += steps[v];
      // bra side carries conj(e^{i pi/2 q})
      switch (quarter & 3) {
        case 0: f += overlap(c); break;
        case 1: f += -im * overlap(c); break;
        case 2: f += -overlap(c); break;
        case 3: f += im * overlap(c); break;
      }
    }
    double mag = std::abs(f);
    if (mag > best.fidelity) {
      best.fidelity = mag;
      best.theta_steps = steps;
    }
  }
  return best;
}

StateVector apply_encoded_z(const StateVector& state, const Encoding& encoding,
                            const std::vector<int>& theta_steps) {
  const int n = static_cast<int>(state.site_dims.size());
  if (static_cast<int>(encoding.size()) != n || static_cast<int>(theta_steps.size()) != n)
    throw std::invalid_argument("apply_encoded_z: size mismatch");
  StateVector out = state;
  std::int64_t inner = 1;
  for (int v = 0; v < n; ++v) {
    const Matrix& b = encoding[v];
    const int d = state.site_dims[v];
    Matrix pl = b * b.adjoint();
    Matrix zt = b * z_rotation(M_PI_2 * (theta_steps[v] & 3)) * b.adjoint() +
                (Matrix::Identity(d, d) - pl);
    Vector next = Vector::Zero(out.amplitudes.size());
    const std::int64_t outer = out.amplitudes.size() / (inner * d);
    for (std::int64_t o = 0; o < outer; ++o)
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          if (zt(r, c) == Complex(0, 0)) continue;
          next.segment(o * inner * d + r * inner, inner) +=
              zt(r, c) * out.amplitudes.segment(o * inner * d + c * inner, inner);
        }
    out.amplitudes = std::move(next);
    inner *= d;
  }
  return out;
}

void dump_state(const StateVector& state, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dump_state: cannot open " + path);
  out << "dims:";
  for (int d : state.site_dims) out << ' ' << d;
  out << '\n';
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  out.write(reinterpret_cast<const char*>(state.amplitudes.data()),
            static_cast<std::streamsize>(sizeof(Complex) * state.amplitudes.size()));
}

StateVector load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_state: cannot open " + path);
  std::string header;
  std::getline(in, header);
  if (header.rfind("dims:", 0) != 0) throw std::runtime_error("load_state: bad header");
  StateVector s;
  std::istringstream hs(header.substr(5));
  int d;
  std::int64_t total = 1;
  while (hs >> d) {
    s.site_dims.push_back(d);
    total *= d;
  }
  s.amplitudes.resize(total);
  in.read(reinterpret_cast<char*>(s.amplitudes.data()),
          static_cast<std::streamsize>(sizeof(Complex) * total));
  if (!in) throw std::runtime_error("load_state: truncated payload");
  return s;
}

}  // namespace aklt
