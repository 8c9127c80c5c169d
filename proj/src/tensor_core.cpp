#include "aklt/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "aklt/spin_algebra.hpp"

namespace aklt {

DenseTensor::DenseTensor(std::vector<Label> labels, std::vector<Eigen::Index> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
  if (labels_.size() != dims_.size())
    throw std::invalid_argument("DenseTensor: labels/dims mismatch");
  std::set<Label> uniq(labels_.begin(), labels_.end());
  if (uniq.size() != labels_.size()) throw std::invalid_argument("DenseTensor: duplicate labels");
  Eigen::Index n = 1;
  for (auto d : dims_) {
    if (d <= 0) throw std::invalid_argument("DenseTensor: non-positive dimension");
    n *= d;
  }
  data_ = Vector::Zero(n);
}

DenseTensor DenseTensor::scalar(Complex value) {
  DenseTensor t;
  t.data_ = Vector::Constant(1, value);
  return t;
}

DenseTensor DenseTensor::from_matrix(const Matrix& m, Label row, Label col) {
  DenseTensor t({row, col}, {m.rows(), m.cols()});
  t.data_ = Eigen::Map<const Vector>(m.data(), m.size());
  return t;
}

int DenseTensor::label_position(const Label& l) const {
  auto it = std::find(labels_.begin(), labels_.end(), l);
  if (it == labels_.end()) throw std::invalid_argument("DenseTensor: unknown label");
  return static_cast<int>(it - labels_.begin());
}

Complex& DenseTensor::at(const std::vector<Eigen::Index>& idx) {
  Eigen::Index lin = 0, stride = 1;
  for (size_t k = 0; k < dims_.size(); ++k) {
    lin += idx[k] * stride;
    stride *= dims_[k];
  }
  return data_(lin);
}

Complex DenseTensor::at(const std::vector<Eigen::Index>& idx) const {
  return const_cast<DenseTensor*>(this)->at(idx);
}

DenseTensor DenseTensor::permuted(const std::vector<Label>& order) const {
  if (order.size() != labels_.size()) throw std::invalid_argument("permuted: wrong label count");
  const int n = this->order();
  std::vector<int> pos(n);
  std::vector<Eigen::Index> new_dims(n);
  for (int k = 0; k < n; ++k) {
    pos[k] = label_position(order[k]);
    new_dims[k] = dims_[pos[k]];
  }
  DenseTensor out(order, new_dims);
  std::vector<Eigen::Index> old_strides(n), new_strides(n);
  Eigen::Index s = 1;
  for (int k = 0; k < n; ++k) { old_strides[k] = s; s *= dims_[k]; }
  s = 1;
  for (int k = 0; k < n; ++k) { new_strides[k] = s; s *= new_dims[k]; }

  const Eigen::Index total = data_.size();
  std::vector<Eigen::Index> idx(n, 0);
  for (Eigen::Index i = 0; i < total; ++i) {
    // idx enumerates the new tensor's indices in column-major order
    Eigen::Index src = 0;
    for (int k = 0; k < n; ++k) src += idx[k] * old_strides[pos[k]];
    out.data_(i) = data_(src);
    for (int k = 0; k < n; ++k) {
      if (++idx[k] < new_dims[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

Matrix DenseTensor::to_matrix(const std::vector<Label>& rows) const {
  std::vector<Label> order = rows;
  for (const auto& l : labels_)
    if (std::find(rows.begin(), rows.end(), l) == rows.end()) order.push_back(l);
  DenseTensor p = permuted(order);
  Eigen::Index nr = 1;
  for (const auto& l : rows) nr *= dim_of(l);
  return Eigen::Map<const Matrix>(p.data().data(), nr, p.size() / nr);
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<Label, Label>>& pairs) {
  std::vector<Label> ac, bc;
  for (auto& [la, lb] : pairs) {
    if (a.dim_of(la) != b.dim_of(lb)) throw std::invalid_argument("contract: dimension mismatch");
    ac.push_back(la);
    bc.push_back(lb);
  }
  std::vector<Label> akeep, bkeep;
  for (const auto& l : a.labels())
    if (std::find(ac.begin(), ac.end(), l) == ac.end()) akeep.push_back(l);
  for (const auto& l : b.labels())
    if (std::find(bc.begin(), bc.end(), l) == bc.end()) bkeep.push_back(l);

  // a as (keep x contracted), b as (contracted x keep)
  std::vector<Label> aorder = akeep;
  aorder.insert(aorder.end(), ac.begin(), ac.end());
  std::vector<Label> border = bc;
  border.insert(border.end(), bkeep.begin(), bkeep.end());
  DenseTensor ap = a.permuted(aorder);
  DenseTensor bp = b.permuted(border);

  Eigen::Index am = 1, k = 1, bn = 1;
  for (const auto& l : akeep) am *= a.dim_of(l);
  for (const auto& l : ac) k *= a.dim_of(l);
  for (const auto& l : bkeep) bn *= b.dim_of(l);

  Eigen::Map<const Matrix> ma(ap.data().data(), am, k);
  Eigen::Map<const Matrix> mb(bp.data().data(), k, bn);
  Matrix mc = ma * mb;

  std::vector<Label> out_labels = akeep;
  out_labels.insert(out_labels.end(), bkeep.begin(), bkeep.end());
  std::vector<Eigen::Index> out_dims;
  for (const auto& l : akeep) out_dims.push_back(a.dim_of(l));
  for (const auto& l : bkeep) out_dims.push_back(b.dim_of(l));
  if (out_labels.empty()) return DenseTensor::scalar(mc(0, 0));
  DenseTensor out(out_labels, out_dims);
  out.data() = Eigen::Map<const Vector>(mc.data(), mc.size());
  return out;
}

DenseTensor trace_pair(const DenseTensor& t, const Label& a, const Label& b) {
  if (t.dim_of(a) != t.dim_of(b)) throw std::invalid_argument("trace_pair: dimension mismatch");
  std::vector<Label> keep;
  for (const auto& l : t.labels())
    if (!(l == a) && !(l == b)) keep.push_back(l);
  std::vector<Label> order = keep;
  order.push_back(a);
  order.push_back(b);
  DenseTensor p = t.permuted(order);
  Eigen::Index nk = 1;
  for (const auto& l : keep) nk *= t.dim_of(l);
  const Eigen::Index d = t.dim_of(a);
  if (keep.empty()) {
    Complex s = 0;
    for (Eigen::Index i = 0; i < d; ++i) s += p.data()(i + d * i);
    return DenseTensor::scalar(s);
  }
  std::vector<Eigen::Index> out_dims;
  for (const auto& l : keep) out_dims.push_back(t.dim_of(l));
  DenseTensor out(keep, out_dims);
  for (Eigen::Index i = 0; i < d; ++i)
    out.data() += p.data().segment(nk * (i + d * i), nk);
  return out;
}

DenseTensor aklt_site_tensor(int degree, int site) {
  if (degree < 1 || degree > 4) throw std::invalid_argument("aklt_site_tensor: degree must be 1..4");
  std::vector<Label> labels{phys(site)};
  std::vector<Eigen::Index> dims{degree + 1};
  for (int k = 0; k < degree; ++k) {
    labels.push_back(virt(site, k));
    dims.push_back(2);
  }
  DenseTensor t(labels, dims);
  // |S, S-k> = binom(d,k)^{-1/2} * sum over virtual configurations with k ones
  std::vector<double> norm(degree + 1);
  for (int k = 0; k <= degree; ++k) {
    double b = 1.0;
    for (int i = 0; i < k; ++i) b = b * (degree - i) / (i + 1);
    norm[k] = 1.0 / std::sqrt(b);
  }
  for (int bits = 0; bits < (1 << degree); ++bits) {
    int ones = 0;
    std::vector<Eigen::Index> idx(degree + 1, 0);
    for (int k = 0; k < degree; ++k) {
      int b = (bits >> k) & 1;
      idx[k + 1] = b;
      ones += b;
    }
    idx[0] = ones;  // physical index: 0 <-> M = S, k <-> M = S - k
    t.at(idx) = norm[ones];
  }
  return t;
}

DenseTensor graph_site_tensor(int degree, int site) {
  if (degree < 1) throw std::invalid_argument("graph_site_tensor: degree must be positive");
  std::vector<Label> labels{phys(site)};
  std::vector<Eigen::Index> dims{2};
  for (int k = 0; k < degree; ++k) {
    labels.push_back(virt(site, k));
    dims.push_back(2);
  }
  DenseTensor t(labels, dims);
  std::vector<Eigen::Index> zeros(degree + 1, 0), ones(degree + 1, 1);
  t.at(zeros) = 1.0;
  t.at(ones) = 1.0;
  return t;
}

Matrix singlet_edge() {
  Matrix m(2, 2);
  m << 0, 1, -1, 0;
  return m;
}

Matrix hadamard_edge() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix m(2, 2);
  m << s, s, s, -s;
  return m;
}

DenseTensor deformed_site_tensor(int degree, Axis axis, double delta, int site) {
  DenseTensor a = aklt_site_tensor(degree, site);
  Matrix d = deformation(Spin(degree), axis, delta);
  Label in = phys(site);
  // multiply the physical leg: temporary label avoids a clash
  Label tmp{LegKind::physical, site, 1};
  DenseTensor dm = DenseTensor::from_matrix(d, tmp, in);
  DenseTensor out = contract(dm, a, {{in, in}});
  // relabel tmp -> phys(site): rebuild with canonical label order (phys first)
  std::vector<Label> order = out.labels();
  std::vector<Label> fixed;
  std::vector<Eigen::Index> dims;
  for (auto& l : order) fixed.push_back(l == tmp ? in : l);
  for (auto& l : order) dims.push_back(out.dim_of(l));
  DenseTensor renamed(fixed, dims);
  renamed.data() = out.data();
  return renamed;
}

LinearMap block_map(const LatticeGraph& g, const Coloring& coloring, const Region& region,
                    double delta) {
  if (region.members.empty()) throw std::invalid_argument("block_map: empty region");
  if (!coloring.valid_for(g)) throw std::invalid_argument("block_map: invalid colouring");
  std::set<int> inside(region.members.begin(), region.members.end());

  // connectivity of the induced subgraph
  {
    std::set<int> seen;
    std::vector<int> stack{region.members.front()};
    seen.insert(region.members.front());
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g.neighbours(v))
        if (inside.count(w) && !seen.count(w)) {
          seen.insert(w);
          stack.push_back(w);
        }
    }
    if (seen.size() != inside.size()) throw std::invalid_argument("block_map: disconnected region");
  }

  const Matrix iy = singlet_edge();
  DenseTensor acc = DenseTensor::scalar(1.0);
  for (int v : region.members) {
    DenseTensor site = deformed_site_tensor(g.degree(v), coloring.colour[v], delta, v);
    acc = contract(acc, site, {});
    // close interior edges (u, v) with u already absorbed; iY has the lower
    // vertex id on its left index
    for (int u : g.neighbours(v)) {
      if (!inside.count(u) || u >= v) continue;
      Label lu = virt(u, g.leg_index(u, v));
      Label lv = virt(v, g.leg_index(v, u));
      Label tmp{LegKind::virt, -1, 0};
      DenseTensor edge = DenseTensor::from_matrix(iy, lu, tmp);
      acc = contract(acc, edge, {{lu, lu}});
      acc = trace_pair(acc, tmp, lv);
    }
  }

  std::vector<Label> in_labels, out_labels;
  for (int v : region.members) out_labels.push_back(phys(v));
  for (auto& [in, out] : region.outgoing_edges) in_labels.push_back(virt(in, g.leg_index(in, out)));
  std::sort(in_labels.begin(), in_labels.end());

  LinearMap map;
  map.in_labels = in_labels;
  map.out_labels = out_labels;
  std::vector<Label> order = out_labels;
  order.insert(order.end(), in_labels.begin(), in_labels.end());
  DenseTensor p = acc.permuted(order);
  Eigen::Index out_dim = 1;
  for (auto& l : out_labels) out_dim *= p.dim_of(l);
  map.matrix = Eigen::Map<const Matrix>(p.data().data(), out_dim, p.size() / out_dim);
  return map;
}

}  // namespace aklt
