#pragma once

#include <vector>

#include "aklt/lattice.hpp"
#include "aklt/types.hpp"

namespace aklt {

enum class LegKind { physical, virt };

struct Label {
  LegKind kind = LegKind::virt;
  int site = 0;
  int leg = 0;
  auto operator<=>(const Label&) const = default;
};

inline Label phys(int site) { return {LegKind::physical, site, 0}; }
inline Label virt(int site, int leg) { return {LegKind::virt, site, leg}; }

/// Dense complex tensor with uniquely labelled legs. Storage is column-major:
/// the first leg runs fastest.
class DenseTensor {
 public:
  DenseTensor() = default;
  DenseTensor(std::vector<Label> labels, std::vector<Eigen::Index> dims);

  static DenseTensor scalar(Complex value);
  static DenseTensor from_matrix(const Matrix& m, Label row, Label col);

  const std::vector<Label>& labels() const { return labels_; }
  const std::vector<Eigen::Index>& dims() const { return dims_; }
  Eigen::Index size() const { return data_.size(); }
  int order() const { return static_cast<int>(labels_.size()); }

  Complex& at(const std::vector<Eigen::Index>& idx);
  Complex at(const std::vector<Eigen::Index>& idx) const;
  Vector& data() { return data_; }
  const Vector& data() const { return data_; }

  int label_position(const Label& l) const;
  Eigen::Index dim_of(const Label& l) const { return dims_[label_position(l)]; }

  /// New tensor with legs reordered to `order` (a permutation of labels()).
  DenseTensor permuted(const std::vector<Label>& order) const;

  /// Flatten to a matrix: `rows` legs (in the given order) index rows,
  /// the remaining legs (in current order) index columns.
  Matrix to_matrix(const std::vector<Label>& rows) const;

 private:
  std::vector<Label> labels_;
  std::vector<Eigen::Index> dims_;
  Vector data_;
};

/// Pairwise contraction over the given label pairs (first from a, second
/// from b). Output legs: a's remaining labels then b's remaining labels.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<Label, Label>>& pairs);

/// Contract two legs of the same tensor (a partial trace over a leg pair).
DenseTensor trace_pair(const DenseTensor& t, const Label& a, const Label& b);

/// AKLT site tensor for a degree-d vertex: physical leg of dimension d+1
/// (spin d/2) and d virtual legs of dimension 2; symmetric in the virtual
/// legs. Entries are the coefficients coupling d spin-1/2 legs to maximal
/// total spin.
DenseTensor aklt_site_tensor(int degree, int site = 0);

/// Graph-state site tensor: physical dimension 2, d virtual legs; the only
/// nonzero entries are C^0_{0..0} = C^1_{1..1} = 1.
DenseTensor graph_site_tensor(int degree, int site = 0);

/// Edge matrices: iY = [[0,1],[-1,0]] and H = (X+Z)/sqrt(2).
Matrix singlet_edge();
Matrix hadamard_edge();

/// AKLT site tensor with D(spin, axis, delta) applied to the physical leg.
DenseTensor deformed_site_tensor(int degree, Axis axis, double delta, int site = 0);

/// Linear map between labelled spaces, stored as out_dim x in_dim.
struct LinearMap {
  Matrix matrix;
  std::vector<Label> in_labels;
  std::vector<Label> out_labels;
};

/// Virtual-to-physical map of a lattice region: contracts the deformed site
/// tensors and the iY matrices on interior edges; inputs are the outgoing
/// virtual legs ordered by (vertex id, leg id), outputs the physical legs in
/// ascending vertex order.
LinearMap block_map(const LatticeGraph& g, const Coloring& coloring, const Region& region,
                    double delta);

}  // namespace aklt
