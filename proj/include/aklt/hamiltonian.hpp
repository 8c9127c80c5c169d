#pragma once

#include <string>

#include "aklt/eigensolver.hpp"
#include "aklt/lattice.hpp"
#include "aklt/types.hpp"

namespace aklt {

struct TwoSiteTerm {
  Matrix matrix;  // on the ordered pair (i, j) with i < j, site i varying fastest
  int rank = 0;
  double delta = 0.0;
};

/// Deformed interaction [D_i^{-1} x D_j^{-1}] P^{S_i+S_j} [D_i^{-1} x D_j^{-1}].
/// Requires delta > 0; the delta -> 0 limit lives in q_projector.
Matrix deformed_interaction(Spin si, Spin sj, Axis axis_i, Axis axis_j, double delta);

/// Orthogonal projector onto the image of the deformed interaction. At
/// delta = 0 the graded limit of the column span is taken.
TwoSiteTerm q_projector(Spin si, Spin sj, Axis axis_i, Axis axis_j, double delta);

/// H(delta): sum of q_projector terms over all edges.
SparseOperator assemble_H(const LatticeGraph& g, const Coloring& coloring, double delta,
                          std::int64_t dim_cap = 20'000'000);

/// Cluster Hamiltonian sum_i (I - K_i)/2 on qubit sites.
SparseOperator cluster_hamiltonian(const LatticeGraph& g);

/// Projector onto the orthogonal complement of the image of the pair-region
/// block map B^(a,b), as a dense matrix on the union block (sites ascending).
Matrix blocked_projector(const LatticeGraph& g, const Coloring& coloring, const Region& region_a,
                         const Region& region_b, double delta);

/// Blocked Hamiltonian H^B(delta): sum of blocked projectors over coarse
/// edges, embedded in the full space.
SparseOperator assemble_HB(const LatticeGraph& g, const Coloring& coloring,
                           const InjectiveCovering& covering, double delta,
                           std::int64_t dim_cap = 20'000'000);

struct GroupedTerm {
  Matrix matrix;           // dense on the union block (sites ascending)
  std::vector<int> sites;  // union block sites
};

/// Grouped interaction h(delta)_ab = sum_{E_a u E_b} r^{-1} Q + sum_{E_ab} Q.
GroupedTerm grouped_term(const LatticeGraph& g, const Coloring& coloring,
                         const InjectiveCovering& covering, int a, int b, double delta);

/// Kronecker embedding of a two-site operator into the full product space.
void add_embedded_two_site(std::vector<Eigen::Triplet<Complex>>& triplets, const Matrix& op,
                           int i, int j, const std::vector<int>& site_dims);

/// Dense embedding of an operator acting on a sorted site subset into the
/// product space of `site_dims` restricted to `block_sites` (identity on the
/// remaining block sites).
Matrix embed_in_block(const Matrix& op, const std::vector<int>& op_sites,
                      const std::vector<int>& block_sites, const std::vector<int>& site_dims);

/// Coordinate-list export: header "dim N hermitian 1", lines "row col re im".
void export_operator(const SparseOperator& op, const std::string& path);
SparseOperator import_operator(const std::string& path);

}  // namespace aklt
