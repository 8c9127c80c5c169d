#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aklt/lattice.hpp"
#include "aklt/types.hpp"

namespace aklt {

/// Full many-body state: amplitudes over the product of site spaces, site 0
/// fastest (column-major over site_dims).
struct StateVector {
  Vector amplitudes;
  std::vector<int> site_dims;

  Eigen::Index dim() const { return amplitudes.size(); }
};

struct DensityMatrix {
  Matrix entries;
  std::vector<int> sites;
};

/// Per-site orthonormal 2-dimensional logical basis embedded in the physical
/// space; column 0 encodes |0>, column 1 encodes |1>.
using Encoding = std::vector<Matrix>;

/// Logical bases fixed by the colouring: |0> = |S>_c, |1> = |-S>_c.
Encoding colour_encoding(const LatticeGraph& g, const Coloring& coloring);

/// Normalized contraction of the deformed site tensors with iY edges.
StateVector build_psi(const LatticeGraph& g, const Coloring& coloring, double delta,
                      std::int64_t dim_cap = 20'000'000);

/// Circuit-definition graph state embedded through the encoding.
StateVector build_graph_state(const LatticeGraph& g, const Encoding& encoding);

/// Plain qubit graph state (2 dimensions per site).
StateVector qubit_graph_state(const LatticeGraph& g);

/// |<a|b>| after normalization.
double fidelity(const StateVector& a, const StateVector& b);

/// Partial trace onto `sites` (ascending site order in the result).
DensityMatrix reduced_density(const StateVector& state, std::vector<int> sites);

/// Stabilizer evaluation of the graph-state reduced density operator:
/// rho_A = 2^{-|A|} sum of stabilizer elements supported inside the region.
DensityMatrix stabilizer_reduced_density(const LatticeGraph& g, const std::vector<int>& region);

struct ProjectFitResult {
  double fidelity = 0.0;
  std::vector<int> theta_steps;  // per site, in units of pi/2
};

/// Apply the colour projectors to `state`, then fit per-site z-rotations
/// Z(theta), theta in {0, pi/2, pi, 3pi/2}, maximizing the overlap with the
/// encoded graph state.
ProjectFitResult project_and_fit(const StateVector& state, const LatticeGraph& g,
                                 const Coloring& coloring);

/// Apply encoded Z(theta_i) per site (theta in quarter turns), identity on
/// the complement of each logical subspace.
StateVector apply_encoded_z(const StateVector& state, const Encoding& encoding,
                            const std::vector<int>& theta_steps);

/// Binary dump: text header "dims: d1 d2 ...\n" followed by little-endian
/// complex doubles.
void dump_state(const StateVector& state, const std::string& path);
StateVector load_state(const std::string& path);

}  // namespace aklt
