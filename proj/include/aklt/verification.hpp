#pragma once

#include <string>
#include <vector>

#include "aklt/hamiltonian.hpp"
#include "aklt/lattice.hpp"
#include "aklt/state_builder.hpp"

namespace aklt {

struct CheckReport {
  std::string name;
  std::string anchor;  // stable identifier of the claim being checked
  bool pass = false;
  double residual = 0.0;  // worst-case residual against the claim
  std::string params;
};

/// Pair marginals of a nontrivial graph state equal I/4. Preconditions
/// (degree >= 2, no duplicated neighbourhoods) are enforced first.
CheckReport check_reduced_density(const LatticeGraph& g);

/// Gap of H(delta) decreases toward zero with delta on the grid, the ground
/// space at delta = 0 is at least 2^N-fold degenerate, and the blocked
/// Hamiltonian shows no such collapse.
CheckReport check_gap_collapse(const LatticeGraph& g, const Coloring& coloring,
                               const std::vector<double>& delta_grid);

/// Block-map rank equals 2^r exactly when every region vertex has at most
/// one outgoing edge; tested in both directions over delta in {0, 1/2, 1}.
CheckReport check_injectivity(const LatticeGraph& g, const Coloring& coloring,
                              const std::vector<Region>& regions);

/// project_and_fit reaches fidelity 1 for each delta in the list.
CheckReport check_conversion(const LatticeGraph& g, const Coloring& coloring,
                             const std::vector<double>& deltas);

/// Kernel equality and the two-sided eigenvalue sandwich between grouped
/// terms and blocked projectors, per coarse edge; lambda_min decreases with
/// delta.
CheckReport check_block_equivalence(const LatticeGraph& g, const Coloring& coloring,
                                    const InjectiveCovering& covering,
                                    const std::vector<double>& deltas);

/// At delta = 0, blocked projectors conjugated by the region-local CZ
/// products commute pairwise and the blocked Hamiltonian has unit gap with a
/// ground state in product form over crossing pairs.
CheckReport check_commuting_blocked(const LatticeGraph& g, const Coloring& coloring,
                                    const InjectiveCovering& covering);

/// Anticommutator bound h1 h2 + h2 h1 >= -(1-Delta)/(2(r-1)) (h1 + h2) for a
/// pair of projectors sharing one site.
CheckReport check_sufficient_condition(const Matrix& h1, const Matrix& h2, int r,
                                       double delta_gap);

/// Run the named suite ("lemmas" for everything) on desk-scale defaults.
std::vector<CheckReport> run_suite(const std::string& selector);

std::string format_report(const CheckReport& r);

}  // namespace aklt
