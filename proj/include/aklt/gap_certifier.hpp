#pragma once

#include <optional>
#include <string>

#include "aklt/lattice.hpp"
#include "aklt/types.hpp"

namespace aklt {

enum class Verdict { certified_gapped, not_certified };

struct GapCertificate {
  std::string lattice;
  std::string region;       // descriptive, e.g. "triangle{0,1,2}"
  int r = 0;
  double delta = 0.0;
  double gamma_min = 0.0;
  double gamma_max = 0.0;
  double ratio = 0.0;
  double mu0 = 0.0;
  Verdict verdict = Verdict::not_certified;
  double rank_tolerance = 1e-10;
};

/// Threshold ratio mu0 = 1/2 + (1/2) sqrt((r+1)/(r-1)), r >= 2.
double mu0(int r);

/// Extreme eigenvalues of B^(R)(delta)^dag B^(R)(delta), evaluated by
/// contracting the doubled tensor network (physical legs closed between the
/// map and its conjugate). Throws when the region is numerically
/// non-injective.
std::pair<double, double> btb_spectrum(const LatticeGraph& g, const Coloring& coloring,
                                       const Region& region, double delta);

GapCertificate certify(const LatticeGraph& g, const Coloring& coloring, const Region& region,
                       double delta);

struct DeltaCResult {
  double delta_c = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Bisection root of gamma_max/gamma_min = mu0(r) after a 21-point monotone
/// prescan of the ratio on [0, 1]. Throws when the ratio never crosses the
/// threshold or fails the monotonicity prescan.
DeltaCResult find_delta_c(const LatticeGraph& g, const Coloring& coloring, const Region& region,
                          double tol = 1e-4);

/// Stability margin Delta' = 1 - mu [1 - Delta + 2(r-1)(mu-1)]; positive
/// values certify the deformed Hamiltonian gapped.
double stability_delta_prime(double delta_gap, double mu, int r);

}  // namespace aklt
