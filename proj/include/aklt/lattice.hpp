#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aklt/types.hpp"

namespace aklt {

enum class LatticeKind { ring, honeycomb, star, square_octagon, cross, square, custom };
enum class Boundary { periodic, open };

LatticeKind lattice_kind_from_name(const std::string& name);
std::string lattice_kind_name(LatticeKind kind);

using Edge = std::pair<int, int>;  // stored with first < second

/// Finite graph with per-vertex degree and spin (S_v = degree/2).
class LatticeGraph {
 public:
  LatticeGraph() = default;
  /// Custom graph from an explicit edge list.
  LatticeGraph(int num_vertices, std::vector<Edge> edges,
               LatticeKind kind = LatticeKind::custom,
               Boundary boundary = Boundary::open);

  int num_vertices() const { return num_vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  LatticeKind kind() const { return kind_; }
  Boundary boundary() const { return boundary_; }
  std::pair<int, int> dims() const { return dims_; }
  void set_dims(std::pair<int, int> d) { dims_ = d; }
  int degree(int v) const { return degree_[v]; }
  Spin spin(int v) const { return Spin(degree_[v]); }
  const std::vector<int>& neighbours(int v) const { return adj_[v]; }
  bool has_edge(int u, int v) const;
  bool connected() const;
  /// Index of edge (u,v) in the sorted incident-edge list of u; fixes the
  /// deterministic leg ordering used by the tensor layer.
  int leg_index(int u, int v) const;

 private:
  int num_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> degree_;
  std::vector<std::vector<int>> adj_;  // sorted
  LatticeKind kind_ = LatticeKind::custom;
  Boundary boundary_ = Boundary::open;
  std::pair<int, int> dims_{0, 0};
};

struct Coloring {
  std::vector<Axis> colour;  // per vertex
  bool valid_for(const LatticeGraph& g) const;
};

struct Region {
  std::vector<int> members;                  // sorted vertex ids
  std::vector<Edge> outgoing_edges;          // (inside, outside) pairs
  int r() const { return static_cast<int>(outgoing_edges.size()); }
};

Region make_region(const LatticeGraph& g, std::vector<int> members);

struct InjectiveCovering {
  std::vector<Region> regions;
  int uniform_r = 0;
};

struct CoarseGraph {
  int num_nodes = 0;
  std::vector<Edge> edges;                        // (a, b) with a < b
  std::map<Edge, std::vector<Edge>> crossing_edges;  // E_{a,b}
};

/// Build a finite lattice patch. dims = (n1, n2) unit-cell counts
/// (ring uses n1 as the length and ignores n2).
LatticeGraph build_lattice(LatticeKind kind, std::pair<int, int> dims, Boundary boundary);

/// Deterministic proper three-colouring by backtracking in vertex order,
/// trying x before y before z. Throws if the graph is not three-colourable.
Coloring three_colouring(const LatticeGraph& g);

/// Canonical injective covering by unit-cell regions (star: triangles,
/// honeycomb: hexagons, square_octagon/cross: squares). Absent when the
/// lattice has none (square) or the kind has no canonical covering.
std::optional<InjectiveCovering> injective_covering(const LatticeGraph& g);

/// Each member vertex has at most one outgoing edge.
bool region_is_injective(const Region& region);

CoarseGraph coarse_grain(const LatticeGraph& g, const InjectiveCovering& covering);

/// Key-value lattice descriptor: lines "kind = star", "dims = 2 2",
/// "boundary = periodic".
LatticeGraph read_lattice_descriptor(const std::string& path);

}  // namespace aklt
