#include "aklt/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace aklt {

LatticeKind lattice_kind_from_name(const std::string& name) {
  if (name == "ring") return LatticeKind::ring;
  if (name == "honeycomb") return LatticeKind::honeycomb;
  if (name == "star") return LatticeKind::star;
  if (name == "square_octagon") return LatticeKind::square_octagon;
  if (name == "cross") return LatticeKind::cross;
  if (name == "square") return LatticeKind::square;
  if (name == "custom") return LatticeKind::custom;
  throw std::invalid_argument("unknown lattice kind: " + name);
}

std::string lattice_kind_name(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::ring: return "ring";
    case LatticeKind::honeycomb: return "honeycomb";
    case LatticeKind::star: return "star";
    case LatticeKind::square_octagon: return "square_octagon";
    case LatticeKind::cross: return "cross";
    case LatticeKind::square: return "square";
    case LatticeKind::custom: return "custom";
  }
  return "?";
}

LatticeGraph::LatticeGraph(int num_vertices, std::vector<Edge> edges, LatticeKind kind,
                           Boundary boundary)
    : num_vertices_(num_vertices), kind_(kind), boundary_(boundary) {
  std::set<Edge> seen;
  for (auto& [u, v] : edges) {
    if (u == v) throw std::invalid_argument("lattice: self-loop");
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= num_vertices) throw std::invalid_argument("lattice: edge endpoint out of range");
    if (!seen.insert({u, v}).second) throw std::invalid_argument("lattice: duplicate edge");
  }
  edges_ = std::move(edges);
  std::sort(edges_.begin(), edges_.end());
  degree_.assign(num_vertices_, 0);
  adj_.assign(num_vertices_, {});
  for (auto& [u, v] : edges_) {
    ++degree_[u];
    ++degree_[v];
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

bool LatticeGraph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

bool LatticeGraph::connected() const {
  if (num_vertices_ == 0) return true;
  std::vector<char> seen(num_vertices_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj_[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == num_vertices_;
}

int LatticeGraph::leg_index(int u, int v) const {
  const auto& a = adj_[u];
  auto it = std::lower_bound(a.begin(), a.end(), v);
  if (it == a.end() || *it != v) throw std::invalid_argument("leg_index: not an edge");
  return static_cast<int>(it - a.begin());
}

bool Coloring::valid_for(const LatticeGraph& g) const {
  if (static_cast<int>(colour.size()) != g.num_vertices()) return false;
  for (auto& [u, v] : g.edges())
    if (colour[u] == colour[v]) return false;
  return true;
}

Region make_region(const LatticeGraph& g, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end())
    throw std::invalid_argument("region: duplicate member");
  for (int v : members)
    if (v < 0 || v >= g.num_vertices()) throw std::invalid_argument("region: vertex out of range");
  Region reg;
  reg.members = std::move(members);
  std::set<int> inside(reg.members.begin(), reg.members.end());
  for (int v : reg.members)
    for (int w : g.neighbours(v))
      if (!inside.count(w)) reg.outgoing_edges.push_back({v, w});
  return reg;
}

bool region_is_injective(const Region& region) {
  std::map<int, int> out_count;
  for (auto& [in, out] : region.outgoing_edges) ++out_count[in];
  for (auto& [v, c] : out_count)
    if (c > 1) return false;
  return true;
}

namespace {

struct EdgeBuilder {
  std::vector<Edge> edges;
  void add(int u, int v) { edges.push_back({u, v}); }
};

int wrap(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

LatticeGraph build_lattice(LatticeKind kind, std::pair<int, int> dims, Boundary boundary) {
  auto [n1, n2] = dims;
  if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("build_lattice: dims must be positive");
  const bool periodic = boundary == Boundary::periodic;
  EdgeBuilder eb;

  switch (kind) {
    case LatticeKind::ring: {
      const int L = n1;
      if (periodic) {
        if (L % 3 != 0)
          throw std::invalid_argument("ring: periodic length must be divisible by 3");
        if (L < 3) throw std::invalid_argument("ring: too small for periodic wrap");
        for (int i = 0; i < L; ++i) eb.add(i, (i + 1) % L);
      } else {
        if (L < 2) throw std::invalid_argument("ring: open chain needs at least 2 vertices");
        for (int i = 0; i + 1 < L; ++i) eb.add(i, i + 1);
      }
      LatticeGraph g(L, eb.edges, kind, boundary);
      g.set_dims({L, 1});
      return g;
    }

    case LatticeKind::square: {
      if (periodic && (n1 < 3 || n2 < 3))
        throw std::invalid_argument("square: periodic dims must be at least 3x3");
      auto id = [&](int x, int y) { return wrap(y, n2) * n1 + wrap(x, n1); };
      for (int y = 0; y < n2; ++y)
        for (int x = 0; x < n1; ++x) {
          if (periodic || x + 1 < n1) eb.add(id(x, y), id(x + 1, y));
          if (periodic || y + 1 < n2) eb.add(id(x, y), id(x, y + 1));
        }
      LatticeGraph g(n1 * n2, eb.edges, kind, boundary);
      g.set_dims({n1, n2});
      return g;
    }

    case LatticeKind::honeycomb: {
      // Two vertices per cell: A = 2c, B = 2c+1. Edges: A(x,y)-B(x,y),
      // B(x,y)-A(x+1,y), B(x,y)-A(x,y+1).
      if (periodic && (n1 < 2 || n2 < 2))
        throw std::invalid_argument("honeycomb: periodic dims must be at least 2x2");
      auto cell = [&](int x, int y) { return wrap(y, n2) * n1 + wrap(x, n1); };
      for (int y = 0; y < n2; ++y)
        for (int x = 0; x < n1; ++x) {
          int c = cell(x, y);
          eb.add(2 * c, 2 * c + 1);
          if (periodic || x + 1 < n1) eb.add(2 * c + 1, 2 * cell(x + 1, y));
          if (periodic || y + 1 < n2) eb.add(2 * c + 1, 2 * cell(x, y + 1));
        }
      LatticeGraph g(2 * n1 * n2, eb.edges, kind, boundary);
      g.set_dims({n1, n2});
      return g;
    }

    case LatticeKind::star: {
      // Honeycomb with each vertex blown up into a triangle. Cell holds
      // triangles alpha = {6c+0,1,2} and beta = {6c+3,4,5}; crossing edges
      // follow the honeycomb edge slots.
      auto cell = [&](int x, int y) { return wrap(y, n2) * n1 + wrap(x, n1); };
      for (int y = 0; y < n2; ++y)
        for (int x = 0; x < n1; ++x) {
          int b = 6 * cell(x, y);
          eb.add(b + 0, b + 1);
          eb.add(b + 1, b + 2);
          eb.add(b + 0, b + 2);
          eb.add(b + 3, b + 4);
          eb.add(b + 4, b + 5);
          eb.add(b + 3, b + 5);
          eb.add(b + 0, b + 3);
          if (periodic || x + 1 < n1) eb.add(b + 4, 6 * cell(x + 1, y) + 1);
          if (periodic || y + 1 < n2) eb.add(b + 5, 6 * cell(x, y + 1) + 2);
        }
      LatticeGraph g(6 * n1 * n2, eb.edges, kind, boundary);
      g.set_dims({n1, n2});
      return g;
    }

    case LatticeKind::square_octagon: {
      // One square per cell, vertices N,E,S,W = 4c+0..3; externals pair
      // N with the S of the cell above and E with the W of the cell right.
      auto cell = [&](int x, int y) { return wrap(y, n2) * n1 + wrap(x, n1); };
      for (int y = 0; y < n2; ++y)
        for (int x = 0; x < n1; ++x) {
          int b = 4 * cell(x, y);
          eb.add(b + 0, b + 1);
          eb.add(b + 1, b + 2);
          eb.add(b + 2, b + 3);
          eb.add(b + 3, b + 0);
          if (periodic || x + 1 < n1) eb.add(b + 1, 4 * cell(x + 1, y) + 3);
          if (periodic || y + 1 < n2) eb.add(b + 0, 4 * cell(x, y + 1) + 2);
        }
      LatticeGraph g(4 * n1 * n2, eb.edges, kind, boundary);
      g.set_dims({n1, n2});
      return g;
    }

    case LatticeKind::cross: {
      // Truncated kagome. Kagome sites a,b,c per cell become squares of four
      // vertices, one per incident kagome edge, in cyclic (angular) order;
      // kagome edges become externals between the matching square corners.
      auto cell = [&](int x, int y) { return wrap(y, n2) * n1 + wrap(x, n1); };
      auto A = [&](int x, int y, int slot) { return 12 * cell(x, y) + 0 + slot; };
      auto B = [&](int x, int y, int slot) { return 12 * cell(x, y) + 4 + slot; };
      auto C = [&](int x, int y, int slot) { return 12 * cell(x, y) + 8 + slot; };
      for (int y = 0; y < n2; ++y)
        for (int x = 0; x < n1; ++x) {
          for (int s = 0; s < 3; ++s) {
            int base = 12 * cell(x, y) + 4 * s;
            eb.add(base + 0, base + 1);
            eb.add(base + 1, base + 2);
            eb.add(base + 2, base + 3);
            eb.add(base + 3, base + 0);
          }
          // up-triangle edges within the cell
          eb.add(A(x, y, 1), B(x, y, 3));
          eb.add(A(x, y, 0), C(x, y, 3));
          eb.add(B(x, y, 0), C(x, y, 2));
          // down-triangle edges
          if (periodic || x + 1 < n1) eb.add(C(x, y, 0), B(x + 1, y, 2));
          if (periodic || y + 1 < n2) eb.add(C(x, y, 1), A(x, y + 1, 2));
          if ((periodic || x + 1 < n1) && (periodic || y + 1 < n2))
            eb.add(B(x + 1, y, 1), A(x, y + 1, 3));
        }
      LatticeGraph g(12 * n1 * n2, eb.edges, kind, boundary);
      g.set_dims({n1, n2});
      return g;
    }

    case LatticeKind::custom:
      throw std::invalid_argument("build_lattice: custom graphs take an explicit edge list");
  }
  throw std::logic_error("unreachable");
}

namespace {

std::optional<Coloring> canonical_pattern(const LatticeGraph& g) {
  const int n = g.num_vertices();
  Coloring c;
  c.colour.resize(n);
  switch (g.kind()) {
    case LatticeKind::ring:
      for (int v = 0; v < n; ++v) c.colour[v] = static_cast<Axis>(v % 3);
      break;
    case LatticeKind::honeycomb:
      for (int v = 0; v < n; ++v) c.colour[v] = v % 2 ? Axis::Y : Axis::X;
      break;
    case LatticeKind::star: {
      static constexpr Axis pat[6] = {Axis::X, Axis::Y, Axis::Z, Axis::Y, Axis::Z, Axis::X};
      for (int v = 0; v < n; ++v) c.colour[v] = pat[v % 6];
      break;
    }
    case LatticeKind::square_octagon: {
      // checkerboard of x/y squares
      auto [n1, n2] = g.dims();
      if (n1 <= 0) return std::nullopt;
      for (int v = 0; v < n; ++v) {
        int cell = v / 4, x = cell % n1, y = cell / n1;
        int parity = (x + y + v) % 2;
        c.colour[v] = parity ? Axis::Y : Axis::X;
      }
      break;
    }
    case LatticeKind::square: {
      auto [n1, n2] = g.dims();
      if (n1 <= 0) return std::nullopt;
      for (int v = 0; v < n; ++v) c.colour[v] = ((v % n1) + (v / n1)) % 2 ? Axis::Y : Axis::X;
      break;
    }
    default:
      return std::nullopt;
  }
  if (!c.valid_for(g)) return std::nullopt;
  return c;
}

std::optional<Coloring> bipartite_colouring(const LatticeGraph& g) {
  const int n = g.num_vertices();
  std::vector<int> side(n, -1);
  for (int start = 0; start < n; ++start) {
    if (side[start] != -1) continue;
    side[start] = 0;
    std::vector<int> queue{start};
    for (size_t q = 0; q < queue.size(); ++q) {
      int v = queue[q];
      for (int w : g.neighbours(v)) {
        if (side[w] == -1) {
          side[w] = 1 - side[v];
          queue.push_back(w);
        } else if (side[w] == side[v]) {
          return std::nullopt;
        }
      }
    }
  }
  Coloring c;
  c.colour.resize(n);
  for (int v = 0; v < n; ++v) c.colour[v] = side[v] ? Axis::Y : Axis::X;
  return c;
}

}  // namespace

Coloring three_colouring(const LatticeGraph& g) {
  // canonical per-kind pattern first, then a bipartite 2-colouring, then
  // exhaustive backtracking; all three are deterministic in vertex order
  if (auto c = canonical_pattern(g)) return *c;
  if (auto c = bipartite_colouring(g)) return *c;

  const int n = g.num_vertices();
  std::vector<int> colour(n, -1);
  std::int64_t steps = 0;
  const std::int64_t step_cap = 50'000'000;

  std::function<bool(int)> assign = [&](int v) -> bool {
    if (v == n) return true;
    if (++steps > step_cap) throw std::runtime_error("three_colouring: search budget exhausted");
    for (int c = 0; c < 3; ++c) {
      bool ok = true;
      for (int w : g.neighbours(v))
        if (colour[w] == c) { ok = false; break; }
      if (!ok) continue;
      colour[v] = c;
      if (assign(v + 1)) return true;
      colour[v] = -1;
    }
    return false;
  };
  if (!assign(0)) throw std::runtime_error("three_colouring: graph is not three-colourable");

  Coloring out;
  out.colour.resize(n);
  for (int v = 0; v < n; ++v) out.colour[v] = static_cast<Axis>(colour[v]);
  return out;
}

std::optional<InjectiveCovering> injective_covering(const LatticeGraph& g) {
  const int n = g.num_vertices();
  std::vector<std::vector<int>> groups;

  switch (g.kind()) {
    case LatticeKind::star:
      for (int b = 0; b + 2 < n; b += 3) groups.push_back({b, b + 1, b + 2});
      break;
    case LatticeKind::square_octagon:
      for (int b = 0; b + 3 < n; b += 4) groups.push_back({b, b + 1, b + 2, b + 3});
      break;
    case LatticeKind::cross:
      for (int b = 0; b + 3 < n; b += 4) groups.push_back({b, b + 1, b + 2, b + 3});
      break;
    case LatticeKind::honeycomb: {
      // Hexagon plaquettes centred on cells with (x - y) % 3 == 0 partition
      // the vertices; the residue class survives the wraparound only when
      // both torus dimensions are divisible by 3.
      auto [n1, n2] = g.dims();
      if (n1 <= 0 || n2 <= 0) return std::nullopt;
      if (g.boundary() != Boundary::periodic || n1 % 3 != 0 || n2 % 3 != 0) return std::nullopt;
      auto cell = [&](int x, int y) { return ((y % n2 + n2) % n2) * n1 + ((x % n1 + n1) % n1); };
      auto A = [&](int x, int y) { return 2 * cell(x, y); };
      auto B = [&](int x, int y) { return 2 * cell(x, y) + 1; };
      for (int y = 0; y < n2; ++y)
        for (int x = 0; x < n1; ++x) {
          if (((x - y) % 3 + 3) % 3 != 0) continue;
          groups.push_back({A(x, y), B(x, y), A(x, y + 1), B(x - 1, y + 1), A(x - 1, y + 1),
                            B(x - 1, y)});
        }
      break;
    }
    case LatticeKind::ring:
      if (n % 2 != 0) return std::nullopt;
      for (int b = 0; b + 1 < n; b += 2) groups.push_back({b, b + 1});
      break;
    case LatticeKind::square:
    case LatticeKind::custom:
      return std::nullopt;
  }

  InjectiveCovering cov;
  for (auto& members : groups) cov.regions.push_back(make_region(g, members));
  if (cov.regions.empty()) return std::nullopt;
  cov.uniform_r = cov.regions.front().r();
  std::set<int> covered;
  for (auto& reg : cov.regions) {
    if (!region_is_injective(reg)) return std::nullopt;
    if (reg.r() != cov.uniform_r) return std::nullopt;
    for (int v : reg.members)
      if (!covered.insert(v).second) return std::nullopt;
  }
  if (static_cast<int>(covered.size()) != n) return std::nullopt;
  return cov;
}

CoarseGraph coarse_grain(const LatticeGraph& g, const InjectiveCovering& covering) {
  const int n = g.num_vertices();
  std::vector<int> owner(n, -1);
  for (int a = 0; a < static_cast<int>(covering.regions.size()); ++a)
    for (int v : covering.regions[a].members) {
      if (v < 0 || v >= n || owner[v] != -1)
        throw std::invalid_argument("coarse_grain: covering inconsistent with graph");
      owner[v] = a;
    }
  for (int v = 0; v < n; ++v)
    if (owner[v] == -1) throw std::invalid_argument("coarse_grain: covering does not cover graph");

  CoarseGraph cg;
  cg.num_nodes = static_cast<int>(covering.regions.size());
  for (auto& [u, v] : g.edges()) {
    int a = owner[u], b = owner[v];
    if (a == b) continue;
    Edge key{std::min(a, b), std::max(a, b)};
    cg.crossing_edges[key].push_back({u, v});
  }
  for (auto& [key, list] : cg.crossing_edges) cg.edges.push_back(key);
  std::sort(cg.edges.begin(), cg.edges.end());
  return cg;
}

LatticeGraph read_lattice_descriptor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lattice descriptor: " + path);
  std::string kind_s = "ring", boundary_s = "periodic";
  int n1 = 6, n2 = 1;
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "kind") kind_s = val;
    else if (key == "boundary") boundary_s = val;
    else if (key == "dims") {
      std::istringstream is(val);
      is >> n1;
      if (!(is >> n2)) n2 = 1;
    }
  }
  Boundary b = boundary_s == "open" ? Boundary::open : Boundary::periodic;
  return build_lattice(lattice_kind_from_name(kind_s), {n1, n2}, b);
}

}  // namespace aklt
