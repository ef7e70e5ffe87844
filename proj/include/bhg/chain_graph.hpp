#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "bhg/dah.hpp"
#include "bhg/types.hpp"

namespace bhg {

/// Simple undirected graph.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  UndirectedGraph(VertexSet vertices, std::set<VertexPair> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    for (const auto& [x, y] : edges_) {
      if (x == y) throw Error(ErrorKind::SelfLoop, x);
      for (const auto& v : {x, y}) {
        if (!vertices_.count(v)) throw Error(ErrorKind::UnknownVertexInEdge, v);
      }
      adjacency_[x].insert(y);
      adjacency_[y].insert(x);
    }
  }

  const VertexSet& vertices() const { return vertices_; }
  const std::set<VertexPair>& edges() const { return edges_; }

  const VertexSet& adjacent(const VertexId& v) const {
    static const VertexSet empty;
    auto it = adjacency_.find(v);
    return it == adjacency_.end() ? empty : it->second;
  }
  bool has_edge(const VertexId& x, const VertexId& y) const {
    return edges_.count(make_unordered(x, y)) != 0;
  }

  friend bool operator==(const UndirectedGraph& x, const UndirectedGraph& y) {
    return x.vertices_ == y.vertices_ && x.edges_ == y.edges_;
  }

 private:
  VertexSet vertices_;
  std::set<VertexPair> edges_;
  std::map<VertexId, VertexSet> adjacency_;
};

using Arc = std::pair<VertexId, VertexId>;

class ChainGraph;
ChainGraph build_chain_graph(VertexSet vertices, std::set<Arc> directed,
                             std::set<VertexPair> undirected);

/// LWF chain graph: directed arcs plus undirected lines, no partially
/// directed cycle. Obtain one through build_chain_graph.
class ChainGraph {
 public:
  ChainGraph() = default;

  const VertexSet& vertices() const { return vertices_; }
  const std::set<Arc>& directed() const { return directed_; }
  const std::set<VertexPair>& undirected() const { return undirected_; }

  const VertexSet& parents(const VertexId& v) const { return lookup(parents_, v); }
  const VertexSet& children(const VertexId& v) const { return lookup(children_, v); }
  const VertexSet& neighbors(const VertexId& v) const { return lookup(neighbors_, v); }
  VertexSet boundary(const VertexId& v) const { return set_union(parents(v), neighbors(v)); }

  bool adjacent(const VertexId& x, const VertexId& y) const {
    return parents(x).count(y) || children(x).count(y) || neighbors(x).count(y);
  }

  friend bool operator==(const ChainGraph& x, const ChainGraph& y) {
    return x.vertices_ == y.vertices_ && x.directed_ == y.directed_ &&
           x.undirected_ == y.undirected_;
  }

  /// The same structure read as a hypergraph: ({u},{v}) per arc and
  /// (∅,{u,v}) per line.
  Dah as_dah(bool require_acyclic = true) const {
    std::vector<Hyperedge> edges;
    for (const auto& [u, v] : directed_) edges.push_back({{u}, {v}});
    for (const auto& [u, v] : undirected_) edges.push_back({{}, {u, v}});
    return build_dah(vertices_, std::move(edges), require_acyclic);
  }

 private:
  friend ChainGraph build_chain_graph(VertexSet, std::set<Arc>, std::set<VertexPair>);

  static const VertexSet& lookup(const std::map<VertexId, VertexSet>& m, const VertexId& v) {
    static const VertexSet empty;
    auto it = m.find(v);
    return it == m.end() ? empty : it->second;
  }

  VertexSet vertices_;
  std::set<Arc> directed_;
  std::set<VertexPair> undirected_;
  std::map<VertexId, VertexSet> parents_;
  std::map<VertexId, VertexSet> children_;
  std::map<VertexId, VertexSet> neighbors_;
};

inline ChainGraph build_chain_graph(VertexSet vertices, std::set<Arc> directed,
                                    std::set<VertexPair> undirected) {
  std::set<VertexPair> lines;
  for (auto [u, v] : undirected) {
    if (u == v) throw Error(ErrorKind::SelfLoop, u + " - " + v);
    lines.insert(make_unordered(std::move(u), std::move(v)));
  }
  for (const auto& [u, v] : directed) {
    if (u == v) throw Error(ErrorKind::SelfLoop, u + " -> " + v);
    if (lines.count(make_unordered(u, v))) {
      throw Error(ErrorKind::ConflictingEdge, u + " and " + v + " joined both ways");
    }
  }
  for (const auto& [u, v] : directed) {
    for (const auto& x : {u, v}) {
      if (!vertices.count(x)) throw Error(ErrorKind::UnknownVertexInEdge, x);
    }
  }
  for (const auto& [u, v] : lines) {
    for (const auto& x : {u, v}) {
      if (!vertices.count(x)) throw Error(ErrorKind::UnknownVertexInEdge, x);
    }
  }

  ChainGraph g;
  g.vertices_ = std::move(vertices);
  g.directed_ = std::move(directed);
  g.undirected_ = std::move(lines);
  for (const auto& [u, v] : g.directed_) {
    g.parents_[v].insert(u);
    g.children_[u].insert(v);
  }
  for (const auto& [u, v] : g.undirected_) {
    g.neighbors_[u].insert(v);
    g.neighbors_[v].insert(u);
  }
  const Dah view = g.as_dah(false);
  if (auto walk = find_partially_directed_cycle(view)) {
    throw Error(ErrorKind::CycleDetected, format_walk(view, *walk));
  }
  return g;
}

inline ComponentPartition cg_chain_components(const ChainGraph& g) {
  std::map<VertexId, VertexSet> adjacency;
  for (const auto& v : g.vertices()) adjacency[v] = g.neighbors(v);
  return components_from_adjacency(g.vertices(), adjacency);
}

/// bd(S) = (∪_{v∈S} bd(v)) \ S.
inline VertexSet cg_boundary(const ChainGraph& g, const VertexSet& s) {
  VertexSet out;
  for (const auto& v : s) {
    const VertexSet b = g.boundary(v);
    out.insert(b.begin(), b.end());
  }
  return set_difference(out, s);
}

/// pa(S) = (∪_{v∈S} pa(v)) \ S.
inline VertexSet cg_parents(const ChainGraph& g, const VertexSet& s) {
  VertexSet out;
  for (const auto& v : s) out.insert(g.parents(v).begin(), g.parents(v).end());
  return set_difference(out, s);
}

inline ChainGraph cg_induced_subgraph(const ChainGraph& g, const VertexSet& s) {
  std::set<Arc> arcs;
  std::set<VertexPair> lines;
  for (const auto& a : g.directed()) {
    if (s.count(a.first) && s.count(a.second)) arcs.insert(a);
  }
  for (const auto& l : g.undirected()) {
    if (s.count(l.first) && s.count(l.second)) lines.insert(l);
  }
  return build_chain_graph(s, std::move(arcs), std::move(lines));
}

inline VertexSet cg_anterior_set(const ChainGraph& g, const VertexSet& s) {
  for (const auto& v : s) {
    if (!g.vertices().count(v)) throw Error(ErrorKind::UnknownVertex, v);
  }
  return detail::reach(s, [&](const VertexId& v, auto&& visit) {
    for (const auto& p : g.parents(v)) visit(p);
    for (const auto& n : g.neighbors(v)) visit(n);
  });
}

inline UndirectedGraph skeleton(const ChainGraph& g) {
  std::set<VertexPair> edges = g.undirected();
  for (const auto& [u, v] : g.directed()) edges.insert(make_unordered(u, v));
  return UndirectedGraph(g.vertices(), std::move(edges));
}

/// Skeleton plus a complete graph on the boundary of every chain component.
inline UndirectedGraph moral_graph(const ChainGraph& g) {
  std::set<VertexPair> edges = skeleton(g).edges();
  for (const auto& tau : cg_chain_components(g).components) {
    const VertexSet bd = cg_boundary(g, tau);
    for (auto i = bd.begin(); i != bd.end(); ++i) {
      for (auto j = std::next(i); j != bd.end(); ++j) edges.insert({*i, *j});
    }
  }
  return UndirectedGraph(g.vertices(), std::move(edges));
}

/// All inclusion-maximal cliques (Bron–Kerbosch with pivoting). Each clique
/// is sorted and the list is sorted lexicographically.
inline std::vector<VertexSet> maximal_cliques(const UndirectedGraph& u) {
  const std::vector<VertexId> index = to_vector(u.vertices());
  if (index.size() > 64) {
    throw Error(ErrorKind::TooManyVariables, "clique search supports at most 64 vertices");
  }
  using Mask = std::uint64_t;
  std::map<VertexId, std::size_t> pos;
  for (std::size_t i = 0; i < index.size(); ++i) pos[index[i]] = i;
  std::vector<Mask> adj(index.size(), 0);
  for (const auto& [x, y] : u.edges()) {
    adj[pos[x]] |= Mask{1} << pos[y];
    adj[pos[y]] |= Mask{1} << pos[x];
  }

  std::vector<VertexSet> out;
  auto expand = [&](auto&& self, Mask r, Mask p, Mask x) -> void {
    if (p == 0 && x == 0) {
      VertexSet clique;
      for (std::size_t i = 0; i < index.size(); ++i) {
        if (r >> i & 1) clique.insert(index[i]);
      }
      out.push_back(std::move(clique));
      return;
    }
    // Pivot: the vertex of P ∪ X with most neighbours in P.
    const Mask px = p | x;
    std::size_t pivot = static_cast<std::size_t>(std::countr_zero(px));
    int best = -1;
    for (Mask m = px; m; m &= m - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(m));
      const int score = std::popcount(p & adj[i]);
      if (score > best) {
        best = score;
        pivot = i;
      }
    }
    for (Mask m = p & ~adj[pivot]; m; m &= m - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(m));
      const Mask bit = Mask{1} << i;
      self(self, r | bit, p & adj[i], x & adj[i]);
      p &= ~bit;
      x |= bit;
    }
  };
  const Mask all = index.empty() ? 0 : (index.size() == 64 ? ~Mask{0} : (Mask{1} << index.size()) - 1);
  if (!index.empty()) expand(expand, 0, all, 0);
  std::sort(out.begin(), out.end());
  return out;
}

/// True iff no path joins A and B once C is removed. Vacuously true when A or
/// B is empty.
inline bool ug_separates(const UndirectedGraph& u, const VertexSet& a, const VertexSet& b,
                         const VertexSet& c) {
  require_disjoint_subsets(u.vertices(), {&a, &b, &c});
  if (a.empty() || b.empty()) return true;
  VertexSet seen = a;
  std::deque<VertexId> queue(a.begin(), a.end());
  while (!queue.empty()) {
    VertexId v = std::move(queue.front());
    queue.pop_front();
    for (const auto& w : u.adjacent(v)) {
      if (c.count(w) || seen.count(w)) continue;
      if (b.count(w)) return false;
      seen.insert(w);
      queue.push_back(w);
    }
  }
  return true;
}

/// (alpha, B, beta): B a connected subset of one chain component, alpha and
/// beta non-adjacent vertices in bd(tau) ∩ bd(B). Stored with alpha < beta.
struct Complex {
  VertexId alpha;
  VertexSet b;
  VertexId beta;

  friend auto operator<=>(const Complex&, const Complex&) = default;
  friend bool operator==(const Complex&, const Complex&) = default;
};

inline constexpr std::size_t kMaxComplexComponent = 15;

/// Minimal complexes by exhaustive search over connected subsets of each
/// chain component. Components above kMaxComplexComponent vertices are
/// rejected when they have two or more non-adjacent boundary vertices.
inline std::vector<Complex> minimal_complexes(const ChainGraph& g) {
  std::vector<Complex> out;
  for (const auto& tau : cg_chain_components(g).components) {
    const std::vector<VertexId> bd = to_vector(cg_boundary(g, tau));
    std::vector<std::pair<VertexId, VertexId>> candidates;
    for (std::size_t i = 0; i < bd.size(); ++i) {
      for (std::size_t j = i + 1; j < bd.size(); ++j) {
        if (!g.adjacent(bd[i], bd[j])) candidates.emplace_back(bd[i], bd[j]);
      }
    }
    if (candidates.empty()) continue;
    if (tau.size() > kMaxComplexComponent) {
      throw Error(ErrorKind::ComplexSearchTooLarge,
                  "chain component " + format_set(tau) + " has " + std::to_string(tau.size()) +
                      " vertices");
    }
    const std::vector<VertexId> members = to_vector(tau);
    const std::size_t n = members.size();
    std::vector<std::uint32_t> adj(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (g.neighbors(members[i]).count(members[j])) adj[i] |= 1u << j;
      }
    }
    auto connected = [&](std::uint32_t mask) {
      const std::uint32_t start = mask & (~mask + 1);
      std::uint32_t seen = start;
      std::uint32_t frontier = start;
      while (frontier) {
        const auto i = static_cast<std::size_t>(std::countr_zero(frontier));
        frontier &= frontier - 1;
        const std::uint32_t fresh = adj[i] & mask & ~seen;
        seen |= fresh;
        frontier |= fresh;
      }
      return seen == mask;
    };
    // Which members each boundary vertex points into.
    std::map<VertexId, std::uint32_t> into;
    for (const auto& a : bd) {
      std::uint32_t m = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (g.boundary(members[i]).count(a)) m |= 1u << i;
      }
      into[a] = m;
    }
    for (const auto& [alpha, beta] : candidates) {
      std::vector<std::uint32_t> hits;
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if ((mask & into[alpha]) && (mask & into[beta]) && connected(mask)) hits.push_back(mask);
      }
      for (std::uint32_t mask : hits) {
        const bool minimal = std::none_of(hits.begin(), hits.end(), [&](std::uint32_t other) {
          return other != mask && (other & mask) == other;
        });
        if (!minimal) continue;
        VertexSet b;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask >> i & 1) b.insert(members[i]);
        }
        out.push_back({alpha, std::move(b), beta});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bhg
