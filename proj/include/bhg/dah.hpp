#pragma once

#include <compare>
#include <cstddef>
#include <deque>
#include <functional>
#include <set>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bhg/types.hpp"

namespace bhg {

/// A directed hyperedge (tail, head). Either side may be empty, not both.
struct Hyperedge {
  VertexSet tail;
  VertexSet head;

  bool fully_directed() const { return !tail.empty() && !head.empty(); }
  VertexSet vertices() const { return set_union(tail, head); }

  friend auto operator<=>(const Hyperedge&, const Hyperedge&) = default;
  friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

/// Ordering used for canonical output: by head, then by tail.
inline bool head_then_tail_less(const Hyperedge& x, const Hyperedge& y) {
  if (x.head != y.head) return x.head < y.head;
  return x.tail < y.tail;
}

inline std::string format_edge(const Hyperedge& e) {
  return "(" + format_set(e.tail) + "," + format_set(e.head) + ")";
}

/// Partition of the vertex set into chain components.
struct ComponentPartition {
  std::vector<VertexSet> components;
  std::map<VertexId, std::size_t> component_of;

  std::size_t size() const { return components.size(); }
  std::size_t index_of(const VertexId& v) const { return component_of.at(v); }
};

/// Builds a partition from an adjacency relation (connected components),
/// ordering components by their smallest label.
inline ComponentPartition components_from_adjacency(
    const VertexSet& vertices, const std::map<VertexId, VertexSet>& adjacency) {
  ComponentPartition out;
  for (const auto& root : vertices) {
    if (out.component_of.count(root)) continue;
    VertexSet comp;
    std::deque<VertexId> queue{root};
    comp.insert(root);
    while (!queue.empty()) {
      VertexId v = std::move(queue.front());
      queue.pop_front();
      auto it = adjacency.find(v);
      if (it == adjacency.end()) continue;
      for (const auto& w : it->second) {
        if (comp.insert(w).second) queue.push_back(w);
      }
    }
    // Roots are visited in label order, so the first unseen root is the
    // smallest label of its component.
    const std::size_t idx = out.components.size();
    for (const auto& v : comp) out.component_of[v] = idx;
    out.components.push_back(std::move(comp));
  }
  return out;
}

/// Quotient DAG over chain components.
struct CanonicalDag {
  std::vector<VertexSet> nodes;
  std::set<std::pair<std::size_t, std::size_t>> arcs;

  bool is_acyclic() const {
    std::vector<std::size_t> indegree(nodes.size(), 0);
    for (const auto& [from, to] : arcs) {
      if (from == to) return false;
      ++indegree[to];
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (indegree[i] == 0) ready.push_back(i);
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
      const std::size_t i = ready.back();
      ready.pop_back();
      ++seen;
      for (auto it = arcs.lower_bound({i, 0}); it != arcs.end() && it->first == i; ++it) {
        if (--indegree[it->second] == 0) ready.push_back(it->second);
      }
    }
    return seen == nodes.size();
  }
};

/// Vertex relations of a single vertex. All reachability sets are reflexive.
struct Relations {
  VertexSet pa;
  VertexSet nb;
  VertexSet bd;
  VertexSet cl;
  VertexSet an;
  VertexSet ant;
  VertexSet de;
  VertexSet nd;
};

class Dah;
Dah build_dah(VertexSet vertices, std::vector<Hyperedge> edges, bool require_acyclic = true);

/// Directed hypergraph. Immutable once built; obtain one through build_dah.
class Dah {
 public:
  Dah() = default;

  const VertexSet& vertices() const { return vertices_; }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  bool contains(const VertexId& v) const { return vertices_.count(v) != 0; }

  const VertexSet& parents(const VertexId& v) const { return lookup(parents_, v); }
  const VertexSet& children(const VertexId& v) const { return lookup(children_, v); }
  const VertexSet& neighbors(const VertexId& v) const { return lookup(neighbors_, v); }

  VertexSet boundary(const VertexId& v) const {
    return set_union(parents(v), neighbors(v));
  }

  /// Edge sets compared without regard to order.
  friend bool operator==(const Dah& x, const Dah& y) {
    if (x.vertices_ != y.vertices_) return false;
    std::set<Hyperedge> ex(x.edges_.begin(), x.edges_.end());
    std::set<Hyperedge> ey(y.edges_.begin(), y.edges_.end());
    return ex == ey;
  }

 private:
  friend Dah build_dah(VertexSet, std::vector<Hyperedge>, bool);

  Dah(VertexSet vertices, std::vector<Hyperedge> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    for (const auto& e : edges_) {
      for (const auto& h : e.head) {
        for (const auto& t : e.tail) {
          parents_[h].insert(t);
          children_[t].insert(h);
        }
        for (const auto& other : e.head) {
          if (other != h) neighbors_[h].insert(other);
        }
      }
    }
  }

  static const VertexSet& lookup(const std::map<VertexId, VertexSet>& m, const VertexId& v) {
    static const VertexSet empty;
    auto it = m.find(v);
    return it == m.end() ? empty : it->second;
  }

  VertexSet vertices_;
  std::vector<Hyperedge> edges_;
  std::map<VertexId, VertexSet> parents_;
  std::map<VertexId, VertexSet> children_;
  std::map<VertexId, VertexSet> neighbors_;
};

// ---------------------------------------------------------------------------

/// Chain components: closure of the co-head relation.
inline ComponentPartition chain_components(const Dah& h) {
  std::map<VertexId, VertexSet> adjacency;
  for (const auto& v : h.vertices()) adjacency[v] = h.neighbors(v);
  return components_from_adjacency(h.vertices(), adjacency);
}

namespace detail {

/// One (tail vertex, head vertex) witness per quotient arc.
using ArcWitness = std::map<std::pair<std::size_t, std::size_t>, std::pair<VertexId, VertexId>>;

inline ArcWitness quotient_arcs(const Dah& h, const ComponentPartition& parts) {
  ArcWitness out;
  for (const auto& e : h.edges()) {
    for (const auto& t : e.tail) {
      for (const auto& w : e.head) {
        out.try_emplace({parts.index_of(t), parts.index_of(w)}, t, w);
      }
    }
  }
  return out;
}

/// Shortest co-head path from `from` to `to`, both inclusive.
inline std::vector<VertexId> cohead_path(const Dah& h, const VertexId& from, const VertexId& to) {
  std::map<VertexId, VertexId> prev;
  std::deque<VertexId> queue{from};
  prev[from] = from;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (const auto& w : h.neighbors(v)) {
      if (prev.try_emplace(w, v).second) queue.push_back(w);
    }
  }
  std::vector<VertexId> path{to};
  while (path.back() != from) path.push_back(prev.at(path.back()));
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

/// Returns a partially directed cycle as a closed vertex walk (first vertex
/// repeated at the end), or nullopt when the hypergraph is acyclic.
///
/// Works on the quotient by chain components: a parent step inside one
/// component, or a directed cycle among components, is exactly a partially
/// directed cycle.
inline std::optional<std::vector<VertexId>> find_partially_directed_cycle(const Dah& h) {
  const ComponentPartition parts = chain_components(h);
  const detail::ArcWitness arcs = detail::quotient_arcs(h, parts);

  std::vector<std::size_t> cycle;  // component indices, closed by the first
  for (const auto& [arc, _] : arcs) {
    if (arc.first == arc.second) {
      cycle = {arc.first};
      break;
    }
  }
  if (cycle.empty()) {
    std::vector<std::vector<std::size_t>> succ(parts.size());
    for (const auto& [arc, _] : arcs) succ[arc.first].push_back(arc.second);
    enum Color { White, Grey, Black };
    std::vector<Color> color(parts.size(), White);
    std::vector<std::size_t> stack;
    std::function<bool(std::size_t)> dfs = [&](std::size_t u) {
      color[u] = Grey;
      stack.push_back(u);
      for (std::size_t w : succ[u]) {
        if (color[w] == Grey) {
          auto start = std::find(stack.begin(), stack.end(), w);
          cycle.assign(start, stack.end());
          return true;
        }
        if (color[w] == White && dfs(w)) return true;
      }
      stack.pop_back();
      color[u] = Black;
      return false;
    };
    for (std::size_t i = 0; i < parts.size() && cycle.empty(); ++i) {
      if (color[i] == White) dfs(i);
    }
  }
  if (cycle.empty()) return std::nullopt;

  // Expand: for arc k (cycle[k] -> cycle[k+1]) walk t_k -> w_k, then move
  // inside the target component from w_k to t_{k+1}.
  const std::size_t k = cycle.size();
  std::vector<std::pair<VertexId, VertexId>> steps;
  for (std::size_t i = 0; i < k; ++i) {
    steps.push_back(arcs.at({cycle[i], cycle[(i + 1) % k]}));
  }
  std::vector<VertexId> walk;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& [t, w] = steps[i];
    if (walk.empty()) walk.push_back(t);
    const auto inner = detail::cohead_path(h, w, steps[(i + 1) % k].first);
    walk.insert(walk.end(), inner.begin(), inner.end());
  }
  return walk;
}

/// Renders a closed walk with "->" for parent steps and "-" for co-head steps.
inline std::string format_walk(const Dah& h, const std::vector<VertexId>& walk) {
  std::string out;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    if (i > 0) {
      out += h.parents(walk[i]).count(walk[i - 1]) ? " -> " : " - ";
    }
    out += walk[i];
  }
  return out;
}

inline bool is_acyclic(const Dah& h) { return !find_partially_directed_cycle(h).has_value(); }

/// Validates and builds a directed hypergraph. Edge order is preserved.
inline Dah build_dah(VertexSet vertices, std::vector<Hyperedge> edges, bool require_acyclic) {
  for (const auto& v : vertices) {
    if (v.empty()) throw Error(ErrorKind::UnknownVertex, "empty vertex label");
  }
  std::set<Hyperedge> seen;
  for (const auto& e : edges) {
    if (intersects(e.tail, e.head)) {
      throw Error(ErrorKind::TailHeadOverlap,
                  format_edge(e) + " shares " + format_set(set_intersection(e.tail, e.head)));
    }
    if (e.tail.empty() && e.head.empty()) {
      throw Error(ErrorKind::EmptyHyperedge, "edge with empty tail and head");
    }
    for (const auto& v : e.vertices()) {
      if (!vertices.count(v)) {
        throw Error(ErrorKind::UnknownVertexInEdge, v + " in " + format_edge(e));
      }
    }
    if (!seen.insert(e).second) throw Error(ErrorKind::DuplicateEdge, format_edge(e));
  }
  Dah h(std::move(vertices), std::move(edges));
  if (require_acyclic) {
    if (auto walk = find_partially_directed_cycle(h)) {
      throw Error(ErrorKind::CycleDetected, format_walk(h, *walk));
    }
  }
  return h;
}

/// Same as build_dah, from a vertex list in which repeats are rejected.
inline Dah build_dah_from_list(const std::vector<VertexId>& vertices,
                               std::vector<Hyperedge> edges, bool require_acyclic = true) {
  VertexSet vs;
  for (const auto& v : vertices) {
    if (!vs.insert(v).second) throw Error(ErrorKind::DuplicateVertex, v);
  }
  return build_dah(std::move(vs), std::move(edges), require_acyclic);
}

inline CanonicalDag canonical_dag(const Dah& h) {
  const ComponentPartition parts = chain_components(h);
  CanonicalDag out;
  out.nodes = parts.components;
  for (const auto& [arc, _] : detail::quotient_arcs(h, parts)) {
    if (arc.first != arc.second) out.arcs.insert(arc);
  }
  return out;
}

namespace detail {

template <class Step>
VertexSet reach(const VertexSet& seeds, Step&& step) {
  VertexSet out = seeds;
  std::deque<VertexId> queue(seeds.begin(), seeds.end());
  while (!queue.empty()) {
    VertexId v = std::move(queue.front());
    queue.pop_front();
    step(v, [&](const VertexId& w) {
      if (out.insert(w).second) queue.push_back(w);
    });
  }
  return out;
}

inline void require_vertex(const Dah& h, const VertexId& v) {
  if (!h.contains(v)) throw Error(ErrorKind::UnknownVertex, v);
}

}  // namespace detail

/// Smallest ancestral set containing s: backward closure over boundaries.
inline VertexSet anterior_set(const Dah& h, const VertexSet& s) {
  for (const auto& v : s) detail::require_vertex(h, v);
  return detail::reach(s, [&](const VertexId& v, auto&& visit) {
    for (const auto& p : h.parents(v)) visit(p);
    for (const auto& n : h.neighbors(v)) visit(n);
  });
}

/// Relations of v. Descendants follow the chain-graph convention: u is a
/// descendant of v when v leads to u along a path but u does not lead back
/// to v (plus v itself), so co-members of v's chain component are
/// non-descendants.
inline Relations relations(const Dah& h, const VertexId& v) {
  detail::require_vertex(h, v);
  Relations r;
  r.pa = h.parents(v);
  r.nb = h.neighbors(v);
  r.bd = set_union(r.pa, r.nb);
  r.cl = r.bd;
  r.cl.insert(v);
  r.an = detail::reach({v}, [&](const VertexId& u, auto&& visit) {
    for (const auto& p : h.parents(u)) visit(p);
  });
  r.ant = anterior_set(h, {v});
  const VertexSet forward = detail::reach({v}, [&](const VertexId& u, auto&& visit) {
    for (const auto& c : h.children(u)) visit(c);
    for (const auto& n : h.neighbors(u)) visit(n);
  });
  r.de = set_difference(forward, r.ant);
  r.de.insert(v);
  r.nd = set_difference(h.vertices(), r.de);
  return r;
}

inline Dah induced_subhypergraph(const Dah& h, const VertexSet& s) {
  for (const auto& v : s) detail::require_vertex(h, v);
  std::vector<Hyperedge> kept;
  for (const auto& e : h.edges()) {
    if (is_subset(e.tail, s) && is_subset(e.head, s)) kept.push_back(e);
  }
  return build_dah(s, std::move(kept), false);
}

}  // namespace bhg
