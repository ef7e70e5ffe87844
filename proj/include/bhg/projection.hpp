#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "bhg/chain_graph.hpp"
#include "bhg/dah.hpp"

namespace bhg {

/// Chain-graph projection: every head becomes an undirected clique and every
/// tail vertex points at every head vertex.
inline ChainGraph shadow(const Dah& h) {
  std::set<Arc> arcs;
  std::set<VertexPair> lines;
  for (const auto& e : h.edges()) {
    for (auto i = e.head.begin(); i != e.head.end(); ++i) {
      for (auto j = std::next(i); j != e.head.end(); ++j) lines.insert({*i, *j});
      for (const auto& t : e.tail) arcs.insert({t, *i});
    }
  }
  return build_chain_graph(h.vertices(), std::move(arcs), std::move(lines));
}

namespace detail {

inline UndirectedGraph undirected_part(const ChainGraph& g, const VertexSet& s) {
  std::set<VertexPair> lines;
  for (const auto& l : g.undirected()) {
    if (s.count(l.first) && s.count(l.second)) lines.insert(l);
  }
  return UndirectedGraph(s, std::move(lines));
}

/// Closure of a family of sets under pairwise intersection, empty set
/// dropped. Equals the set of intersections of all nonempty subfamilies.
inline std::set<VertexSet> intersection_closure(const std::set<VertexSet>& family) {
  std::set<VertexSet> closed = family;
  std::vector<VertexSet> frontier(family.begin(), family.end());
  while (!frontier.empty()) {
    std::vector<VertexSet> next;
    for (const auto& x : frontier) {
      for (const auto& y : family) {
        VertexSet z = set_intersection(x, y);
        if (!z.empty() && closed.insert(z).second) next.push_back(std::move(z));
      }
    }
    frontier = std::move(next);
  }
  return closed;
}

}  // namespace detail

/// Canonical LWF directed acyclic hypergraph of a chain graph.
///
/// Phase I adds ({v}, K) for each maximal clique K of the undirected part of
/// v's children, then (∅, K) for each maximal undirected clique (two or more
/// vertices) not already inside a Phase I head. Phase II replaces, per chain
/// component, the Phase I edges by one edge per nonempty intersection B of
/// their heads, with tail the union of tails of the edges whose head
/// contains B.
inline Dah hypermoralize(const ChainGraph& g) {
  std::vector<Hyperedge> phase1;
  for (const auto& v : g.vertices()) {
    const VertexSet& kids = g.children(v);
    if (kids.empty()) continue;
    for (auto& k : maximal_cliques(detail::undirected_part(g, kids))) {
      phase1.push_back({{v}, std::move(k)});
    }
  }
  const std::size_t directed_count = phase1.size();
  for (auto& k : maximal_cliques(detail::undirected_part(g, g.vertices()))) {
    if (k.size() < 2) continue;
    const bool covered = std::any_of(phase1.begin(), phase1.begin() + directed_count,
                                     [&](const Hyperedge& e) { return is_subset(k, e.head); });
    if (!covered) phase1.push_back({{}, std::move(k)});
  }

  const ComponentPartition parts = cg_chain_components(g);
  std::set<Hyperedge> result;
  for (const auto& tau : parts.components) {
    const VertexSet closure = set_union(tau, cg_boundary(g, tau));
    std::vector<const Hyperedge*> relevant;
    for (const auto& e : phase1) {
      if (intersects(e.head, tau) && is_subset(e.vertices(), closure)) relevant.push_back(&e);
    }
    std::set<VertexSet> heads;
    for (const auto* e : relevant) heads.insert(e->head);
    for (const auto& b : detail::intersection_closure(heads)) {
      VertexSet tail;
      for (const auto* e : relevant) {
        if (is_subset(b, e->head)) tail.insert(e->tail.begin(), e->tail.end());
      }
      result.insert({std::move(tail), b});
    }
  }
  std::vector<Hyperedge> edges(result.begin(), result.end());
  std::sort(edges.begin(), edges.end(), head_then_tail_less);
  return build_dah(g.vertices(), std::move(edges), true);
}

/// True iff h is the canonical LWF hypergraph of its own shadow.
inline bool is_lwf_dah(const Dah& h) { return hypermoralize(shadow(h)) == h; }

}  // namespace bhg
