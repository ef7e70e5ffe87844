#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "bhg/chain_graph.hpp"
#include "bhg/dah.hpp"
#include "bhg/projection.hpp"

namespace bhg {

/// A ⟂ B | C over disjoint vertex sets.
struct CIStatement {
  VertexSet a;
  VertexSet b;
  VertexSet c;

  /// Symmetric form: the lexicographically smaller of A and B comes first.
  CIStatement canonical() const {
    if (b < a) return {b, a, c};
    return *this;
  }

  friend auto operator<=>(const CIStatement&, const CIStatement&) = default;
  friend bool operator==(const CIStatement&, const CIStatement&) = default;
};

inline std::string format_statement(const CIStatement& s) {
  return format_set(s.a) + " _||_ " + format_set(s.b) + " | " + format_set(s.c);
}

/// Global Markov separation: C separates A and B in the moral graph of the
/// shadow of the sub-hypergraph induced by ant(A ∪ B ∪ C).
inline bool hg_separates(const Dah& h, const VertexSet& a, const VertexSet& b,
                         const VertexSet& c) {
  require_disjoint_subsets(h.vertices(), {&a, &b, &c});
  if (a.empty() || b.empty()) return true;
  const VertexSet ant = anterior_set(h, set_union(set_union(a, b), c));
  return ug_separates(moral_graph(shadow(induced_subhypergraph(h, ant))), a, b, c);
}

/// Chain-graph global Markov separation via the anterior induced subgraph.
inline bool cg_global_separates(const ChainGraph& g, const VertexSet& a, const VertexSet& b,
                                const VertexSet& c) {
  require_disjoint_subsets(g.vertices(), {&a, &b, &c});
  if (a.empty() || b.empty()) return true;
  const VertexSet ant = cg_anterior_set(g, set_union(set_union(a, b), c));
  return ug_separates(moral_graph(cg_induced_subgraph(g, ant)), a, b, c);
}

namespace detail {

inline bool adjacent_in(const Dah& h, const VertexId& x, const VertexId& y) {
  return h.parents(x).count(y) || h.children(x).count(y) || h.neighbors(x).count(y);
}

}  // namespace detail

/// v ⟂ u | nd(v) \ {v,u} for non-adjacent u ∈ nd(v). Canonical, deduplicated,
/// sorted.
inline std::vector<CIStatement> pairwise_statements(const Dah& h) {
  std::set<CIStatement> out;
  for (const auto& v : h.vertices()) {
    const Relations r = relations(h, v);
    for (const auto& u : r.nd) {
      if (u == v || detail::adjacent_in(h, v, u)) continue;
      VertexSet rest = r.nd;
      rest.erase(v);
      rest.erase(u);
      out.insert(CIStatement{{v}, {u}, std::move(rest)}.canonical());
    }
  }
  return {out.begin(), out.end()};
}

/// v ⟂ nd(v) \ cl(v) | bd(v), one statement per vertex (in label order) when
/// the middle set is nonempty.
inline std::vector<CIStatement> local_statements(const Dah& h) {
  std::vector<CIStatement> out;
  for (const auto& v : h.vertices()) {
    Relations r = relations(h, v);
    VertexSet rest = set_difference(r.nd, r.cl);
    if (rest.empty()) continue;
    out.push_back({{v}, std::move(rest), std::move(r.bd)});
  }
  return out;
}

/// Shadows share their skeleton and their minimal complexes.
inline bool markov_equivalent(const Dah& h1, const Dah& h2) {
  if (h1.vertices() != h2.vertices()) {
    throw Error(ErrorKind::VertexSetMismatch,
                format_set(h1.vertices()) + " vs " + format_set(h2.vertices()));
  }
  const ChainGraph g1 = shadow(h1);
  const ChainGraph g2 = shadow(h2);
  return skeleton(g1) == skeleton(g2) && minimal_complexes(g1) == minimal_complexes(g2);
}

}  // namespace bhg
