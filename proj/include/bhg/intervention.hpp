#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bhg/chain_graph.hpp"
#include "bhg/dah.hpp"
#include "bhg/factor.hpp"
#include "bhg/factorization.hpp"

namespace bhg {

/// Variables forced to fixed states.
struct InterventionSpec {
  VertexSet targets;
  std::map<VertexId, std::string> values;

  static InterventionSpec from_values(std::map<VertexId, std::string> values) {
    InterventionSpec s;
    for (const auto& [v, _] : values) s.targets.insert(v);
    s.values = std::move(values);
    return s;
  }
};

/// Checks a spec against a vertex set and domains; returns target → state index.
inline std::map<VertexId, std::size_t> resolve_spec(const InterventionSpec& spec,
                                                    const VertexSet& vertices,
                                                    const Domains& domains) {
  std::map<VertexId, std::size_t> clamp;
  for (const auto& v : spec.targets) {
    if (!vertices.count(v)) throw Error(ErrorKind::UnknownVertex, v);
    auto it = spec.values.find(v);
    if (it == spec.values.end()) throw Error(ErrorKind::InvalidState, "no value for " + v);
    clamp[v] = domains.state_index(v, it->second);
  }
  for (const auto& [v, _] : spec.values) {
    if (!spec.targets.count(v)) throw Error(ErrorKind::InvalidState, v + " is not a target");
  }
  return clamp;
}

namespace detail {

template <class Range>
void require_vertices(const VertexSet& universe, const Range& a) {
  for (const auto& v : a) {
    if (!universe.count(v)) throw Error(ErrorKind::UnknownVertex, v);
  }
}

}  // namespace detail

/// Lines u - w with u in `a` become u -> w (deleted when both ends are in
/// `a`); then every arc into `a` is removed.
inline ChainGraph cg_redirect(const ChainGraph& g, const VertexSet& a) {
  detail::require_vertices(g.vertices(), a);
  std::set<Arc> arcs;
  std::set<VertexPair> lines;
  for (const auto& [u, w] : g.undirected()) {
    const bool iu = a.count(u) != 0;
    const bool iw = a.count(w) != 0;
    if (iu && iw) continue;
    if (iu) {
      arcs.insert({u, w});
    } else if (iw) {
      arcs.insert({w, u});
    } else {
      lines.insert({u, w});
    }
  }
  for (const auto& arc : g.directed()) {
    if (!a.count(arc.second)) arcs.insert(arc);
  }
  return build_chain_graph(g.vertices(), std::move(arcs), std::move(lines));
}

/// Removes `a` and every incident edge.
inline ChainGraph cg_delete(const ChainGraph& g, const VertexSet& a) {
  detail::require_vertices(g.vertices(), a);
  return cg_induced_subgraph(g, set_difference(g.vertices(), a));
}

/// Moves intervened head vertices into the tail: (T, H) becomes
/// (T ∪ S, H \ S) with S = H ∩ a. Edges whose head empties are dropped.
inline Dah dah_redirect(const Dah& h, const VertexSet& a) {
  detail::require_vertices(h.vertices(), a);
  std::set<Hyperedge> out;
  for (const auto& e : h.edges()) {
    const VertexSet s = set_intersection(e.head, a);
    Hyperedge moved{set_union(e.tail, s), set_difference(e.head, s)};
    if (e.head.empty() || !moved.head.empty()) out.insert(std::move(moved));
  }
  std::vector<Hyperedge> edges(out.begin(), out.end());
  std::sort(edges.begin(), edges.end(), head_then_tail_less);
  return build_dah(h.vertices(), std::move(edges), true);
}

/// Factorization normal form on V \ a: shrink every edge to (T \ a, H \ a),
/// delete empty heads, delete edges dominated by another, until stable.
inline Dah dah_normalize(const Dah& h, const VertexSet& a) {
  detail::require_vertices(h.vertices(), a);
  std::set<Hyperedge> edges(h.edges().begin(), h.edges().end());
  while (true) {
    std::set<Hyperedge> next;
    for (const auto& e : edges) {
      Hyperedge s{set_difference(e.tail, a), set_difference(e.head, a)};
      if (!s.head.empty()) next.insert(std::move(s));
    }
    for (auto it = next.begin(); it != next.end();) {
      const bool dominated = std::any_of(next.begin(), next.end(), [&](const Hyperedge& o) {
        return o != *it && is_subset(it->tail, o.tail) && is_subset(it->head, o.head);
      });
      it = dominated ? next.erase(it) : std::next(it);
    }
    if (next == edges) break;
    edges = std::move(next);
  }
  std::vector<Hyperedge> out(edges.begin(), edges.end());
  std::sort(out.begin(), out.end(), head_then_tail_less);
  return build_dah(set_difference(h.vertices(), a), std::move(out), false);
}

inline bool factorization_equivalent_cg(const ChainGraph& g1, const VertexSet& a1,
                                        const ChainGraph& g2, const VertexSet& a2) {
  return cg_delete(g1, a1) == cg_delete(g2, a2);
}

inline bool factorization_equivalent_dah(const Dah& h1, const VertexSet& a1, const Dah& h2,
                                         const VertexSet& a2) {
  return dah_normalize(h1, a1) == dah_normalize(h2, a2);
}

/// Joint after forcing the spec's targets: each component is renormalized
/// over its free part with intervened members clamped. Defined on all of V;
/// configurations that disagree with the spec get exactly 0.
inline JointTable intervened_joint(const Dah& h, const Domains& domains,
                                   const FactorAssignment& fa, const InterventionSpec& spec) {
  const auto clamp = resolve_spec(spec, h.vertices(), domains);
  return detail::assemble(h.vertices(), factor_scopes(h), domains, fa, clamp);
}

inline JointTable cg_intervened_joint(const ChainGraph& g, const Domains& domains,
                                      const FactorAssignment& fa, const InterventionSpec& spec) {
  const auto clamp = resolve_spec(spec, g.vertices(), domains);
  return detail::assemble(g.vertices(), cg_factor_scopes(g), domains, fa, clamp);
}

/// Carries a factor system of `source` under an intervention onto the scopes
/// of `target` (a redirected or reduced structure). Each source factor is
/// evaluated at the clamped states and multiplied into a target scope that
/// covers its remaining variables; factors with no free variable left in
/// their own component only scale a normalizer and are dropped. Intervened
/// vertices still present in `target` receive the indicator of their state.
inline FactorAssignment transport_factor_system(const std::vector<ComponentScopes>& source,
                                                const FactorAssignment& fa,
                                                const std::map<VertexId, std::size_t>& clamp,
                                                const Domains& domains,
                                                const std::vector<ComponentScopes>& target) {
  FactorAssignment out;
  for (const auto& c : target) {
    for (const auto& s : c.scopes) {
      out[s] = Factor{to_vector(s), std::vector<double>(domains.configurations(s), 1.0)};
    }
  }
  VertexSet clamped;
  for (const auto& [v, _] : clamp) clamped.insert(v);

  auto place = [&](const Factor& f, const VertexSet& key) {
    const VertexSet vars = f.scope_set();
    for (const auto& c : target) {
      if (!is_subset(key, c.tau)) continue;
      for (const auto& s : c.scopes) {
        if (is_subset(vars, s)) {
          Factor& dst = out.at(s);
          dst = multiply(dst, f, domains);
          return;
        }
      }
    }
    throw Error(ErrorKind::ScopeMismatch, "no target scope covers " + format_set(vars));
  };

  for (const auto& c : source) {
    for (const auto& s : c.scopes) {
      const VertexSet key = set_difference(set_intersection(s, c.tau), clamped);
      if (key.empty()) continue;
      std::map<VertexId, std::size_t> fixed;
      for (const auto& v : s) {
        auto it = clamp.find(v);
        if (it != clamp.end()) fixed.insert(*it);
      }
      place(slice_factor(fa.at(s), fixed, domains), key);
    }
  }
  for (const auto& [v, state] : clamp) {
    const bool present = std::any_of(target.begin(), target.end(),
                                     [&](const ComponentScopes& c) { return c.tau.count(v) != 0; });
    if (present) place(indicator_factor(v, state, domains), {v});
  }
  return out;
}

/// Extends a joint over V \ A to V with point mass at the clamped states.
inline JointTable extend_with_point_mass(const JointTable& j, const VertexSet& all,
                                         const Domains& domains,
                                         const std::map<VertexId, std::size_t>& clamp) {
  JointTable out{to_vector(all), {}, {}};
  for (const auto& v : out.scope) out.radices.push_back(domains.size(v));
  out.table.assign(domains.configurations(out.scope), 0.0);
  std::vector<std::size_t> pos;
  for (const auto& v : j.scope) {
    pos.push_back(static_cast<std::size_t>(
        std::find(out.scope.begin(), out.scope.end(), v) - out.scope.begin()));
  }
  const auto dst_strides = strides_of(out.scope, domains);
  std::size_t fixed_offset = 0;
  for (std::size_t i = 0; i < out.scope.size(); ++i) {
    auto it = clamp.find(out.scope[i]);
    if (it != clamp.end()) fixed_offset += it->second * dst_strides[i];
  }
  for (std::size_t flat = 0; flat < j.table.size(); ++flat) {
    const auto st = decode_index(flat, j.scope, domains);
    std::size_t off = fixed_offset;
    for (std::size_t k = 0; k < st.size(); ++k) off += st[k] * dst_strides[pos[k]];
    out.table[off] = j.table[flat];
  }
  return out;
}

}  // namespace bhg
