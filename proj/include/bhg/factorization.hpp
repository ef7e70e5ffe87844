#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bhg/chain_graph.hpp"
#include "bhg/dah.hpp"
#include "bhg/factor.hpp"

namespace bhg {

/// Factor scopes of one chain component.
struct ComponentScopes {
  VertexSet tau;
  VertexSet parents;
  std::vector<VertexSet> scopes;

  friend bool operator==(const ComponentScopes&, const ComponentScopes&) = default;
};

/// pa(tau) in a hypergraph.
inline VertexSet component_parents(const Dah& h, const VertexSet& tau) {
  VertexSet out;
  for (const auto& v : tau) out.insert(h.parents(v).begin(), h.parents(v).end());
  return set_difference(out, tau);
}

/// Edges of the sub-hypergraph induced on tau ∪ pa(tau) whose (nonempty)
/// head lies inside tau.
inline Dah h_star(const Dah& h, const VertexSet& tau) {
  const ComponentPartition parts = chain_components(h);
  if (std::find(parts.components.begin(), parts.components.end(), tau) == parts.components.end()) {
    throw Error(ErrorKind::NotAComponent, format_set(tau));
  }
  const VertexSet closure = set_union(tau, component_parents(h, tau));
  std::vector<Hyperedge> kept;
  for (const auto& e : h.edges()) {
    if (!e.head.empty() && is_subset(e.head, tau) && is_subset(e.tail, closure)) {
      kept.push_back(e);
    }
  }
  return build_dah(closure, std::move(kept), false);
}

/// Inclusion-maximal members of {tail ∪ head}, sorted and deduplicated.
inline std::vector<VertexSet> maximal_edges(const std::vector<Hyperedge>& edges) {
  std::set<VertexSet> all;
  for (const auto& e : edges) all.insert(e.vertices());
  std::vector<VertexSet> out;
  for (const auto& s : all) {
    const bool dominated = std::any_of(all.begin(), all.end(), [&](const VertexSet& t) {
      return t != s && is_subset(s, t);
    });
    if (!dominated) out.push_back(s);
  }
  return out;
}

/// Per chain component, the maximal edges of h_star. A vertex of tau that no
/// such edge covers (an edge-free root) gets its own singleton scope, which
/// carries its marginal.
inline std::vector<ComponentScopes> factor_scopes(const Dah& h) {
  std::vector<ComponentScopes> out;
  for (const auto& tau : chain_components(h).components) {
    ComponentScopes c{tau, component_parents(h, tau), maximal_edges(h_star(h, tau).edges())};
    for (const auto& v : tau) {
      const bool covered = std::any_of(c.scopes.begin(), c.scopes.end(),
                                       [&](const VertexSet& s) { return s.count(v) != 0; });
      if (!covered) c.scopes.push_back({v});
    }
    std::sort(c.scopes.begin(), c.scopes.end());
    out.push_back(std::move(c));
  }
  return out;
}

/// Per chain component, the maximal cliques of the moral graph of
/// G[tau ∪ pa(tau)] that meet tau. Cliques inside pa(tau) are constant in
/// x_tau and cancel against the normalizer, so they carry no factor.
inline std::vector<ComponentScopes> cg_factor_scopes(const ChainGraph& g) {
  std::vector<ComponentScopes> out;
  for (const auto& tau : cg_chain_components(g).components) {
    ComponentScopes c{tau, cg_parents(g, tau), {}};
    const ChainGraph local = cg_induced_subgraph(g, set_union(tau, c.parents));
    for (auto& k : maximal_cliques(moral_graph(local))) {
      if (intersects(k, tau)) c.scopes.push_back(std::move(k));
    }
    out.push_back(std::move(c));
  }
  return out;
}

/// Total number of table entries needed by a set of scopes.
inline std::size_t table_entry_count(const std::vector<ComponentScopes>& comps,
                                     const Domains& domains) {
  std::size_t n = 0;
  for (const auto& c : comps) {
    for (const auto& s : c.scopes) n += domains.configurations(s);
  }
  return n;
}

/// Marks one single-variable component as "direct half": states other than
/// `derived_state` take the factor product as is and `derived_state` takes
/// the complement to one, instead of normalizing.
struct ComplementRule {
  VertexId variable;
  std::string derived_state;
};

inline constexpr std::size_t kMaxJointEntries = std::size_t{1} << 24;

namespace detail {

inline std::string format_config(const std::vector<VertexId>& vars,
                                 const std::vector<std::size_t>& states, const Domains& domains) {
  std::string out = "{";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ",";
    out += vars[i] + "=" + domains.states(vars[i])[states[i]];
  }
  return out + "}";
}

inline void check_assignment(const std::vector<ComponentScopes>& comps, const Domains& domains,
                             const FactorAssignment& fa) {
  std::set<VertexSet> required;
  for (const auto& c : comps) required.insert(c.scopes.begin(), c.scopes.end());
  for (const auto& s : required) {
    if (!fa.count(s)) throw Error(ErrorKind::ScopeMismatch, "missing factor for " + format_set(s));
  }
  for (const auto& [key, f] : fa) {
    if (!required.count(key)) {
      throw Error(ErrorKind::ScopeMismatch, "unexpected factor for " + format_set(key));
    }
    if (f.scope_set() != key) {
      throw Error(ErrorKind::ScopeMismatch,
                  "factor keyed " + format_set(key) + " has scope " + format_set(f.scope_set()));
    }
    f.validate(domains);
  }
}

/// Conditional table of one component over (sorted parents, sorted tau),
/// renormalized over the free part of tau with clamped members held fixed.
inline std::vector<double> component_conditional(
    const ComponentScopes& comp, const std::vector<VertexId>& local, const Domains& domains,
    const FactorAssignment& fa, const std::map<VertexId, std::size_t>& clamp,
    const std::optional<ComplementRule>& complement, bool log_space) {
  struct Bound {
    const Factor* factor;
    std::vector<std::size_t> positions;
    std::vector<std::size_t> strides;
  };
  std::vector<Bound> bound;
  for (const auto& s : comp.scopes) {
    const Factor& f = fa.at(s);
    Bound b{&f, {}, strides_of(f.scope, domains)};
    for (const auto& v : f.scope) {
      b.positions.push_back(
          static_cast<std::size_t>(std::find(local.begin(), local.end(), v) - local.begin()));
    }
    bound.push_back(std::move(b));
  }

  const std::size_t n_pa = comp.parents.size();
  const std::size_t block = domains.configurations(comp.tau);
  std::vector<double> cond(domains.configurations(local), 0.0);
  std::vector<std::size_t> radices;
  for (const auto& v : local) radices.push_back(domains.size(v));

  const bool use_complement =
      complement && comp.tau.size() == 1 && *comp.tau.begin() == complement->variable &&
      !clamp.count(complement->variable);
  const std::size_t derived =
      use_complement ? domains.state_index(complement->variable, complement->derived_state) : 0;

  const bool all_clamped = std::all_of(comp.tau.begin(), comp.tau.end(),
                                       [&](const VertexId& v) { return clamp.count(v) != 0; });

  ConfigCounter counter(radices);
  std::vector<double> raw(block);
  std::vector<char> allowed(block);
  for (std::size_t start = 0; start < cond.size(); start += block) {
    bool parents_consistent = true;
    for (std::size_t i = 0; i < n_pa; ++i) {
      auto it = clamp.find(local[i]);
      if (it != clamp.end() && counter.state()[i] != it->second) parents_consistent = false;
    }
    for (std::size_t k = 0; k < block; ++k) {
      const auto& st = counter.state();
      bool ok = true;
      for (std::size_t i = n_pa; i < local.size(); ++i) {
        auto it = clamp.find(local[i]);
        if (it != clamp.end() && st[i] != it->second) ok = false;
      }
      allowed[k] = ok;
      double acc = log_space ? 0.0 : 1.0;
      for (const auto& b : bound) {
        std::size_t off = 0;
        for (std::size_t j = 0; j < b.positions.size(); ++j) off += st[b.positions[j]] * b.strides[j];
        const double x = b.factor->table[off];
        if (log_space) {
          acc += x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
        } else {
          acc *= x;
        }
      }
      raw[k] = acc;
      counter.next();
    }

    if (all_clamped) {
      // Nothing left to normalize over: the conditional is the point mass.
      for (std::size_t k = 0; k < block; ++k) cond[start + k] = allowed[k] ? 1.0 : 0.0;
      continue;
    }

    if (use_complement) {
      double direct = 0.0;
      for (std::size_t k = 0; k < block; ++k) {
        if (k == derived) continue;
        const double p = log_space ? std::exp(raw[k]) : raw[k];
        if (p > 1.0 + 1e-12) {
          throw Error(ErrorKind::InvalidProbability,
                      "direct entry " + std::to_string(p) + " exceeds one for " +
                          complement->variable);
        }
        cond[start + k] = p;
        direct += p;
      }
      if (direct > 1.0 + 1e-12) {
        throw Error(ErrorKind::InvalidProbability,
                    "direct entries of " + complement->variable + " sum above one");
      }
      cond[start + derived] = std::max(0.0, 1.0 - direct);
      continue;
    }

    double z;
    if (log_space) {
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < block; ++k) {
        if (allowed[k]) hi = std::max(hi, raw[k]);
      }
      z = 0.0;
      if (std::isfinite(hi)) {
        for (std::size_t k = 0; k < block; ++k) {
          if (allowed[k]) z += std::exp(raw[k] - hi);
        }
      }
      if (z > 0.0) {
        for (std::size_t k = 0; k < block; ++k) {
          cond[start + k] = allowed[k] ? std::exp(raw[k] - hi) / z : 0.0;
        }
      }
    } else {
      z = 0.0;
      for (std::size_t k = 0; k < block; ++k) {
        if (allowed[k]) z += raw[k];
      }
      if (z > 0.0) {
        for (std::size_t k = 0; k < block; ++k) cond[start + k] = allowed[k] ? raw[k] / z : 0.0;
      }
    }
    if (!(z > 0.0) && parents_consistent) {
      std::vector<VertexId> pa(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(n_pa));
      const auto states = decode_index(start, local, domains);
      std::vector<std::size_t> pa_states(states.begin(),
                                         states.begin() + static_cast<std::ptrdiff_t>(n_pa));
      throw Error(ErrorKind::ZeroNormalizer, "component " + format_set(comp.tau) +
                                                 " at parent configuration " +
                                                 format_config(pa, pa_states, domains));
    }
  }
  return cond;
}

/// Product over components of their normalized conditionals.
inline JointTable assemble(const VertexSet& vars, const std::vector<ComponentScopes>& comps,
                           const Domains& domains, const FactorAssignment& fa,
                           const std::map<VertexId, std::size_t>& clamp = {},
                           const std::optional<ComplementRule>& complement = std::nullopt) {
  for (const auto& v : vars) {
    if (!domains.has(v)) throw Error(ErrorKind::UnknownVertex, "no domain for " + v);
  }
  check_assignment(comps, domains, fa);
  JointTable joint{to_vector(vars), {}, {}};
  for (const auto& v : joint.scope) joint.radices.push_back(domains.size(v));
  const std::size_t total = domains.configurations(joint.scope);
  if (total > kMaxJointEntries) {
    throw Error(ErrorKind::TooManyVariables,
                "joint table would have " + std::to_string(total) + " entries");
  }

  bool log_space = false;
  for (const auto& [_, f] : fa) {
    for (double x : f.table) {
      if (x > 0.0 && x < 1e-300) log_space = true;
    }
  }

  std::map<VertexId, std::size_t> var_pos;
  for (std::size_t i = 0; i < joint.scope.size(); ++i) var_pos[joint.scope[i]] = i;

  struct Prepared {
    std::vector<double> cond;
    std::vector<std::size_t> positions;
    std::vector<std::size_t> strides;
  };
  std::vector<Prepared> prepared;
  for (const auto& c : comps) {
    std::vector<VertexId> local = to_vector(c.parents);
    local.insert(local.end(), c.tau.begin(), c.tau.end());
    Prepared p{component_conditional(c, local, domains, fa, clamp, complement, log_space), {},
               strides_of(local, domains)};
    for (const auto& v : local) p.positions.push_back(var_pos.at(v));
    prepared.push_back(std::move(p));
  }

  joint.table.assign(total, 0.0);
  ConfigCounter counter(joint.radices);
  for (std::size_t flat = 0; flat < total; ++flat, counter.next()) {
    double p = 1.0;
    for (const auto& c : prepared) {
      std::size_t off = 0;
      for (std::size_t j = 0; j < c.positions.size(); ++j) off += counter.state()[c.positions[j]] * c.strides[j];
      p *= c.cond[off];
      if (p == 0.0) break;
    }
    joint.table[flat] = p;
  }
  return joint;
}

}  // namespace detail

/// Joint distribution of a discrete factor system over a hypergraph: per
/// chain component, the product of its factors normalized over the component
/// for every parent configuration; the joint is the product over components.
inline JointTable assemble_joint(const Dah& h, const Domains& domains, const FactorAssignment& fa,
                                 const std::optional<ComplementRule>& complement = std::nullopt) {
  return detail::assemble(h.vertices(), factor_scopes(h), domains, fa, {}, complement);
}

/// Chain-graph counterpart, with factors keyed by cg_factor_scopes.
inline JointTable cg_assemble_joint(const ChainGraph& g, const Domains& domains,
                                    const FactorAssignment& fa) {
  return detail::assemble(g.vertices(), cg_factor_scopes(g), domains, fa);
}

/// One parent of a Noisy-OR child.
struct NoisyOrParent {
  VertexId parent;
  std::string active_state;  // state in which the parent's mechanism acts
  double inhibition;         // probability the mechanism is inhibited
};

/// Pairwise Noisy-OR factors. Factor (p, child) holds, at the child's
/// `negative_state`, q_p when p is active and 1 otherwise; the other child
/// state holds the complement. The product of the negative-state entries is
/// the Noisy-OR probability of the negative state, so the child's component
/// is assembled with ComplementRule{child, <positive state>}.
inline std::vector<Factor> noisy_or_factors(const VertexId& child,
                                            const std::string& negative_state,
                                            const std::vector<NoisyOrParent>& parents,
                                            const Domains& domains) {
  if (domains.size(child) != 2) throw Error(ErrorKind::InvalidState, child + " is not binary");
  const std::size_t neg = domains.state_index(child, negative_state);
  std::vector<Factor> out;
  for (const auto& p : parents) {
    if (!(p.inhibition >= 0.0 && p.inhibition <= 1.0)) {
      throw Error(ErrorKind::InvalidProbability,
                  p.parent + " inhibition " + std::to_string(p.inhibition));
    }
    if (domains.size(p.parent) != 2) throw Error(ErrorKind::InvalidState, p.parent + " is not binary");
    const std::size_t active = domains.state_index(p.parent, p.active_state);
    Factor f{{p.parent, child}, std::vector<double>(4, 0.0)};
    for (std::size_t ps = 0; ps < 2; ++ps) {
      const double q = ps == active ? p.inhibition : 1.0;
      f.table[ps * 2 + neg] = q;
      f.table[ps * 2 + (1 - neg)] = 1.0 - q;
    }
    out.push_back(std::move(f));
  }
  return out;
}

/// The child state that a Noisy-OR assembly derives by complement.
inline ComplementRule noisy_or_complement(const VertexId& child, const std::string& negative_state,
                                          const Domains& domains) {
  const auto& s = domains.states(child);
  return {child, s[0] == negative_state ? s.at(1) : s.at(0)};
}

}  // namespace bhg
