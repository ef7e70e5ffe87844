#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bhg/types.hpp"

namespace bhg {

/// Finite state space of one variable; states keep their declared order.
struct DiscreteDomain {
  VertexId variable;
  std::vector<std::string> states;
};

/// Domains of all variables of a model.
class Domains {
 public:
  Domains() = default;

  void add(const DiscreteDomain& d) {
    if (d.states.empty()) throw Error(ErrorKind::InvalidState, d.variable + " has no states");
    std::set<std::string> unique(d.states.begin(), d.states.end());
    if (unique.size() != d.states.size()) {
      throw Error(ErrorKind::InvalidState, d.variable + " repeats a state label");
    }
    if (!states_.emplace(d.variable, d.states).second) {
      throw Error(ErrorKind::DuplicateVertex, d.variable);
    }
  }

  /// Convenience: the same state list for every variable.
  static Domains uniform(const VertexSet& vars, const std::vector<std::string>& states) {
    Domains out;
    for (const auto& v : vars) out.add({v, states});
    return out;
  }

  bool has(const VertexId& v) const { return states_.count(v) != 0; }

  const std::vector<std::string>& states(const VertexId& v) const {
    auto it = states_.find(v);
    if (it == states_.end()) throw Error(ErrorKind::UnknownVertex, "no domain for " + v);
    return it->second;
  }

  std::size_t size(const VertexId& v) const { return states(v).size(); }

  std::size_t state_index(const VertexId& v, const std::string& label) const {
    const auto& s = states(v);
    auto it = std::find(s.begin(), s.end(), label);
    if (it == s.end()) throw Error(ErrorKind::InvalidState, v + "=" + label);
    return static_cast<std::size_t>(it - s.begin());
  }

  /// Number of joint configurations of `scope`.
  template <class Range>
  std::size_t configurations(const Range& scope) const {
    std::size_t n = 1;
    for (const auto& v : scope) n *= size(v);
    return n;
  }

  VertexSet variables() const {
    VertexSet out;
    for (const auto& [v, _] : states_) out.insert(v);
    return out;
  }

  const std::map<VertexId, std::vector<std::string>>& all() const { return states_; }

  friend bool operator==(const Domains&, const Domains&) = default;

 private:
  std::map<VertexId, std::vector<std::string>> states_;
};

/// Non-negative table over an ordered scope, row-major with the last scope
/// variable varying fastest.
struct Factor {
  std::vector<VertexId> scope;
  std::vector<double> table;

  VertexSet scope_set() const { return {scope.begin(), scope.end()}; }

  void validate(const Domains& domains) const {
    VertexSet seen;
    for (const auto& v : scope) {
      if (!seen.insert(v).second) throw Error(ErrorKind::ScopeMismatch, "repeated " + v);
    }
    const std::size_t expected = domains.configurations(scope);
    if (table.size() != expected) {
      throw Error(ErrorKind::InvalidTable, "factor over " + format_set(seen) + " has " +
                                               std::to_string(table.size()) + " entries, expected " +
                                               std::to_string(expected));
    }
    for (double x : table) {
      if (!std::isfinite(x) || x < 0.0) {
        throw Error(ErrorKind::InvalidTable,
                    "factor over " + format_set(seen) + " has entry " + std::to_string(x));
      }
    }
  }

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// One factor per required scope, keyed by the scope as a set.
using FactorAssignment = std::map<VertexSet, Factor>;

/// Distribution over all variables; scope sorted by label, table row-major
/// with the last variable fastest.
struct JointTable {
  std::vector<VertexId> scope;
  std::vector<std::size_t> radices;
  std::vector<double> table;

  double total() const {
    double s = 0.0;
    for (double x : table) s += x;
    return s;
  }
};

/// Row-major strides of `scope` (last variable fastest).
inline std::vector<std::size_t> strides_of(const std::vector<VertexId>& scope,
                                           const Domains& domains) {
  std::vector<std::size_t> out(scope.size(), 1);
  for (std::size_t i = scope.size(); i-- > 1;) out[i - 1] = out[i] * domains.size(scope[i]);
  return out;
}

/// Mixed-radix counter over a scope.
class ConfigCounter {
 public:
  explicit ConfigCounter(std::vector<std::size_t> radices)
      : radices_(std::move(radices)), state_(radices_.size(), 0) {}

  const std::vector<std::size_t>& state() const { return state_; }

  /// Advances; false after the last configuration.
  bool next() {
    for (std::size_t i = state_.size(); i-- > 0;) {
      if (++state_[i] < radices_[i]) return true;
      state_[i] = 0;
    }
    return false;
  }

 private:
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> state_;
};

/// Decodes a flat row-major index into per-variable state indices.
inline std::vector<std::size_t> decode_index(std::size_t index,
                                             const std::vector<VertexId>& scope,
                                             const Domains& domains) {
  std::vector<std::size_t> out(scope.size(), 0);
  for (std::size_t i = scope.size(); i-- > 0;) {
    const std::size_t k = domains.size(scope[i]);
    out[i] = index % k;
    index /= k;
  }
  return out;
}

/// Re-expresses `f` over `target` (a superset of its scope, any order),
/// constant along the added variables.
inline Factor embed_factor(const Factor& f, const std::vector<VertexId>& target,
                           const Domains& domains) {
  std::vector<std::size_t> src_pos;
  for (const auto& v : f.scope) {
    auto it = std::find(target.begin(), target.end(), v);
    if (it == target.end()) throw Error(ErrorKind::ScopeMismatch, v + " not in target scope");
    src_pos.push_back(static_cast<std::size_t>(it - target.begin()));
  }
  const auto src_strides = strides_of(f.scope, domains);
  Factor out{target, std::vector<double>(domains.configurations(target), 0.0)};
  std::vector<std::size_t> radices;
  for (const auto& v : target) radices.push_back(domains.size(v));
  ConfigCounter counter(radices);
  std::size_t flat = 0;
  do {
    std::size_t src = 0;
    for (std::size_t k = 0; k < src_pos.size(); ++k) src += counter.state()[src_pos[k]] * src_strides[k];
    out.table[flat++] = f.table[src];
  } while (counter.next());
  return out;
}

/// Entrywise product of two factors over the union of their scopes, ordered
/// as `a.scope` followed by the new variables of `b`.
inline Factor multiply(const Factor& a, const Factor& b, const Domains& domains) {
  std::vector<VertexId> scope = a.scope;
  for (const auto& v : b.scope) {
    if (std::find(scope.begin(), scope.end(), v) == scope.end()) scope.push_back(v);
  }
  Factor x = embed_factor(a, scope, domains);
  const Factor y = embed_factor(b, scope, domains);
  for (std::size_t i = 0; i < x.table.size(); ++i) x.table[i] *= y.table[i];
  return x;
}

/// Fixes some variables of `f` at given state indices and drops them from the
/// scope.
inline Factor slice_factor(const Factor& f, const std::map<VertexId, std::size_t>& fixed,
                           const Domains& domains) {
  std::vector<VertexId> kept;
  for (const auto& v : f.scope) {
    if (!fixed.count(v)) kept.push_back(v);
  }
  const auto strides = strides_of(f.scope, domains);
  Factor out{kept, std::vector<double>(domains.configurations(kept), 0.0)};
  std::vector<std::size_t> radices;
  for (const auto& v : kept) radices.push_back(domains.size(v));
  ConfigCounter counter(radices);
  std::size_t flat = 0;
  do {
    std::size_t src = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
      auto it = fixed.find(f.scope[i]);
      const std::size_t s = it != fixed.end() ? it->second : counter.state()[k++];
      src += s * strides[i];
    }
    out.table[flat++] = f.table[src];
  } while (counter.next());
  return out;
}

/// Indicator of a single state: 1 at `state`, 0 elsewhere.
inline Factor indicator_factor(const VertexId& v, std::size_t state, const Domains& domains) {
  Factor f{{v}, std::vector<double>(domains.size(v), 0.0)};
  f.table.at(state) = 1.0;
  return f;
}

}  // namespace bhg
