#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bhg/dah.hpp"
#include "bhg/factor.hpp"
#include "bhg/markov.hpp"

namespace bhg {

inline constexpr double kDefaultTolerance = 1e-7;
inline constexpr std::size_t kMaxOracleVariables = 7;

namespace detail {

/// Marginal of `j` over `vars` (in the given order), row-major.
inline std::vector<double> marginal(const JointTable& j, const std::vector<VertexId>& vars,
                                    std::vector<std::size_t>& radices_out) {
  std::vector<std::size_t> pos;
  radices_out.clear();
  for (const auto& v : vars) {
    auto it = std::find(j.scope.begin(), j.scope.end(), v);
    if (it == j.scope.end()) throw Error(ErrorKind::UnknownVertex, v);
    pos.push_back(static_cast<std::size_t>(it - j.scope.begin()));
    radices_out.push_back(j.radices[pos.back()]);
  }
  std::vector<std::size_t> strides(vars.size(), 1);
  for (std::size_t i = vars.size(); i-- > 1;) strides[i - 1] = strides[i] * radices_out[i];
  std::size_t size = 1;
  for (auto r : radices_out) size *= r;
  std::vector<double> out(size, 0.0);
  ConfigCounter counter(j.radices);
  for (std::size_t flat = 0; flat < j.table.size(); ++flat, counter.next()) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < pos.size(); ++k) off += counter.state()[pos[k]] * strides[k];
    out[off] += j.table[flat];
  }
  return out;
}

}  // namespace detail

/// A ⟂ B | C in `j`, by exact marginalization. Conditioning configurations
/// with mass at most `tol` are skipped.
inline bool holds_ci(const JointTable& j, const VertexSet& a, const VertexSet& b,
                     const VertexSet& c, double tol = kDefaultTolerance) {
  require_disjoint_subsets(VertexSet(j.scope.begin(), j.scope.end()), {&a, &b, &c});
  if (a.empty() || b.empty()) return true;
  std::vector<VertexId> order = to_vector(c);
  const std::size_t nc = order.size();
  order.insert(order.end(), a.begin(), a.end());
  const std::size_t na = a.size();
  order.insert(order.end(), b.begin(), b.end());
  std::vector<std::size_t> radices;
  const std::vector<double> m = detail::marginal(j, order, radices);

  std::size_t size_c = 1, size_a = 1, size_b = 1;
  for (std::size_t i = 0; i < radices.size(); ++i) {
    (i < nc ? size_c : i < nc + na ? size_a : size_b) *= radices[i];
  }
  std::vector<double> pa(size_a), pb(size_b);
  for (std::size_t ic = 0; ic < size_c; ++ic) {
    const double* block = m.data() + ic * size_a * size_b;
    double pc = 0.0;
    std::fill(pa.begin(), pa.end(), 0.0);
    std::fill(pb.begin(), pb.end(), 0.0);
    for (std::size_t ia = 0; ia < size_a; ++ia) {
      for (std::size_t ib = 0; ib < size_b; ++ib) {
        const double p = block[ia * size_b + ib];
        pa[ia] += p;
        pb[ib] += p;
        pc += p;
      }
    }
    if (pc <= tol) continue;
    for (std::size_t ia = 0; ia < size_a; ++ia) {
      for (std::size_t ib = 0; ib < size_b; ++ib) {
        const double joint = block[ia * size_b + ib] / pc;
        if (std::abs(joint - (pa[ia] / pc) * (pb[ib] / pc)) > tol) return false;
      }
    }
  }
  return true;
}

/// Every canonical (A, B, C) over disjoint subsets of `vars` with A, B
/// nonempty, in a fixed order.
inline std::vector<CIStatement> all_disjoint_triples(const VertexSet& vars) {
  if (vars.size() > kMaxOracleVariables) {
    throw Error(ErrorKind::TooManyVariables,
                std::to_string(vars.size()) + " variables (limit " +
                    std::to_string(kMaxOracleVariables) + ")");
  }
  const std::vector<VertexId> v = to_vector(vars);
  std::size_t total = 1;
  for (std::size_t i = 0; i < v.size(); ++i) total *= 4;
  std::set<CIStatement> out;
  for (std::size_t code = 0; code < total; ++code) {
    CIStatement s;
    std::size_t x = code;
    for (const auto& name : v) {
      switch (x % 4) {
        case 1: s.a.insert(name); break;
        case 2: s.b.insert(name); break;
        case 3: s.c.insert(name); break;
        default: break;
      }
      x /= 4;
    }
    if (!s.a.empty() && !s.b.empty() && s.a < s.b) out.insert(std::move(s));
  }
  return {out.begin(), out.end()};
}

/// All canonical statements that hold in `j`.
inline std::vector<CIStatement> enumerate_ci(const JointTable& j,
                                             double tol = kDefaultTolerance) {
  std::vector<CIStatement> out;
  for (auto& s : all_disjoint_triples(VertexSet(j.scope.begin(), j.scope.end()))) {
    if (holds_ci(j, s.a, s.b, s.c, tol)) out.push_back(std::move(s));
  }
  return out;
}

/// An axiom instance whose premises are present and conclusion absent.
struct AxiomViolation {
  std::string axiom;
  std::vector<CIStatement> premises;
  CIStatement missing;

  friend auto operator<=>(const AxiomViolation&, const AxiomViolation&) = default;
  friend bool operator==(const AxiomViolation&, const AxiomViolation&) = default;
};

namespace detail {

/// Nonempty subsets of s; proper ones only unless `include_full`.
inline std::vector<VertexSet> nonempty_subsets(const VertexSet& s, bool include_full) {
  const std::vector<VertexId> v = to_vector(s);
  std::vector<VertexSet> out;
  if (v.size() >= 63) return out;
  const std::uint64_t end = (std::uint64_t{1} << v.size()) - (include_full ? 0 : 1);
  for (std::uint64_t mask = 1; mask < end; ++mask) {
    VertexSet sub;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (mask >> i & 1U) sub.insert(v[i]);
    }
    out.push_back(std::move(sub));
  }
  return out;
}

}  // namespace detail

/// Semi-graphoid check: decomposition (S2), weak union (S3) and contraction
/// (S4); symmetry (S1) holds by canonical form. With `strong`, also
/// intersection (S5) and composition (S6), which need not hold in general.
inline std::vector<AxiomViolation> check_semigraphoid(const std::vector<CIStatement>& statements,
                                                      bool strong = false) {
  std::set<CIStatement> have;
  for (const auto& s : statements) have.insert(s.canonical());
  auto present = [&](const VertexSet& a, const VertexSet& b, const VertexSet& c) {
    return have.count(CIStatement{a, b, c}.canonical()) != 0;
  };
  // Both orientations, keyed by (A, C) for the two-premise axioms.
  std::map<std::pair<VertexSet, VertexSet>, std::vector<VertexSet>> by_ac;
  std::vector<CIStatement> oriented;
  for (const auto& s : have) {
    oriented.push_back(s);
    oriented.push_back({s.b, s.a, s.c});
  }
  for (const auto& s : oriented) by_ac[{s.a, s.c}].push_back(s.b);

  std::set<AxiomViolation> out;
  auto report = [&](const char* axiom, std::vector<CIStatement> premises, CIStatement missing) {
    for (auto& p : premises) p = p.canonical();
    out.insert({axiom, std::move(premises), missing.canonical()});
  };

  for (const auto& s : oriented) {
    for (const auto& part : detail::nonempty_subsets(s.b, false)) {
      if (!present(s.a, part, s.c)) report("S2", {s}, {s.a, part, s.c});
      const VertexSet moved = set_union(s.c, set_difference(s.b, part));
      if (!present(s.a, part, moved)) report("S3", {s}, {s.a, part, moved});
    }
    // Contraction: A⟂B|C and A⟂D|B∪C give A⟂B∪D|C.
    auto it = by_ac.find({s.a, set_union(s.b, s.c)});
    if (it != by_ac.end()) {
      for (const auto& d : it->second) {
        if (!present(s.a, set_union(s.b, d), s.c)) {
          report("S4", {s, {s.a, d, set_union(s.b, s.c)}}, {s.a, set_union(s.b, d), s.c});
        }
      }
    }
    if (!strong) continue;
    // Intersection: A⟂B|C∪D and A⟂D|C∪B give A⟂B∪D|C.
    for (const auto& d : detail::nonempty_subsets(s.c, true)) {
      const VertexSet c = set_difference(s.c, d);
      if (present(s.a, d, set_union(c, s.b)) && !present(s.a, set_union(s.b, d), c)) {
        report("S5", {s, {s.a, d, set_union(c, s.b)}}, {s.a, set_union(s.b, d), c});
      }
    }
    // Composition: A⟂B|C and A⟂D|C give A⟂B∪D|C.
    for (const auto& d : by_ac[{s.a, s.c}]) {
      if (intersects(d, s.b)) continue;
      if (!present(s.a, set_union(s.b, d), s.c)) {
        report("S6", {s, {s.a, d, s.c}}, {s.a, set_union(s.b, d), s.c});
      }
    }
  }
  return {out.begin(), out.end()};
}

/// Outcome of checking the separation statements of a hypergraph against a
/// joint distribution.
struct MarkovReport {
  std::size_t queries = 0;       // disjoint triples examined
  std::size_t separated = 0;     // triples the global criterion certifies
  std::size_t local_checked = 0;
  std::size_t pairwise_checked = 0;
  std::vector<CIStatement> counterexamples;  // certified but false in the joint

  bool ok() const { return counterexamples.empty(); }
};

/// Checks every statement certified by hg_separates, plus the local and
/// pairwise statements, against `j`.
inline MarkovReport verify_global_markov(const Dah& h, const JointTable& j,
                                         double tol = kDefaultTolerance) {
  if (VertexSet(j.scope.begin(), j.scope.end()) != h.vertices()) {
    throw Error(ErrorKind::VertexSetMismatch,
                format_set(h.vertices()) + " vs joint over " +
                    format_set(VertexSet(j.scope.begin(), j.scope.end())));
  }
  MarkovReport r;
  std::set<CIStatement> bad;
  for (const auto& s : all_disjoint_triples(h.vertices())) {
    ++r.queries;
    if (!hg_separates(h, s.a, s.b, s.c)) continue;
    ++r.separated;
    if (!holds_ci(j, s.a, s.b, s.c, tol)) bad.insert(s);
  }
  for (const auto& s : local_statements(h)) {
    ++r.local_checked;
    if (!holds_ci(j, s.a, s.b, s.c, tol)) bad.insert(s.canonical());
  }
  for (const auto& s : pairwise_statements(h)) {
    ++r.pairwise_checked;
    if (!holds_ci(j, s.a, s.b, s.c, tol)) bad.insert(s.canonical());
  }
  r.counterexamples.assign(bad.begin(), bad.end());
  return r;
}

}  // namespace bhg
