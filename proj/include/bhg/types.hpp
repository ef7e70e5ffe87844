#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bhg {

/// Vertex labels are compared as exact byte strings.
using VertexId = std::string;
using VertexSet = std::set<VertexId>;

enum class ErrorKind {
  DuplicateVertex,
  TailHeadOverlap,
  EmptyHyperedge,
  DuplicateEdge,
  UnknownVertexInEdge,
  UnknownVertex,
  CycleDetected,
  SelfLoop,
  ConflictingEdge,
  OverlappingSets,
  ComplexSearchTooLarge,
  NotAComponent,
  VertexSetMismatch,
  ZeroNormalizer,
  ScopeMismatch,
  InvalidProbability,
  InvalidState,
  InvalidTable,
  TooManyVariables,
  ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateVertex: return "DuplicateVertex";
    case ErrorKind::TailHeadOverlap: return "TailHeadOverlap";
    case ErrorKind::EmptyHyperedge: return "EmptyHyperedge";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::UnknownVertexInEdge: return "UnknownVertexInEdge";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::ConflictingEdge: return "ConflictingEdge";
    case ErrorKind::OverlappingSets: return "OverlappingSets";
    case ErrorKind::ComplexSearchTooLarge: return "ComplexSearchTooLarge";
    case ErrorKind::NotAComponent: return "NotAComponent";
    case ErrorKind::VertexSetMismatch: return "VertexSetMismatch";
    case ErrorKind::ZeroNormalizer: return "ZeroNormalizer";
    case ErrorKind::ScopeMismatch: return "ScopeMismatch";
    case ErrorKind::InvalidProbability: return "InvalidProbability";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidTable: return "InvalidTable";
    case ErrorKind::TooManyVariables: return "TooManyVariables";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Source position attached to errors raised while reading text documents.
struct Location {
  std::size_t line = 0;
  std::size_t column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<Location> where = std::nullopt)
      : std::runtime_error(format(kind, message, where)),
        kind_(kind),
        detail_(message),
        where_(where) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::optional<Location>& location() const noexcept { return where_; }

 private:
  static std::string format(ErrorKind kind, const std::string& message,
                            const std::optional<Location>& where) {
    std::string out;
    if (where) {
      out += std::to_string(where->line) + ":" + std::to_string(where->column) + ": ";
    }
    out += std::string(to_string(kind));
    if (!message.empty()) out += ": " + message;
    return out;
  }

  ErrorKind kind_;
  std::string detail_;
  std::optional<Location> where_;
};

// ---------------------------------------------------------------------------
// Small set algebra over VertexSet. Everything is ordered, so the results are
// deterministic and cheap to compare.

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

inline bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool intersects(const VertexSet& a, const VertexSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

inline std::vector<VertexId> to_vector(const VertexSet& s) {
  return {s.begin(), s.end()};
}

/// "{a,b,c}" rendering used in diagnostics and statement listings.
inline std::string format_set(const VertexSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : s) {
    if (!first) out += ",";
    out += v;
    first = false;
  }
  out += "}";
  return out;
}

/// Unordered vertex pair, stored with first <= second.
using VertexPair = std::pair<VertexId, VertexId>;

inline VertexPair make_unordered(VertexId a, VertexId b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

/// Checks that every set is inside `universe` and that the sets are pairwise
/// disjoint. Shared by all separation and CI queries.
inline void require_disjoint_subsets(const VertexSet& universe,
                                     std::initializer_list<const VertexSet*> sets) {
  std::vector<const VertexSet*> seen;
  for (const VertexSet* s : sets) {
    for (const auto& v : *s) {
      if (!universe.count(v)) throw Error(ErrorKind::UnknownVertex, v);
    }
    for (const VertexSet* other : seen) {
      if (intersects(*s, *other)) {
        throw Error(ErrorKind::OverlappingSets,
                    format_set(set_intersection(*s, *other)));
      }
    }
    seen.push_back(s);
  }
}

}  // namespace bhg
