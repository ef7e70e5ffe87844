#pragma once

#include <cctype>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bhg/chain_graph.hpp"
#include "bhg/dah.hpp"
#include "bhg/factor.hpp"
#include "bhg/intervention.hpp"
#include "bhg/markov.hpp"
#include "bhg/oracle.hpp"

namespace bhg {

// ---------------------------------------------------------------------------
// Line grammar shared by hypergraph and chain-graph files:
//
//   # comment
//   vertices: a b c
//   edge: a b -> c d        (hypergraph; either side may be empty)
//   arc: a -> b             (chain graph)
//   line: a - b             (chain graph)
//
// Labels are runs of printable non-space characters other than : # - >.

namespace detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;
  std::string keyword;
  std::size_t keyword_column;
  std::vector<Token> tokens;
};

inline bool label_char(char ch) {
  const auto u = static_cast<unsigned char>(ch);
  return !std::isspace(u) && u >= 0x20 && ch != ':' && ch != '#' && ch != '-' && ch != '>' &&
         u != 0x7f;
}

inline Error parse_error(const std::string& msg, std::size_t line, std::size_t col) {
  return Error(ErrorKind::ParseError, msg, Location{line, col});
}

/// Splits a document into keyword lines; blank and comment-only lines vanish.
inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    ++number;
    start = end + 1;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    std::size_t i = 0;
    auto skip_space = [&] {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
    };
    skip_space();
    if (i == raw.size()) {
      if (end == text.size()) break;
      continue;
    }
    Line line{number, {}, i + 1, {}};
    while (i < raw.size() && label_char(raw[i])) line.keyword += raw[i++];
    skip_space();
    if (line.keyword.empty() || i == raw.size() || raw[i] != ':') {
      throw parse_error("expected 'keyword:'", number, line.keyword.empty() ? line.keyword_column : i + 1);
    }
    ++i;
    while (true) {
      skip_space();
      if (i == raw.size()) break;
      const std::size_t col = i + 1;
      if (raw[i] == '-' && i + 1 < raw.size() && raw[i + 1] == '>') {
        line.tokens.push_back({"->", col});
        i += 2;
      } else if (raw[i] == '-') {
        line.tokens.push_back({"-", col});
        ++i;
      } else if (label_char(raw[i])) {
        std::string label;
        while (i < raw.size() && label_char(raw[i])) label += raw[i++];
        line.tokens.push_back({std::move(label), col});
      } else {
        throw parse_error(std::string("unexpected character '") + raw[i] + "'", number, col);
      }
    }
    out.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return out;
}

inline bool is_label(const Token& t) { return t.text != "->" && t.text != "-"; }

inline VertexSet read_labels(const Line& line, std::size_t from, std::size_t to) {
  VertexSet out;
  for (std::size_t k = from; k < to; ++k) {
    const Token& t = line.tokens[k];
    if (!is_label(t)) throw parse_error("unexpected '" + t.text + "'", line.number, t.column);
    if (!out.insert(t.text).second) {
      throw parse_error("label '" + t.text + "' repeated", line.number, t.column);
    }
  }
  return out;
}

inline Error relocate(const Error& e, const Line& line) {
  return Error(e.kind(), e.detail(), Location{line.number, line.keyword_column});
}

}  // namespace detail

/// Reads a hypergraph. Every vertex must be declared on a `vertices:` line.
inline Dah parse_dah(std::string_view text) {
  const auto lines = detail::tokenize(text);
  VertexSet vertices;
  std::vector<const detail::Line*> edge_lines;
  for (const auto& line : lines) {
    if (line.keyword == "vertices") {
      for (const auto& t : line.tokens) {
        if (!detail::is_label(t)) {
          throw detail::parse_error("unexpected '" + t.text + "'", line.number, t.column);
        }
        if (!vertices.insert(t.text).second) {
          throw Error(ErrorKind::DuplicateVertex, t.text, Location{line.number, t.column});
        }
      }
    } else if (line.keyword == "edge") {
      edge_lines.push_back(&line);
    } else {
      throw detail::parse_error("unknown keyword '" + line.keyword + "'", line.number,
                                line.keyword_column);
    }
  }

  std::vector<Hyperedge> edges;
  std::set<Hyperedge> seen;
  for (const auto* line : edge_lines) {
    std::size_t arrow = line->tokens.size();
    for (std::size_t k = 0; k < line->tokens.size(); ++k) {
      if (line->tokens[k].text == "->") {
        if (arrow != line->tokens.size()) {
          throw detail::parse_error("second '->'", line->number, line->tokens[k].column);
        }
        arrow = k;
      }
    }
    if (arrow == line->tokens.size()) {
      throw detail::parse_error("edge needs '->'", line->number, line->keyword_column);
    }
    Hyperedge e{detail::read_labels(*line, 0, arrow),
                detail::read_labels(*line, arrow + 1, line->tokens.size())};
    try {
      build_dah(vertices, {e}, false);
    } catch (const Error& err) {
      throw detail::relocate(err, *line);
    }
    if (!seen.insert(e).second) {
      throw Error(ErrorKind::DuplicateEdge, format_edge(e),
                  Location{line->number, line->keyword_column});
    }
    edges.push_back(std::move(e));
  }
  return build_dah(std::move(vertices), std::move(edges), true);
}

/// Reads a chain graph. Edge endpoints are declared implicitly.
inline ChainGraph parse_chain_graph(std::string_view text) {
  VertexSet vertices;
  std::set<Arc> arcs;
  std::set<VertexPair> lines;
  for (const auto& line : detail::tokenize(text)) {
    if (line.keyword == "vertices") {
      for (const auto& t : line.tokens) {
        if (!detail::is_label(t)) {
          throw detail::parse_error("unexpected '" + t.text + "'", line.number, t.column);
        }
        vertices.insert(t.text);
      }
      continue;
    }
    const bool arc = line.keyword == "arc";
    if (!arc && line.keyword != "line") {
      throw detail::parse_error("unknown keyword '" + line.keyword + "'", line.number,
                                line.keyword_column);
    }
    const char* op = arc ? "->" : "-";
    const auto& t = line.tokens;
    if (t.size() != 3 || !detail::is_label(t[0]) || t[1].text != op || !detail::is_label(t[2])) {
      const std::size_t col = t.empty() ? line.keyword_column : t.back().column;
      throw detail::parse_error(std::string("expected '") + line.keyword + ": u " + op + " v'",
                                line.number, col);
    }
    if (t[0].text == t[2].text) {
      throw Error(ErrorKind::SelfLoop, t[0].text, Location{line.number, t[0].column});
    }
    vertices.insert(t[0].text);
    vertices.insert(t[2].text);
    if (arc) {
      arcs.insert({t[0].text, t[2].text});
    } else {
      lines.insert(make_unordered(t[0].text, t[2].text));
    }
  }
  return build_chain_graph(std::move(vertices), std::move(arcs), std::move(lines));
}

namespace detail {

inline std::string join(const VertexSet& s) {
  std::string out;
  for (const auto& v : s) {
    if (!out.empty()) out += ' ';
    out += v;
  }
  return out;
}

inline std::string vertices_line(const VertexSet& v) {
  return v.empty() ? "vertices:\n" : "vertices: " + join(v) + "\n";
}

}  // namespace detail

/// Canonical text: sorted vertices, edges head-then-tail.
inline std::string print_dah(const Dah& h) {
  std::string out = detail::vertices_line(h.vertices());
  std::vector<Hyperedge> edges = h.edges();
  std::sort(edges.begin(), edges.end(), head_then_tail_less);
  for (const auto& e : edges) {
    out += "edge:";
    if (!e.tail.empty()) out += " " + detail::join(e.tail);
    out += " ->";
    if (!e.head.empty()) out += " " + detail::join(e.head);
    out += "\n";
  }
  return out;
}

/// Canonical text: sorted vertices, then sorted arcs and lines.
inline std::string print_chain_graph(const ChainGraph& g) {
  std::string out = detail::vertices_line(g.vertices());
  for (const auto& [u, v] : g.directed()) out += "arc: " + u + " -> " + v + "\n";
  for (const auto& [u, v] : g.undirected()) out += "line: " + u + " - " + v + "\n";
  return out;
}

/// A structure file of either kind.
using Structure = std::variant<Dah, ChainGraph>;

enum class StructureKind { Dah, ChainGraph };

/// `.dah` / `.cg` by extension; otherwise by keywords (arc/line mean chain
/// graph).
inline StructureKind guess_kind(std::string_view path, std::string_view text) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  if (ends_with(".dah")) return StructureKind::Dah;
  if (ends_with(".cg")) return StructureKind::ChainGraph;
  for (const auto& line : detail::tokenize(text)) {
    if (line.keyword == "arc" || line.keyword == "line") return StructureKind::ChainGraph;
  }
  return StructureKind::Dah;
}

inline Structure parse_structure(std::string_view path, std::string_view text) {
  if (guess_kind(path, text) == StructureKind::ChainGraph) return parse_chain_graph(text);
  return parse_dah(text);
}

inline std::string print_structure(const Structure& s) {
  if (const auto* h = std::get_if<Dah>(&s)) return print_dah(*h);
  return print_chain_graph(std::get<ChainGraph>(s));
}

// ---------------------------------------------------------------------------
// JSON documents for domains and factors:
//   {"domains": {"a": ["0","1"]}, "factors": [{"scope": ["a","c"], "table": [..]}]}

struct FactorDocument {
  Domains domains;
  std::vector<Factor> factors;
};

namespace detail {

inline Location offset_to_location(std::string_view text, std::size_t offset) {
  Location loc{1, 1};
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  }
  return loc;
}

}  // namespace detail

inline FactorDocument parse_factor_document(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw Error(ErrorKind::ParseError, "malformed JSON", detail::offset_to_location(text, at));
  }
  FactorDocument out;
  try {
    if (!doc.is_object()) throw Error(ErrorKind::ParseError, "top level must be an object");
    for (const auto& [key, _] : doc.items()) {
      if (key != "domains" && key != "factors") {
        throw Error(ErrorKind::ParseError, "unknown field '" + key + "'");
      }
    }
    if (doc.contains("domains")) {
      const auto& d = doc.at("domains");
      if (!d.is_object()) throw Error(ErrorKind::ParseError, "'domains' must be an object");
      for (const auto& [var, states] : d.items()) {
        out.domains.add({var, states.get<std::vector<std::string>>()});
      }
    }
    if (doc.contains("factors")) {
      const auto& fs = doc.at("factors");
      if (!fs.is_array()) throw Error(ErrorKind::ParseError, "'factors' must be an array");
      for (const auto& f : fs) {
        out.factors.push_back(
            {f.at("scope").get<std::vector<VertexId>>(), f.at("table").get<std::vector<double>>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return out;
}

/// Factors keyed by scope set; repeated scopes are rejected.
inline FactorAssignment to_assignment(const std::vector<Factor>& factors) {
  FactorAssignment out;
  for (const auto& f : factors) {
    if (!out.emplace(f.scope_set(), f).second) {
      throw Error(ErrorKind::ScopeMismatch, "two factors over " + format_set(f.scope_set()));
    }
  }
  return out;
}

inline std::string print_factor_document(const FactorDocument& d) {
  nlohmann::ordered_json doc;
  doc["domains"] = nlohmann::ordered_json::object();
  for (const auto& [v, states] : d.domains.all()) doc["domains"][v] = states;
  doc["factors"] = nlohmann::ordered_json::array();
  for (const auto& f : d.factors) {
    doc["factors"].push_back({{"scope", f.scope}, {"table", f.table}});
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Joint tables and reports.

inline std::string format_probability(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12f", p);
  return buf;
}

/// One line per configuration: "a=0 b=1 0.250000000000".
inline std::string print_joint(const JointTable& j, const Domains& domains) {
  std::string out;
  ConfigCounter counter(j.radices);
  for (std::size_t flat = 0; flat < j.table.size(); ++flat, counter.next()) {
    for (std::size_t i = 0; i < j.scope.size(); ++i) {
      out += j.scope[i] + "=" + domains.states(j.scope[i])[counter.state()[i]] + " ";
    }
    out += format_probability(j.table[flat]) + "\n";
  }
  return out;
}

inline std::string print_joint_json(const JointTable& j, const Domains& domains) {
  nlohmann::ordered_json doc;
  doc["scope"] = j.scope;
  doc["states"] = nlohmann::ordered_json::object();
  for (const auto& v : j.scope) doc["states"][v] = domains.states(v);
  doc["table"] = j.table;
  return doc.dump(2) + "\n";
}

inline nlohmann::ordered_json statement_json(const CIStatement& s) {
  return {{"a", to_vector(s.a)}, {"b", to_vector(s.b)}, {"c", to_vector(s.c)}};
}

inline std::string print_report(const MarkovReport& r) {
  std::ostringstream out;
  out << "queries: " << r.queries << "\n"
      << "separated: " << r.separated << "\n"
      << "local: " << r.local_checked << "\n"
      << "pairwise: " << r.pairwise_checked << "\n"
      << "counterexamples: " << r.counterexamples.size() << "\n";
  for (const auto& s : r.counterexamples) out << "  " << format_statement(s) << "\n";
  return out.str();
}

inline std::string print_report_json(const MarkovReport& r) {
  nlohmann::ordered_json doc;
  doc["queries"] = r.queries;
  doc["separated"] = r.separated;
  doc["local"] = r.local_checked;
  doc["pairwise"] = r.pairwise_checked;
  doc["counterexamples"] = nlohmann::ordered_json::array();
  for (const auto& s : r.counterexamples) doc["counterexamples"].push_back(statement_json(s));
  return doc.dump(2) + "\n";
}

/// "var=state".
inline std::pair<VertexId, std::string> parse_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
    throw Error(ErrorKind::ParseError, "expected var=state, got '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

/// Whitespace- or comma-separated labels.
inline VertexSet parse_label_list(std::string_view text) {
  VertexSet out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.insert(cur);
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else if (!detail::label_char(ch)) {
      throw Error(ErrorKind::ParseError, std::string("bad label character '") + ch + "'");
    } else {
      cur += ch;
    }
  }
  flush();
  return out;
}

}  // namespace bhg
