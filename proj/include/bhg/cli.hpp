#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bhg/factorization.hpp"
#include "bhg/intervention.hpp"
#include "bhg/io.hpp"
#include "bhg/markov.hpp"
#include "bhg/oracle.hpp"
#include "bhg/projection.hpp"

namespace bhg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace cli {

/// Raised for bad invocations: unreadable files, missing options.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Structure load_structure(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_structure(path, text);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.detail(), e.location());
  }
}

inline Dah as_dah(const Structure& s) {
  if (const auto* h = std::get_if<Dah>(&s)) return *h;
  return std::get<ChainGraph>(s).as_dah();
}

inline ChainGraph as_chain_graph(const Structure& s) {
  if (const auto* g = std::get_if<ChainGraph>(&s)) return *g;
  return shadow(std::get<Dah>(s));
}

inline ComponentPartition components_of(const Structure& s) {
  if (const auto* h = std::get_if<Dah>(&s)) return chain_components(*h);
  return cg_chain_components(std::get<ChainGraph>(s));
}

/// Domains and factors from up to two JSON files; a separate domains file
/// takes precedence over domains embedded in the factors file.
inline FactorDocument load_factors(const std::string& domains_path,
                                   const std::string& factors_path) {
  if (factors_path.empty()) throw UsageError("--factors is required");
  FactorDocument doc = parse_factor_document(read_file(factors_path));
  if (!domains_path.empty()) doc.domains = parse_factor_document(read_file(domains_path)).domains;
  return doc;
}

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

inline std::string scopes_text(const std::vector<ComponentScopes>& comps) {
  std::string out;
  for (const auto& c : comps) {
    out += "component " + format_set(c.tau) + " parents " + format_set(c.parents) + ":";
    for (const auto& s : c.scopes) out += " " + format_set(s);
    out += "\n";
  }
  return out;
}

}  // namespace cli

/// Runs the command line tool on `args` (without the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian hypergraph toolkit", "bhg"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  std::function<void()> action;
  auto on = [&](CLI::App* sub, std::function<void()> fn) {
    sub->callback([&action, fn = std::move(fn)] { action = fn; });
  };

  std::string file, file2, a_text, b_text, c_text, kind = "pairwise", domains_path, factors_path,
                                                  targets_text, derive_text;
  std::vector<std::string> dos;
  bool graph_only = false, json = false;

  auto* validate = app.add_subcommand("validate", "check a structure file");
  validate->add_option("file", file)->required();
  on(validate, [&] {
    const Structure s = cli::load_structure(file);
    if (const auto* h = std::get_if<Dah>(&s)) {
      out << "valid dah: " << h->vertices().size() << " vertices, " << h->edges().size()
          << " edges\n";
    } else {
      const auto& g = std::get<ChainGraph>(s);
      out << "valid chain_graph: " << g.vertices().size() << " vertices, "
          << g.directed().size() << " arcs, " << g.undirected().size() << " lines\n";
    }
  });

  auto* components = app.add_subcommand("components", "list chain components");
  components->add_option("file", file)->required();
  on(components, [&] {
    for (const auto& c : cli::components_of(cli::load_structure(file)).components) {
      out << format_set(c) << "\n";
    }
  });

  auto* shadow_cmd = app.add_subcommand("shadow", "chain-graph projection of a hypergraph");
  shadow_cmd->add_option("file", file)->required();
  on(shadow_cmd, [&] { out << print_chain_graph(shadow(parse_dah(cli::read_file(file)))); });

  auto* hyper = app.add_subcommand("hypermoralize", "canonical hypergraph of a chain graph");
  hyper->add_option("file", file)->required();
  on(hyper, [&] { out << print_dah(hypermoralize(parse_chain_graph(cli::read_file(file)))); });

  auto* cdag = app.add_subcommand("canonical-dag", "DAG of chain components");
  cdag->add_option("file", file)->required();
  on(cdag, [&] {
    const Dah h = cli::as_dah(cli::load_structure(file));
    const CanonicalDag d = canonical_dag(h);
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
      out << "node " << i << ": " << format_set(d.nodes[i]) << "\n";
    }
    for (const auto& [x, y] : d.arcs) out << "arc: " << x << " -> " << y << "\n";
  });

  auto* separate = app.add_subcommand("separate", "global Markov separation query");
  separate->add_option("file", file)->required();
  separate->add_option("--a", a_text, "labels, comma or space separated")->required();
  separate->add_option("--b", b_text)->required();
  separate->add_option("--c", c_text);
  on(separate, [&] {
    const Structure s = cli::load_structure(file);
    const VertexSet a = parse_label_list(a_text), b = parse_label_list(b_text),
                    c = parse_label_list(c_text);
    const bool sep = std::holds_alternative<Dah>(s)
                         ? hg_separates(std::get<Dah>(s), a, b, c)
                         : cg_global_separates(std::get<ChainGraph>(s), a, b, c);
    out << "separated: " << cli::bool_text(sep) << "\n";
  });

  auto* statements = app.add_subcommand("statements", "pairwise or local Markov statements");
  statements->add_option("file", file)->required();
  statements->add_option("--kind", kind)->check(CLI::IsMember({"pairwise", "local"}));
  on(statements, [&] {
    const Dah h = cli::as_dah(cli::load_structure(file));
    for (const auto& s : kind == "local" ? local_statements(h) : pairwise_statements(h)) {
      out << format_statement(s) << "\n";
    }
  });

  auto* scopes = app.add_subcommand("scopes", "factor scopes per chain component");
  scopes->add_option("file", file)->required();
  on(scopes, [&] {
    const Structure s = cli::load_structure(file);
    out << cli::scopes_text(std::holds_alternative<Dah>(s)
                                ? factor_scopes(std::get<Dah>(s))
                                : cg_factor_scopes(std::get<ChainGraph>(s)));
  });

  auto* factorize = app.add_subcommand("factorize", "assemble the joint of a factor system");
  factorize->add_option("file", file)->required();
  factorize->add_option("--domains", domains_path);
  factorize->add_option("--factors", factors_path)->required();
  factorize->add_option("--derive", derive_text,
                        "var=state: that state takes the complement of the others");
  factorize->add_flag("--json", json);
  on(factorize, [&] {
    const Structure s = cli::load_structure(file);
    const FactorDocument doc = cli::load_factors(domains_path, factors_path);
    const FactorAssignment fa = to_assignment(doc.factors);
    JointTable j;
    if (const auto* h = std::get_if<Dah>(&s)) {
      std::optional<ComplementRule> rule;
      if (!derive_text.empty()) {
        auto [v, state] = parse_assignment(derive_text);
        rule = ComplementRule{v, state};
      }
      j = assemble_joint(*h, doc.domains, fa, rule);
    } else {
      if (!derive_text.empty()) throw cli::UsageError("--derive needs a hypergraph");
      j = cg_assemble_joint(std::get<ChainGraph>(s), doc.domains, fa);
    }
    out << (json ? print_joint_json(j, doc.domains) : print_joint(j, doc.domains));
  });

  auto* intervene = app.add_subcommand("intervene", "force variables and redirect");
  intervene->add_option("file", file)->required();
  intervene->add_option("--do", dos, "var=state")->required();
  intervene->add_flag("--graph-only", graph_only);
  intervene->add_option("--domains", domains_path);
  intervene->add_option("--factors", factors_path);
  intervene->add_flag("--json", json);
  on(intervene, [&] {
    const Structure s = cli::load_structure(file);
    std::map<VertexId, std::string> values;
    for (const auto& d : dos) {
      auto [v, state] = parse_assignment(d);
      if (!values.emplace(v, state).second) throw cli::UsageError(v + " forced twice");
    }
    const InterventionSpec spec = InterventionSpec::from_values(values);
    if (graph_only) {
      if (const auto* h = std::get_if<Dah>(&s)) {
        out << print_dah(dah_redirect(*h, spec.targets));
      } else {
        out << print_chain_graph(cg_redirect(std::get<ChainGraph>(s), spec.targets));
      }
      return;
    }
    const FactorDocument doc = cli::load_factors(domains_path, factors_path);
    const FactorAssignment fa = to_assignment(doc.factors);
    const JointTable j = std::holds_alternative<Dah>(s)
                             ? intervened_joint(std::get<Dah>(s), doc.domains, fa, spec)
                             : cg_intervened_joint(std::get<ChainGraph>(s), doc.domains, fa, spec);
    out << (json ? print_joint_json(j, doc.domains) : print_joint(j, doc.domains));
  });

  auto* equivalent = app.add_subcommand(
      "equivalent", "Markov equivalence, or factorization equivalence under --targets");
  equivalent->add_option("file1", file)->required();
  equivalent->add_option("file2", file2)->required();
  auto* targets_opt = equivalent->add_option("--targets", targets_text);
  on(equivalent, [&] {
    const Structure s1 = cli::load_structure(file);
    const Structure s2 = cli::load_structure(file2);
    bool eq;
    if (targets_opt->count() == 0) {
      eq = markov_equivalent(cli::as_dah(s1), cli::as_dah(s2));
    } else {
      const VertexSet a = parse_label_list(targets_text);
      if (std::holds_alternative<Dah>(s1) && std::holds_alternative<Dah>(s2)) {
        eq = factorization_equivalent_dah(std::get<Dah>(s1), a, std::get<Dah>(s2), a);
      } else if (std::holds_alternative<ChainGraph>(s1) && std::holds_alternative<ChainGraph>(s2)) {
        eq = factorization_equivalent_cg(std::get<ChainGraph>(s1), a, std::get<ChainGraph>(s2), a);
      } else {
        throw cli::UsageError("--targets needs two files of the same kind");
      }
    }
    out << "equivalent: " << cli::bool_text(eq) << "\n";
  });

  auto* ci_check = app.add_subcommand("ci-check", "check separation statements against a joint");
  ci_check->add_option("file", file)->required();
  ci_check->add_option("--domains", domains_path);
  ci_check->add_option("--factors", factors_path)->required();
  ci_check->add_option("--source", file2, "structure the factors belong to (default: file)");
  ci_check->add_flag("--json", json);
  int ci_status = kExitOk;
  on(ci_check, [&] {
    const Dah h = cli::as_dah(cli::load_structure(file));
    const Dah src = file2.empty() ? h : cli::as_dah(cli::load_structure(file2));
    const FactorDocument doc = cli::load_factors(domains_path, factors_path);
    const MarkovReport r =
        verify_global_markov(h, assemble_joint(src, doc.domains, to_assignment(doc.factors)));
    out << (json ? print_report_json(r) : print_report(r));
    if (!r.ok()) ci_status = kExitFailure;
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    action();
    return ci_status;
  } catch (const cli::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    // Anything pinned to a file position is malformed input.
    return e.kind() == ErrorKind::ParseError || e.location() ? kExitUsage : kExitFailure;
  }
}

}  // namespace bhg
