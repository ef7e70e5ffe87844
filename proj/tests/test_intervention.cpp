#include <gtest/gtest.h>

#include <functional>

#include "bhg/bhg.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace bhg;

namespace {

void expect_tables_near(const JointTable& x, const JointTable& y, double tol) {
  ASSERT_EQ(x.scope, y.scope);
  ASSERT_EQ(x.table.size(), y.table.size());
  for (std::size_t i = 0; i < x.table.size(); ++i) EXPECT_NEAR(x.table[i], y.table[i], tol) << i;
}

/// Zero mass wherever a target disagrees with its forced state.
void expect_zero_off_spec(const JointTable& j, const std::map<VertexId, std::size_t>& clamp,
                          const Domains& d) {
  for (std::size_t flat = 0; flat < j.table.size(); ++flat) {
    const auto st = decode_index(flat, j.scope, d);
    for (std::size_t i = 0; i < st.size(); ++i) {
      auto it = clamp.find(j.scope[i]);
      if (it != clamp.end() && it->second != st[i]) {
        EXPECT_EQ(j.table[flat], 0.0);
        break;
      }
    }
  }
}

}  // namespace

TEST(CgRedirect, Examples) {
  const ChainGraph g = fixtures::cg("collider.cg");
  EXPECT_EQ(cg_chain_components(cg_redirect(g, {"c"})).components,
            (std::vector<VertexSet>{{"a"}, {"b"}, {"c"}, {"d", "e"}}));
  EXPECT_EQ(cg_redirect(g, {}), g);
  const ChainGraph coll = build_chain_graph({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}}, {});
  const ChainGraph r = cg_redirect(coll, {"c"});
  EXPECT_TRUE(r.directed().empty());
  EXPECT_THROW(cg_redirect(g, {"z"}), Error);
}

TEST(CgRedirect, LineInsideTargetsIsDeleted) {
  const ChainGraph g = build_chain_graph({"a", "b", "c"}, {}, {{"a", "b"}, {"b", "c"}});
  const ChainGraph r = cg_redirect(g, {"a", "b"});
  EXPECT_TRUE(r.undirected().empty());
  EXPECT_EQ(r.directed(), (std::set<Arc>{{"b", "c"}}));
}

TEST(CgDelete, Examples) {
  const ChainGraph g = fixtures::cg("collider.cg");
  const ChainGraph g0 = build_chain_graph({"a", "b", "d", "e"},
                                          {{"a", "d"}, {"a", "e"}, {"b", "d"}, {"b", "e"}}, {{"d", "e"}});
  EXPECT_EQ(cg_delete(g, {"c"}), g0);
  EXPECT_EQ(cg_delete(g, {}), g);
  EXPECT_TRUE(cg_delete(g, g.vertices()).vertices().empty());
}

TEST(DahRedirect, Examples) {
  const Dah h = fixtures::dah("surgery.dah");
  EXPECT_EQ(dah_redirect(h, {"c"}), fixtures::dah("surgery_redirected.dah"));
  EXPECT_EQ(dah_redirect(h, {}), h);
  const Dah single = build_dah({"x", "y"}, {{{"x"}, {"y"}}});
  EXPECT_TRUE(dah_redirect(single, {"y"}).edges().empty());
  EXPECT_THROW(dah_redirect(h, {"z"}), Error);
}

TEST(DahNormalize, Examples) {
  const Dah b = fixtures::dah("surgery.dah");
  const Dah c = fixtures::dah("surgery_redirected.dah");
  EXPECT_EQ(dah_normalize(b, {"c"}), dah_normalize(c, {"c"}));
  const Dah f1 = fixtures::dah("four_comp.dah");
  EXPECT_EQ(dah_normalize(f1, {}), f1);
  const Dah dom = build_dah({"x", "y", "z"}, {{{"x"}, {"y"}}, {{"x"}, {"y", "z"}}});
  EXPECT_EQ(dah_normalize(dom, {}), build_dah({"x", "y", "z"}, {{{"x"}, {"y", "z"}}}));
}

TEST(FactorizationEquivalence, ChainGraphs) {
  const ChainGraph g = fixtures::cg("collider.cg");
  EXPECT_TRUE(factorization_equivalent_cg(g, {"c"}, cg_redirect(g, {"c"}), {"c"}));
  EXPECT_TRUE(factorization_equivalent_cg(g, {}, g, {}));
  const ChainGraph x = build_chain_graph({"u", "v"}, {{"u", "v"}}, {});
  const ChainGraph y = build_chain_graph({"u", "v"}, {}, {{"u", "v"}});
  EXPECT_FALSE(factorization_equivalent_cg(x, {}, y, {}));
}

TEST(FactorizationEquivalence, Hypergraphs) {
  const Dah b = fixtures::dah("surgery.dah");
  EXPECT_TRUE(factorization_equivalent_dah(b, {"c"}, fixtures::dah("surgery_redirected.dah"), {"c"}));
  EXPECT_TRUE(factorization_equivalent_dah(b, {"c"}, b, {"c"}));
  EXPECT_FALSE(factorization_equivalent_dah(fixtures::dah("shapes/shape01.dah"), {},
                                            fixtures::dah("shapes/shape03.dah"), {}));
}

TEST(IntervenedJoint, SurgeryClosedForm) {
  const Dah h = fixtures::dah("surgery.dah");
  const Domains d = gen::binary(h.vertices());
  gen::Rng rng(61);
  const FactorAssignment fa = gen::random_factors(rng, factor_scopes(h), d);
  const JointTable j = intervened_joint(h, d, fa, InterventionSpec::from_values({{"c", "0"}}));
  const auto& acd = fa.at({"a", "c", "d"}).table;
  const auto& abde = fa.at({"a", "b", "d", "e"}).table;
  const auto& fa_ = fa.at({"a"}).table;
  const auto& fb = fa.at({"b"}).table;
  std::size_t flat = 0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      double z = 0.0;
      for (std::size_t dd = 0; dd < 2; ++dd)
        for (std::size_t e = 0; e < 2; ++e) z += acd[a * 4 + dd] * abde[a * 8 + b * 4 + dd * 2 + e];
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t dd = 0; dd < 2; ++dd)
          for (std::size_t e = 0; e < 2; ++e) {
            const double want = c != 0 ? 0.0
                                       : fa_[a] / (fa_[0] + fa_[1]) * fb[b] / (fb[0] + fb[1]) *
                                             acd[a * 4 + dd] * abde[a * 8 + b * 4 + dd * 2 + e] / z;
            EXPECT_NEAR(j.table[flat], want, 1e-12);
            if (c != 0) {
              EXPECT_EQ(j.table[flat], 0.0);
            }
            ++flat;
          }
    }
}

TEST(IntervenedJoint, EmptySpecIsPlainAssembly) {
  const Dah h = fixtures::dah("four_comp.dah");
  const Domains d = gen::binary(h.vertices());
  gen::Rng rng(62);
  const FactorAssignment fa = gen::random_factors(rng, factor_scopes(h), d);
  expect_tables_near(intervened_joint(h, d, fa, {}), assemble_joint(h, d, fa), 0.0);
  const ChainGraph g = fixtures::cg("collider.cg");
  const Domains dg = gen::binary(g.vertices());
  const FactorAssignment fg = gen::random_factors(rng, cg_factor_scopes(g), dg);
  expect_tables_near(cg_intervened_joint(g, dg, fg, {}), cg_assemble_joint(g, dg, fg), 0.0);
}

TEST(IntervenedJoint, RedirectedHypergraphWithIndicator) {
  const Dah h = fixtures::dah("surgery.dah");
  const Domains d = gen::binary(h.vertices());
  gen::Rng rng(63);
  const FactorAssignment fa = gen::random_factors(rng, factor_scopes(h), d);
  const auto spec = InterventionSpec::from_values({{"c", "1"}});
  const auto clamp = resolve_spec(spec, h.vertices(), d);
  const Dah r = dah_redirect(h, spec.targets);
  const FactorAssignment moved = transport_factor_system(factor_scopes(h), fa, clamp, d, factor_scopes(r));
  EXPECT_EQ(moved.at({"c"}).table, (std::vector<double>{0.0, 1.0}));
  expect_tables_near(intervened_joint(h, d, fa, spec), assemble_joint(r, d, moved), 1e-12);
}

TEST(IntervenedJoint, ChainGraphMatchesCanonicalHypergraphAndRedirect) {
  const ChainGraph g = fixtures::cg("collider.cg");
  const Domains d = gen::binary(g.vertices());
  gen::Rng rng(64);
  const FactorAssignment fa = gen::random_factors(rng, cg_factor_scopes(g), d);
  const auto spec = InterventionSpec::from_values({{"c", "0"}});
  const JointTable direct = cg_intervened_joint(g, d, fa, spec);
  const Dah h = hypermoralize(g);
  FactorAssignment matched;
  for (const auto& c : factor_scopes(h))
    for (const auto& s : c.scopes) matched[s] = fa.at(s);
  expect_tables_near(direct, intervened_joint(h, d, matched, spec), 1e-12);

  const ChainGraph r = cg_redirect(g, spec.targets);
  const auto clamp = resolve_spec(spec, g.vertices(), d);
  const FactorAssignment moved = transport_factor_system(cg_factor_scopes(g), fa, clamp, d, cg_factor_scopes(r));
  expect_tables_near(direct, cg_assemble_joint(r, d, moved), 1e-12);
}

TEST(IntervenedJoint, SpecErrors) {
  const Dah h = fixtures::dah("surgery.dah");
  const Domains d = gen::binary(h.vertices());
  gen::Rng rng(65);
  const FactorAssignment fa = gen::random_factors(rng, factor_scopes(h), d);
  EXPECT_THROW(intervened_joint(h, d, fa, InterventionSpec::from_values({{"c", "7"}})), Error);
  EXPECT_THROW(intervened_joint(h, d, fa, InterventionSpec::from_values({{"z", "0"}})), Error);
}

// ---------------------------------------------------------------------------

TEST(InterventionProperties, ChainGraphRedirectAgreesWithDirectEvaluation) {
  gen::Rng rng(66);
  std::bernoulli_distribution pick(0.3);
  for (int trial = 0; trial < 120; ++trial) {
    const ChainGraph g = gen::random_chain_graph(rng, 1 + trial % 6);
    const Domains d = gen::binary(g.vertices());
    std::map<VertexId, std::string> values;
    for (const auto& v : g.vertices())
      if (pick(rng)) values[v] = pick(rng) ? "1" : "0";
    const auto spec = InterventionSpec::from_values(values);
    const auto clamp = resolve_spec(spec, g.vertices(), d);
    const FactorAssignment fa = gen::random_factors(rng, cg_factor_scopes(g), d);
    const JointTable direct = cg_intervened_joint(g, d, fa, spec);
    EXPECT_NEAR(direct.total(), 1.0, 1e-9);
    expect_zero_off_spec(direct, clamp, d);
    const ChainGraph r = cg_redirect(g, spec.targets);
    const auto moved = transport_factor_system(cg_factor_scopes(g), fa, clamp, d, cg_factor_scopes(r));
    expect_tables_near(direct, cg_assemble_joint(r, d, moved), 1e-9);
    // Same answer through the deleted graph, extended by point mass.
    const ChainGraph del = cg_delete(g, spec.targets);
    if (!del.vertices().empty()) {
      const auto on_rest = transport_factor_system(cg_factor_scopes(g), fa, clamp, d, cg_factor_scopes(del));
      expect_tables_near(direct,
                         extend_with_point_mass(cg_assemble_joint(del, d, on_rest), g.vertices(), d, clamp),
                         1e-9);
    }
  }
}

TEST(InterventionProperties, HypergraphRedirectAgreesWithDirectEvaluation) {
  gen::Rng rng(67);
  std::bernoulli_distribution pick(0.3);
  for (int trial = 0; trial < 120; ++trial) {
    const Dah h = gen::random_dah(rng, 1 + trial % 6);
    const Domains d = gen::binary(h.vertices());
    std::map<VertexId, std::string> values;
    for (const auto& v : h.vertices())
      if (pick(rng)) values[v] = pick(rng) ? "1" : "0";
    const auto spec = InterventionSpec::from_values(values);
    const auto clamp = resolve_spec(spec, h.vertices(), d);
    const FactorAssignment fa = gen::random_factors(rng, factor_scopes(h), d);
    const JointTable direct = intervened_joint(h, d, fa, spec);
    EXPECT_NEAR(direct.total(), 1.0, 1e-9);
    expect_zero_off_spec(direct, clamp, d);
    const Dah r = dah_redirect(h, spec.targets);
    const auto moved = transport_factor_system(factor_scopes(h), fa, clamp, d, factor_scopes(r));
    expect_tables_near(direct, assemble_joint(r, d, moved), 1e-9);
    const Dah nf = dah_normalize(h, spec.targets);
    if (!nf.vertices().empty()) {
      const auto on_nf = transport_factor_system(factor_scopes(h), fa, clamp, d, factor_scopes(nf));
      expect_tables_near(direct, extend_with_point_mass(assemble_joint(nf, d, on_nf), h.vertices(), d, clamp),
                         1e-9);
    }
  }
}

TEST(InterventionProperties, NormalizeIsIdempotentAndRedirectKeepsNormalForm) {
  gen::Rng rng(68);
  std::bernoulli_distribution pick(0.3);
  for (int trial = 0; trial < 300; ++trial) {
    const Dah h = gen::random_dah(rng, 1 + trial % 7);
    VertexSet a;
    for (const auto& v : h.vertices())
      if (pick(rng)) a.insert(v);
    const Dah n = dah_normalize(h, a);
    EXPECT_EQ(dah_normalize(n, {}), n);
    EXPECT_TRUE(factorization_equivalent_dah(h, a, dah_redirect(h, a), a));
  }
}

TEST(InterventionProperties, EquivalenceRelationsOnFixtures) {
  std::vector<std::pair<Dah, VertexSet>> items;
  for (const auto& [name, h] : fixtures::sample_dahs()) {
    items.push_back({h, {}});
    if (h.contains("c")) items.push_back({h, {"c"}});
    if (h.contains("c")) items.push_back({dah_redirect(h, {"c"}), {"c"}});
  }
  for (const auto& x : items) {
    EXPECT_TRUE(factorization_equivalent_dah(x.first, x.second, x.first, x.second));
    for (const auto& y : items) {
      const bool xy = factorization_equivalent_dah(x.first, x.second, y.first, y.second);
      EXPECT_EQ(xy, factorization_equivalent_dah(y.first, y.second, x.first, x.second));
      if (!xy) continue;
      for (const auto& z : items) {
        if (factorization_equivalent_dah(y.first, y.second, z.first, z.second)) {
          EXPECT_TRUE(factorization_equivalent_dah(x.first, x.second, z.first, z.second));
        }
      }
    }
  }
}

TEST(InterventionProperties, NormalFormIgnoresOperationOrder) {
  // One operation at a time, picked at random, until none applies.
  auto random_order = [](const Dah& h, const VertexSet& a, gen::Rng& rng) {
    std::set<Hyperedge> edges(h.edges().begin(), h.edges().end());
    while (true) {
      std::vector<std::function<void()>> moves;
      for (const auto& e : edges) {
        if (intersects(e.tail, a) || intersects(e.head, a)) {
          moves.push_back([&edges, e, &a] {
            edges.erase(e);
            edges.insert({set_difference(e.tail, a), set_difference(e.head, a)});
          });
        }
        if (e.head.empty()) moves.push_back([&edges, e] { edges.erase(e); });
        for (const auto& o : edges) {
          if (o != e && is_subset(e.tail, o.tail) && is_subset(e.head, o.head)) {
            moves.push_back([&edges, e] { edges.erase(e); });
            break;
          }
        }
      }
      if (moves.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
      moves[pick(rng)]();
    }
    return std::set<Hyperedge>(edges);
  };
  gen::Rng rng(69);
  std::bernoulli_distribution coin(0.35);
  std::vector<std::pair<Dah, VertexSet>> cases;
  for (const auto& [name, h] : fixtures::sample_dahs()) cases.push_back({h, h.contains("c") ? VertexSet{"c"} : VertexSet{}});
  for (int trial = 0; trial < 200; ++trial) {
    const Dah h = gen::random_dah(rng, 1 + trial % 7, 7);
    VertexSet a;
    for (const auto& v : h.vertices())
      if (coin(rng)) a.insert(v);
    cases.push_back({h, a});
  }
  for (const auto& [h, a] : cases) {
    const Dah n = dah_normalize(h, a);
    const std::set<Hyperedge> want(n.edges().begin(), n.edges().end());
    for (int rep = 0; rep < 5; ++rep) EXPECT_EQ(random_order(h, a, rng), want) << print_dah(h) << format_set(a);
  }
}
