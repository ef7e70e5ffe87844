#include <gtest/gtest.h>

#include "bhg/bhg.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace bhg;

namespace {

ChainGraph path_abc() { return build_chain_graph({"a", "b", "c"}, {}, {{"a", "c"}, {"b", "c"}}); }

ChainGraph collider() { return build_chain_graph({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}}, {}); }

ErrorKind build_error(VertexSet v, std::set<Arc> d, std::set<VertexPair> u) {
  try {
    build_chain_graph(std::move(v), std::move(d), std::move(u));
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::ParseError;
}

}  // namespace

TEST(BuildChainGraph, SimpleIsValid) {
  const ChainGraph g = fixtures::cg("simple.cg");
  EXPECT_EQ(g.directed().size(), 5U);
  EXPECT_EQ(g.undirected().size(), 2U);
  EXPECT_EQ(build_chain_graph({"v"}, {}, {}).vertices(), VertexSet{"v"});
}

TEST(BuildChainGraph, Errors) {
  EXPECT_EQ(build_error({"u"}, {{"u", "u"}}, {}), ErrorKind::SelfLoop);
  EXPECT_EQ(build_error({"u", "v"}, {{"u", "v"}}, {{"u", "v"}}), ErrorKind::ConflictingEdge);
  EXPECT_EQ(build_error({"u", "v", "w"}, {{"u", "v"}, {"w", "u"}}, {{"v", "w"}}),
            ErrorKind::CycleDetected);
  EXPECT_EQ(build_error({"u"}, {{"u", "z"}}, {}), ErrorKind::UnknownVertexInEdge);
}

TEST(ChainGraphComponents, Examples) {
  EXPECT_EQ(cg_chain_components(fixtures::cg("simple.cg")).components,
            (std::vector<VertexSet>{{"a"}, {"b"}, {"c"}, {"d", "e", "f"}}));
  EXPECT_EQ(cg_chain_components(build_chain_graph({"x", "y", "z"}, {}, {})).size(), 3U);
  EXPECT_EQ(cg_chain_components(fixtures::cg("three_cliques.cg")).components,
            (std::vector<VertexSet>{{"a"}, {"b"}, {"c"}, {"d", "e", "f"}}));
}

TEST(MoralGraph, ThreeCliques) {
  const auto cliques = maximal_cliques(moral_graph(fixtures::cg("three_cliques.cg")));
  EXPECT_EQ(cliques, (std::vector<VertexSet>{{"a", "b", "c", "e"}, {"a", "d", "e"}, {"c", "e", "f"}}));
}

TEST(MoralGraph, UndirectedUnchangedAndColliderMarried) {
  const ChainGraph u = path_abc();
  EXPECT_EQ(moral_graph(u), skeleton(u));
  EXPECT_TRUE(moral_graph(collider()).has_edge("a", "b"));
}

TEST(MaximalCliques, Examples) {
  const UndirectedGraph tri({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}, {"b", "c"}});
  EXPECT_EQ(maximal_cliques(tri), (std::vector<VertexSet>{{"a", "b", "c"}}));
  const UndirectedGraph path({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  EXPECT_EQ(maximal_cliques(path), (std::vector<VertexSet>{{"a", "b"}, {"b", "c"}}));
}

TEST(MinimalComplexes, Collider) {
  const auto mc = minimal_complexes(collider());
  ASSERT_EQ(mc.size(), 1U);
  EXPECT_EQ(mc[0], (Complex{"a", {"c"}, "b"}));
}

TEST(MinimalComplexes, CompleteGraphHasNone) {
  const ChainGraph k = build_chain_graph({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}, {"b", "c"}}, {});
  EXPECT_TRUE(minimal_complexes(k).empty());
}

TEST(MinimalComplexes, SimpleMatchesExhaustiveSearch) {
  const ChainGraph g = fixtures::cg("simple.cg");
  const std::vector<Complex> want = {{"a", {"e"}, "b"}, {"a", {"e", "f"}, "c"}, {"b", {"f"}, "c"}};
  EXPECT_EQ(minimal_complexes(g), want);
}

TEST(UgSeparates, Examples) {
  const UndirectedGraph p = skeleton(path_abc());
  EXPECT_TRUE(ug_separates(p, {"a"}, {"b"}, {"c"}));
  EXPECT_FALSE(ug_separates(p, {"a"}, {"b"}, {}));
  EXPECT_TRUE(ug_separates(moral_graph(fixtures::cg("three_cliques.cg")), {"d"}, {"f"}, {"a", "c", "e"}));
  EXPECT_TRUE(ug_separates(p, {}, {"b"}, {}));
  EXPECT_THROW(ug_separates(p, {"a"}, {"a"}, {}), Error);
  EXPECT_THROW(ug_separates(p, {"z"}, {"a"}, {}), Error);
}

// ---------------------------------------------------------------------------

TEST(ChainGraphProperties, MoralGraphAndCliquesMatchOracles) {
  gen::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const ChainGraph g = gen::random_chain_graph(rng, 1 + trial % 8);
    const auto m = oracle::mixed_of(g);
    const UndirectedGraph mg = moral_graph(g);
    const auto want = oracle::moralize(m);
    EXPECT_EQ(oracle::ug_of(mg).adj, want.adj);
    const auto sk = skeleton(g);
    for (const auto& [u, v] : sk.edges()) EXPECT_TRUE(mg.has_edge(u, v));
    const auto got = maximal_cliques(mg);
    EXPECT_EQ(std::set<VertexSet>(got.begin(), got.end()), oracle::cliques(want));
    EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
  }
}

TEST(ChainGraphProperties, MinimalComplexesMatchPathOracle) {
  gen::Rng rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    const ChainGraph g = gen::random_chain_graph(rng, 2 + trial % 7);
    std::set<std::tuple<VertexId, VertexSet, VertexId>> got;
    for (const auto& c : minimal_complexes(g)) got.insert({c.alpha, c.b, c.beta});
    EXPECT_EQ(got, oracle::complexes(oracle::mixed_of(g))) << print_chain_graph(g);
  }
}

TEST(ChainGraphProperties, DagComplexesAreUnshieldedColliders) {
  gen::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const ChainGraph g = gen::random_chain_graph(rng, 2 + trial % 6, 0.0, 0.5);
    std::set<std::tuple<VertexId, VertexSet, VertexId>> colliders;
    for (const auto& c : g.vertices()) {
      const auto& pa = g.parents(c);
      for (const auto& x : pa)
        for (const auto& y : pa)
          if (x < y && !g.adjacent(x, y)) colliders.insert({x, {c}, y});
    }
    std::set<std::tuple<VertexId, VertexSet, VertexId>> got;
    for (const auto& c : minimal_complexes(g)) got.insert({c.alpha, c.b, c.beta});
    EXPECT_EQ(got, colliders);
  }
}

TEST(ChainGraphProperties, SeparationIsSymmetricAndMatchesOracle) {
  gen::Rng rng(24);
  for (int trial = 0; trial < 60; ++trial) {
    const ChainGraph g = gen::random_chain_graph(rng, 3 + trial % 4);
    const UndirectedGraph mg = moral_graph(g);
    const auto o = oracle::ug_of(mg);
    for (const auto& s : all_disjoint_triples(g.vertices())) {
      const bool x = ug_separates(mg, s.a, s.b, s.c);
      EXPECT_EQ(x, ug_separates(mg, s.b, s.a, s.c));
      EXPECT_EQ(x, oracle::separates(o, s.a, s.b, s.c));
    }
  }
}

TEST(ChainGraphProperties, LargeComponentGuard) {
  std::set<VertexPair> lines;
  VertexSet v = {"p", "q"};
  std::set<Arc> arcs = {{"p", "n00"}, {"q", "n15"}};
  for (int i = 0; i < 16; ++i) {
    const std::string name = std::string("n") + (i < 10 ? "0" : "") + std::to_string(i);
    v.insert(name);
    if (i > 0) {
      const std::string prev = std::string("n") + (i - 1 < 10 ? "0" : "") + std::to_string(i - 1);
      lines.insert(make_unordered(prev, name));
    }
  }
  const ChainGraph g = build_chain_graph(v, arcs, lines);
  try {
    minimal_complexes(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ComplexSearchTooLarge);
  }
}
