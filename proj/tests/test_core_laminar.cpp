#include "doctest.h"

#include "decomp/core_model.hpp"
#include "decomp/laminar.hpp"
#include "decomp/oracle.hpp"

using namespace decomp;

namespace {

std::vector<Subset> sets(std::size_t n, std::initializer_list<std::initializer_list<std::size_t>> l) {
  std::vector<Subset> out;
  for (auto& s : l) out.emplace_back(n, s);
  return out;
}

}  // namespace

TEST_CASE("normalize_set_system") {
  CHECK(normalize_set_system({}, 2).family() == sets(2, {{0}, {1}, {0, 1}}));
  CHECK(normalize_set_system(sets(3, {{0, 1}}), 3).family() ==
        sets(3, {{0}, {1}, {2}, {0, 1}, {0, 1, 2}}));
  CHECK(normalize_set_system(sets(3, {{0}, {0, 1, 2}}), 3).family() ==
        sets(3, {{0}, {1}, {2}, {0, 1, 2}}));
  auto s = normalize_set_system(sets(4, {{1, 3}, {0, 2}, {}}), 4);
  CHECK(normalize_set_system(s.family(), 4) == s);
  CHECK(s.index_of(Subset(4, {1, 3})) >= 0);
  CHECK(s.index_of(Subset(4, {1, 2})) == -1);
}

TEST_CASE("overlap predicates") {
  CHECK(sets_overlap(Subset(3, {0, 1}), Subset(3, {1, 2})));
  CHECK_FALSE(sets_overlap(Subset(3, {0, 1}), Subset(3, {0, 1, 2})));
  CHECK_FALSE(sets_overlap(Subset(3, {0}), Subset(3, {1})));
  CHECK_FALSE(sets_overlap(Subset(3, {0, 1}), Subset(3, {0, 1})));
  Subset a(4, {0, 1}), b(4, {0, 2});
  CHECK(bipartitions_overlap(a, b));
  CHECK(bipartitions_overlap(a.complement(), b));
  CHECK(bipartitions_overlap(a, b.complement()));
  CHECK_FALSE(bipartitions_overlap(Subset(4, {0}), Subset(4, {1})));
  CHECK_FALSE(bipartitions_overlap(a, a));
}

TEST_CASE("bipartition normalization") {
  auto b = normalize_bipartition_system(sets(4, {{0, 1}}), 4);
  for (auto& s : b.sides()) CHECK_FALSE(s.test(0));
  CHECK(b.contains(Subset(4, {0, 1})));
  CHECK(b.contains(Subset(4, {2, 3})));
  CHECK(b.size() == 5);
  CHECK(normalize_bipartition_system({}, 2).size() == 1);
}

TEST_CASE("DiGraph validation") {
  CHECK_THROWS_AS(DiGraph(0), Error);
  DiGraph g(2);
  CHECK_THROWS_AS(g.add_edge(1, 1), Error);
  g.add_edge(0, 1);
  CHECK_FALSE(g.is_undirected());
  CHECK(g.is_connected());
  auto st = build_structure(g);
  REQUIRE(st.relation("edge"));
  CHECK(st.relation("edge")->sorted_tuples() == std::vector<std::vector<std::uint32_t>>{{0, 1}});
}

TEST_CASE("build_structure for systems and trees") {
  auto st = build_structure(normalize_set_system({}, 2));
  REQUIRE(st.predicate("SET"));
  CHECK(st.predicate("SET")->members() == sets(2, {{0}, {1}, {0, 1}}));
  RootedTree t({2, 2, -1}, {0, 1, -1}, 2);
  auto at = build_structure(t);
  auto* anc = at.relation("ancestor");
  REQUIRE(anc);
  for (std::uint32_t v : {0u, 1u, 2u}) CHECK(anc->contains(v, v));
  CHECK(anc->contains(2, 0));
  CHECK(anc->contains(2, 1));
  CHECK_FALSE(anc->contains(0, 2));
}

TEST_CASE("RootedTree validation") {
  CHECK_THROWS_AS(RootedTree({-1, -1}, {0, 1}, 2), Error);
  CHECK_THROWS_AS(RootedTree({1, -1}, {0, -1}, 1), Error);  // inner node with one child
  RootedTree t({3, 3, 4, 4, -1}, {0, 1, 2, -1, -1}, 3);
  CHECK(t.root() == 4);
  CHECK(t.lca(0, 1) == 3);
  CHECK(t.lca(0, 2) == 4);
  CHECK(t.leafset(3) == Subset(3, {0, 1}));
}

TEST_CASE("is_laminar") {
  CHECK(is_laminar(normalize_set_system({}, 2)));
  CHECK_FALSE(is_laminar(normalize_set_system(sets(3, {{0, 1}, {1, 2}}), 3)));
  CHECK(is_laminar(normalize_set_system({}, 1)));
}

TEST_CASE("laminar_tree shapes") {
  auto t = laminar_tree(normalize_set_system(sets(3, {{0, 1}}), 3));
  CHECK(t.size() == 5);
  CHECK(t.root() == 4);
  CHECK(t.parent(0) == 3);
  CHECK(t.parent(1) == 3);
  CHECK(t.parent(2) == 4);
  CHECK(t.parent(3) == 4);
  auto s = laminar_tree(normalize_set_system({}, 2));
  CHECK(s.children(s.root()).size() == 2);
  CHECK_THROWS_AS(laminar_tree(normalize_set_system(sets(3, {{0, 1}, {1, 2}}), 3)), Error);
}

TEST_CASE("tree_to_sets") {
  RootedTree leaf({-1}, {0}, 1);
  CHECK(tree_to_sets(leaf).family() == sets(1, {{0}}));
  RootedTree star({3, 3, 3, -1}, {0, 1, 2, -1}, 3);
  CHECK(tree_to_sets(star).family() == sets(3, {{0}, {1}, {2}, {0, 1, 2}}));
}

TEST_CASE("laminar roundtrip, exhaustive n <= 5") {
  for (std::size_t n = 1; n <= 5; ++n)
    for (auto& s : oracle::all_laminar_families(n)) {
      auto t = laminar_tree(s);
      CHECK(t.size() <= 2 * n - 1);
      CHECK(tree_to_sets(t) == s);
    }
}

TEST_CASE("laminar roundtrip, random n = 7") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto s = oracle::random_laminar_family(7, seed);
    auto t = laminar_tree(s);
    for (int v : t.inner_nodes()) CHECK(t.children(v).size() >= 2);
    CHECK(tree_to_sets(t) == s);
  }
}

TEST_CASE("bipartition laminarity") {
  CHECK(is_laminar_bipartitions(normalize_bipartition_system({}, 3)));
  CHECK_FALSE(is_laminar_bipartitions(normalize_bipartition_system(sets(4, {{0, 1}, {0, 2}}), 4)));
  CHECK(is_laminar_bipartitions(normalize_bipartition_system({}, 2)));
}

TEST_CASE("rooted_reduction") {
  CHECK(rooted_reduction(normalize_bipartition_system({}, 3), 0).family() ==
        sets(3, {{0}, {1}, {2}, {1, 2}, {0, 1, 2}}));
  auto r = rooted_reduction(normalize_bipartition_system(sets(4, {{0, 1}}), 4), 0);
  CHECK(r.contains(Subset(4, {2, 3})));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto b = oracle::random_laminar_bipartitions(8, seed);
    for (std::size_t a = 0; a < 8; ++a) CHECK(is_laminar(rooted_reduction(b, a)));
  }
}

TEST_CASE("laminar_tree_bipartitions shapes") {
  auto t = laminar_tree_bipartitions(normalize_bipartition_system({}, 3));
  CHECK(t.size() == 4);
  CHECK(t.inner_nodes().size() == 1);
  CHECK(t.neighbours(t.inner_nodes()[0]).size() == 3);
  auto u = laminar_tree_bipartitions(normalize_bipartition_system(sets(4, {{0, 1}}), 4));
  auto inner = u.inner_nodes();
  REQUIRE(inner.size() == 2);
  CHECK(u.adjacent(inner[0], inner[1]));
  auto two = laminar_tree_bipartitions(normalize_bipartition_system({}, 2));
  CHECK(two.size() == 2);
  CHECK(two.adjacent(0, 1));
}

TEST_CASE("unrooted_tree_to_bipartitions") {
  UnrootedTree star(4, {{0, 3}, {1, 3}, {2, 3}}, {0, 1, 2, -1}, 3);
  CHECK(unrooted_tree_to_bipartitions(star) == normalize_bipartition_system({}, 3));
  UnrootedTree path(6, {{0, 4}, {1, 4}, {4, 5}, {5, 2}, {5, 3}}, {0, 1, 2, 3, -1, -1}, 4);
  CHECK(unrooted_tree_to_bipartitions(path).contains(Subset(4, {0, 1})));
}

TEST_CASE("bipartition roundtrip, random n <= 8, anchors agree") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    std::size_t n = 2 + seed % 7;
    auto b = oracle::random_laminar_bipartitions(n, seed);
    for (std::size_t a : {std::size_t{0}, std::size_t{1}}) {
      auto t = laminar_tree_bipartitions(b, a);
      for (int v : t.inner_nodes()) CHECK(t.neighbours(v).size() >= 3);
      CHECK(t.edges().size() == t.size() - 1);
      CHECK(unrooted_tree_to_bipartitions(t) == b);
    }
  }
}
