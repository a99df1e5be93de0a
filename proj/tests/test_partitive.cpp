#include "doctest.h"

#include "decomp/laminar.hpp"
#include "decomp/oracle.hpp"
#include "decomp/partitive.hpp"

using namespace decomp;

namespace {

SetSystem fam(std::size_t n, std::initializer_list<std::initializer_list<std::size_t>> l) {
  std::vector<Subset> raw;
  for (auto& s : l) raw.emplace_back(n, s);
  return normalize_set_system(raw, n);
}

SetSystem random_weakly_partitive(std::size_t n, std::uint64_t seed, bool partitive = false) {
  oracle::Rng rng(seed);
  std::vector<Subset> seeds;
  std::size_t k = rng.range(1, 3);
  for (std::size_t i = 0; i < k; ++i) {
    Subset s(n);
    for (std::size_t e = 0; e < n; ++e)
      if (rng.bernoulli(0.4)) s.set(e);
    seeds.push_back(s);
  }
  return oracle::weakly_partitive_closure(seeds, n, partitive);
}

BipartitionSystem random_weakly_bipartitive(std::size_t n, std::uint64_t seed, bool bip = false) {
  oracle::Rng rng(seed);
  std::vector<Subset> seeds;
  std::size_t k = rng.range(1, 3);
  for (std::size_t i = 0; i < k; ++i) {
    Subset s(n);
    for (std::size_t e = 1; e < n; ++e)
      if (rng.bernoulli(0.4)) s.set(e);
    seeds.push_back(s);
  }
  return oracle::weakly_bipartitive_closure(seeds, n, bip);
}

DiGraph undirected(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> es) {
  DiGraph g(n);
  for (auto [u, v] : es) g.add_undirected_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("is_weakly_partitive / is_partitive") {
  CHECK(is_weakly_partitive(oracle::random_laminar_family(7, 1)));
  CHECK_FALSE(is_weakly_partitive(fam(4, {{0, 1}, {1, 2}})));
  CHECK(is_partitive(oracle::random_laminar_family(7, 2)));
  auto w = oracle::weakly_partitive_closure({Subset(3, {0, 1}), Subset(3, {1, 2})}, 3);
  CHECK(is_weakly_partitive(w));
  CHECK_FALSE(w.contains(Subset(3, {0, 2})));
  CHECK_FALSE(is_partitive(w));
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CHECK(is_weakly_partitive(oracle::enumerate_modules(oracle::random_digraph(7, 0.4, seed))));
    CHECK(is_partitive(oracle::enumerate_modules(oracle::random_graph(7, 0.5, seed))));
  }
}

TEST_CASE("strong_members") {
  auto l = oracle::random_laminar_family(6, 3);
  CHECK(strong_members(l) == l);
  auto w = oracle::weakly_partitive_closure({Subset(3, {0, 1}), Subset(3, {1, 2})}, 3);
  CHECK(strong_members(w) == normalize_set_system({}, 3));
}

TEST_CASE("weakly_partitive_tree on small graphs") {
  DiGraph tt(3);
  tt.add_edge(0, 1);
  tt.add_edge(0, 2);
  tt.add_edge(1, 2);
  auto mods = oracle::enumerate_modules(tt);
  CHECK(mods.size() == 6);
  auto w = weakly_partitive_tree(mods);
  int r = w.tree.root();
  CHECK(w.label.at(r) == NodeLabel::Linear);
  CHECK(w.order.at(r) == std::vector<int>{0, 1, 2});

  auto k3 = undirected(3, {{0, 1}, {0, 2}, {1, 2}});
  auto wk = weakly_partitive_tree(oracle::enumerate_modules(k3));
  CHECK(wk.label.at(wk.tree.root()) == NodeLabel::Degenerate);

  auto p4 = undirected(4, {{0, 1}, {1, 2}, {2, 3}});
  auto wp = weakly_partitive_tree(oracle::enumerate_modules(p4));
  CHECK(wp.label.at(wp.tree.root()) == NodeLabel::Prime);
  CHECK(wp.tree.children(wp.tree.root()).size() == 4);

  CHECK_THROWS_AS(weakly_partitive_tree(fam(4, {{0, 1}, {1, 2}})), Error);
}

TEST_CASE("LINEAR interval membership") {
  // Leaves a..h = 0..7 under a LINEAR root ordered a b c d e f g h.
  std::vector<Subset> seeds;
  for (std::size_t i = 0; i + 1 < 8; ++i) seeds.push_back(Subset(8, {i, i + 1}));
  auto s = oracle::weakly_partitive_closure(seeds, 8);
  auto w = weakly_partitive_tree(s);
  CHECK(w.label.at(w.tree.root()) == NodeLabel::Linear);
  CHECK(s.contains(Subset(8, {0, 1, 2})));
  CHECK_FALSE(s.contains(Subset(8, {7, 5, 4, 2})));
  CHECK(generate_family(w) == s);
}

TEST_CASE("generate_family") {
  RootedTree star({3, 3, 3, -1}, {0, 1, 2, -1}, 3);
  WPTree prime{star, {{3, NodeLabel::Prime}}, {}};
  CHECK(generate_family(prime) == tree_to_sets(star));
  WPTree deg{star, {{3, NodeLabel::Degenerate}}, {}};
  CHECK(generate_family(deg).size() == 7);
}

TEST_CASE("weakly-partitive roundtrip on random systems") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::size_t n = 1 + seed % 8;
    auto s = random_weakly_partitive(n, seed, seed % 3 == 0);
    auto w = weakly_partitive_tree(s);
    CHECK(generate_family(w) == s);
    CHECK(is_laminar(strong_members(s)));
    for (auto& [v, lab] : w.label)
      if (w.tree.children(v).size() == 2) CHECK(lab == NodeLabel::Degenerate);
    if (is_partitive(s)) CHECK(w.order.empty());
    // Reversing an order and rebuilding gives the same tree.
    for (auto& [v, ord] : w.order) {
      WPTree r = w;
      std::reverse(r.order[v].begin(), r.order[v].end());
      CHECK(generate_family(r) == s);
      CHECK(ord.front() < ord.back());
    }
    // Betweenness matches the three conditions against the family.
    for (auto [x, y, z] : betweenness(w)) {
      auto& t = w.tree;
      CHECK_FALSE(s.contains(t.leafset(x) | t.leafset(z)));
      bool c2 = false, c3 = false;
      for (auto& m : s.family()) {
        c2 |= (t.leafset(x) | t.leafset(y)).is_subset_of(m) && !m.intersects(t.leafset(z));
        c3 |= (t.leafset(z) | t.leafset(y)).is_subset_of(m) && !m.intersects(t.leafset(x));
      }
      CHECK(c2);
      CHECK(c3);
    }
  }
}

TEST_CASE("bipartitive recognition") {
  CHECK(is_weakly_bipartitive(oracle::random_laminar_bipartitions(8, 4)));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = oracle::random_graph(7, 0.5, seed);
    CHECK(is_bipartitive(oracle::enumerate_bijoins(g)));
    auto c = oracle::random_connected_graph(7, 0.35, seed, true);
    CHECK(is_weakly_bipartitive(oracle::enumerate_splits(c)));
  }
  std::vector<Subset> raw{Subset(5, {0, 1}), Subset(5, {0, 2})};
  CHECK_FALSE(is_weakly_bipartitive(normalize_bipartition_system(raw, 5)));
}

TEST_CASE("strong_bipartitions and WBTree") {
  auto l = oracle::random_laminar_bipartitions(8, 5);
  CHECK(strong_bipartitions(l) == l);
  auto w3 = weakly_bipartitive_tree(normalize_bipartition_system({}, 3));
  CHECK(w3.label.size() == 1);
  CHECK(w3.label.begin()->second == NodeLabel::Degenerate);
  auto star = weakly_bipartitive_tree(normalize_bipartition_system({}, 5));
  CHECK(star.label.begin()->second == NodeLabel::Prime);
  CHECK(generate_bipartition_family(star) == normalize_bipartition_system({}, 5));
  WBTree deg = star;
  deg.label.begin()->second = NodeLabel::Degenerate;
  // 2^(5-1) - 1 bipartitions in total.
  CHECK(generate_bipartition_family(deg).size() == 15);
}

TEST_CASE("weakly-bipartitive roundtrip on random systems") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::size_t n = 2 + seed % 7;
    auto b = random_weakly_bipartitive(n, seed, seed % 3 == 0);
    auto w = weakly_bipartitive_tree(b);
    CHECK(generate_bipartition_family(w) == b);
    CHECK(is_laminar_bipartitions(strong_bipartitions(b)));
    for (auto& [v, lab] : w.label)
      if (w.tree.neighbours(v).size() == 3) CHECK(lab == NodeLabel::Degenerate);
    if (is_bipartitive(b)) CHECK(w.cyclic.empty());
    for (auto& [v, cyc] : w.cyclic) {
      CHECK(cyc.front() == *std::min_element(cyc.begin(), cyc.end()));
      CHECK(cyc[1] < cyc.back());
      WBTree r = w;
      std::reverse(r.cyclic[v].begin(), r.cyclic[v].end());
      std::rotate(r.cyclic[v].begin(), r.cyclic[v].begin() + 1, r.cyclic[v].end());
      CHECK(generate_bipartition_family(r) == b);
    }
  }
}

TEST_CASE("LINEAR cyclic node") {
  // Cyclic order 0..5 at one node: arcs of two consecutive leaves.
  std::vector<Subset> seeds;
  for (std::size_t i = 0; i < 6; ++i) seeds.push_back(Subset(6, {i, (i + 1) % 6}));
  auto b = oracle::weakly_bipartitive_closure(seeds, 6);
  auto w = weakly_bipartitive_tree(b);
  REQUIRE(w.cyclic.size() == 1);
  CHECK(w.cyclic.begin()->second == std::vector<int>{0, 1, 2, 3, 4, 5});
  // d(d-3)/2 non-trivial arcs.
  CHECK(b.size() == 6 + 9);
}
