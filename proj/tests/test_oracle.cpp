#include "doctest.h"

#include "decomp/graph_decomp.hpp"
#include "decomp/oracle.hpp"

using namespace decomp;
using namespace decomp::oracle;

namespace {

DiGraph path(std::size_t n) {
  DiGraph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_undirected_edge(i, i + 1);
  return g;
}

DiGraph cycle(std::size_t n) {
  DiGraph g = path(n);
  g.add_undirected_edge(n - 1, 0);
  return g;
}

}  // namespace

TEST_CASE("enumerate_modules") {
  CHECK(enumerate_modules(path(4)).size() == 5);
  DiGraph k3(3);
  k3.add_undirected_edge(0, 1);
  k3.add_undirected_edge(0, 2);
  k3.add_undirected_edge(1, 2);
  CHECK(enumerate_modules(k3).size() == 7);
  CHECK(enumerate_modules(DiGraph(1)).size() == 1);
  Guards small;
  small.subset_scan = 3;
  CHECK_THROWS_AS(enumerate_modules(path(4), small), Error);
}

TEST_CASE("enumerate_splits and bijoins") {
  DiGraph k2(2);
  k2.add_undirected_edge(0, 1);
  CHECK(enumerate_splits(k2).size() == 1);
  CHECK(enumerate_splits(cycle(5)) == normalize_bipartition_system({}, 5));
  CHECK_THROWS_AS(enumerate_splits(DiGraph(3)), Error);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = random_graph(6, 0.5, seed);
    auto bj = enumerate_bijoins(g);
    auto mods = enumerate_modules(g);
    for (auto& m : mods.family())
      if (!m.is_full()) CHECK(bj.contains(m));
  }
}

TEST_CASE("sharded scans match the serial scan") {
  Guards sharded;
  sharded.jobs = 3;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto g = random_connected_graph(12, 0.3, seed);
    CHECK(enumerate_modules(g, sharded) == enumerate_modules(g));
    CHECK(enumerate_splits(g, sharded) == enumerate_splits(g));
    CHECK(enumerate_bijoins(g, sharded) == enumerate_bijoins(g));
  }
}

TEST_CASE("closure laws hold for graph families") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto d = random_digraph(6, 0.4, seed);
    CHECK_FALSE(check_closure(enumerate_modules(d), Law::WeaklyPartitive).has_value());
    auto g = random_graph(6, 0.5, seed);
    CHECK_FALSE(check_closure(enumerate_modules(g), Law::Partitive).has_value());
    CHECK_FALSE(check_closure(enumerate_bijoins(g), Law::Bipartitive).has_value());
    auto c = random_connected_graph(6, 0.4, seed, true);
    CHECK_FALSE(check_closure(enumerate_splits(c), Law::WeaklyBipartitive).has_value());
  }
}

TEST_CASE("check_closure reports the missing union") {
  std::vector<Subset> raw{Subset(4, {0, 1}), Subset(4, {1, 2})};
  auto v = check_closure(normalize_set_system(raw, 4), Law::WeaklyPartitive);
  REQUIRE(v.has_value());
  CHECK(v->x == Subset(4, {0, 1}));
  CHECK(v->y == Subset(4, {1, 2}));
  CHECK(v->missing == Subset(4, {0, 1, 2}));
}

TEST_CASE("closure generators are closed") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    std::vector<Subset> seeds;
    for (int k = 0; k < 3; ++k) seeds.push_back(Subset::from_mask(7, rng.next() & 127));
    auto s = weakly_partitive_closure(seeds, 7);
    CHECK_FALSE(check_closure(s, Law::WeaklyPartitive).has_value());
    for (auto& x : seeds)
      if (x.any()) CHECK(s.contains(x));
    auto b = weakly_bipartitive_closure(seeds, 7);
    CHECK_FALSE(check_closure(b, Law::WeaklyBipartitive).has_value());
  }
}

TEST_CASE("generators") {
  CHECK(random_digraph(7, 0.3, 5) == random_digraph(7, 0.3, 5));
  CHECK(random_connected_graph(10, 0.2, 1).is_connected());
  CHECK(all_digraphs(3).size() == 64);
  CHECK(all_graphs(4).size() == 64);
  CHECK_THROWS_AS(all_digraphs(5), Error);
  std::size_t total = 0;
  for (std::size_t n = 1; n <= 5; ++n) total += all_laminar_families(n).size();
  CHECK(total == 1 + 1 + 4 + 26 + 236);
  auto t = random_rooted_tree(100, 3);
  CHECK(t.size() <= 199);
  CHECK(has_induced_p4(path(4)));
  CHECK_FALSE(has_induced_p4(cycle(4)));
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    CHECK(random_distance_hereditary(12, seed).is_connected());
}

TEST_CASE("split composition of stars and cliques") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::size_t n = 3 + seed % 14;
    DiGraph g = random_split_composition(n, seed);
    CHECK(g.n() == n);
    CHECK(g.is_undirected());
    CHECK(g.is_connected());
    CHECK(random_split_composition(n, seed) == g);
    // Every split component is a star or a clique.
    WBTree wb = split_decomposition(g).wb;
    for (auto& [v, l] : wb.label) CHECK(l == NodeLabel::Degenerate);
  }
}
