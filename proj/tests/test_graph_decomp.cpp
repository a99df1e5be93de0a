#include "doctest.h"

#include "decomp/graph_decomp.hpp"
#include "decomp/laminar.hpp"
#include "decomp/oracle.hpp"

using namespace decomp;

namespace {

DiGraph undirected(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> es) {
  DiGraph g(n);
  for (auto [u, v] : es) g.add_undirected_edge(u, v);
  return g;
}

DiGraph tournament3() {
  DiGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  return g;
}

const DiGraph k3 = undirected(3, {{0, 1}, {0, 2}, {1, 2}});
const DiGraph p4 = undirected(4, {{0, 1}, {1, 2}, {2, 3}});
const DiGraph c4 = undirected(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
const DiGraph c5 = undirected(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});

// Sibling pairs carry no edges or all of them.
void check_dichotomy(const DiGraph& g, const ModularDecomposition& d) {
  const RootedTree& t = d.tree();
  for (int v : t.inner_nodes())
    for (int s : t.children(v))
      for (int r : t.children(v)) {
        if (s == r) continue;
        std::size_t e = 0;
        t.leafset(s).for_each([&](std::size_t x) {
          t.leafset(r).for_each([&](std::size_t y) { e += g.has_edge(x, y); });
        });
        CHECK((e == 0 || e == t.leafset(s).count() * t.leafset(r).count()));
      }
}

}  // namespace

TEST_CASE("is_module") {
  CHECK(is_module(k3, Subset(3, {0, 1})));
  CHECK_FALSE(is_module(p4, Subset(4, {1, 2})));
  CHECK(is_module(p4, Subset::full(4)));
  CHECK(is_module(p4, Subset(4, {2})));
  CHECK(is_module(p4, Subset(4)));
}

TEST_CASE("modules_set_system matches subset scan") {
  CHECK(modules_set_system(DiGraph(3)).size() == 7);
  CHECK(modules_set_system(p4).size() == 5);
  for (std::size_t n = 1; n <= 4; ++n)
    oracle::for_each_digraph(n, [&](const DiGraph& g) {
      CHECK(modules_set_system(g) == oracle::enumerate_modules(g));
    });
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = oracle::random_digraph(3 + seed % 6, 0.4, seed);
    CHECK(modules_set_system(g) == oracle::enumerate_modules(g));
  }
  for (std::size_t n = 1; n <= 5; ++n)
    oracle::for_each_graph(n, [&](const DiGraph& g) {
      CHECK(is_partitive(modules_set_system(g)));
    });
  Guards small;
  small.subset_scan = 3;
  CHECK_THROWS_AS(modules_set_system(p4, small), Error);
}

TEST_CASE("modular_decomposition examples") {
  auto one = modular_decomposition(DiGraph(1));
  CHECK(one.tree().size() == 1);
  CHECK(one.m_edges.empty());

  auto dk = modular_decomposition(k3);
  CHECK(dk.tree().children(dk.tree().root()).size() == 3);
  CHECK(dk.m_edges.size() == 6);
  CHECK(graph_from_modular(dk) == k3);

  auto dt = modular_decomposition(tournament3());
  std::vector<std::pair<int, int>> want{{0, 1}, {0, 2}, {1, 2}};
  CHECK(dt.m_edges == want);
  CHECK(graph_from_modular(modular_decomposition(DiGraph(4))) == DiGraph(4));
}

TEST_CASE("modular roundtrip") {
  for (std::size_t n = 1; n <= 4; ++n)
    oracle::for_each_digraph(n, [&](const DiGraph& g) {
      auto d = modular_decomposition(g);
      CHECK(graph_from_modular(d) == g);
      check_dichotomy(g, d);
      for (auto [s, r] : d.m_edges) CHECK(d.tree().parent(s) == d.tree().parent(r));
    });
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto g = oracle::random_digraph(5 + seed % 6, seed % 2 ? 0.3 : 0.7, seed);
    auto d = modular_decomposition(g);
    CHECK(graph_from_modular(d) == g);
    check_dichotomy(g, d);
  }
}

TEST_CASE("module counting") {
  CHECK(count_modules(DiGraph(1)) == 1);
  CHECK(count_modules(DiGraph(3)) == 7);
  CHECK(count_modules(p4) == 5);
  CHECK(count_modules_via_tree(p4) == 5);
  for (std::size_t n = 1; n <= 4; ++n)
    oracle::for_each_digraph(n, [&](const DiGraph& g) {
      CHECK(count_modules(g) == count_modules_via_tree(g));
    });
  oracle::for_each_graph(5, [&](const DiGraph& g) {
    CHECK(count_modules(g) == count_modules_via_tree(g));
  });
}

TEST_CASE("cotree") {
  CHECK_THROWS_AS(cotree(p4), Error);
  try {
    cotree(p4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotCograph);
  }
  auto ck = cotree(k3);
  CHECK(ck.label.at(ck.tree.root()) == CoLabel::Series);
  auto ct = cotree(tournament3());
  CHECK(ct.label.at(ct.tree.root()) == CoLabel::Linear);
  CHECK(ct.order.at(ct.tree.root()) == std::vector<int>{0, 1, 2});

  DiGraph arc(2);
  arc.add_edge(1, 0);
  auto ca = cotree(arc);
  CHECK(ca.label.at(ca.tree.root()) == CoLabel::Linear);
  CHECK(ca.order.at(ca.tree.root()) == std::vector<int>{1, 0});

  RootedTree k2({2, 2, -1}, {0, 1, -1}, 2);
  CHECK(graph_from_cotree(Cotree{k2, {{2, CoLabel::Series}}, {}}) == undirected(2, {{0, 1}}));
  CHECK(graph_from_cotree(Cotree{k2, {{2, CoLabel::Parallel}}, {}}) == DiGraph(2));
}

TEST_CASE("cotree roundtrip and P4 characterisation") {
  for (std::size_t n = 1; n <= 4; ++n)
    oracle::for_each_digraph(n, [&](const DiGraph& g) {
      try {
        auto c = cotree(g);
        CHECK(graph_from_cotree(c) == g);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotCograph);
      }
    });
  for (std::size_t n = 1; n <= 5; ++n)
    oracle::for_each_graph(n, [&](const DiGraph& g) {
      bool ok = true;
      try {
        auto c = cotree(g);
        CHECK(graph_from_cotree(c) == g);
        CHECK(c.order.empty());
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotCograph);
        ok = false;
      }
      CHECK(ok == !oracle::has_induced_p4(g));
    });
}

TEST_CASE("splits") {
  CHECK(is_split(c4, Subset(4, {1})));
  CHECK(is_split(c4, Subset(4, {1, 3})));
  for (std::uint64_t m = 1; m < 16; ++m) {
    Subset s = Subset::from_mask(5, m << 1);
    if (s.count() >= 2 && s.count() <= 3) CHECK_FALSE(is_split(c5, s));
  }
  CHECK_THROWS_AS(is_split(undirected(3, {{0, 1}}), Subset(3, {1})), Error);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = oracle::random_connected_graph(3 + seed % 6, 0.35, seed, seed % 2 == 0);
    CHECK(split_family(g) == oracle::enumerate_splits(g));
  }
}

TEST_CASE("split_decomposition examples") {
  auto k2 = split_decomposition(undirected(2, {{0, 1}}));
  CHECK(k2.markers.size() == 2);
  CHECK(k2.c_edges.empty());
  CHECK(k2.t_edges == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK(graph_from_split(k2) == undirected(2, {{0, 1}}));

  auto star = undirected(4, {{0, 1}, {0, 2}, {0, 3}});
  auto ds = split_decomposition(star);
  CHECK(ds.tree().inner_nodes().size() == 1);
  CHECK(ds.markers.size() == 4);
  CHECK(ds.t_edges.empty());
  CHECK(ds.c_edges.size() == 6);

  auto d5 = split_decomposition(c5);
  CHECK(d5.markers.size() == 5);
  CHECK(graph_from_split(d5) == c5);
  CHECK_THROWS_AS(split_decomposition(DiGraph(3)), Error);
}

TEST_CASE("split roundtrip") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    std::size_t n = 2 + seed % 9;
    auto g = oracle::random_connected_graph(n, 0.3, seed, seed % 2 == 0);
    auto d = split_decomposition(g);
    CHECK(graph_from_split(d) == g);
    for (auto [a, b] : d.c_edges) CHECK(d.component_of(a) == d.component_of(b));
    // Each inner tree edge carries exactly one t-edge.
    std::size_t inner_edges = 0;
    for (auto [u, v] : d.tree().edges())
      if (!d.tree().is_leaf(u) && !d.tree().is_leaf(v)) ++inner_edges;
    if (n > 2) CHECK(d.t_edges.size() == inner_edges);
  }
}

TEST_CASE("bi-joins and classes") {
  CHECK(equiv_classes(p4, Subset::full(4)).size() == 1);
  CHECK(equiv_classes(k3, Subset(3, {0, 1})).size() == 1);
  CHECK(is_bijoin(p4, Subset(4, {1})));
  CHECK(is_bijoin(k3, Subset(3, {1, 2})));
  CHECK_THROWS_AS(is_bijoin(tournament3(), Subset(3, {1})), Error);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = oracle::random_graph(3 + seed % 6, 0.5, seed);
    auto b = bijoin_family(g);
    CHECK(b == oracle::enumerate_bijoins(g));
    for (auto& s : b.sides()) {
      CHECK(equiv_classes(g, s).size() <= 2);
      CHECK(equiv_classes(g, s.complement()).size() <= 2);
    }
  }
}

TEST_CASE("skeleton") {
  auto k2 = skeleton(undirected(2, {{0, 1}}));
  CHECK(k2.vertices.size() == 2);
  CHECK(k2.t_edges == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK(graph_from_skeleton(k2) == undirected(2, {{0, 1}}));
  CHECK(graph_from_skeleton(skeleton(DiGraph(1))) == DiGraph(1));
  CHECK_THROWS_AS(skeleton(DiGraph(3)), Error);

  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    std::size_t n = 2 + seed % 9;
    auto g = oracle::random_connected_graph(n, 0.25 + 0.05 * static_cast<double>(seed % 8), seed);
    auto s = skeleton(g);
    CHECK(graph_from_skeleton(s) == g);
    auto orig = skeleton_originals(s.vertices.size(), s.c_edges, s.t_edges, s.r_edges);
    std::vector<int> flagged;
    for (std::size_t v = 0; v < s.vertices.size(); ++v)
      if (s.vertices[v].original) flagged.push_back(static_cast<int>(v));
    CHECK(orig == flagged);
    for (auto [a, b] : s.r_edges) {
      CHECK(s.vertices[a].node == s.vertices[b].node);
      CHECK(s.vertices[a].towards == s.vertices[b].towards);
    }
  }
}

TEST_CASE("cut-rank") {
  CHECK(cut_rank(DiGraph(5), Subset(5, {0, 2})) == 0);
  DiGraph k5(5);
  for (std::size_t u = 0; u < 5; ++u)
    for (std::size_t v = u + 1; v < 5; ++v) k5.add_undirected_edge(u, v);
  for (std::uint64_t m = 1; m < 31; ++m) CHECK(cut_rank(k5, Subset::from_mask(5, m)) == 1);
  CHECK(cut_rank(p4, Subset(4, {0, 1})) == 1);
  CHECK(cut_rank(c4, Subset(4, {0, 1})) == 2);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto g = oracle::random_graph(20, 0.3, seed);
    Subset x = Subset::from_mask(20, seed * 0x9e3779b97f4a7c15ull);
    CHECK(cut_rank(g, x) == cut_rank(g, x.complement()));
  }
}

TEST_CASE("rank_width_of") {
  auto cubic4 = UnrootedTree(6, {{0, 4}, {1, 4}, {4, 5}, {2, 5}, {3, 5}}, {0, 1, 2, 3, -1, -1}, 4);
  CHECK(rank_width_of(DiGraph(4), cubic4) == 0);
  DiGraph k4(4);
  for (std::size_t u = 0; u < 4; ++u)
    for (std::size_t v = u + 1; v < 4; ++v) k4.add_undirected_edge(u, v);
  CHECK(rank_width_of(k4, cubic4) == 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = oracle::random_distance_hereditary(4 + seed % 7, seed);
    auto t = cubic_refinement(split_decomposition(g).tree());
    for (int v : t.inner_nodes()) CHECK(t.neighbours(v).size() == 3);
    CHECK(unrooted_tree_to_bipartitions(t).size() >= unrooted_tree_to_bipartitions(split_decomposition(g).tree()).size());
    CHECK(rank_width_of(g, t) == 1);
  }
  UnrootedTree star6(7, {{0, 6}, {1, 6}, {2, 6}, {3, 6}, {4, 6}, {5, 6}}, {0, 1, 2, 3, 4, 5, -1}, 6);
  Guards small;
  small.max_degree = 4;
  CHECK_THROWS_AS(rank_width_of(DiGraph(6), star6, small), Error);
}
