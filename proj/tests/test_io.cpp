#include "doctest.h"

#include "decomp/cmso.hpp"
#include "decomp/io.hpp"
#include "decomp/laminar.hpp"
#include "decomp/oracle.hpp"

using namespace decomp;
using namespace decomp::io;

namespace {

// Serializes, re-parses the text and reads the value back.
template <class T, class Read>
T roundtrip(const T& v, Read read) {
  return read(parse_json(to_json(v).dump()));
}

}  // namespace

TEST_CASE("edge lists") {
  DiGraph g = parse_graph("# triangle\n3\n0 1\n1 2 # chord\n\n2 0\n");
  CHECK(g.is_undirected());
  CHECK(g.edge_count() == 6);
  DiGraph d = parse_graph("3 directed\n0 1\n1 2\n");
  CHECK(!d.is_undirected());
  CHECK(d.has_edge(0, 1));
  CHECK(!d.has_edge(1, 0));
  CHECK(parse_graph("2 undirected\n") == DiGraph(2));
  CHECK(parse_graph("{\"n\":3,\"directed\":true,\"edges\":[[0,1],[1,2]]}") == d);

  for (const char* bad : {"", "0\n", "3 sideways\n", "3\n0 3\n", "3\n1 1\n", "3\n0\n", "3\n0 x\n",
                          "3\n0 1 2\n", "{\"n\":2,\"edges\":[[0,2]]}", "{\"n\":2,\"edges\":[[0]]}",
                          "{\"edges\":[]}", "{\"n\":2", "{\"n\":\"two\"}"})
    CHECK_THROWS_AS(parse_graph(bad), ParseError);
}

TEST_CASE("set and bipartition inputs") {
  SetSystem s = parse_set_system("{\"n\":4,\"sets\":[[0,1],[2,3,1]]}");
  CHECK(s == normalize_set_system({Subset(4, {0, 1}), Subset(4, {1, 2, 3})}, 4));
  CHECK(s.contains(Subset::full(4)));
  BipartitionSystem b = parse_bipartitions("{\"n\":4,\"sides\":[[0,1]]}");
  CHECK(b.contains(Subset(4, {2, 3})));
  CHECK_THROWS_AS(parse_set_system("{\"n\":3,\"sets\":[[3]]}"), ParseError);
  CHECK_THROWS_AS(parse_set_system("{\"n\":3,\"sets\":[3]}"), ParseError);
  CHECK_THROWS_AS(parse_bipartitions("{\"n\":3}"), ParseError);
  CHECK_THROWS_AS(parse_json("[1,"), ParseError);
}

TEST_CASE("JSON roundtrips") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::size_t n = 2 + seed % 9;
    DiGraph g = oracle::random_digraph(n, 0.4, seed);
    DiGraph u = oracle::random_connected_graph(n, 0.4, seed);
    DiGraph dc = oracle::random_connected_graph(n, 0.5, seed, true);
    CHECK(roundtrip(g, graph_from_json) == g);
    CHECK(roundtrip(u, graph_from_json) == u);

    SetSystem mods = modules_set_system(g);
    CHECK(roundtrip(mods, set_system_from_json) == mods);
    BipartitionSystem sp = split_family(u);
    CHECK(roundtrip(sp, bipartitions_from_json) == sp);

    RootedTree lt = laminar_tree(oracle::random_laminar_family(n, seed));
    CHECK(roundtrip(lt, rooted_tree_from_json) == lt);
    UnrootedTree ut = laminar_tree_bipartitions(oracle::random_laminar_bipartitions(n, seed));
    CHECK(roundtrip(ut, unrooted_tree_from_json) == ut);

    WPTree wp = weakly_partitive_tree(mods);
    CHECK(roundtrip(wp, wptree_from_json) == wp);
    WBTree wb = weakly_bipartitive_tree(sp);
    CHECK(roundtrip(wb, wbtree_from_json) == wb);

    ModularDecomposition md = modular_decomposition(g);
    CHECK(roundtrip(md, modular_from_json) == md);
    SplitDecomposition sd = split_decomposition(dc);
    CHECK(roundtrip(sd, split_from_json) == sd);
    Skeleton sk = skeleton(u);
    CHECK(roundtrip(sk, skeleton_from_json) == sk);
    if (!oracle::has_induced_p4(u)) {
      Cotree c = cotree(u);
      CHECK(roundtrip(c, cotree_from_json) == c);
    }

    ExtRelStruct a = build_structure(g);
    a.declare_predicate("SET", 1);
    for (auto& m : mods.family()) a.add_set("SET", m);
    ExtRelStruct back = roundtrip(a, structure_from_json);
    CHECK(back == a);
    CHECK(back.names() == a.names());
  }
}

TEST_CASE("JSON carries a leafset per inner node") {
  DiGraph g = oracle::random_graph(7, 0.5, 3);
  ModularDecomposition md = modular_decomposition(g);
  Json j = to_json(md);
  for (int v : md.tree().inner_nodes())
    CHECK(j["leafset"][std::to_string(v)].get<std::vector<std::size_t>>() ==
          md.tree().leafset(v).elements());
  CHECK(j["leafset"].size() == md.tree().inner_nodes().size());

  Skeleton sk = skeleton(oracle::random_connected_graph(7, 0.4, 3));
  Json k = to_json(sk);
  for (int u : sk.tree().inner_nodes())
    for (int v : sk.tree().neighbours(u))
      CHECK(k["leafset"][std::to_string(u)][std::to_string(v)].get<std::vector<std::size_t>>() ==
            sk.tree().side(u, v).elements());
}

TEST_CASE("reading decompositions rejects bad input") {
  Json j = to_json(modular_decomposition(oracle::random_graph(5, 0.5, 1)));
  CHECK_THROWS_AS(split_from_json(j), ParseError);
  Json k = j;
  k["labels"]["0"] = "ROUND";
  CHECK_THROWS_AS(modular_from_json(k), ParseError);
  k = j;
  k["parent"][0] = 99;
  CHECK_THROWS_AS(modular_from_json(k), ParseError);
  k = j;
  k["m_edges"].push_back({0, 99});
  CHECK_THROWS_AS(modular_from_json(k), ParseError);
  CHECK_THROWS_AS(structure_from_json(Json{{"universe", 2}, {"relations", {{"edge", {{"arity", 2}, {"tuples", {{0, 5}}}}}}}}),
                  ParseError);
}

TEST_CASE("DOT output") {
  DiGraph g = oracle::random_connected_graph(8, 0.3, 11);
  Skeleton sk = skeleton(g);
  std::string dot = to_dot(sk);
  CHECK(dot == to_dot(skeleton(g)));
  CHECK(dot.rfind("graph skeleton {", 0) == 0);
  auto count = [&](const std::string& s, const std::string& what) {
    std::size_t c = 0;
    for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++c;
    return c;
  };
  CHECK(count(dot, "style=dashed") == sk.t_edges.size());
  CHECK(count(dot, "decorate=true") == sk.r_edges.size());
  CHECK(count(dot, "style=solid") == sk.c_edges.size());

  SplitDecomposition sd = split_decomposition(g);
  std::string sdot = to_dot(sd);
  CHECK(count(sdot, "style=dashed") == sd.t_edges.size());
  CHECK(count(sdot, "style=solid") == sd.c_edges.size());

  ModularDecomposition md = modular_decomposition(g);
  std::string mdot = to_dot(md);
  CHECK(count(mdot, " -> ") == md.tree().size() - 1 + md.m_edges.size());
  CHECK(to_dot(laminar_tree(oracle::random_laminar_family(5, 2))).find("digraph laminar") == 0);

  ExtRelStruct a = build_structure(g);
  CHECK(count(to_dot(a), " -> ") == g.edge_count());
}
