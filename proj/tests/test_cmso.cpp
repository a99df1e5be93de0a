#include "doctest.h"

#include <algorithm>
#include <set>

#include "decomp/cmso.hpp"
#include "decomp/identification.hpp"
#include "decomp/laminar.hpp"
#include "decomp/oracle.hpp"

using namespace decomp;
using namespace decomp::cmso;

namespace {

DiGraph undirected(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> es) {
  DiGraph g(n);
  for (auto [u, v] : es) g.add_undirected_edge(u, v);
  return g;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidInput;
}

Subset widen(const Subset& s, std::size_t n) {
  Subset out(n);
  s.for_each([&](std::size_t e) { out.set(e); });
  return out;
}

void add_colour(ExtRelStruct& a, const std::string& name, const Subset& s) {
  a.declare_relation(name, 1);
  s.for_each([&](std::size_t e) { a.add_tuple(name, {static_cast<std::uint32_t>(e)}); });
}

// Every macro of `text` (and its trailing sentence, if any) agrees with the
// reference semantics on sampled arguments.
void check_against_reference(const ExtRelStruct& a, const std::string& text, std::uint64_t seed,
                             std::size_t budget = 1500) {
  Library lib;
  Formula tail;
  try {
    lib = parse_library(text);
  } catch (const Error&) {
    tail = parse_formula(text, {"x"});
    lib = tail.macros();
  }
  const std::size_t n = a.universe();
  if (tail.root())
    for (std::uint32_t x = 0; x < n; ++x) {
      Env env{{"x", Value(x)}};
      CHECK(eval(a, tail, env) == eval_reference(a, tail, env));
    }
  oracle::Rng rng(seed);
  std::vector<Subset> sets;
  if (n <= 4) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) sets.push_back(Subset::from_mask(n, m));
  } else {
    for (auto& [name, p] : a.predicates())
      for (auto& s : p.members()) sets.push_back(s);
    for (int i = 0; i < 24; ++i) {
      Subset s(n);
      for (std::size_t e = 0; e < n; ++e)
        if (rng.bernoulli(0.4)) s.set(e);
      sets.push_back(s);
    }
  }
  for (auto& [name, m] : lib) {
    std::string call = name + "(";
    std::vector<std::string> elems;
    for (std::size_t i = 0; i < m->params.size(); ++i) {
      call += (i ? "," : "") + m->params[i];
      if (!is_set_name(m->params[i])) elems.push_back(m->params[i]);
    }
    Formula f = parse_formula(call + ")", m->params, lib);
    std::size_t total = 1;
    for (auto& p : m->params) total *= is_set_name(p) ? sets.size() : n;
    const bool sample = total > budget;
    const std::size_t rounds = sample ? budget : total;
    std::size_t mismatches = 0;
    for (std::size_t r = 0; r < rounds; ++r) {
      Env env;
      std::size_t idx = r;
      for (auto& p : m->params) {
        std::size_t k = is_set_name(p) ? sets.size() : n;
        std::size_t pick = sample ? rng.range(0, k - 1) : idx % k;
        idx /= k;
        if (is_set_name(p))
          env[p] = sets[pick];
        else
          env[p] = static_cast<std::uint32_t>(pick);
      }
      bool fast = false, ref = false;
      bool fast_err = false, ref_err = false;
      try {
        fast = eval(a, f, env);
      } catch (const Error&) {
        fast_err = true;
      }
      try {
        ref = eval_reference(a, f, env);
      } catch (const Error&) {
        ref_err = true;
      }
      if (fast_err != ref_err || fast != ref) ++mismatches;
    }
    INFO("macro " << name);
    CHECK(mismatches == 0);
  }
}

ExtRelStruct cross_structure(const WBTree& w) {
  const UnrootedTree& t = w.tree;
  ExtRelStruct s = build_structure(t);
  s.declare_relation("DEGENERATE", 1);
  for (auto& [v, l] : w.label)
    if (l == NodeLabel::Degenerate) s.add_tuple("DEGENERATE", {static_cast<std::uint32_t>(v)});
  s.declare_predicate("BIPART", 1);
  Subset leaves(t.size());
  for (std::size_t e = 0; e < t.universe(); ++e) leaves.set(static_cast<std::size_t>(t.leaf_node(e)));
  BipartitionSystem fam = generate_bipartition_family(w);
  for (auto& side : fam.sides()) {
    Subset x(t.size());
    side.for_each([&](std::size_t e) { x.set(static_cast<std::size_t>(t.leaf_node(e))); });
    s.add_set("BIPART", x);
    s.add_set("BIPART", leaves - x);
  }
  return s;
}

std::set<std::vector<std::uint32_t>> cross_tuples(const WBTree& w) {
  static const Formula f =
      parse_formula(corpus().at("cross") + "cross(t,a,b,c,d)", {"t", "a", "b", "c", "d"});
  ExtRelStruct s = cross_structure(w);
  Evaluator ev(s);
  std::set<std::vector<std::uint32_t>> out;
  for (auto& t : ev.satisfying_tuples(f, {"t", "a", "b", "c", "d"})) out.insert(t);
  return out;
}

template <class Direct, class Cmp>
void check_guided(const ExtRelStruct& a, const Pipeline& p, const Direct& direct, Cmp cmp) {
  auto outs = run_pipeline(a, p, Mode::Guided);
  REQUIRE(outs.size() == 1);
  CHECK(cmp(outs[0], direct) == "");
}

template <class Direct, class Cmp>
void check_exhaustive(const ExtRelStruct& a, const Pipeline& p, const Direct& direct, Cmp cmp) {
  auto outs = run_pipeline(a, p, Mode::Exhaustive);
  CHECK_FALSE(outs.empty());
  for (auto& o : outs) CHECK(cmp(o, direct) == "");
}

}  // namespace

// ---- parsing ----------------------------------------------------------------

TEST_CASE("parse_formula examples") {
  Formula a = parse_formula("exists x. exists y. !(x = y)");
  CHECK(a.root()->kind == Kind::Exists);
  Formula b = parse_formula("forall X. (SET(X) -> C2(X))");
  CHECK(b.root()->kind == Kind::Forall);
  Formula d = parse_formula(corpus().at("degenerate"), {"x"});
  CHECK(d.root()->kind == Kind::And);
  CHECK(d.macros().count("parent"));
  // round trip through the printer
  Formula again = parse_formula(d.to_string(), {"x"});
  CHECK(to_string(again.root()) == to_string(d.root()));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_formula("exists x.\n  (x = )");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK(kind_of([] { parse_formula("x = x"); }) == ErrorKind::ScopeError);
  CHECK(kind_of([] { parse_formula("exists x. (x in"); }) == ErrorKind::SyntaxError);
  CHECK_THROWS_AS(parse_formula("def f(x) := x = x; f(U)"), Error);
  CHECK_NOTHROW(parse_formula("x = x", {"x"}));
  CHECK_NOTHROW(parse_formula("# comment\nexists X. (C2(X) & X subseteq ~{x} union empty)", {"x"}));
}

// ---- evaluation ---------------------------------------------------------------

TEST_CASE("eval examples") {
  ExtRelStruct two(2), three(3);
  CHECK(eval(two, parse_formula("exists x. exists y. !(x = y)")));
  CHECK(eval(two, parse_formula("C2(U)")));
  CHECK_FALSE(eval(three, parse_formula("C2(U)")));
  CHECK_FALSE(eval(ExtRelStruct(1), parse_formula("exists x. exists y. x != y")));
}

TEST_CASE("eval errors") {
  ExtRelStruct a(3);
  CHECK(kind_of([&] { eval(a, parse_formula("exists x. edge(x,x)")); }) == ErrorKind::MissingSymbol);
  a.declare_relation("edge", 2);
  CHECK(kind_of([&] { eval(a, parse_formula("edge(x,x)", {"x"})); }) == ErrorKind::UnboundVariable);
  ExtRelStruct big(14);
  CHECK(kind_of([&] { eval(big, parse_formula("exists X. C2(X)")); }) == ErrorKind::UniverseTooLarge);
  Guards g;
  g.cmso_universe = 14;
  CHECK(eval(big, parse_formula("exists X. C2(X)"), {}, g));
  // a guard makes the same quantifier affordable
  big.declare_predicate("SET", 1);
  big.add_set("SET", Subset(14, {1, 2}));
  CHECK(eval(big, parse_formula("exists X. (SET(X) & !C2(X minus {x}))", {"x"}), {{"x", Value(1u)}}));
}

TEST_CASE("leafset builtins") {
  RootedTree t = laminar_tree(normalize_set_system({Subset(4, {0, 1})}, 4));
  ExtRelStruct a = build_structure(t);
  Formula f = parse_formula("leafset(v) = {x,y}", {"v", "x", "y"});
  int v = t.parent(0);
  CHECK(eval(a, f, {{"v", Value(static_cast<std::uint32_t>(v))}, {"x", Value(0u)}, {"y", Value(1u)}}));
  UnrootedTree u = laminar_tree_bipartitions(oracle::random_laminar_bipartitions(6, 3), 0);
  ExtRelStruct b = build_structure(u);
  Formula g = parse_formula("exists Z. (Z = leafset(s,r) & Z = Z)", {"s", "r"});
  for (auto [x, y] : u.edges()) {
    Env env{{"s", Value(static_cast<std::uint32_t>(x))}, {"r", Value(static_cast<std::uint32_t>(y))}};
    CHECK(eval(b, g, env));
    Subset want(u.size());
    u.side(x, y).for_each([&](std::size_t e) { want.set(static_cast<std::size_t>(u.leaf_node(e))); });
    env["Z"] = want;
    CHECK(eval(b, parse_formula("leafset(s,r) = Z", {"s", "r"}), env));
  }
}

TEST_CASE("guarded evaluation agrees with the reference on the corpus") {
  auto c = corpus();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    // set systems and colours
    SetSystem lam = oracle::random_laminar_family(5, seed);
    ExtRelStruct ls = build_structure(lam);
    RootedTree lt = laminar_tree(lam);
    auto cols = four_bicolourings(lt);
    for (int i = 0; i < 4; ++i) {
      add_colour(ls, "A" + std::to_string(i + 1), cols[i].first.A);
      add_colour(ls, "B" + std::to_string(i + 1), cols[i].first.B);
    }
    check_against_reference(ls, c.at("laminar"), seed);

    check_against_reference(build_structure(oracle::random_rooted_tree(5, seed)), c.at("tree"), seed);
    check_against_reference(build_structure(oracle::random_graph(5, 0.5, seed)), c.at("sets"), seed);
    check_against_reference(build_structure(oracle::random_digraph(4, 0.5, seed)), c.at("sets"), seed);

    // split macros on a copied t-edge tree
    UnrootedTree u = laminar_tree_bipartitions(oracle::random_laminar_bipartitions(4, seed), 0);
    ExtRelStruct us = apply_atom(build_structure(u), Copying{1, "cp"})[0];
    int r = u.inner_nodes().empty() ? 0 : u.inner_nodes()[0];
    add_colour(us, "R", Subset::singleton(us.universe(), static_cast<std::size_t>(r)));
    check_against_reference(us, c.at("split"), seed, 600);

    DiGraph g = oracle::random_graph(4, 0.5, seed);
    check_against_reference(parity_structure(modular_decomposition(g)), c.at("parity"), seed);

    WBTree w = weakly_bipartitive_tree(oracle::weakly_bipartitive_closure(
        {Subset(4, {0, 1}), Subset(4, {1, 2})}, 4));
    check_against_reference(cross_structure(w), c.at("cross"), seed, 60);

    SetSystem mods = modules_set_system(oracle::random_graph(5, 0.5, seed + 10));
    WPTree wp = weakly_partitive_tree(mods);
    ExtRelStruct ws = build_structure(wp.tree);
    ws.declare_predicate("SET", 1);
    for (auto& s : mods.family()) ws.add_set("SET", widen(s, ws.universe()));
    check_against_reference(ws, c.at("degenerate"), seed);
  }
}

TEST_CASE("skeleton macros agree with the reference on a pipeline intermediate") {
  DiGraph g = undirected(4, {{0, 1}, {1, 2}, {2, 3}});
  Pipeline p = pipeline_skeleton();
  // stop right after the second copying atom
  std::size_t cut = 0, copies = 0;
  for (; cut < p.atoms.size(); ++cut)
    if (std::holds_alternative<Copying>(p.atoms[cut]) && ++copies == 2) break;
  REQUIRE(cut < p.atoms.size());
  std::size_t colourings = 0;
  for (std::size_t i = 0; i <= cut; ++i) colourings += std::holds_alternative<Colouring>(p.atoms[i]);
  Pipeline head;
  head.atoms.assign(p.atoms.begin(), p.atoms.begin() + static_cast<long>(cut) + 1);
  head.guesses.assign(p.guesses.begin(), p.guesses.begin() + static_cast<long>(colourings));
  auto mid = run_pipeline(build_structure(g), head, Mode::Guided);
  REQUIRE(mid.size() == 1);
  check_against_reference(mid[0], corpus().at("skeleton"), 7, 300);
}

TEST_CASE("desc and child agree with tree ancestry") {
  for (std::size_t n = 2; n <= 7; ++n) {
    DiGraph g = oracle::random_graph(n, 0.5, n);
    SetSystem strong = strong_members(modules_set_system(g));
    RootedTree t = laminar_tree(strong);
    ExtRelStruct a = build_structure(strong);
    Library lib = parse_library(corpus().at("laminar"));
    Formula desc = parse_formula("desc(X,Y)", {"X", "Y"}, lib);
    Formula child = parse_formula("child(X,Y)", {"X", "Y"}, lib);
    Evaluator ev(a);
    for (int x = 0; x < static_cast<int>(t.size()); ++x)
      for (int y = 0; y < static_cast<int>(t.size()); ++y) {
        Env env{{"X", t.leafset(x)}, {"Y", t.leafset(y)}};
        CHECK(ev.eval(desc, env) == t.is_ancestor(y, x));
        CHECK(ev.eval(child, env) == (t.parent(x) == y));
      }
  }
}

TEST_CASE("repr formulas decode thin sets") {
  Library lib = parse_library(corpus().at("laminar"));
  Formula ra = parse_formula("reprA1(a,X)", {"a", "X"}, lib);
  Formula rb = parse_formula("reprB1(b,X)", {"b", "X"}, lib);
  for (std::size_t n = 2; n <= 7; ++n)
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      RootedTree t = oracle::random_rooted_tree(n, seed * 31 + n);
      SetSystem fam = tree_to_sets(t);
      ThinPartition parts = thin_4_partition(t);
      for (auto& x : parts.classes) {
        BiColouring c = colouring_of(t, identify_thin(t, x));
        IdPair want = decode(t, c);
        ExtRelStruct a = build_structure(fam);
        add_colour(a, "A1", c.A);
        add_colour(a, "B1", c.B);
        std::set<std::pair<std::size_t, Subset>> ga, gb, wa, wb;
        for (int v : want.domain) {
          wa.emplace(want.pi.at(v), t.leafset(v));
          wb.emplace(want.sigma.at(v), t.leafset(v));
        }
        Evaluator ev(a);
        for (auto& s : fam.family())
          for (std::uint32_t e = 0; e < n; ++e) {
            if (ev.eval(ra, {{"a", Value(e)}, {"X", s}})) ga.emplace(e, s);
            if (ev.eval(rb, {{"b", Value(e)}, {"X", s}})) gb.emplace(e, s);
          }
        CHECK(ga == wa);
        CHECK(gb == wb);
      }
    }
}

TEST_CASE("cross is invariant under rotating and reversing cyclic orders") {
  std::size_t linear_seen = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t n = 5 + seed % 3;
    oracle::Rng rng(seed);
    std::vector<Subset> seeds;
    for (int i = 0; i < 3; ++i) {
      std::size_t a = rng.range(0, n - 1), len = rng.range(2, n - 2);
      Subset s(n);
      for (std::size_t k = 0; k < len; ++k) s.set((a + k) % n);
      seeds.push_back(s);
    }
    WBTree w = weakly_bipartitive_tree(oracle::weakly_bipartitive_closure(seeds, n));
    auto base = cross_tuples(w);
    for (auto& [v, order] : w.cyclic) {
      ++linear_seen;
      const std::size_t d = order.size();
      std::size_t at_v = 0;
      for (auto& tu : base) at_v += tu[0] == static_cast<std::uint32_t>(v);
      // 8 orderings of every 4 neighbours
      CHECK(at_v == 8 * (d * (d - 1) * (d - 2) * (d - 3) / 24));
      if (d >= 4)
        CHECK(base.count({static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(order[0]),
                          static_cast<std::uint32_t>(order[1]), static_cast<std::uint32_t>(order[2]),
                          static_cast<std::uint32_t>(order[3])}));
      WBTree rot = w, rev = w;
      std::rotate(rot.cyclic[v].begin(), rot.cyclic[v].begin() + 1, rot.cyclic[v].end());
      std::reverse(rev.cyclic[v].begin(), rev.cyclic[v].end());
      CHECK(cross_tuples(rot) == base);
      CHECK(cross_tuples(rev) == base);
    }
    for (auto& tu : base) CHECK(w.cyclic.count(static_cast<int>(tu[0])));
  }
  CHECK(linear_seen > 0);
}

// ---- atoms ------------------------------------------------------------------

TEST_CASE("atom examples") {
  ExtRelStruct a(2);
  CHECK(apply_atom(a, Filtering{parse_formula("true")}).size() == 1);
  CHECK(apply_atom(a, Filtering{parse_formula("false")}).empty());
  auto c = apply_atom(a, Copying{1, "copy"});
  REQUIRE(c.size() == 1);
  CHECK(c[0].universe() == 4);
  CHECK(c[0].relation("copy1")->contains(0, 2));
  CHECK(c[0].relation("copy1")->contains(1, 3));
  CHECK(c[0].relation("copy1")->size() == 2);
  CHECK(apply_atom(a, Colouring{"C"}, Mode::Exhaustive).size() == 4);
  Guess g = [](const ExtRelStruct& s) { return Subset::singleton(s.universe(), 1); };
  auto one = apply_atom(a, Colouring{"C"}, Mode::Guided, &g);
  REQUIRE(one.size() == 1);
  CHECK(one[0].relation("C")->contains(1u));
  auto r = apply_atom(a, UniverseRestriction{"x", parse_formula("exists y. x != y", {"x"})});
  CHECK(r[0].universe() == 2);
  ExtRelStruct e(3);
  e.declare_relation("edge", 2);
  e.add_tuple("edge", {0, 1});
  Interpretation in{{{"sym", {"x", "y"}, parse_formula("edge(x,y) | edge(y,x)", {"x", "y"})},
                     {"ISO", {"X"}, parse_formula("forall x. (x in X -> !exists y. (edge(x,y) | edge(y,x)))", {}, {})}},
                    {}};
  auto out = apply_atom(e, in)[0];
  CHECK(out.relation("sym")->size() == 2);
  CHECK_FALSE(out.has_relation("edge"));
  CHECK(out.predicate("ISO")->size() == 2);  // {} and {2}
}

TEST_CASE("run_pipeline examples") {
  ExtRelStruct a(3);
  Pipeline empty;
  auto outs = run_pipeline(a, empty, Mode::Exhaustive);
  REQUIRE(outs.size() == 1);
  CHECK(outs[0] == a);
  Pipeline p;
  p.atoms.push_back(Colouring{"C"});
  p.atoms.push_back(Filtering{parse_formula("C = empty")});
  CHECK(run_pipeline(a, p, Mode::Exhaustive).size() == 1);
  CHECK(kind_of([&] { run_pipeline(a, p, Mode::Guided); }) == ErrorKind::InvalidInput);
  CHECK(pipeline_laminar_tree().colourings() == 8);
  CHECK(kind_of([&] { run_pipeline(a, pipeline_skeleton(), Mode::Exhaustive); }) == ErrorKind::InvalidInput);
  Guards tight;
  tight.colour_bits = 4;
  CHECK(kind_of([&] { run_pipeline(build_structure(normalize_set_system({}, 3)), pipeline_laminar_tree(),
                                   Mode::Exhaustive, tight); }) == ErrorKind::TooLarge);
}

// ---- pipelines ----------------------------------------------------------------

TEST_CASE("laminar pipeline") {
  auto one = run_pipeline(build_structure(normalize_set_system({}, 1)), pipeline_laminar_tree(), Mode::Guided);
  REQUIRE(one.size() == 1);
  CHECK(one[0].universe() == 1);
  for (std::size_t n = 1; n <= 7; ++n)
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      SetSystem s = oracle::random_laminar_family(n, seed + 100 * n);
      check_guided(build_structure(s), pipeline_laminar_tree(), laminar_tree(s), compare_laminar);
    }
  for (std::size_t n = 1; n <= 3; ++n)
    for (auto& s : oracle::all_laminar_families(n))
      check_exhaustive(build_structure(s), pipeline_laminar_tree(), laminar_tree(s), compare_laminar);
}

TEST_CASE("weakly-partitive pipeline") {
  DiGraph t3(3);
  t3.add_edge(0, 1);
  t3.add_edge(1, 2);
  t3.add_edge(0, 2);
  SetSystem mods = modules_set_system(t3);
  auto outs = run_pipeline(build_structure(mods), pipeline_weakly_partitive_tree(), Mode::Guided);
  REQUIRE(outs.size() == 1);
  RootedTree t = tree_from_ancestor(outs[0]);
  CHECK(outs[0].relation("DEGENERATE")->size() == 0);
  CHECK(outs[0].relation("betweenness")->size() == 2);  // (0,1,2) and (2,1,0)
  CHECK(outs[0].relation("betweenness")->contains(std::vector<std::uint32_t>{
      static_cast<std::uint32_t>(t.leaf_node(0)), static_cast<std::uint32_t>(t.leaf_node(1)),
      static_cast<std::uint32_t>(t.leaf_node(2))}));
  for (std::size_t n = 2; n <= 7; ++n) {
    DiGraph g = oracle::random_digraph(n, 0.5, n + 40);
    SetSystem m = modules_set_system(g);
    check_guided(build_structure(m), pipeline_weakly_partitive_tree(), weakly_partitive_tree(m),
                 compare_weakly_partitive);
  }
  check_exhaustive(build_structure(mods), pipeline_weakly_partitive_tree(), weakly_partitive_tree(mods),
                   compare_weakly_partitive);
}

TEST_CASE("modular pipeline") {
  DiGraph k3 = undirected(3, {{0, 1}, {0, 2}, {1, 2}});
  auto outs = run_pipeline(build_structure(k3), pipeline_modular(), Mode::Guided);
  REQUIRE(outs.size() == 1);
  CHECK(outs[0].relation("m-edge")->size() == 6);
  for (std::size_t n = 1; n <= 7; ++n)
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
      DiGraph g = seed ? oracle::random_digraph(n, 0.5, seed + n) : oracle::random_graph(n, 0.5, n);
      check_guided(build_structure(g), pipeline_modular(), modular_decomposition(g), compare_modular);
    }
  check_exhaustive(build_structure(k3), pipeline_modular(), modular_decomposition(k3), compare_modular);
}

TEST_CASE("bipartition laminar pipeline") {
  for (std::size_t n = 1; n <= 7; ++n)
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
      BipartitionSystem b = oracle::random_laminar_bipartitions(n, seed + 7 * n);
      for (std::size_t anchor : {std::size_t{0}, n - 1})
        check_guided(build_structure(b), pipeline_bipartition_laminar(anchor), laminar_tree_bipartitions(b, anchor),
                     compare_bipartition_laminar);
    }
  BipartitionSystem b3 = oracle::random_laminar_bipartitions(3, 1);
  check_exhaustive(build_structure(b3), pipeline_bipartition_laminar(), laminar_tree_bipartitions(b3, 0),
                   compare_bipartition_laminar);
}

TEST_CASE("split pipeline") {
  // two triangles sharing a vertex: one strong split
  DiGraph bowtie = undirected(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}});
  auto outs = run_pipeline(build_structure(bowtie), pipeline_split(), Mode::Guided);
  REQUIRE(outs.size() == 1);
  CHECK(compare_split(outs[0], split_decomposition(bowtie)) == "");
  for (std::size_t n = 1; n <= 7; ++n)
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
      DiGraph g = oracle::random_connected_graph(n, 0.4, seed + 11 * n, seed == 1);
      check_guided(build_structure(g), pipeline_split(), split_decomposition(g), compare_split);
    }
  DiGraph p3 = undirected(3, {{0, 1}, {1, 2}});
  check_exhaustive(build_structure(p3), pipeline_split(), split_decomposition(p3), compare_split);
}

TEST_CASE("skeleton pipeline") {
  DiGraph k2 = undirected(2, {{0, 1}});
  check_guided(build_structure(k2), pipeline_skeleton(), skeleton(k2), compare_skeleton);
  DiGraph p4 = undirected(4, {{0, 1}, {1, 2}, {2, 3}});
  auto outs = run_pipeline(build_structure(p4), pipeline_skeleton(), Mode::Guided);
  REQUIRE(outs.size() == 1);
  CHECK(compare_skeleton(outs[0], skeleton(p4)) == "");
  for (std::size_t n = 1; n <= 8; ++n)
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
      DiGraph g = oracle::random_connected_graph(n, 0.4, seed + 13 * n);
      for (std::size_t anchor : {std::size_t{0}, n - 1})
        check_guided(build_structure(g), pipeline_skeleton(anchor), skeleton(g), compare_skeleton);
    }
}

TEST_CASE("comparisons notice differences") {
  SetSystem s = normalize_set_system({Subset(4, {0, 1})}, 4);
  SetSystem other = normalize_set_system({Subset(4, {1, 2})}, 4);
  auto outs = run_pipeline(build_structure(s), pipeline_laminar_tree(), Mode::Guided);
  REQUIRE(outs.size() == 1);
  CHECK(compare_laminar(outs[0], laminar_tree(s)) == "");
  CHECK(compare_laminar(outs[0], laminar_tree(other)) != "");
  ExtRelStruct broken = outs[0];
  broken.remove_relation("ancestor");
  CHECK(kind_of([&] { compare_laminar(broken, laminar_tree(s)); }) == ErrorKind::Inconsistent);
}

// ---- parity -----------------------------------------------------------------

TEST_CASE("even number of modules") {
  CHECK_FALSE(sentence_even_modules(DiGraph(1)));
  CHECK_FALSE(sentence_even_modules(DiGraph(3)));
  CHECK(count_modules(DiGraph(3)) == 7);
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 6; ++n)
    oracle::for_each_graph(n, [&](const DiGraph& g) {
      bool even = count_modules(g) % 2 == 0;
      CHECK(sentence_even_modules(g) == even);
      if (checked++ % 97 == 0) CHECK(sentence_even_modules(g, default_guards(), false) == even);
    });
  DiGraph t3(3);
  t3.add_edge(0, 1);
  t3.add_edge(1, 2);
  t3.add_edge(0, 2);
  CHECK(kind_of([&] { sentence_even_modules(t3); }) == ErrorKind::InvalidInput);
}
