#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "decomp/cmso.hpp"
#include "decomp/laminar.hpp"

namespace decomp::cmso {

long leaf_label(const ExtRelStruct& a, std::size_t e) {
  const std::string& s = a.name(e);
  long v = -1;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty() || v < 0) return -1;
  return v;
}

namespace {

const Relation& need(const ExtRelStruct& a, const std::string& name, std::size_t arity) {
  const Relation* r = a.relation(name);
  if (!r || r->arity() != arity)
    throw Error(ErrorKind::Inconsistent, "output lacks the " + std::to_string(arity) + "-ary relation '" + name + "'");
  return *r;
}

std::string set_str(const Subset& s) { return s.to_string(); }

}  // namespace

RootedTree tree_from_ancestor(const ExtRelStruct& a) {
  const Relation& anc = need(a, "ancestor", 2);
  const std::size_t m = a.universe();
  if (m == 0) throw Error(ErrorKind::Inconsistent, "empty output");
  std::vector<Subset> proper(m);
  for (std::uint32_t x = 0; x < m; ++x) {
    if (!anc.contains(x, x)) throw Error(ErrorKind::Inconsistent, "ancestor is not reflexive at " + a.name(x));
    proper[x] = anc.col(x);
    proper[x].reset(x);
  }
  std::vector<int> parent(m, -1), label(m, -1);
  for (std::uint32_t x = 0; x < m; ++x) {
    if (proper[x].empty()) continue;
    // the deepest proper ancestor
    std::size_t best = m;
    proper[x].for_each([&](std::size_t y) {
      if (best == m || proper[y].count() > proper[best].count()) best = y;
    });
    Subset rest = proper[x];
    rest.reset(best);
    if (!(rest == proper[best])) throw Error(ErrorKind::Inconsistent, "ancestors of " + a.name(x) + " are not a chain");
    parent[x] = static_cast<int>(best);
  }
  std::size_t leaves = 0;
  for (std::uint32_t x = 0; x < m; ++x) {
    Subset below = anc.row(x);
    below.reset(x);
    if (below.empty()) {
      ++leaves;
      label[x] = static_cast<int>(leaf_label(a, x));
    }
  }
  RootedTree t(parent, label, leaves);
  for (std::uint32_t x = 0; x < m; ++x)
    for (std::uint32_t y = 0; y < m; ++y)
      if (anc.contains(x, y) != t.is_ancestor(static_cast<int>(x), static_cast<int>(y)))
        throw Error(ErrorKind::Inconsistent, "ancestor is not transitive");
  return t;
}

UnrootedTree tree_from_tedges(const ExtRelStruct& a) {
  const Relation& te = need(a, "t-edge", 2);
  const std::size_t m = a.universe();
  std::vector<std::pair<int, int>> edges;
  for (auto& t : te.tuples()) {
    if (!te.contains(t[1], t[0])) throw Error(ErrorKind::Inconsistent, "t-edge is not symmetric");
    if (t[0] < t[1]) edges.emplace_back(t[0], t[1]);
  }
  std::vector<int> label(m, -1);
  std::size_t leaves = 0;
  for (std::uint32_t x = 0; x < m; ++x)
    if (te.row(x).count() <= 1) {
      ++leaves;
      label[x] = static_cast<int>(leaf_label(a, x));
    }
  return UnrootedTree(m, edges, label, leaves);
}

std::string compare_laminar(const ExtRelStruct& out, const RootedTree& direct) {
  RootedTree t = tree_from_ancestor(out);
  if (t.universe() != direct.universe())
    return "leaf count " + std::to_string(t.universe()) + " vs " + std::to_string(direct.universe());
  if (t.size() != direct.size())
    return "node count " + std::to_string(t.size()) + " vs " + std::to_string(direct.size());
  SetSystem x = tree_to_sets(t), y = tree_to_sets(direct);
  if (!(x == y)) {
    for (auto& s : y.family())
      if (!x.contains(s)) return "missing leafset " + set_str(s);
    for (auto& s : x.family())
      if (!y.contains(s)) return "extra leafset " + set_str(s);
  }
  return "";
}

namespace {

template <class T>
std::string diff(const std::set<T>& got, const std::set<T>& want, const std::string& what,
                 const std::function<std::string(const T&)>& show) {
  for (auto& w : want)
    if (!got.count(w)) return "missing " + what + " " + show(w);
  for (auto& g : got)
    if (!want.count(g)) return "extra " + what + " " + show(g);
  return "";
}

using Pair = std::pair<Subset, Subset>;
std::string show_pair(const Pair& p) { return set_str(p.first) + "-" + set_str(p.second); }
std::string show_set(const Subset& s) { return set_str(s); }

}  // namespace

std::string compare_weakly_partitive(const ExtRelStruct& out, const WPTree& direct) {
  std::string d = compare_laminar(out, direct.tree);
  if (!d.empty()) return d;
  RootedTree t = tree_from_ancestor(out);
  std::set<Subset> got, want;
  const Relation& deg = need(out, "DEGENERATE", 1);
  deg.unary().for_each([&](std::size_t x) { got.insert(t.leafset(static_cast<int>(x))); });
  for (auto& [v, l] : direct.label)
    if (l == NodeLabel::Degenerate) want.insert(direct.tree.leafset(v));
  d = diff<Subset>(got, want, "DEGENERATE node", show_set);
  if (!d.empty()) return d;
  using Triple = std::tuple<Subset, Subset, Subset>;
  std::set<Triple> gb, wb;
  for (auto& tu : need(out, "betweenness", 3).tuples())
    gb.emplace(t.leafset(tu[0]), t.leafset(tu[1]), t.leafset(tu[2]));
  for (auto [x, y, z] : betweenness(direct))
    wb.emplace(direct.tree.leafset(x), direct.tree.leafset(y), direct.tree.leafset(z));
  return diff<Triple>(gb, wb, "betweenness", [](const Triple& tr) {
    return set_str(std::get<0>(tr)) + "<" + set_str(std::get<1>(tr)) + "<" + set_str(std::get<2>(tr));
  });
}

std::string compare_modular(const ExtRelStruct& out, const ModularDecomposition& direct) {
  std::string d = compare_laminar(out, direct.tree());
  if (!d.empty()) return d;
  RootedTree t = tree_from_ancestor(out);
  std::set<Pair> got, want;
  for (auto& tu : need(out, "m-edge", 2).tuples()) got.emplace(t.leafset(tu[0]), t.leafset(tu[1]));
  for (auto [s, r] : direct.m_edges) want.emplace(direct.tree().leafset(s), direct.tree().leafset(r));
  return diff<Pair>(got, want, "m-edge", show_pair);
}

std::string compare_bipartition_laminar(const ExtRelStruct& out, const UnrootedTree& direct) {
  UnrootedTree t = tree_from_tedges(out);
  if (t.universe() != direct.universe())
    return "leaf count " + std::to_string(t.universe()) + " vs " + std::to_string(direct.universe());
  if (t.size() != direct.size())
    return "node count " + std::to_string(t.size()) + " vs " + std::to_string(direct.size());
  auto x = unrooted_tree_to_bipartitions(t), y = unrooted_tree_to_bipartitions(direct);
  std::set<Subset> got(x.sides().begin(), x.sides().end()), want(y.sides().begin(), y.sides().end());
  return diff<Subset>(got, want, "bipartition", show_set);
}

namespace {

// Keys output elements by a relation to leaf labels (or their own label).
std::vector<Subset> keys_by(const ExtRelStruct& out, const std::string& rel, std::size_t n) {
  const Relation& r = need(out, rel, 2);
  std::vector<Subset> keys(out.universe(), Subset(n));
  for (std::uint32_t x = 0; x < out.universe(); ++x) {
    r.row(x).for_each([&](std::size_t z) {
      long l = leaf_label(out, z);
      if (l < 0 || static_cast<std::size_t>(l) >= n)
        throw Error(ErrorKind::Inconsistent, "'" + rel + "' points at a non-leaf element");
      keys[x].set(static_cast<std::size_t>(l));
    });
  }
  return keys;
}

template <class K>
std::string edge_diff(const ExtRelStruct& out, const std::string& rel, const std::vector<K>& key,
                      const std::vector<std::pair<int, int>>& want_edges, const std::vector<K>& want_key,
                      bool symmetric, const std::function<std::string(const K&)>& show) {
  std::set<std::pair<K, K>> got, want;
  auto add = [&](std::set<std::pair<K, K>>& s, const K& a, const K& b) {
    if (symmetric && b < a)
      s.emplace(b, a);
    else
      s.emplace(a, b);
  };
  for (auto& t : need(out, rel, 2).tuples()) add(got, key[t[0]], key[t[1]]);
  for (auto [a, b] : want_edges) add(want, want_key[a], want_key[b]);
  return diff<std::pair<K, K>>(got, want, rel, [&](const std::pair<K, K>& p) {
    return show(p.first) + "-" + show(p.second);
  });
}

template <class K>
std::string key_diff(const std::vector<K>& got_keys, const std::vector<K>& want_keys,
                     const std::function<std::string(const K&)>& show) {
  std::set<K> got(got_keys.begin(), got_keys.end()), want(want_keys.begin(), want_keys.end());
  if (got.size() != got_keys.size()) return "two output vertices share a key";
  if (want.size() != want_keys.size()) return "two direct vertices share a key";
  return diff<K>(got, want, "vertex", show);
}

}  // namespace

std::string compare_split(const ExtRelStruct& out, const SplitDecomposition& direct) {
  const std::size_t n = direct.n();
  std::vector<Subset> key = keys_by(out, "side", n);
  for (std::size_t x = 0; x < out.universe(); ++x) {
    long l = leaf_label(out, x);
    if (l >= 0) key[x] = Subset::singleton(n, static_cast<std::size_t>(l));
  }
  std::vector<Subset> want(direct.markers.size());
  for (std::size_t k = 0; k < want.size(); ++k) {
    auto& m = direct.markers[k];
    want[k] = (k < n || m.node < 0) ? Subset::singleton(n, k) : direct.tree().side(m.node, m.towards);
  }
  std::string d = key_diff<Subset>(key, want, show_set);
  if (d.empty()) d = edge_diff<Subset>(out, "c-edge", key, direct.c_edges, want, false, show_set);
  if (d.empty()) d = edge_diff<Subset>(out, "t-edge", key, direct.t_edges, want, true, show_set);
  return d;
}

std::string compare_skeleton(const ExtRelStruct& out, const Skeleton& direct) {
  const std::size_t n = direct.n();
  std::vector<Subset> side = keys_by(out, "side", n), cls = keys_by(out, "class", n);
  std::vector<Pair> key(out.universe());
  for (std::size_t x = 0; x < out.universe(); ++x) key[x] = {side[x], cls[x]};
  std::vector<Pair> want;
  for (auto& v : direct.vertices)
    want.emplace_back(v.node < 0 ? v.members : direct.tree().side(v.node, v.towards), v.members);
  std::string d = key_diff<Pair>(key, want, show_pair);
  if (d.empty()) d = edge_diff<Pair>(out, "c-edge", key, direct.c_edges, want, true, show_pair);
  if (d.empty()) d = edge_diff<Pair>(out, "t-edge", key, direct.t_edges, want, true, show_pair);
  if (d.empty()) d = edge_diff<Pair>(out, "r-edge", key, direct.r_edges, want, true, show_pair);
  return d;
}

// ---- parity ------------------------------------------------------------------

ExtRelStruct parity_structure(const ModularDecomposition& d) {
  ExtRelStruct s = build_structure(d.tree());
  s.declare_relation("PRIME", 1);
  s.declare_relation("DEGENERATE", 1);
  for (auto& [v, l] : d.wp.label) {
    if (l == NodeLabel::Linear)
      throw Error(ErrorKind::InvalidInput, "the parity sentence covers undirected graphs only");
    s.add_tuple(l == NodeLabel::Prime ? "PRIME" : "DEGENERATE", {static_cast<std::uint32_t>(v)});
  }
  return s;
}

bool sentence_even_modules(const ExtRelStruct& tree, const Guards& guards) {
  static const Formula f = parse_formula(corpus().at("parity"));
  return eval(tree, f, {}, guards);
}

namespace {

std::string canonical(const ModularDecomposition& d, int v) {
  const RootedTree& t = d.tree();
  if (t.is_leaf(v)) return "L";
  std::vector<std::string> kids;
  for (int c : t.children(v)) kids.push_back(canonical(d, c));
  std::sort(kids.begin(), kids.end());
  std::string s = d.wp.label.at(v) == NodeLabel::Prime ? "P(" : "D(";
  for (auto& k : kids) s += k;
  return s + ")";
}

}  // namespace

bool sentence_even_modules(const DiGraph& g, const Guards& guards, bool cached) {
  ModularDecomposition d = modular_decomposition(g, guards);
  ExtRelStruct s = parity_structure(d);
  if (!cached) return sentence_even_modules(s, guards);
  // The answer depends only on the labelled tree up to isomorphism.
  static std::map<std::string, bool> memo;
  std::string key = canonical(d, d.tree().root());
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  bool r = sentence_even_modules(s, guards);
  memo.emplace(std::move(key), r);
  return r;
}

}  // namespace decomp::cmso
