#include "decomp/core_model.hpp"

#include <algorithm>
#include <deque>

#include "decomp/guards.hpp"

namespace decomp {

const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotLaminar: return "NotLaminar";
    case ErrorKind::NotThin: return "NotThin";
    case ErrorKind::NodeInX: return "NodeInX";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::NotWeaklyPartitive: return "NotWeaklyPartitive";
    case ErrorKind::NotWeaklyBipartitive: return "NotWeaklyBipartitive";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotCograph: return "NotCograph";
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::RequiresUndirected: return "RequiresUndirected";
    case ErrorKind::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ScopeError: return "ScopeError";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::MissingSymbol: return "MissingSymbol";
    case ErrorKind::UniverseTooLarge: return "UniverseTooLarge";
  }
  return "Error";
}

Guards& default_guards() {
  static Guards g;
  return g;
}

std::string Subset::to_string() const {
  std::string s = "{";
  bool first = true;
  for_each([&](std::size_t e) {
    if (!first) s += ",";
    first = false;
    s += std::to_string(e);
  });
  return s + "}";
}

static void check_universe(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "empty universe");
  if (n > kMaxUniverse) throw Error(ErrorKind::TooLarge, "universe exceeds 4096 elements");
}

// ---------------------------------------------------------------- DiGraph

DiGraph::DiGraph(std::size_t n) {
  check_universe(n);
  out_.assign(n, Subset(n));
  in_.assign(n, Subset(n));
}

void DiGraph::add_edge(std::size_t u, std::size_t v) {
  if (u >= n() || v >= n()) throw Error(ErrorKind::InvalidInput, "vertex out of range");
  if (u == v) throw Error(ErrorKind::InvalidInput, "self-loop on " + std::to_string(u));
  out_[u].set(v);
  in_[v].set(u);
}

void DiGraph::remove_edge(std::size_t u, std::size_t v) {
  out_[u].reset(v);
  in_[v].reset(u);
}

bool DiGraph::is_undirected() const { return out_ == in_; }

std::size_t DiGraph::edge_count() const {
  std::size_t c = 0;
  for (auto& r : out_) c += r.count();
  return c;
}

std::vector<std::pair<std::size_t, std::size_t>> DiGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < n(); ++u) out_[u].for_each([&](std::size_t v) { e.emplace_back(u, v); });
  return e;
}

std::vector<Subset> DiGraph::components() const {
  std::vector<Subset> comps;
  Subset seen(n());
  for (std::size_t s = 0; s < n(); ++s) {
    if (seen.test(s)) continue;
    Subset comp(n());
    std::vector<std::size_t> stack{s};
    seen.set(s);
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      comp.set(u);
      Subset nb = (out_[u] | in_[u]) - seen;
      nb.for_each([&](std::size_t v) {
        seen.set(v);
        stack.push_back(v);
      });
    }
    comps.push_back(comp);
  }
  return comps;
}

bool DiGraph::is_connected() const { return components().size() == 1; }

bool DiGraph::is_strongly_connected() const {
  for (bool forward : {true, false}) {
    Subset seen(n());
    std::vector<std::size_t> stack{0};
    seen.set(0);
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      Subset next = (forward ? out_[u] : in_[u]) - seen;
      seen |= next;
      next.for_each([&](std::size_t w) { stack.push_back(w); });
    }
    if (!seen.is_full()) return false;
  }
  return true;
}

DiGraph DiGraph::induced(const std::vector<std::size_t>& vs) const {
  DiGraph h(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (i != j && has_edge(vs[i], vs[j])) h.add_edge(i, j);
  return h;
}

// ---------------------------------------------------------------- systems

long SetSystem::index_of(const Subset& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

SetSystem normalize_set_system(const std::vector<Subset>& raw, std::size_t n) {
  check_universe(n);
  SetSystem s;
  s.n_ = n;
  std::vector<Subset> fam;
  fam.reserve(raw.size() + n + 1);
  for (auto& x : raw) {
    if (x.universe() != n) throw Error(ErrorKind::InvalidInput, "subset over wrong universe");
    if (x.any()) fam.push_back(x);
  }
  fam.push_back(Subset::full(n));
  for (std::size_t i = 0; i < n; ++i) fam.push_back(Subset::singleton(n, i));
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  s.family_ = std::move(fam);
  for (std::size_t i = 0; i < s.family_.size(); ++i) s.index_.emplace(s.family_[i], i);
  return s;
}

Subset BipartitionSystem::canonical(const Subset& side) {
  return side.test(0) ? side.complement() : side;
}

bool BipartitionSystem::contains(const Subset& side) const {
  return index_.count(canonical(side)) != 0;
}

BipartitionSystem normalize_bipartition_system(const std::vector<Subset>& raw, std::size_t n) {
  check_universe(n);
  BipartitionSystem b;
  b.n_ = n;
  std::vector<Subset> sides;
  for (auto& x : raw) {
    if (x.universe() != n) throw Error(ErrorKind::InvalidInput, "subset over wrong universe");
    Subset c = BipartitionSystem::canonical(x);
    if (c.any()) sides.push_back(c);
  }
  if (n >= 2) {
    for (std::size_t a = 0; a < n; ++a)
      sides.push_back(BipartitionSystem::canonical(Subset::singleton(n, a)));
  }
  std::sort(sides.begin(), sides.end());
  sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
  b.sides_ = std::move(sides);
  b.index_.insert(b.sides_.begin(), b.sides_.end());
  return b;
}

bool sets_overlap(const Subset& x, const Subset& y) {
  return x.intersects(y) && !x.is_subset_of(y) && !y.is_subset_of(x);
}

bool bipartitions_overlap(const Subset& x, const Subset& y) {
  Subset xc = x.complement(), yc = y.complement();
  return x.intersects(y) && x.intersects(yc) && xc.intersects(y) && xc.intersects(yc);
}

// ---------------------------------------------------------------- trees

RootedTree::RootedTree(std::vector<int> parent, std::vector<int> label, std::size_t n)
    : n_(n), parent_(std::move(parent)), label_(std::move(label)) {
  check_universe(n);
  const int m = static_cast<int>(parent_.size());
  if (label_.size() != parent_.size()) throw Error(ErrorKind::InvalidInput, "label size mismatch");
  children_.assign(m, {});
  for (int v = 0; v < m; ++v) {
    int p = parent_[v];
    if (p < 0) {
      if (root_ >= 0) throw Error(ErrorKind::InvalidInput, "more than one root");
      root_ = v;
    } else {
      if (p >= m || p == v) throw Error(ErrorKind::InvalidInput, "bad parent id");
      children_[p].push_back(v);
    }
  }
  if (root_ < 0) throw Error(ErrorKind::InvalidInput, "no root");
  depth_.assign(m, -1);
  std::vector<int> order{root_};
  depth_[root_] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int c : children_[order[i]]) {
      depth_[c] = depth_[order[i]] + 1;
      order.push_back(c);
    }
  }
  if (static_cast<int>(order.size()) != m) throw Error(ErrorKind::InvalidInput, "parent chains are cyclic");
  leaf_of_.assign(n, -1);
  for (int v = 0; v < m; ++v) {
    if (children_[v].empty()) {
      int e = label_[v];
      if (e < 0 || static_cast<std::size_t>(e) >= n || leaf_of_[e] >= 0)
        throw Error(ErrorKind::InvalidInput, "leaf labels are not a bijection");
      leaf_of_[e] = v;
    } else {
      if (label_[v] != -1) throw Error(ErrorKind::InvalidInput, "inner node carries a label");
      if (children_[v].size() < 2) throw Error(ErrorKind::InvalidInput, "inner node with one child");
    }
  }
  for (auto l : leaf_of_)
    if (l < 0) throw Error(ErrorKind::InvalidInput, "leaf labels are not a bijection");
  post_.assign(order.rbegin(), order.rend());
  leafset_.assign(m, Subset(n));
  for (int v : post_) {
    if (children_[v].empty()) leafset_[v].set(label_[v]);
    else
      for (int c : children_[v]) leafset_[v] |= leafset_[c];
  }
}

std::vector<int> RootedTree::inner_nodes() const {
  std::vector<int> r;
  for (int v = 0; v < static_cast<int>(size()); ++v)
    if (!is_leaf(v)) r.push_back(v);
  return r;
}

bool RootedTree::is_ancestor(int a, int v) const {
  while (v >= 0 && depth_[v] > depth_[a]) v = parent_[v];
  return v == a;
}

int RootedTree::lca(int a, int b) const {
  while (depth_[a] > depth_[b]) a = parent_[a];
  while (depth_[b] > depth_[a]) b = parent_[b];
  while (a != b) {
    a = parent_[a];
    b = parent_[b];
  }
  return a;
}

UnrootedTree::UnrootedTree(std::size_t nodes, const std::vector<std::pair<int, int>>& edges,
                           std::vector<int> label, std::size_t n)
    : n_(n), label_(std::move(label)) {
  check_universe(n);
  if (label_.size() != nodes) throw Error(ErrorKind::InvalidInput, "label size mismatch");
  if (edges.size() + 1 != nodes) throw Error(ErrorKind::InvalidInput, "tree needs nodes-1 edges");
  adj_.assign(nodes, {});
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= static_cast<int>(nodes) || v >= static_cast<int>(nodes) || u == v)
      throw Error(ErrorKind::InvalidInput, "bad tree edge");
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& a : adj_) {
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end())
      throw Error(ErrorKind::InvalidInput, "duplicate tree edge");
  }
  // connectivity (with nodes-1 edges this also rules out cycles)
  std::vector<char> seen(nodes, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t cnt = 0;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    ++cnt;
    for (int v : adj_[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  if (cnt != nodes) throw Error(ErrorKind::InvalidInput, "tree is not connected");
  leaf_of_.assign(n, -1);
  for (std::size_t v = 0; v < nodes; ++v) {
    if (adj_[v].size() <= 1) {
      int e = label_[v];
      if (e < 0 || static_cast<std::size_t>(e) >= n || leaf_of_[e] >= 0)
        throw Error(ErrorKind::InvalidInput, "leaf labels are not a bijection");
      leaf_of_[e] = static_cast<int>(v);
    } else {
      if (label_[v] != -1) throw Error(ErrorKind::InvalidInput, "inner node carries a label");
      if (adj_[v].size() < 3) throw Error(ErrorKind::InvalidInput, "inner node of degree 2");
    }
  }
  for (auto l : leaf_of_)
    if (l < 0) throw Error(ErrorKind::InvalidInput, "leaf labels are not a bijection");

  // Sides: root at node 0, compute subtree leafsets, then complements.
  side_.assign(nodes, {});
  for (std::size_t v = 0; v < nodes; ++v) side_[v].assign(adj_[v].size(), Subset(n));
  std::vector<int> par(nodes, -1), order{0};
  std::vector<char> vis(nodes, 0);
  vis[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int v : adj_[order[i]])
      if (!vis[v]) {
        vis[v] = 1;
        par[v] = order[i];
        order.push_back(v);
      }
  std::vector<Subset> below(nodes, Subset(n));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (adj_[v].size() <= 1) below[v].set(label_[v]);
    for (int c : adj_[v])
      if (c != par[v]) below[v] |= below[c];
  }
  Subset all = Subset::full(n);
  for (std::size_t u = 0; u < nodes; ++u) {
    for (std::size_t k = 0; k < adj_[u].size(); ++k) {
      int v = adj_[u][k];
      side_[u][k] = (par[v] == static_cast<int>(u)) ? below[v] : all - below[u];
    }
  }
}

bool UnrootedTree::adjacent(int u, int v) const {
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<int> UnrootedTree::inner_nodes() const {
  std::vector<int> r;
  for (int v = 0; v < static_cast<int>(size()); ++v)
    if (!is_leaf(v)) r.push_back(v);
  return r;
}

std::vector<std::pair<int, int>> UnrootedTree::edges() const {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < static_cast<int>(size()); ++u)
    for (int v : adj_[u])
      if (u < v) e.emplace_back(u, v);
  return e;
}

const Subset& UnrootedTree::side(int u, int v) const {
  auto& a = adj_[u];
  auto it = std::lower_bound(a.begin(), a.end(), v);
  if (it == a.end() || *it != v) throw Error(ErrorKind::InvalidInput, "side of a non-edge");
  return side_[u][it - a.begin()];
}

// ---------------------------------------------------------------- structures

Relation::Relation(std::size_t arity, std::size_t universe) : arity_(arity) {
  if (arity == 0) throw Error(ErrorKind::InvalidInput, "relations need arity >= 1");
  if (arity == 1) unary_ = Subset(universe);
  if (arity == 2) {
    rows_.assign(universe, Subset(universe));
    cols_.assign(universe, Subset(universe));
  }
}

bool Relation::insert(std::span<const std::uint32_t> t) {
  if (t.size() != arity_) throw Error(ErrorKind::InvalidInput, "tuple arity mismatch");
  if (contains(t)) return false;
  tuples_.emplace_back(t.begin(), t.end());
  if (arity_ == 1) unary_.set(t[0]);
  else if (arity_ == 2) {
    rows_[t[0]].set(t[1]);
    cols_[t[1]].set(t[0]);
  } else {
    keys_.emplace(t.begin(), t.end());
  }
  return true;
}

bool Relation::contains(std::span<const std::uint32_t> t) const {
  if (arity_ == 1) return unary_.test(t[0]);
  if (arity_ == 2) return rows_[t[0]].test(t[1]);
  return keys_.count(std::vector<std::uint32_t>(t.begin(), t.end())) != 0;
}

std::vector<std::vector<std::uint32_t>> Relation::sorted_tuples() const {
  auto t = tuples_;
  std::sort(t.begin(), t.end());
  return t;
}

bool SetPredicate::insert(std::vector<Subset> t) {
  if (t.size() != arity_) throw Error(ErrorKind::InvalidInput, "predicate arity mismatch");
  if (contains(t)) return false;
  if (arity_ == 1) {
    members_.push_back(t[0]);
    unary_.insert(t[0]);
  }
  tuples_.push_back(std::move(t));
  return true;
}

bool SetPredicate::contains(const std::vector<Subset>& t) const {
  if (arity_ == 1) return unary_.count(t[0]) != 0;
  return std::find(tuples_.begin(), tuples_.end(), t) != tuples_.end();
}

ExtRelStruct::ExtRelStruct(std::size_t universe) : n_(universe) {
  if (universe > 64 * kMaxUniverse) throw Error(ErrorKind::TooLarge, "structure too large");
  names_.reserve(universe);
  for (std::size_t i = 0; i < universe; ++i) names_.push_back(std::to_string(i));
}

Relation& ExtRelStruct::declare_relation(const std::string& r, std::size_t arity) {
  auto it = rels_.find(r);
  if (it != rels_.end()) {
    if (it->second.arity() != arity) throw Error(ErrorKind::InvalidInput, "arity clash for " + r);
    return it->second;
  }
  return rels_.emplace(r, Relation(arity, n_)).first->second;
}

void ExtRelStruct::add_tuple(const std::string& r, std::vector<std::uint32_t> t) {
  for (auto x : t)
    if (x >= n_) throw Error(ErrorKind::InvalidInput, "tuple element outside universe");
  declare_relation(r, t.size()).insert(t);
}

const Relation* ExtRelStruct::relation(const std::string& r) const {
  auto it = rels_.find(r);
  return it == rels_.end() ? nullptr : &it->second;
}

SetPredicate& ExtRelStruct::declare_predicate(const std::string& p, std::size_t arity) {
  auto it = preds_.find(p);
  if (it != preds_.end()) {
    if (it->second.arity() != arity) throw Error(ErrorKind::InvalidInput, "arity clash for " + p);
    return it->second;
  }
  return preds_.emplace(p, SetPredicate(arity)).first->second;
}

void ExtRelStruct::add_set(const std::string& p, const Subset& s) {
  if (s.universe() != n_) throw Error(ErrorKind::InvalidInput, "predicate set over wrong universe");
  declare_predicate(p, 1).insert({s});
}

const SetPredicate* ExtRelStruct::predicate(const std::string& p) const {
  auto it = preds_.find(p);
  return it == preds_.end() ? nullptr : &it->second;
}

bool operator==(const ExtRelStruct& a, const ExtRelStruct& b) {
  if (a.n_ != b.n_ || a.rels_.size() != b.rels_.size() || a.preds_.size() != b.preds_.size())
    return false;
  for (auto& [name, r] : a.rels_) {
    auto* o = b.relation(name);
    if (!o || o->arity() != r.arity() || o->size() != r.size()) return false;
    for (auto& t : r.tuples())
      if (!o->contains(t)) return false;
  }
  for (auto& [name, p] : a.preds_) {
    auto* o = b.predicate(name);
    if (!o || o->arity() != p.arity() || o->size() != p.size()) return false;
    for (auto& t : p.tuples())
      if (!o->contains(t)) return false;
  }
  return true;
}

ExtRelStruct build_structure(const DiGraph& g) {
  ExtRelStruct s(g.n());
  s.declare_relation("edge", 2);
  for (auto [u, v] : g.edges())
    s.add_tuple("edge", {static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
  return s;
}

ExtRelStruct build_structure(const SetSystem& ss) {
  ExtRelStruct s(ss.n());
  s.declare_predicate("SET", 1);
  for (auto& x : ss.family()) s.add_set("SET", x);
  return s;
}

ExtRelStruct build_structure(const BipartitionSystem& b) {
  ExtRelStruct s(b.n());
  s.declare_predicate("BIPART", 1);
  for (auto& x : b.sides()) s.add_set("BIPART", x);
  return s;
}

ExtRelStruct build_structure(const RootedTree& t) {
  ExtRelStruct s(t.size());
  s.declare_relation("ancestor", 2);
  for (int v = 0; v < static_cast<int>(t.size()); ++v) {
    for (int a = v; a >= 0; a = t.parent(a))
      s.add_tuple("ancestor", {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(v)});
  }
  return s;
}

ExtRelStruct build_structure(const UnrootedTree& t) {
  ExtRelStruct s(t.size());
  s.declare_relation("t-edge", 2);
  for (auto [u, v] : t.edges()) {
    s.add_tuple("t-edge", {static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
    s.add_tuple("t-edge", {static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(u)});
  }
  return s;
}

}  // namespace decomp
