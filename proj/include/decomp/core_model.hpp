#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "decomp/errors.hpp"
#include "decomp/subset.hpp"

namespace decomp {

// Directed graph on 0..n-1 without self-loops. Undirected graphs are the
// symmetric ones.
class DiGraph {
 public:
  explicit DiGraph(std::size_t n);

  std::size_t n() const { return out_.size(); }
  void add_edge(std::size_t u, std::size_t v);
  void add_undirected_edge(std::size_t u, std::size_t v) {
    add_edge(u, v);
    add_edge(v, u);
  }
  void remove_edge(std::size_t u, std::size_t v);
  bool has_edge(std::size_t u, std::size_t v) const { return out_[u].test(v); }
  const Subset& out(std::size_t u) const { return out_[u]; }
  const Subset& in(std::size_t v) const { return in_[v]; }
  bool is_undirected() const;
  std::size_t edge_count() const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  // Weak connectivity.
  bool is_connected() const;
  // Every vertex reaches every other; same as is_connected() when undirected.
  bool is_strongly_connected() const;
  std::vector<Subset> components() const;
  DiGraph induced(const std::vector<std::size_t>& vertices) const;

  friend bool operator==(const DiGraph& a, const DiGraph& b) { return a.out_ == b.out_; }

 private:
  std::vector<Subset> out_, in_;
};

// Normalized set system: no empty set, U and all singletons present,
// deduplicated, ordered by (size, numeric value).
class SetSystem {
 public:
  SetSystem() = default;
  std::size_t n() const { return n_; }
  const std::vector<Subset>& family() const { return family_; }
  std::size_t size() const { return family_.size(); }
  bool contains(const Subset& s) const { return index_.count(s) != 0; }
  // Position in canonical order, or -1.
  long index_of(const Subset& s) const;

  friend bool operator==(const SetSystem& a, const SetSystem& b) {
    return a.n_ == b.n_ && a.family_ == b.family_;
  }
  friend SetSystem normalize_set_system(const std::vector<Subset>& raw, std::size_t n);

 private:
  std::size_t n_ = 0;
  std::vector<Subset> family_;
  std::unordered_map<Subset, std::size_t> index_;
};

SetSystem normalize_set_system(const std::vector<Subset>& raw, std::size_t n);

// Bipartitions {X, U\X}, each stored as the side that excludes element 0.
class BipartitionSystem {
 public:
  BipartitionSystem() = default;
  std::size_t n() const { return n_; }
  const std::vector<Subset>& sides() const { return sides_; }
  std::size_t size() const { return sides_.size(); }
  // Either side may be passed.
  bool contains(const Subset& side) const;
  static Subset canonical(const Subset& side);

  friend bool operator==(const BipartitionSystem& a, const BipartitionSystem& b) {
    return a.n_ == b.n_ && a.sides_ == b.sides_;
  }
  friend BipartitionSystem normalize_bipartition_system(const std::vector<Subset>& raw,
                                                        std::size_t n);

 private:
  std::size_t n_ = 0;
  std::vector<Subset> sides_;
  std::unordered_set<Subset> index_;
};

BipartitionSystem normalize_bipartition_system(const std::vector<Subset>& raw, std::size_t n);

bool sets_overlap(const Subset& x, const Subset& y);
// Bipartitions given by one side each.
bool bipartitions_overlap(const Subset& x, const Subset& y);

// Rooted tree whose leaves are labelled bijectively by 0..n-1. Inner nodes
// have at least two children.
class RootedTree {
 public:
  RootedTree() = default;
  // parent[v] = -1 for the root; label[v] = element for leaves, -1 otherwise.
  RootedTree(std::vector<int> parent, std::vector<int> label, std::size_t n);

  std::size_t size() const { return parent_.size(); }
  std::size_t universe() const { return n_; }
  int root() const { return root_; }
  int parent(int v) const { return parent_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  bool is_leaf(int v) const { return children_[v].empty(); }
  int label(int v) const { return label_[v]; }
  int leaf_node(std::size_t element) const { return leaf_of_[element]; }
  int depth(int v) const { return depth_[v]; }
  const Subset& leafset(int v) const { return leafset_[v]; }
  const std::vector<int>& parents() const { return parent_; }
  const std::vector<int>& labels() const { return label_; }
  std::vector<int> inner_nodes() const;
  // Children before parents.
  const std::vector<int>& postorder() const { return post_; }
  bool is_ancestor(int a, int v) const;
  int lca(int a, int b) const;

  friend bool operator==(const RootedTree& a, const RootedTree& b) {
    return a.parent_ == b.parent_ && a.label_ == b.label_ && a.n_ == b.n_;
  }

 private:
  std::size_t n_ = 0;
  int root_ = -1;
  std::vector<int> parent_, label_, leaf_of_, depth_, post_;
  std::vector<std::vector<int>> children_;
  std::vector<Subset> leafset_;
};

// Unrooted tree; nodes of degree <= 1 are leaves labelled bijectively by
// 0..n-1, inner nodes have degree >= 3.
class UnrootedTree {
 public:
  UnrootedTree() = default;
  UnrootedTree(std::size_t nodes, const std::vector<std::pair<int, int>>& edges,
               std::vector<int> label, std::size_t n);

  std::size_t size() const { return adj_.size(); }
  std::size_t universe() const { return n_; }
  const std::vector<int>& neighbours(int v) const { return adj_[v]; }
  bool adjacent(int u, int v) const;
  bool is_leaf(int v) const { return adj_[v].size() <= 1; }
  int label(int v) const { return label_[v]; }
  int leaf_node(std::size_t element) const { return leaf_of_[element]; }
  const std::vector<int>& labels() const { return label_; }
  std::vector<int> inner_nodes() const;
  // Edges (u, v) with u < v, sorted.
  std::vector<std::pair<int, int>> edges() const;
  // L(T_v^u): leaves of the component of T - u containing neighbour v.
  const Subset& side(int u, int v) const;

  friend bool operator==(const UnrootedTree& a, const UnrootedTree& b) {
    return a.adj_ == b.adj_ && a.label_ == b.label_ && a.n_ == b.n_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<int> label_, leaf_of_;
  // side_[u][k] = side(u, adj_[u][k])
  std::vector<std::vector<Subset>> side_;
};

// Relation of fixed arity over 0..N-1.
class Relation {
 public:
  Relation() = default;
  Relation(std::size_t arity, std::size_t universe);

  std::size_t arity() const { return arity_; }
  bool insert(std::span<const std::uint32_t> t);
  bool contains(std::span<const std::uint32_t> t) const;
  bool contains(std::uint32_t a) const { return unary_.test(a); }
  bool contains(std::uint32_t a, std::uint32_t b) const { return rows_[a].test(b); }
  std::size_t size() const { return tuples_.size(); }
  // Insertion order.
  const std::vector<std::vector<std::uint32_t>>& tuples() const { return tuples_; }
  std::vector<std::vector<std::uint32_t>> sorted_tuples() const;
  const Subset& unary() const { return unary_; }
  const Subset& row(std::uint32_t a) const { return rows_[a]; }
  const Subset& col(std::uint32_t b) const { return cols_[b]; }

 private:
  std::size_t arity_ = 0;
  std::vector<std::vector<std::uint32_t>> tuples_;
  Subset unary_;
  std::vector<Subset> rows_, cols_;
  std::set<std::vector<std::uint32_t>> keys_;
};

class SetPredicate {
 public:
  SetPredicate() = default;
  explicit SetPredicate(std::size_t arity) : arity_(arity) {}

  std::size_t arity() const { return arity_; }
  bool insert(std::vector<Subset> t);
  bool contains(const std::vector<Subset>& t) const;
  bool contains(const Subset& s) const { return unary_.count(s) != 0; }
  const std::vector<std::vector<Subset>>& tuples() const { return tuples_; }
  // Arity-1 members in insertion order.
  const std::vector<Subset>& members() const { return members_; }
  std::size_t size() const { return tuples_.size(); }

 private:
  std::size_t arity_ = 1;
  std::vector<std::vector<Subset>> tuples_;
  std::vector<Subset> members_;
  std::unordered_set<Subset> unary_;
};

// Extended relational structure: a universe, named relations and named set
// predicates. Elements carry display names for output.
class ExtRelStruct {
 public:
  ExtRelStruct() = default;
  explicit ExtRelStruct(std::size_t universe);

  std::size_t universe() const { return n_; }
  const std::string& name(std::size_t e) const { return names_[e]; }
  void set_name(std::size_t e, std::string s) { names_[e] = std::move(s); }
  const std::vector<std::string>& names() const { return names_; }

  Relation& declare_relation(const std::string& r, std::size_t arity);
  void add_tuple(const std::string& r, std::vector<std::uint32_t> t);
  const Relation* relation(const std::string& r) const;
  bool has_relation(const std::string& r) const { return rels_.count(r) != 0; }
  void remove_relation(const std::string& r) { rels_.erase(r); }
  const std::map<std::string, Relation>& relations() const { return rels_; }

  SetPredicate& declare_predicate(const std::string& p, std::size_t arity);
  void add_set(const std::string& p, const Subset& s);
  const SetPredicate* predicate(const std::string& p) const;
  bool has_predicate(const std::string& p) const { return preds_.count(p) != 0; }
  void remove_predicate(const std::string& p) { preds_.erase(p); }
  const std::map<std::string, SetPredicate>& predicates() const { return preds_; }

  // Exact equality of universe, relations and predicates (names ignored).
  friend bool operator==(const ExtRelStruct& a, const ExtRelStruct& b);

 private:
  std::size_t n_ = 0;
  std::vector<std::string> names_;
  std::map<std::string, Relation> rels_;
  std::map<std::string, SetPredicate> preds_;
};

ExtRelStruct build_structure(const DiGraph& g);
ExtRelStruct build_structure(const SetSystem& s);
ExtRelStruct build_structure(const BipartitionSystem& b);
// Universe = tree nodes; ancestor is reflexive.
ExtRelStruct build_structure(const RootedTree& t);
// Universe = tree nodes; symmetric t-edge relation.
ExtRelStruct build_structure(const UnrootedTree& t);

}  // namespace decomp
