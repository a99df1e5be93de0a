#pragma once

#include <map>
#include <utility>
#include <vector>

#include "decomp/core_model.hpp"
#include "decomp/guards.hpp"
#include "decomp/partitive.hpp"

namespace decomp {

// ---- modules -------------------------------------------------------------

bool is_module(const DiGraph& g, const Subset& m);
// Smallest module containing u and v.
Subset smallest_module(const DiGraph& g, std::size_t u, std::size_t v);
SetSystem modules_set_system(const DiGraph& g, const Guards& guards = default_guards());

// Enriched modular decomposition: the weakly-partitive tree of the module
// family plus the sibling pairs (s, t) with edges from L(T_s) to L(T_t).
struct ModularDecomposition {
  WPTree wp;
  std::vector<std::pair<int, int>> m_edges;  // sorted

  const RootedTree& tree() const { return wp.tree; }
  friend bool operator==(const ModularDecomposition&, const ModularDecomposition&) = default;
};

ModularDecomposition modular_decomposition(const DiGraph& g,
                                           const Guards& guards = default_guards());
DiGraph graph_from_modular(const ModularDecomposition& d);

std::size_t count_modules(const DiGraph& g, const Guards& guards = default_guards());
std::size_t count_modules_via_tree(const DiGraph& g, const Guards& guards = default_guards());
// The recurrence itself, on a labelled tree.
std::size_t count_members(const WPTree& w);

// ---- cotrees -------------------------------------------------------------

enum class CoLabel { Series, Parallel, Linear };

const char* colabel_name(CoLabel l);

struct Cotree {
  RootedTree tree;
  std::map<int, CoLabel> label;
  std::map<int, std::vector<int>> order;  // LINEAR nodes, edges point forward

  friend bool operator==(const Cotree&, const Cotree&) = default;
};

// Throws NotCograph naming a PRIME node.
Cotree cotree(const DiGraph& g, const Guards& guards = default_guards());
DiGraph graph_from_cotree(const Cotree& c);

// ---- splits --------------------------------------------------------------

bool is_split(const DiGraph& g, const Subset& side);
BipartitionSystem split_family(const DiGraph& g, const Guards& guards = default_guards());

// Marker uv sits in the component of inner node `node` and points towards
// neighbour `towards`. Markers 0..n-1 are the vertices of G (towards = their
// leaf node).
struct Marker {
  int node = -1;
  int towards = -1;

  friend bool operator==(const Marker&, const Marker&) = default;
};

struct SplitDecomposition {
  WBTree wb;
  std::vector<Marker> markers;
  std::vector<std::pair<int, int>> c_edges;  // directed, sorted
  std::vector<std::pair<int, int>> t_edges;  // (a, b) with a < b, sorted

  const UnrootedTree& tree() const { return wb.tree; }
  std::size_t n() const { return wb.tree.universe(); }
  int component_of(int marker) const { return markers[marker].node; }
  friend bool operator==(const SplitDecomposition&, const SplitDecomposition&) = default;
};

SplitDecomposition split_decomposition(const DiGraph& g, const Guards& guards = default_guards());
DiGraph graph_from_split(const SplitDecomposition& d);

// ---- bi-joins and skeletons ----------------------------------------------

bool is_bijoin(const DiGraph& g, const Subset& side);
BipartitionSystem bijoin_family(const DiGraph& g, const Guards& guards = default_guards());
// Classes of x ~ y iff N(x) \ X = N(y) \ X, ordered by smallest element.
std::vector<Subset> equiv_classes(const DiGraph& g, const Subset& x);

// Class vertex uv_k: class k (0 or 1) of L(T_v^u) at inner node u. Vertices
// 0..n-1 are the vertices of G.
struct ClassVertex {
  int node = -1;
  int towards = -1;
  int index = 0;
  Subset members;
  bool original = false;

  friend bool operator==(const ClassVertex&, const ClassVertex&) = default;
};

struct Skeleton {
  WBTree wb;
  std::vector<ClassVertex> vertices;
  std::vector<std::pair<int, int>> c_edges, t_edges, r_edges;  // a < b, sorted

  const UnrootedTree& tree() const { return wb.tree; }
  std::size_t n() const { return wb.tree.universe(); }
  friend bool operator==(const Skeleton&, const Skeleton&) = default;
};

Skeleton skeleton(const DiGraph& g, const Guards& guards = default_guards());
// Vertices of G are read off the edge kinds alone: no r-edge and not both a
// c-edge and a t-edge.
std::vector<int> skeleton_originals(std::size_t count, const std::vector<std::pair<int, int>>& c,
                                    const std::vector<std::pair<int, int>>& t,
                                    const std::vector<std::pair<int, int>>& r);
DiGraph graph_from_skeleton(const Skeleton& s);

// ---- cut-rank --------------------------------------------------------------

std::size_t cut_rank(const DiGraph& g, const Subset& x);
std::size_t rank_width_of(const DiGraph& g, const UnrootedTree& t,
                          const Guards& guards = default_guards());
// Replaces every inner node of degree > 3 by a path of degree-3 nodes.
UnrootedTree cubic_refinement(const UnrootedTree& t);

}  // namespace decomp
