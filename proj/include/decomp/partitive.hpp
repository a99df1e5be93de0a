#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "decomp/core_model.hpp"
#include "decomp/guards.hpp"

namespace decomp {

enum class NodeLabel { Degenerate, Prime, Linear };

const char* label_name(NodeLabel l);

// Weakly-partitive tree: laminar tree of the strong members, a label per
// inner node, and a child order per LINEAR node.
struct WPTree {
  RootedTree tree;
  std::map<int, NodeLabel> label;
  std::map<int, std::vector<int>> order;

  friend bool operator==(const WPTree&, const WPTree&) = default;
};

// Weakly-bipartitive tree: unrooted laminar tree of the strong bipartitions,
// labels, and a cyclic neighbour order per LINEAR node.
struct WBTree {
  UnrootedTree tree;
  std::map<int, NodeLabel> label;
  std::map<int, std::vector<int>> cyclic;

  friend bool operator==(const WBTree&, const WBTree&) = default;
};

bool is_weakly_partitive(const SetSystem& s);
bool is_partitive(const SetSystem& s);
SetSystem strong_members(const SetSystem& s);
WPTree weakly_partitive_tree(const SetSystem& s);
SetSystem generate_family(const WPTree& t, const Guards& guards = default_guards());
// Triples (x, y, z) of children of a LINEAR node with y strictly between.
std::vector<std::tuple<int, int, int>> betweenness(const WPTree& t);

bool is_weakly_bipartitive(const BipartitionSystem& b);
bool is_bipartitive(const BipartitionSystem& b);
BipartitionSystem strong_bipartitions(const BipartitionSystem& b);
WBTree weakly_bipartitive_tree(const BipartitionSystem& b);
BipartitionSystem generate_bipartition_family(const WBTree& t,
                                              const Guards& guards = default_guards());

}  // namespace decomp
