#pragma once

#include "decomp/core_model.hpp"

namespace decomp {

bool is_laminar(const SetSystem& s);
// One node per family member; leaves get ids 0..n-1 (node i is element i),
// inner nodes follow in canonical family order, the root U comes last.
RootedTree laminar_tree(const SetSystem& s);
SetSystem tree_to_sets(const RootedTree& t);

bool is_laminar_bipartitions(const BipartitionSystem& b);
SetSystem rooted_reduction(const BipartitionSystem& b, std::size_t a);
// Rooted at `anchor` through rooted_reduction; leaves keep ids 0..n-1.
UnrootedTree laminar_tree_bipartitions(const BipartitionSystem& b, std::size_t anchor = 0);
BipartitionSystem unrooted_tree_to_bipartitions(const UnrootedTree& t);

}  // namespace decomp
