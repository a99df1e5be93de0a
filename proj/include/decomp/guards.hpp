#pragma once

#include <cstddef>

namespace decomp {

// Enumeration limits. Exceeding one raises an error; nothing is truncated.
struct Guards {
  std::size_t subset_scan = 16;        // 2^n scans (modules, splits, bi-joins)
  std::size_t all_digraphs = 4;        // exhaustive digraph spaces
  std::size_t all_graphs = 6;          // exhaustive undirected spaces
  std::size_t cmso_universe = 12;      // unguarded monadic quantification
  std::size_t colour_bits = 20;        // exhaustive colour bits per guess block
  std::size_t max_branches = 2000000;  // live structures in an exhaustive run
  std::size_t max_degree = 20;         // rank_width_of neighbour subsets
  std::size_t jobs = 1;                // threads for oracle subset scans
};

// Process-wide defaults; the CLI overrides them from --guard / DECOMP_GUARD.
Guards& default_guards();

}  // namespace decomp
