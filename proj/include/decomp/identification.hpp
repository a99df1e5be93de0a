#pragma once

#include <array>
#include <map>
#include <vector>

#include "decomp/core_model.hpp"

// Identifying sets of inner nodes of a rooted tree by pairs of leaf colours.
// Node sets are Subsets over tree node ids; colour classes and the images of
// pi/sigma are leaf labels (universe elements).
namespace decomp {

struct IdPair {
  std::vector<int> domain;  // sorted node ids
  std::map<int, std::size_t> pi, sigma;

  friend bool operator==(const IdPair&, const IdPair&) = default;
};

struct BiColouring {
  Subset A, B;

  friend bool operator==(const BiColouring&, const BiColouring&) = default;
};

// classes[2*p + k]: inner nodes of depth parity p, k = 0 for designated
// children, 1 for the rest.
struct ThinPartition {
  std::array<Subset, 4> classes;
};

enum class NodeCase { Unrequested, RequestedOnly, InS };

struct NodeClass {
  NodeCase kind = NodeCase::Unrequested;
  // Leaf labels: z for RequestedOnly (in a), a and b for InS.
  long a = -1, b = -1;
};

bool is_thin(const RootedTree& t, const Subset& x);
ThinPartition thin_4_partition(const RootedTree& t);
IdPair identify_thin(const RootedTree& t, const Subset& x);
bool identifies(const RootedTree& t, const IdPair& p);
bool has_unique_request(const RootedTree& t, const IdPair& p);
// Leaf label t under s whose path to s avoids X; smallest child ids first.
std::size_t avoiding_leaf(const RootedTree& t, const Subset& x, int s);
NodeClass classify_node(const RootedTree& t, const BiColouring& c, int x);
IdPair decode(const RootedTree& t, const BiColouring& c);
BiColouring colouring_of(const RootedTree& t, const IdPair& p);
std::vector<std::pair<BiColouring, Subset>> four_bicolourings(const RootedTree& t);

}  // namespace decomp
