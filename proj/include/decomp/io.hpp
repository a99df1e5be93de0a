#pragma once

#include <stdexcept>
#include <string>

#include "decomp/core_model.hpp"
#include "decomp/graph_decomp.hpp"
#include "decomp/partitive.hpp"
#include "json.hpp"

// Text formats: edge lists, JSON for every decomposition, DOT for drawing.
namespace decomp::io {

using Json = nlohmann::json;

// Malformed input text, as opposed to a domain failure on well-formed input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Edge list (`n [directed|undirected]` then `u v` lines, `#` comments) or
// graph JSON {"n","directed","edges"}; the first non-blank character decides.
DiGraph parse_graph(const std::string& text);
// {"n","sets"}, normalized.
SetSystem parse_set_system(const std::string& text);
// {"n","sides"}, canonical sides.
BipartitionSystem parse_bipartitions(const std::string& text);
Json parse_json(const std::string& text);

Json to_json(const DiGraph& g);
Json to_json(const SetSystem& s);
Json to_json(const BipartitionSystem& b);
Json to_json(const RootedTree& t);
Json to_json(const UnrootedTree& t);
Json to_json(const WPTree& w);
Json to_json(const WBTree& w);
Json to_json(const ModularDecomposition& d);
Json to_json(const Cotree& c);
Json to_json(const SplitDecomposition& d);
Json to_json(const Skeleton& s);
Json to_json(const ExtRelStruct& a);

// Inverses of to_json. Throw ParseError.
DiGraph graph_from_json(const Json& j);
SetSystem set_system_from_json(const Json& j);
BipartitionSystem bipartitions_from_json(const Json& j);
RootedTree rooted_tree_from_json(const Json& j);
UnrootedTree unrooted_tree_from_json(const Json& j);
WPTree wptree_from_json(const Json& j);
WBTree wbtree_from_json(const Json& j);
ModularDecomposition modular_from_json(const Json& j);
Cotree cotree_from_json(const Json& j);
SplitDecomposition split_from_json(const Json& j);
Skeleton skeleton_from_json(const Json& j);
ExtRelStruct structure_from_json(const Json& j);

std::string to_dot(const RootedTree& t);
std::string to_dot(const UnrootedTree& t);
std::string to_dot(const WPTree& w);
std::string to_dot(const WBTree& w);
std::string to_dot(const ModularDecomposition& d);
std::string to_dot(const Cotree& c);
// c-edges solid, t-edges dashed, markers clustered by tree node.
std::string to_dot(const SplitDecomposition& d);
// c-edges solid, t-edges dashed, r-edges decorated.
std::string to_dot(const Skeleton& s);
// Binary relations as labelled arcs, unary ones in node labels.
std::string to_dot(const ExtRelStruct& a);

}  // namespace decomp::io
