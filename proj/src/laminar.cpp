#include "decomp/laminar.hpp"

#include <algorithm>

namespace decomp {

bool is_laminar(const SetSystem& s) {
  auto& f = s.family();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (sets_overlap(f[i], f[j])) return false;
  return true;
}

RootedTree laminar_tree(const SetSystem& s) {
  if (!is_laminar(s)) throw Error(ErrorKind::NotLaminar, "family contains overlapping sets");
  const std::size_t n = s.n();
  auto& f = s.family();  // ascending (size, value)
  const std::size_t m = f.size();
  // Family positions -> node ids: singletons map to their element.
  std::vector<int> node_of(m);
  int next = static_cast<int>(n);
  for (std::size_t i = 0; i < m; ++i) {
    if (f[i].count() == 1) node_of[i] = static_cast<int>(f[i].first());
    else node_of[i] = next++;
  }
  std::vector<int> parent(m, -1), label(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    if (f[i].count() == 1) label[node_of[i]] = static_cast<int>(f[i].first());
    // Supersets form a chain; the first one met in ascending order is the smallest.
    for (std::size_t j = i + 1; j < m; ++j) {
      if (f[j].count() > f[i].count() && f[i].is_subset_of(f[j])) {
        parent[node_of[i]] = node_of[j];
        break;
      }
    }
  }
  return RootedTree(std::move(parent), std::move(label), n);
}

SetSystem tree_to_sets(const RootedTree& t) {
  std::vector<Subset> raw;
  raw.reserve(t.size());
  for (int v = 0; v < static_cast<int>(t.size()); ++v) raw.push_back(t.leafset(v));
  return normalize_set_system(raw, t.universe());
}

bool is_laminar_bipartitions(const BipartitionSystem& b) {
  auto& f = b.sides();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (bipartitions_overlap(f[i], f[j])) return false;
  return true;
}

SetSystem rooted_reduction(const BipartitionSystem& b, std::size_t a) {
  const std::size_t n = b.n();
  if (a >= n) throw Error(ErrorKind::InvalidInput, "anchor outside universe");
  std::vector<Subset> raw;
  raw.reserve(b.size() + 2);
  for (auto& side : b.sides()) raw.push_back(side.test(a) ? side.complement() : side);
  raw.push_back(Subset::singleton(n, a));
  raw.push_back(Subset::full(n));
  return normalize_set_system(raw, n);
}

UnrootedTree laminar_tree_bipartitions(const BipartitionSystem& b, std::size_t anchor) {
  if (!is_laminar_bipartitions(b))
    throw Error(ErrorKind::NotLaminar, "family contains overlapping bipartitions");
  const std::size_t n = b.n();
  RootedTree rt = laminar_tree(rooted_reduction(b, anchor));
  if (n == 1) return UnrootedTree(1, {}, {0}, 1);
  // The root (U) is the last node id; drop it and join the anchor leaf to U\{a}.
  const int root = rt.root();
  int rest = -1;
  for (int c : rt.children(root))
    if (c != rt.leaf_node(anchor)) rest = c;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> label;
  for (int v = 0; v < static_cast<int>(rt.size()); ++v) {
    if (v == root) continue;
    label.push_back(rt.label(v));
    int p = rt.parent(v);
    if (p >= 0 && p != root) edges.emplace_back(p, v);
  }
  edges.emplace_back(rt.leaf_node(anchor), rest);
  return UnrootedTree(rt.size() - 1, edges, std::move(label), n);
}

BipartitionSystem unrooted_tree_to_bipartitions(const UnrootedTree& t) {
  std::vector<Subset> raw;
  for (auto [u, v] : t.edges()) raw.push_back(t.side(u, v));
  return normalize_bipartition_system(raw, t.universe());
}

}  // namespace decomp
