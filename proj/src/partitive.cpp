#include "decomp/partitive.hpp"

#include <algorithm>
#include <unordered_set>

#include "decomp/laminar.hpp"

namespace decomp {

const char* label_name(NodeLabel l) {
  switch (l) {
    case NodeLabel::Degenerate: return "DEGENERATE";
    case NodeLabel::Prime: return "PRIME";
    case NodeLabel::Linear: return "LINEAR";
  }
  return "?";
}

namespace {

Subset union_of(const RootedTree& t, const std::vector<int>& nodes) {
  Subset u(t.universe());
  for (int c : nodes) u |= t.leafset(c);
  return u;
}

// Children of t as a bitmask over positions in `kids`; nullopt unless X is a
// union of child leafsets.
std::optional<std::uint64_t> child_mask(const std::vector<Subset>& kid_sets, const Subset& x) {
  std::uint64_t m = 0;
  Subset covered(x.universe());
  for (std::size_t i = 0; i < kid_sets.size(); ++i) {
    if (kid_sets[i].is_subset_of(x)) {
      m |= std::uint64_t{1} << i;
      covered |= kid_sets[i];
    } else if (kid_sets[i].intersects(x)) {
      return std::nullopt;
    }
  }
  if (!(covered == x)) return std::nullopt;
  return m;
}

// Chain the 2-sets into a path (cyclic == false) or a cycle over 0..k-1.
std::optional<std::vector<int>> chain(std::size_t k, const std::vector<std::pair<int, int>>& pairs,
                                      bool cyclic) {
  std::vector<std::vector<int>> adj(k);
  for (auto [a, b] : pairs) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::size_t want = cyclic ? k : k - 1;
  if (pairs.size() != want) return std::nullopt;
  int start = -1;
  for (std::size_t v = 0; v < k; ++v) {
    if (adj[v].size() > 2 || adj[v].empty()) return std::nullopt;
    if (!cyclic && adj[v].size() == 1 && start < 0) start = static_cast<int>(v);
    if (cyclic && adj[v].size() != 2) return std::nullopt;
  }
  if (cyclic) start = 0;
  if (start < 0) return std::nullopt;
  std::vector<int> seq{start};
  int prev = -1, cur = start;
  while (seq.size() < k) {
    int next = -1;
    for (int w : adj[cur])
      if (w != prev && (seq.size() < 2 || w != seq[seq.size() - 2])) {
        next = w;
        break;
      }
    if (next < 0 || std::find(seq.begin(), seq.end(), next) != seq.end()) return std::nullopt;
    seq.push_back(next);
    prev = cur;
    cur = next;
  }
  return seq;
}

std::uint64_t interval_mask(const std::vector<int>& seq, std::size_t from, std::size_t len) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < len; ++i) m |= std::uint64_t{1} << seq[(from + i) % seq.size()];
  return m;
}

void check_degree(std::size_t k, const Guards& guards) {
  if (k > guards.max_degree || k > 63)
    throw Error(ErrorKind::TooLarge, "node degree " + std::to_string(k) + " exceeds guard");
}

}  // namespace

bool is_weakly_partitive(const SetSystem& s) {
  auto& f = s.family();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (!sets_overlap(f[i], f[j])) continue;
      if (!s.contains(f[i] | f[j]) || !s.contains(f[i] & f[j]) || !s.contains(f[i] - f[j]) ||
          !s.contains(f[j] - f[i]))
        return false;
    }
  return true;
}

bool is_partitive(const SetSystem& s) {
  if (!is_weakly_partitive(s)) return false;
  auto& f = s.family();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (sets_overlap(f[i], f[j]) && !s.contains(f[i] ^ f[j])) return false;
  return true;
}

SetSystem strong_members(const SetSystem& s) {
  auto& f = s.family();
  std::vector<bool> strong(f.size(), true);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (sets_overlap(f[i], f[j])) strong[i] = strong[j] = false;
  std::vector<Subset> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (strong[i]) out.push_back(f[i]);
  return normalize_set_system(out, s.n());
}

WPTree weakly_partitive_tree(const SetSystem& s) {
  if (!is_weakly_partitive(s))
    throw Error(ErrorKind::NotWeaklyPartitive, "family is not weakly-partitive");
  SetSystem strong = strong_members(s);
  WPTree w;
  w.tree = laminar_tree(strong);
  const RootedTree& t = w.tree;
  // Non-strong members grouped by their lowest strong superset.
  std::map<int, std::vector<std::uint64_t>> members;
  std::map<int, std::vector<Subset>> kid_sets;
  for (int v : t.inner_nodes()) {
    check_degree(t.children(v).size(), default_guards());
    for (int c : t.children(v)) kid_sets[v].push_back(t.leafset(c));
  }
  for (auto& x : s.family()) {
    if (strong.contains(x)) continue;
    int v = t.leaf_node(x.first());
    x.for_each([&](std::size_t e) { v = t.lca(v, t.leaf_node(e)); });
    auto m = child_mask(kid_sets[v], x);
    if (!m) throw Error(ErrorKind::NotWeaklyPartitive, "member is not a union of children");
    members[v].push_back(*m);
  }
  for (int v : t.inner_nodes()) {
    auto& kids = t.children(v);
    const std::size_t k = kids.size();
    std::unordered_set<std::uint64_t> at(members[v].begin(), members[v].end());
    bool degenerate = true;
    for (std::size_t i = 0; i < k && degenerate; ++i)
      for (std::size_t j = i + 1; j < k && degenerate; ++j)
        if (!at.count((std::uint64_t{1} << i) | (std::uint64_t{1} << j))) degenerate = false;
    if (k == 2 || degenerate) {
      w.label[v] = NodeLabel::Degenerate;
      continue;
    }
    if (at.empty()) {
      w.label[v] = NodeLabel::Prime;
      continue;
    }
    w.label[v] = NodeLabel::Linear;
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (at.count((std::uint64_t{1} << i) | (std::uint64_t{1} << j)))
          pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    auto seq = chain(k, pairs, false);
    if (!seq) throw Error(ErrorKind::NotWeaklyPartitive, "LINEAR node without a consistent order");
    // Members at v must be exactly the intervals of length 2..k-1.
    std::unordered_set<std::uint64_t> intervals;
    for (std::size_t len = 2; len < k; ++len)
      for (std::size_t from = 0; from + len <= k; ++from)
        intervals.insert(interval_mask(*seq, from, len));
    if (intervals != at)
      throw Error(ErrorKind::NotWeaklyPartitive, "LINEAR node members are not its intervals");
    std::vector<int> order;
    for (int p : *seq) order.push_back(kids[static_cast<std::size_t>(p)]);
    if (order.back() < order.front()) std::reverse(order.begin(), order.end());
    w.order[v] = order;
  }
  return w;
}

SetSystem generate_family(const WPTree& w, const Guards& guards) {
  const RootedTree& t = w.tree;
  std::vector<Subset> raw;
  for (int v = 0; v < static_cast<int>(t.size()); ++v) raw.push_back(t.leafset(v));
  for (auto& [v, lab] : w.label) {
    if (lab == NodeLabel::Prime) continue;
    if (lab == NodeLabel::Degenerate) {
      auto& kids = t.children(v);
      check_degree(kids.size(), guards);
      for (std::uint64_t m = 1; m < (std::uint64_t{1} << kids.size()); ++m) {
        std::vector<int> pick;
        for (std::size_t i = 0; i < kids.size(); ++i)
          if ((m >> i) & 1) pick.push_back(kids[i]);
        raw.push_back(union_of(t, pick));
      }
    } else {
      auto& ord = w.order.at(v);
      for (std::size_t from = 0; from < ord.size(); ++from) {
        Subset u(t.universe());
        for (std::size_t to = from; to < ord.size(); ++to) {
          u |= t.leafset(ord[to]);
          raw.push_back(u);
        }
      }
    }
  }
  return normalize_set_system(raw, t.universe());
}

std::vector<std::tuple<int, int, int>> betweenness(const WPTree& w) {
  std::vector<std::tuple<int, int, int>> out;
  for (auto& [v, ord] : w.order)
    for (std::size_t i = 0; i < ord.size(); ++i)
      for (std::size_t j = i + 1; j < ord.size(); ++j)
        for (std::size_t k = j + 1; k < ord.size(); ++k) {
          out.emplace_back(ord[i], ord[j], ord[k]);
          out.emplace_back(ord[k], ord[j], ord[i]);
        }
  std::sort(out.begin(), out.end());
  return out;
}

// ------------------------------------------------------------ bipartitions

namespace {

// The four (or five) results for overlapping sides x, y as sides.
bool bip_closed(const BipartitionSystem& b, const Subset& x, const Subset& y, bool sym) {
  Subset xc = x.complement(), yc = y.complement();
  if (!b.contains(x & y) || !b.contains(x & yc) || !b.contains(xc & y) || !b.contains(xc & yc))
    return false;
  return !sym || b.contains(x ^ y);
}

}  // namespace

bool is_weakly_bipartitive(const BipartitionSystem& b) {
  auto& f = b.sides();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (bipartitions_overlap(f[i], f[j]) && !bip_closed(b, f[i], f[j], false)) return false;
  return true;
}

bool is_bipartitive(const BipartitionSystem& b) {
  auto& f = b.sides();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (bipartitions_overlap(f[i], f[j]) && !bip_closed(b, f[i], f[j], true)) return false;
  return true;
}

BipartitionSystem strong_bipartitions(const BipartitionSystem& b) {
  auto& f = b.sides();
  std::vector<bool> strong(f.size(), true);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (bipartitions_overlap(f[i], f[j])) strong[i] = strong[j] = false;
  std::vector<Subset> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (strong[i]) out.push_back(f[i]);
  return normalize_bipartition_system(out, b.n());
}

WBTree weakly_bipartitive_tree(const BipartitionSystem& b) {
  if (!is_weakly_bipartitive(b))
    throw Error(ErrorKind::NotWeaklyBipartitive, "family is not weakly-bipartitive");
  BipartitionSystem strong = strong_bipartitions(b);
  WBTree w;
  w.tree = laminar_tree_bipartitions(strong);
  const UnrootedTree& t = w.tree;
  auto inner = t.inner_nodes();
  std::map<int, std::vector<Subset>> nb_sets;
  for (int v : inner) {
    check_degree(t.neighbours(v).size(), default_guards());
    for (int c : t.neighbours(v)) nb_sets[v].push_back(t.side(v, c));
  }
  // Non-strong members are unions of neighbour sides at exactly one node.
  std::map<int, std::vector<std::uint64_t>> members;
  for (auto& x : b.sides()) {
    if (strong.contains(x)) continue;
    bool placed = false;
    for (int v : inner) {
      auto m = child_mask(nb_sets[v], x);
      if (!m) continue;
      std::size_t c = static_cast<std::size_t>(std::popcount(*m));
      if (c < 2 || c + 2 > nb_sets[v].size()) continue;
      members[v].push_back(*m);
      placed = true;
      break;
    }
    if (!placed) throw Error(ErrorKind::NotWeaklyBipartitive, "member is not a union of sides");
  }
  for (int v : inner) {
    auto& nbs = t.neighbours(v);
    const std::size_t d = nbs.size();
    const std::uint64_t all = (std::uint64_t{1} << d) - 1;
    // Store each member bipartition under both sides.
    std::unordered_set<std::uint64_t> at;
    for (auto m : members[v]) {
      at.insert(m);
      at.insert(all & ~m);
    }
    bool degenerate = true;
    for (std::size_t i = 0; i < d && degenerate; ++i)
      for (std::size_t j = i + 1; j < d && degenerate; ++j) {
        std::uint64_t m = (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
        if (d > 3 && !at.count(m)) degenerate = false;
      }
    if (d == 3 || degenerate) {
      w.label[v] = NodeLabel::Degenerate;
      continue;
    }
    if (at.empty()) {
      w.label[v] = NodeLabel::Prime;
      continue;
    }
    w.label[v] = NodeLabel::Linear;
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (at.count((std::uint64_t{1} << i) | (std::uint64_t{1} << j)))
          pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    auto seq = chain(d, pairs, true);
    if (!seq) throw Error(ErrorKind::NotWeaklyBipartitive, "LINEAR node without a cyclic order");
    // Members at v must be exactly the arcs of length 2..d-2.
    std::unordered_set<std::uint64_t> arcs;
    for (std::size_t len = 2; len + 2 <= d; ++len)
      for (std::size_t from = 0; from < d; ++from) arcs.insert(interval_mask(*seq, from, len));
    if (arcs != at)
      throw Error(ErrorKind::NotWeaklyBipartitive, "LINEAR node members are not its arcs");
    std::vector<int> cyc;
    for (int p : *seq) cyc.push_back(nbs[static_cast<std::size_t>(p)]);
    // Smallest id first, then the smaller of its two cycle neighbours.
    auto first = std::min_element(cyc.begin(), cyc.end());
    std::rotate(cyc.begin(), first, cyc.end());
    if (cyc.back() < cyc[1]) std::reverse(cyc.begin() + 1, cyc.end());
    w.cyclic[v] = cyc;
  }
  return w;
}

BipartitionSystem generate_bipartition_family(const WBTree& w, const Guards& guards) {
  const UnrootedTree& t = w.tree;
  std::vector<Subset> raw;
  for (auto [u, v] : t.edges()) raw.push_back(t.side(u, v));
  for (auto& [v, lab] : w.label) {
    if (lab == NodeLabel::Prime) continue;
    auto& nbs = t.neighbours(v);
    if (lab == NodeLabel::Degenerate) {
      check_degree(nbs.size(), guards);
      // Subsets containing the first neighbour cover every bipartition once.
      for (std::uint64_t m = 1; m < (std::uint64_t{1} << nbs.size()); m += 2) {
        Subset u(t.universe());
        for (std::size_t i = 0; i < nbs.size(); ++i)
          if ((m >> i) & 1) u |= t.side(v, nbs[i]);
        if (!u.is_full()) raw.push_back(u);
      }
    } else {
      auto& cyc = w.cyclic.at(v);
      for (std::size_t from = 0; from < cyc.size(); ++from) {
        Subset u(t.universe());
        for (std::size_t len = 1; len < cyc.size(); ++len) {
          u |= t.side(v, cyc[(from + len - 1) % cyc.size()]);
          raw.push_back(u);
        }
      }
    }
  }
  return normalize_bipartition_system(raw, t.universe());
}

}  // namespace decomp
