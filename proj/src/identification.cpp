#include "decomp/identification.hpp"

#include <algorithm>

namespace decomp {

namespace {

void check_node_set(const RootedTree& t, const Subset& x) {
  if (x.universe() != t.size())
    throw Error(ErrorKind::InvalidInput, "node set over the wrong universe");
  bool ok = true;
  x.for_each([&](std::size_t v) { ok &= !t.is_leaf(static_cast<int>(v)); });
  if (!ok) throw Error(ErrorKind::InvalidInput, "node set contains a leaf");
}

std::vector<int> sorted_children(const RootedTree& t, int v) {
  auto c = t.children(v);
  std::sort(c.begin(), c.end());
  return c;
}

// Nodes on the path between two nodes, both ends included.
std::vector<int> path_nodes(const RootedTree& t, int u, int v) {
  int w = t.lca(u, v);
  std::vector<int> out;
  for (int x = u; x != w; x = t.parent(x)) out.push_back(x);
  for (int x = v; x != w; x = t.parent(x)) out.push_back(x);
  out.push_back(w);
  return out;
}

Subset leaves_in(const RootedTree& t, int v, const Subset& colour) {
  return t.leafset(v) & colour;
}

// Coloured leaf of T_v not matched inside T_v: -1 if none, -2 if T_v does
// not decode.
long open_leaf(const RootedTree& t, const BiColouring& c, int v) {
  if (t.is_leaf(v)) {
    auto e = static_cast<std::size_t>(t.label(v));
    return c.A.test(e) || c.B.test(e) ? static_cast<long>(e) : -1;
  }
  long a = -1, b = -1;
  int carriers = 0;
  for (int w : t.children(v)) {
    long o = open_leaf(t, c, w);
    if (o == -2) return -2;
    if (o < 0) continue;
    ++carriers;
    long& slot = c.A.test(static_cast<std::size_t>(o)) ? a : b;
    if (slot >= 0) return -2;
    slot = o;
  }
  if (carriers == 2) return -1;
  if (carriers == 1) return a >= 0 ? a : b;
  return -1;
}

}  // namespace

bool is_thin(const RootedTree& t, const Subset& x) {
  check_node_set(t, x);
  bool thin = true;
  x.for_each([&](std::size_t e) {
    int v = static_cast<int>(e);
    int p = t.parent(v);
    if (p < 0) return;
    if (x.test(static_cast<std::size_t>(p))) thin = false;
    bool free_sibling = false;
    for (int s : t.children(p))
      if (s != v && !x.test(static_cast<std::size_t>(s))) free_sibling = true;
    if (!free_sibling) thin = false;
  });
  return thin;
}

ThinPartition thin_4_partition(const RootedTree& t) {
  ThinPartition p;
  for (auto& c : p.classes) c = Subset(t.size());
  Subset designated(t.size());
  for (int v : t.inner_nodes()) {
    auto c = sorted_children(t, v);
    if (!t.is_leaf(c.front())) designated.set(static_cast<std::size_t>(c.front()));
  }
  for (int v : t.inner_nodes()) {
    std::size_t k = 2 * static_cast<std::size_t>(t.depth(v) % 2) +
                    (designated.test(static_cast<std::size_t>(v)) ? 0 : 1);
    p.classes[k].set(static_cast<std::size_t>(v));
  }
  return p;
}

std::size_t avoiding_leaf(const RootedTree& t, const Subset& x, int s) {
  if (!is_thin(t, x)) throw Error(ErrorKind::NotThin, "node set is not thin");
  if (x.test(static_cast<std::size_t>(s))) throw Error(ErrorKind::NodeInX, "start node lies in X");
  int v = s;
  while (!t.is_leaf(v)) {
    int next = -1;
    for (int c : sorted_children(t, v))
      if (!x.test(static_cast<std::size_t>(c))) {
        next = c;
        break;
      }
    // Unreachable for thin X and v not in X, except at a root whose children are all in X.
    if (next < 0) throw Error(ErrorKind::NotThin, "no child outside X");
    v = next;
  }
  return static_cast<std::size_t>(t.label(v));
}

IdPair identify_thin(const RootedTree& t, const Subset& x) {
  if (!is_thin(t, x)) throw Error(ErrorKind::NotThin, "node set is not thin");
  std::vector<int> order;
  x.for_each([&](std::size_t v) { order.push_back(static_cast<int>(v)); });
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::pair(t.depth(a), a) < std::pair(t.depth(b), b);
  });
  IdPair p;
  for (int s : order) {
    std::vector<int> free;
    for (int c : sorted_children(t, s))
      if (!x.test(static_cast<std::size_t>(c))) free.push_back(c);
    if (free.size() < 2) throw Error(ErrorKind::NotThin, "node has fewer than two children outside X");
    p.pi[s] = avoiding_leaf(t, x, free[0]);
    p.sigma[s] = avoiding_leaf(t, x, free[1]);
  }
  p.domain = order;
  std::sort(p.domain.begin(), p.domain.end());
  return p;
}

bool identifies(const RootedTree& t, const IdPair& p) {
  Subset img_pi(t.universe()), img_sigma(t.universe());
  for (int s : p.domain) {
    auto a = p.pi.find(s), b = p.sigma.find(s);
    if (a == p.pi.end() || b == p.sigma.end()) return false;
    if (img_pi.test(a->second) || img_sigma.test(b->second)) return false;
    img_pi.set(a->second);
    img_sigma.set(b->second);
    if (t.lca(t.leaf_node(a->second), t.leaf_node(b->second)) != s) return false;
  }
  return p.pi.size() == p.domain.size() && p.sigma.size() == p.domain.size();
}

bool has_unique_request(const RootedTree& t, const IdPair& p) {
  std::vector<int> requested(t.size(), 0);
  for (int s : p.domain)
    for (int v : path_nodes(t, t.leaf_node(p.pi.at(s)), t.leaf_node(p.sigma.at(s))))
      if (++requested[v] > 1) return false;
  return true;
}

BiColouring colouring_of(const RootedTree& t, const IdPair& p) {
  BiColouring c{Subset(t.universe()), Subset(t.universe())};
  for (auto& [s, a] : p.pi) c.A.set(a);
  for (auto& [s, b] : p.sigma) c.B.set(b);
  return c;
}

NodeClass classify_node(const RootedTree& t, const BiColouring& c, int x) {
  if (t.is_leaf(x)) throw Error(ErrorKind::InvalidInput, "classify_node needs an inner node");
  // d(c) = |A ∩ L(T_c)| - |B ∩ L(T_c)| per child.
  int plus = -1, minus = -1, other = 0;
  for (int ch : sorted_children(t, x)) {
    long d = static_cast<long>(leaves_in(t, ch, c.A).count()) -
             static_cast<long>(leaves_in(t, ch, c.B).count());
    if (d == 0) continue;
    if (d == 1 && plus < 0) plus = ch;
    else if (d == -1 && minus < 0) minus = ch;
    else ++other;
  }
  if (other > 0) throw Error(ErrorKind::Inconsistent, "colouring identifies no set at this node");
  // The leaf of T_ch still waiting for its representative node, or the
  // smallest candidate when the subtree does not decode cleanly.
  auto unmatched = [&](int ch, const Subset& colour) -> long {
    long o = open_leaf(t, c, ch);
    if (o >= 0 && colour.test(static_cast<std::size_t>(o))) return o;
    Subset cand = leaves_in(t, ch, colour);
    return cand.any() ? static_cast<long>(cand.first()) : -1;
  };
  NodeClass r;
  if (plus < 0 && minus < 0) {
    r.kind = NodeCase::Unrequested;
  } else if (plus >= 0 && minus >= 0) {
    r.kind = NodeCase::InS;
    r.a = unmatched(plus, c.A);
    r.b = unmatched(minus, c.B);
  } else {
    r.kind = NodeCase::RequestedOnly;
    r.a = plus >= 0 ? unmatched(plus, c.A) : unmatched(minus, c.B);
  }
  return r;
}

IdPair decode(const RootedTree& t, const BiColouring& c) {
  if (c.A.universe() != t.universe() || c.B.universe() != t.universe())
    throw Error(ErrorKind::InvalidInput, "colouring over the wrong universe");
  if (c.A.intersects(c.B)) throw Error(ErrorKind::Inconsistent, "colour classes intersect");
  if (c.A.count() != c.B.count())
    throw Error(ErrorKind::Inconsistent, "colour classes differ in size");
  // open[v]: coloured leaves of T_v whose representative node lies above v.
  // Under unique request at most one leaf is open per subtree.
  std::vector<long> open(t.size(), -1);
  IdPair p;
  auto inconsistent = [] {
    throw Error(ErrorKind::Inconsistent, "colouring identifies no set of inner nodes");
  };
  for (int v : t.postorder()) {
    if (t.is_leaf(v)) {
      auto e = static_cast<std::size_t>(t.label(v));
      if (c.A.test(e) || c.B.test(e)) open[v] = static_cast<long>(e);
      continue;
    }
    long a = -1, b = -1;
    int carriers = 0;
    for (int w : t.children(v)) {
      if (open[w] < 0) continue;
      ++carriers;
      auto e = static_cast<std::size_t>(open[w]);
      if (c.A.test(e)) {
        if (a >= 0) inconsistent();
        a = open[w];
      } else {
        if (b >= 0) inconsistent();
        b = open[w];
      }
    }
    if (carriers == 2) {
      p.domain.push_back(v);
      p.pi[v] = static_cast<std::size_t>(a);
      p.sigma[v] = static_cast<std::size_t>(b);
    } else if (carriers == 1) {
      open[v] = a >= 0 ? a : b;
    }
  }
  if (open[t.root()] >= 0) inconsistent();
  std::sort(p.domain.begin(), p.domain.end());
  if (!identifies(t, p) || !has_unique_request(t, p)) inconsistent();
  return p;
}

std::vector<std::pair<BiColouring, Subset>> four_bicolourings(const RootedTree& t) {
  std::vector<std::pair<BiColouring, Subset>> out;
  for (auto& cls : thin_4_partition(t).classes)
    out.emplace_back(colouring_of(t, identify_thin(t, cls)), cls);
  return out;
}

}  // namespace decomp
