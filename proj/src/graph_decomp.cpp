#include "decomp/graph_decomp.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <unordered_set>

namespace decomp {

namespace {

void check_scan(const DiGraph& g, const Guards& guards) {
  if (g.n() > guards.subset_scan)
    throw Error(ErrorKind::TooLarge,
                "enumeration limited to n <= " + std::to_string(guards.subset_scan));
}

void check_side(const DiGraph& g, const Subset& x) {
  if (x.universe() != g.n()) throw Error(ErrorKind::InvalidInput, "subset over the wrong universe");
}

void require_undirected(const DiGraph& g) {
  if (!g.is_undirected()) throw Error(ErrorKind::RequiresUndirected, "graph must be undirected");
}

// z leaves m intact iff its out- and in-neighbourhoods meet m in nothing or all of m.
bool splits_off(const DiGraph& g, std::size_t z, const Subset& m) {
  Subset o = g.out(z) & m, i = g.in(z) & m;
  return (o.any() && !(o == m)) || (i.any() && !(i == m));
}

Subset out_of(const DiGraph& g, const Subset& x) {
  Subset r(g.n());
  x.for_each([&](std::size_t v) { r |= g.out(v); });
  return r;
}

// Sides excluding element 0, i.e. non-empty subsets of {1..n-1}.
template <class F>
void for_each_side(std::size_t n, F&& f) {
  if (n < 2) return;
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t m = 1; m < count; ++m) f(Subset::from_mask(n, m << 1));
}

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair(a, b) : std::pair(b, a); }

void sort_unique(std::vector<std::pair<int, int>>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Inner neighbour of a leaf node (or -1).
int attachment(const UnrootedTree& t, int leaf) {
  auto& nb = t.neighbours(leaf);
  if (nb.empty() || t.is_leaf(nb.front())) return -1;
  return nb.front();
}

}  // namespace

// ---- modules -------------------------------------------------------------

bool is_module(const DiGraph& g, const Subset& m) {
  check_side(g, m);
  if (m.count() <= 1) return true;
  for (std::size_t z = 0; z < g.n(); ++z)
    if (!m.test(z) && splits_off(g, z, m)) return false;
  return true;
}

Subset smallest_module(const DiGraph& g, std::size_t u, std::size_t v) {
  Subset m(g.n(), {u, v});
  bool grown = true;
  while (grown) {
    grown = false;
    for (std::size_t z = 0; z < g.n(); ++z)
      if (!m.test(z) && splits_off(g, z, m)) {
        m.set(z);
        grown = true;
      }
  }
  return m;
}

SetSystem modules_set_system(const DiGraph& g, const Guards& guards) {
  check_scan(g, guards);
  const std::size_t n = g.n();
  std::unordered_set<Subset> fam;
  std::vector<Subset> all;
  std::deque<Subset> work;
  auto add = [&](const Subset& s) {
    if (s.empty() || !fam.insert(s).second) return;
    all.push_back(s);
    work.push_back(s);
  };
  add(Subset::full(n));
  for (std::size_t u = 0; u < n; ++u) add(Subset::singleton(n, u));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) add(smallest_module(g, u, v));
  // Overlapping modules are closed under union, intersection and difference.
  while (!work.empty()) {
    Subset x = work.front();
    work.pop_front();
    for (std::size_t i = 0; i < all.size(); ++i) {
      const Subset y = all[i];
      if (!sets_overlap(x, y)) continue;
      add(x | y);
      add(x & y);
      add(x - y);
      add(y - x);
    }
  }
  return normalize_set_system(all, n);
}

ModularDecomposition modular_decomposition(const DiGraph& g, const Guards& guards) {
  if (g.n() == 0) throw Error(ErrorKind::InvalidInput, "empty graph");
  ModularDecomposition d;
  d.wp = weakly_partitive_tree(modules_set_system(g, guards));
  const RootedTree& t = d.wp.tree;
  for (int v : t.inner_nodes())
    for (int s : t.children(v))
      for (int r : t.children(v)) {
        if (s == r) continue;
        auto x = t.leafset(s).first(), y = t.leafset(r).first();
        if (g.has_edge(x, y)) d.m_edges.emplace_back(s, r);
      }
  std::sort(d.m_edges.begin(), d.m_edges.end());
  return d;
}

DiGraph graph_from_modular(const ModularDecomposition& d) {
  const RootedTree& t = d.tree();
  DiGraph g(t.universe());
  for (auto [s, r] : d.m_edges) {
    if (t.parent(s) != t.parent(r) || t.parent(s) < 0 || s == r)
      throw Error(ErrorKind::InvalidInput, "m-edge between non-siblings");
    t.leafset(s).for_each([&](std::size_t x) {
      t.leafset(r).for_each([&](std::size_t y) { g.add_edge(x, y); });
    });
  }
  return g;
}

std::size_t count_modules(const DiGraph& g, const Guards& guards) {
  check_scan(g, guards);
  const std::size_t n = g.n();
  std::size_t c = 0;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m)
    if (is_module(g, Subset::from_mask(n, m))) ++c;
  return c;
}

std::size_t count_members(const WPTree& w) {
  const RootedTree& t = w.tree;
  std::vector<std::size_t> m(t.size(), 0);
  for (int v : t.postorder()) {
    if (t.is_leaf(v)) {
      m[v] = 1;
      continue;
    }
    std::size_t k = t.children(v).size(), sum = 0;
    for (int c : t.children(v)) sum += m[c];
    switch (w.label.at(v)) {
      case NodeLabel::Prime: m[v] = 1 + sum; break;
      case NodeLabel::Degenerate: m[v] = ((std::size_t{1} << k) - 1 - k) + sum; break;
      case NodeLabel::Linear: m[v] = k * (k - 1) / 2 + sum; break;
    }
  }
  return m[t.root()];
}

std::size_t count_modules_via_tree(const DiGraph& g, const Guards& guards) {
  return count_members(modular_decomposition(g, guards).wp);
}

// ---- cotrees -------------------------------------------------------------

const char* colabel_name(CoLabel l) {
  switch (l) {
    case CoLabel::Series: return "SERIES";
    case CoLabel::Parallel: return "PARALLEL";
    case CoLabel::Linear: return "LINEAR";
  }
  return "?";
}

Cotree cotree(const DiGraph& g, const Guards& guards) {
  ModularDecomposition d = modular_decomposition(g, guards);
  const RootedTree& t = d.tree();
  Cotree c;
  c.tree = t;
  auto arc = [&](int s, int r) {
    return std::binary_search(d.m_edges.begin(), d.m_edges.end(), std::pair(s, r));
  };
  for (int v : t.inner_nodes()) {
    auto kids = t.children(v);
    std::sort(kids.begin(), kids.end());
    const std::size_t k = kids.size();
    switch (d.wp.label.at(v)) {
      case NodeLabel::Prime:
        throw Error(ErrorKind::NotCograph, "witness node " + std::to_string(v) + " is PRIME over " +
                                               t.leafset(v).to_string());
      case NodeLabel::Degenerate: {
        std::size_t arcs = 0;
        for (int s : kids)
          for (int r : kids)
            if (s != r && arc(s, r)) ++arcs;
        if (arcs == k * (k - 1)) {
          c.label[v] = CoLabel::Series;
        } else if (arcs == 0) {
          c.label[v] = CoLabel::Parallel;
        } else if (k == 2 && arcs == 1) {
          c.label[v] = CoLabel::Linear;
          c.order[v] = arc(kids[0], kids[1]) ? kids : std::vector<int>{kids[1], kids[0]};
        } else {
          throw Error(ErrorKind::Inconsistent, "mixed DEGENERATE node " + std::to_string(v));
        }
        break;
      }
      case NodeLabel::Linear: {
        auto ord = d.wp.order.at(v);
        if (!arc(ord[0], ord[1])) std::reverse(ord.begin(), ord.end());
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = i + 1; j < k; ++j)
            if (!arc(ord[i], ord[j]) || arc(ord[j], ord[i]))
              throw Error(ErrorKind::Inconsistent,
                          "LINEAR node " + std::to_string(v) + " is not a transitive tournament");
        c.label[v] = CoLabel::Linear;
        c.order[v] = ord;
        break;
      }
    }
  }
  return c;
}

DiGraph graph_from_cotree(const Cotree& c) {
  const RootedTree& t = c.tree;
  DiGraph g(t.universe());
  auto join = [&](int s, int r) {
    t.leafset(s).for_each([&](std::size_t x) {
      t.leafset(r).for_each([&](std::size_t y) { g.add_edge(x, y); });
    });
  };
  for (auto& [v, lab] : c.label) {
    if (lab == CoLabel::Series) {
      for (int s : t.children(v))
        for (int r : t.children(v))
          if (s != r) join(s, r);
    } else if (lab == CoLabel::Linear) {
      auto& ord = c.order.at(v);
      for (std::size_t i = 0; i < ord.size(); ++i)
        for (std::size_t j = i + 1; j < ord.size(); ++j) join(ord[i], ord[j]);
    }
  }
  return g;
}

// ---- splits --------------------------------------------------------------

bool is_split(const DiGraph& g, const Subset& side) {
  check_side(g, side);
  if (!g.is_strongly_connected()) throw Error(ErrorKind::NotConnected, "graph is not strongly connected");
  if (side.empty() || side.is_full()) throw Error(ErrorKind::InvalidInput, "side must be proper and non-empty");
  const Subset y = side.complement();
  // Every x has cross out- (in-) neighbourhood empty or one fixed set.
  Subset yin(g.n()), yout(g.n());
  bool ok = true;
  side.for_each([&](std::size_t x) {
    Subset o = g.out(x) & y, i = g.in(x) & y;
    if (o.any()) {
      if (yin.empty()) yin = o;
      else if (!(yin == o)) ok = false;
    }
    if (i.any()) {
      if (yout.empty()) yout = i;
      else if (!(yout == i)) ok = false;
    }
  });
  return ok;
}

BipartitionSystem split_family(const DiGraph& g, const Guards& guards) {
  check_scan(g, guards);
  if (!g.is_strongly_connected()) throw Error(ErrorKind::NotConnected, "graph is not strongly connected");
  std::vector<Subset> raw;
  for_each_side(g.n(), [&](const Subset& s) {
    if (is_split(g, s)) raw.push_back(s);
  });
  return normalize_bipartition_system(raw, g.n());
}

SplitDecomposition split_decomposition(const DiGraph& g, const Guards& guards) {
  if (g.n() == 0) throw Error(ErrorKind::InvalidInput, "empty graph");
  SplitDecomposition d;
  d.wb = weakly_bipartitive_tree(split_family(g, guards));
  const UnrootedTree& t = d.wb.tree;
  const std::size_t n = g.n();
  d.markers.resize(n);
  for (std::size_t e = 0; e < n; ++e) {
    int leaf = t.leaf_node(e);
    d.markers[e] = {attachment(t, leaf), leaf};
  }
  if (n == 2) d.t_edges.emplace_back(0, 1);
  std::map<std::pair<int, int>, int> id;
  for (int u : t.inner_nodes())
    for (int v : t.neighbours(u)) {
      if (t.is_leaf(v)) {
        id[{u, v}] = t.label(v);
      } else {
        id[{u, v}] = static_cast<int>(d.markers.size());
        d.markers.push_back({u, v});
      }
    }
  for (int u : t.inner_nodes())
    for (int v : t.neighbours(u)) {
      Subset reach = out_of(g, t.side(u, v));
      for (int w : t.neighbours(u))
        if (w != v && reach.intersects(t.side(u, w))) d.c_edges.emplace_back(id[{u, v}], id[{u, w}]);
      if (!t.is_leaf(v) && u < v) d.t_edges.push_back(ordered(id[{u, v}], id[{v, u}]));
    }
  sort_unique(d.c_edges);
  sort_unique(d.t_edges);
  return d;
}

namespace {

// x -> y iff a path from x to y alternates c- and t-edges. c-edges are
// followed in their direction, t-edges both ways.
DiGraph alternating_reachability(std::size_t n, std::size_t count,
                                 const std::vector<std::pair<int, int>>& c_edges, bool c_directed,
                                 const std::vector<std::pair<int, int>>& t_edges,
                                 const std::vector<int>& originals) {
  std::vector<std::vector<int>> c(count), t(count);
  for (auto [a, b] : c_edges) {
    c[a].push_back(b);
    if (!c_directed) c[b].push_back(a);
  }
  for (auto [a, b] : t_edges) {
    t[a].push_back(b);
    t[b].push_back(a);
  }
  std::vector<int> vertex_of(count, -1);
  for (std::size_t i = 0; i < originals.size(); ++i) vertex_of[originals[i]] = static_cast<int>(i);
  DiGraph g(n);
  for (std::size_t i = 0; i < originals.size(); ++i) {
    const int x = originals[i];
    // State (m, k): at m, last edge of kind k (0 = t, 1 = c); the start may
    // leave by either kind.
    std::vector<std::array<char, 2>> seen(count, {0, 0});
    std::deque<std::pair<int, int>> q{{x, 0}, {x, 1}};
    seen[x] = {1, 1};
    while (!q.empty()) {
      auto [m, k] = q.front();
      q.pop_front();
      if (m != x && vertex_of[m] >= 0) {
        g.add_edge(i, static_cast<std::size_t>(vertex_of[m]));
        continue;
      }
      for (int nb : (k == 0 ? c[m] : t[m])) {
        int nk = 1 - k;
        if (seen[nb][nk]) continue;
        seen[nb][nk] = 1;
        q.emplace_back(nb, nk);
      }
    }
  }
  return g;
}

}  // namespace

DiGraph graph_from_split(const SplitDecomposition& d) {
  const std::size_t n = d.n();
  std::vector<int> originals(n);
  for (std::size_t e = 0; e < n; ++e) originals[e] = static_cast<int>(e);
  return alternating_reachability(n, d.markers.size(), d.c_edges, true, d.t_edges, originals);
}

// ---- bi-joins and skeletons ----------------------------------------------

std::vector<Subset> equiv_classes(const DiGraph& g, const Subset& x) {
  check_side(g, x);
  const Subset outside = x.complement();
  std::vector<std::pair<Subset, Subset>> cls;  // (neighbourhood, class)
  x.for_each([&](std::size_t v) {
    Subset nb = g.out(v) & outside;
    for (auto& [k, c] : cls)
      if (k == nb) {
        c.set(v);
        return;
      }
    cls.emplace_back(nb, Subset::singleton(g.n(), v));
  });
  std::vector<Subset> out;
  for (auto& [k, c] : cls) out.push_back(c);
  return out;
}

bool is_bijoin(const DiGraph& g, const Subset& side) {
  require_undirected(g);
  check_side(g, side);
  if (side.empty() || side.is_full()) throw Error(ErrorKind::InvalidInput, "side must be proper and non-empty");
  auto cls = equiv_classes(g, side);
  if (cls.size() == 1) return true;
  if (cls.size() > 2) return false;
  const Subset y = side.complement();
  Subset n1 = g.out(cls[0].first()) & y, n2 = g.out(cls[1].first()) & y;
  return !n1.intersects(n2) && (n1 | n2) == y;
}

BipartitionSystem bijoin_family(const DiGraph& g, const Guards& guards) {
  require_undirected(g);
  check_scan(g, guards);
  std::vector<Subset> raw;
  for_each_side(g.n(), [&](const Subset& s) {
    if (is_bijoin(g, s)) raw.push_back(s);
  });
  return normalize_bipartition_system(raw, g.n());
}

std::vector<int> skeleton_originals(std::size_t count, const std::vector<std::pair<int, int>>& c,
                                    const std::vector<std::pair<int, int>>& t,
                                    const std::vector<std::pair<int, int>>& r) {
  std::vector<int> kinds(count, 0);
  auto mark = [&](const std::vector<std::pair<int, int>>& es, int bit) {
    for (auto [a, b] : es) {
      kinds[a] |= bit;
      kinds[b] |= bit;
    }
  };
  mark(c, 1);
  mark(t, 2);
  mark(r, 4);
  std::vector<int> out;
  for (std::size_t v = 0; v < count; ++v)
    if (kinds[v] != 3 && !(kinds[v] & 4)) out.push_back(static_cast<int>(v));
  return out;
}

Skeleton skeleton(const DiGraph& g, const Guards& guards) {
  require_undirected(g);
  if (g.n() == 0) throw Error(ErrorKind::InvalidInput, "empty graph");
  if (!g.is_connected()) throw Error(ErrorKind::NotConnected, "graph is not connected");
  Skeleton s;
  s.wb = weakly_bipartitive_tree(bijoin_family(g, guards));
  const UnrootedTree& t = s.wb.tree;
  const std::size_t n = g.n();
  for (std::size_t e = 0; e < n; ++e) {
    int leaf = t.leaf_node(e);
    s.vertices.push_back({attachment(t, leaf), leaf, 0, Subset::singleton(n, e), true});
  }
  if (n == 2) s.t_edges.emplace_back(0, 1);
  std::map<std::pair<int, int>, std::vector<int>> ids;
  for (int u : t.inner_nodes())
    for (int v : t.neighbours(u)) {
      auto& slot = ids[{u, v}];
      if (t.is_leaf(v)) {
        slot.push_back(t.label(v));
        continue;
      }
      auto cls = equiv_classes(g, t.side(u, v));
      for (std::size_t k = 0; k < cls.size(); ++k) {
        slot.push_back(static_cast<int>(s.vertices.size()));
        s.vertices.push_back({u, v, static_cast<int>(k), cls[k], false});
      }
      if (slot.size() == 2) s.r_edges.push_back(ordered(slot[0], slot[1]));
    }
  // Classes are completely adjacent or non-adjacent across any bi-join.
  auto adjacent = [&](int a, int b) {
    return g.has_edge(s.vertices[a].members.first(), s.vertices[b].members.first());
  };
  for (int u : t.inner_nodes()) {
    auto& nb = t.neighbours(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        for (int a : ids[{u, nb[i]}])
          for (int b : ids[{u, nb[j]}])
            if (adjacent(a, b)) s.c_edges.push_back(ordered(a, b));
      int v = nb[i];
      if (t.is_leaf(v) || v < u) continue;
      for (int a : ids[{u, v}])
        for (int b : ids[{v, u}])
          if (adjacent(a, b)) s.t_edges.push_back(ordered(a, b));
    }
  }
  sort_unique(s.c_edges);
  sort_unique(s.t_edges);
  sort_unique(s.r_edges);
  return s;
}

DiGraph graph_from_skeleton(const Skeleton& s) {
  auto originals = skeleton_originals(s.vertices.size(), s.c_edges, s.t_edges, s.r_edges);
  return alternating_reachability(originals.size(), s.vertices.size(), s.c_edges, false, s.t_edges,
                                  originals);
}

// ---- cut-rank --------------------------------------------------------------

std::size_t cut_rank(const DiGraph& g, const Subset& x) {
  check_side(g, x);
  const Subset y = x.complement();
  // Basis rows keyed by their lowest set bit.
  std::vector<Subset> basis;
  std::vector<std::size_t> pivot;
  x.for_each([&](std::size_t v) {
    Subset row = g.out(v) & y;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (row.test(pivot[i])) row ^= basis[i];
    if (row.empty()) return;
    std::size_t p = row.first();
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis[i].test(p)) basis[i] ^= row;
    basis.push_back(row);
    pivot.push_back(p);
  });
  return basis.size();
}

std::size_t rank_width_of(const DiGraph& g, const UnrootedTree& t, const Guards& guards) {
  if (t.universe() != g.n()) throw Error(ErrorKind::InvalidInput, "tree leaves do not match the graph");
  std::size_t best = 0;
  for (auto [u, v] : t.edges()) best = std::max(best, cut_rank(g, t.side(u, v)));
  for (int u : t.inner_nodes()) {
    auto& nb = t.neighbours(u);
    const std::size_t d = nb.size();
    if (d > guards.max_degree)
      throw Error(ErrorKind::DegreeTooLarge,
                  "node " + std::to_string(u) + " has degree " + std::to_string(d));
    for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << d); ++m) {
      Subset x(g.n());
      for (std::size_t i = 0; i < d; ++i)
        if ((m >> i) & 1) x |= t.side(u, nb[i]);
      best = std::max(best, cut_rank(g, x));
    }
  }
  return best;
}

UnrootedTree cubic_refinement(const UnrootedTree& t) {
  std::vector<int> label = t.labels();
  std::vector<std::pair<int, int>> edges;
  for (auto [u, v] : t.edges())
    if (t.neighbours(u).size() <= 3 && t.neighbours(v).size() <= 3) edges.emplace_back(u, v);
  // Edges at a high-degree node are re-attached along a path hanging off it.
  std::map<std::pair<int, int>, int> end_of;
  for (int u : t.inner_nodes()) {
    auto& nb = t.neighbours(u);
    if (nb.size() <= 3) {
      for (int v : nb) end_of[{u, v}] = u;
      continue;
    }
    int cur = u;
    end_of[{u, nb[0]}] = u;
    for (std::size_t i = 1; i + 2 < nb.size(); ++i) {
      end_of[{u, nb[i]}] = cur;
      int next = static_cast<int>(label.size());
      label.push_back(-1);
      edges.emplace_back(cur, next);
      cur = next;
    }
    end_of[{u, nb[nb.size() - 2]}] = cur;
    end_of[{u, nb.back()}] = cur;
  }
  auto endpoint = [&](int u, int v) {
    auto it = end_of.find({u, v});
    return it == end_of.end() ? u : it->second;
  };
  for (auto [u, v] : t.edges())
    if (t.neighbours(u).size() > 3 || t.neighbours(v).size() > 3)
      edges.emplace_back(endpoint(u, v), endpoint(v, u));
  return UnrootedTree(label.size(), edges, label, t.universe());
}

}  // namespace decomp
