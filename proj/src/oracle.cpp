#include "decomp/oracle.hpp"

#include <algorithm>
#include <thread>
#include <unordered_set>

#include "decomp/laminar.hpp"

namespace decomp::oracle {

namespace {

void check_scan(const DiGraph& g, const Guards& guards) {
  if (g.n() > guards.subset_scan)
    throw Error(ErrorKind::TooLarge, "subset scan limited to n <= " +
                                         std::to_string(guards.subset_scan));
}

Subset mask_subset(std::size_t n, std::uint64_t m) { return Subset::from_mask(n, m); }

// Masks lo, lo+step, ... below hi accepted by keep, in increasing order. The
// range is cut into `jobs` contiguous shards that are concatenated in order.
template <class Keep>
std::vector<Subset> scan_masks(std::size_t n, std::uint64_t lo, std::uint64_t hi,
                               std::uint64_t step, std::size_t jobs, Keep keep) {
  auto run = [&](std::uint64_t a, std::uint64_t b, std::vector<Subset>& out) {
    for (std::uint64_t m = a; m < b; m += step)
      if (keep(m)) out.push_back(mask_subset(n, m));
  };
  std::uint64_t count = hi > lo ? (hi - lo + step - 1) / step : 0;
  jobs = std::max<std::size_t>(1, std::min<std::uint64_t>(jobs, count / 1024 + 1));
  std::vector<std::vector<Subset>> parts(jobs);
  std::vector<std::thread> threads;
  for (std::size_t j = 0; j < jobs; ++j) {
    std::uint64_t a = lo + count * j / jobs * step, b = lo + count * (j + 1) / jobs * step;
    if (j + 1 == jobs) b = hi;
    if (jobs == 1) run(a, b, parts[j]);
    else threads.emplace_back(run, a, b, std::ref(parts[j]));
  }
  for (auto& t : threads) t.join();
  std::vector<Subset> raw;
  for (auto& p : parts) raw.insert(raw.end(), p.begin(), p.end());
  return raw;
}

// Literal definition: no vertex outside M tells two members of M apart.
bool module_by_definition(const DiGraph& g, const std::vector<std::size_t>& in_m,
                          const std::vector<std::size_t>& out_m) {
  for (auto u : out_m)
    for (std::size_t i = 1; i < in_m.size(); ++i) {
      auto v = in_m[0], w = in_m[i];
      if (g.has_edge(u, v) != g.has_edge(u, w)) return false;
      if (g.has_edge(v, u) != g.has_edge(w, u)) return false;
    }
  return true;
}

// Edges X->Y form Xout x Yin and edges Y->X form Yout x Xin.
bool split_by_definition(const DiGraph& g, const std::vector<std::size_t>& x,
                         const std::vector<std::size_t>& y) {
  auto product = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> src, dst;
    for (auto u : a) {
      bool any = false;
      for (auto v : b) any |= g.has_edge(u, v);
      if (any) src.push_back(u);
    }
    for (auto v : b) {
      bool any = false;
      for (auto u : a) any |= g.has_edge(u, v);
      if (any) dst.push_back(v);
    }
    for (auto u : src)
      for (auto v : dst)
        if (!g.has_edge(u, v)) return false;
    return true;
  };
  return product(x, y) && product(y, x);
}

// Edges between X and Y are X1 x Y1 plus X2 x Y2 for partitions of X and Y.
bool bijoin_by_definition(const DiGraph& g, const std::vector<std::size_t>& x,
                          const std::vector<std::size_t>& y) {
  // Try every way to put x[0]'s neighbourhood in Y as Y1; X1 is then forced.
  std::vector<bool> y1(g.n(), false);
  for (auto v : y) y1[v] = g.has_edge(x[0], v);
  // Every x must be adjacent to exactly Y1 or exactly Y \ Y1.
  for (auto u : x) {
    bool same = true, opposite = true;
    for (auto v : y) {
      bool e = g.has_edge(u, v);
      same &= (e == y1[v]);
      opposite &= (e != y1[v]);
    }
    if (!same && !opposite) return false;
  }
  return true;
}

}  // namespace

SetSystem enumerate_modules(const DiGraph& g, const Guards& guards) {
  check_scan(g, guards);
  const std::size_t n = g.n();
  auto raw = scan_masks(n, 1, std::uint64_t{1} << n, 1, guards.jobs, [&](std::uint64_t m) {
    std::vector<std::size_t> in_m, out_m;
    for (std::size_t i = 0; i < n; ++i) ((m >> i) & 1 ? in_m : out_m).push_back(i);
    return module_by_definition(g, in_m, out_m);
  });
  return normalize_set_system(raw, n);
}

namespace {

template <class Pred>
BipartitionSystem scan_bipartitions(const DiGraph& g, std::size_t jobs, Pred pred) {
  const std::size_t n = g.n();
  if (n < 2) return normalize_bipartition_system({}, n);
  // Sides that exclude element 0.
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  auto raw = scan_masks(n, 2, full, 2, jobs, [&](std::uint64_t m) {
    std::vector<std::size_t> x, y;
    for (std::size_t i = 0; i < n; ++i) ((m >> i) & 1 ? x : y).push_back(i);
    return pred(x, y);
  });
  return normalize_bipartition_system(raw, n);
}

}  // namespace

BipartitionSystem enumerate_splits(const DiGraph& g, const Guards& guards) {
  check_scan(g, guards);
  if (!g.is_strongly_connected())
    throw Error(ErrorKind::NotConnected, "splits need a strongly connected graph");
  return scan_bipartitions(g, guards.jobs,
                           [&](auto& x, auto& y) { return split_by_definition(g, x, y); });
}

BipartitionSystem enumerate_bijoins(const DiGraph& g, const Guards& guards) {
  check_scan(g, guards);
  if (!g.is_undirected()) throw Error(ErrorKind::RequiresUndirected, "bi-joins need an undirected graph");
  return scan_bipartitions(g, guards.jobs,
                           [&](auto& x, auto& y) { return bijoin_by_definition(g, x, y); });
}

namespace {

std::vector<Subset> set_law_results(const Subset& x, const Subset& y, bool partitive) {
  std::vector<Subset> r{x | y, x & y, x - y, y - x};
  if (partitive) r.push_back(x ^ y);
  return r;
}

// Results as sides (either orientation) for overlapping bipartitions {x,~x}, {y,~y}.
std::vector<Subset> bip_law_results(const Subset& x, const Subset& y, bool bipartitive) {
  Subset xc = x.complement(), yc = y.complement();
  std::vector<Subset> r{x & y, x & yc, xc & y, xc & yc};
  if (bipartitive) r.push_back(x ^ y);
  return r;
}

}  // namespace

std::optional<ClosureViolation> check_closure(const SetSystem& s, Law law) {
  if (law != Law::WeaklyPartitive && law != Law::Partitive)
    throw Error(ErrorKind::InvalidInput, "set system needs a set law");
  auto& f = s.family();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (!sets_overlap(f[i], f[j])) continue;
      for (auto& r : set_law_results(f[i], f[j], law == Law::Partitive))
        if (!s.contains(r)) return ClosureViolation{f[i], f[j], r};
    }
  return std::nullopt;
}

std::optional<ClosureViolation> check_closure(const BipartitionSystem& b, Law law) {
  if (law != Law::WeaklyBipartitive && law != Law::Bipartitive)
    throw Error(ErrorKind::InvalidInput, "bipartition system needs a bipartition law");
  auto& f = b.sides();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (!bipartitions_overlap(f[i], f[j])) continue;
      for (auto& r : bip_law_results(f[i], f[j], law == Law::Bipartitive))
        if (!b.contains(r)) return ClosureViolation{f[i], f[j], r};
    }
  return std::nullopt;
}

namespace {

template <class Overlap, class Results, class Keep>
std::vector<Subset> close_family(std::vector<Subset> fam, Overlap overlap, Results results,
                                 Keep keep, std::size_t cap) {
  std::unordered_set<Subset> seen(fam.begin(), fam.end());
  std::size_t done = 0;
  // fam[0..done) are pairwise closed.
  while (done < fam.size()) {
    Subset cur = fam[done];
    for (std::size_t j = 0; j < done; ++j) {
      if (!overlap(cur, fam[j])) continue;
      for (auto& r : results(cur, fam[j])) {
        Subset k = keep(r);
        if (k.empty() || seen.count(k)) continue;
        seen.insert(k);
        fam.push_back(k);
        if (fam.size() > cap) throw Error(ErrorKind::TooLarge, "closure exceeds cap");
      }
    }
    ++done;
  }
  return fam;
}

}  // namespace

SetSystem weakly_partitive_closure(const std::vector<Subset>& seeds, std::size_t n,
                                   bool partitive, std::size_t cap) {
  // Start from the normalized seeds so trivial members take part as well.
  auto base = normalize_set_system(seeds, n).family();
  auto fam = close_family(
      base, [](const Subset& a, const Subset& b) { return sets_overlap(a, b); },
      [&](const Subset& a, const Subset& b) { return set_law_results(a, b, partitive); },
      [](const Subset& r) { return r; }, cap);
  return normalize_set_system(fam, n);
}

BipartitionSystem weakly_bipartitive_closure(const std::vector<Subset>& seeds, std::size_t n,
                                             bool bipartitive, std::size_t cap) {
  auto base = normalize_bipartition_system(seeds, n).sides();
  auto fam = close_family(
      base, [](const Subset& a, const Subset& b) { return bipartitions_overlap(a, b); },
      [&](const Subset& a, const Subset& b) { return bip_law_results(a, b, bipartitive); },
      [](const Subset& r) {
        // Empty or full sides are not bipartitions.
        if (r.empty() || r.is_full()) return Subset(r.universe());
        return BipartitionSystem::canonical(r);
      },
      cap);
  return normalize_bipartition_system(fam, n);
}

DiGraph random_digraph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  DiGraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && rng.bernoulli(p)) g.add_edge(u, v);
  return g;
}

DiGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  DiGraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) g.add_undirected_edge(u, v);
  return g;
}

DiGraph random_connected_graph(std::size_t n, double p, std::uint64_t seed, bool directed) {
  for (std::uint64_t s = seed;; ++s) {
    DiGraph g = directed ? random_digraph(n, p, s) : random_graph(n, p, s);
    if (g.is_strongly_connected()) return g;
  }
}

void for_each_digraph(std::size_t n, const std::function<void(const DiGraph&)>& f,
                      const Guards& guards) {
  if (n == 0 || n > guards.all_digraphs)
    throw Error(ErrorKind::TooLarge, "all_digraphs limited to 1 <= n <= " +
                                         std::to_string(guards.all_digraphs));
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v) slots.emplace_back(u, v);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << slots.size()); ++m) {
    DiGraph g(n);
    for (std::size_t k = 0; k < slots.size(); ++k)
      if ((m >> k) & 1) g.add_edge(slots[k].first, slots[k].second);
    f(g);
  }
}

void for_each_graph(std::size_t n, const std::function<void(const DiGraph&)>& f,
                    const Guards& guards) {
  if (n == 0 || n > guards.all_graphs)
    throw Error(ErrorKind::TooLarge, "all_graphs limited to 1 <= n <= " +
                                         std::to_string(guards.all_graphs));
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << slots.size()); ++m) {
    DiGraph g(n);
    for (std::size_t k = 0; k < slots.size(); ++k)
      if ((m >> k) & 1) g.add_undirected_edge(slots[k].first, slots[k].second);
    f(g);
  }
}

std::vector<DiGraph> all_digraphs(std::size_t n, const Guards& guards) {
  std::vector<DiGraph> out;
  for_each_digraph(n, [&](const DiGraph& g) { out.push_back(g); }, guards);
  return out;
}

std::vector<DiGraph> all_graphs(std::size_t n, const Guards& guards) {
  std::vector<DiGraph> out;
  for_each_graph(n, [&](const DiGraph& g) { out.push_back(g); }, guards);
  return out;
}

RootedTree random_rooted_tree(std::size_t leaves, std::uint64_t seed, std::size_t max_children) {
  if (leaves == 0) throw Error(ErrorKind::InvalidInput, "tree needs a leaf");
  if (max_children < 2) max_children = 2;
  Rng rng(seed);
  std::vector<int> parent(leaves, -1);
  std::vector<int> open(leaves);
  for (std::size_t i = 0; i < leaves; ++i) open[i] = static_cast<int>(i);
  while (open.size() > 1) {
    rng.shuffle(open);
    std::size_t k = rng.range(2, std::min(max_children, open.size()));
    int p = static_cast<int>(parent.size());
    parent.push_back(-1);
    for (std::size_t i = 0; i < k; ++i) {
      parent[open.back()] = p;
      open.pop_back();
    }
    open.push_back(p);
  }
  // Shuffle node ids.
  const std::size_t m = parent.size();
  std::vector<int> perm(m);
  for (std::size_t i = 0; i < m; ++i) perm[i] = static_cast<int>(i);
  rng.shuffle(perm);
  std::vector<int> np(m, -1), nl(m, -1);
  for (std::size_t v = 0; v < m; ++v) {
    np[perm[v]] = parent[v] < 0 ? -1 : perm[parent[v]];
    if (v < leaves) nl[perm[v]] = static_cast<int>(v);
  }
  return RootedTree(std::move(np), std::move(nl), leaves);
}

SetSystem random_laminar_family(std::size_t n, std::uint64_t seed) {
  return tree_to_sets(random_rooted_tree(n, seed));
}

BipartitionSystem random_laminar_bipartitions(std::size_t n, std::uint64_t seed) {
  // Cuts of the rooted tree's edges are exactly the edge cuts after unrooting.
  RootedTree t = random_rooted_tree(n, seed);
  std::vector<Subset> raw;
  for (int v = 0; v < static_cast<int>(t.size()); ++v) raw.push_back(t.leafset(v));
  std::vector<Subset> sides;
  for (auto& s : raw)
    if (!s.empty() && !s.is_full()) sides.push_back(s);
  return normalize_bipartition_system(sides, n);
}

std::vector<SetSystem> all_laminar_families(std::size_t n) {
  if (n == 0 || n > 7) throw Error(ErrorKind::TooLarge, "laminar enumeration limited to n <= 7");
  std::vector<Subset> cand;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    auto c = static_cast<std::size_t>(std::popcount(m));
    if (c >= 2 && c < n) cand.push_back(mask_subset(n, m));
  }
  std::vector<SetSystem> out;
  std::vector<Subset> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == cand.size()) {
      out.push_back(normalize_set_system(chosen, n));
      return;
    }
    rec(i + 1);
    for (auto& c : chosen)
      if (sets_overlap(c, cand[i])) return;
    chosen.push_back(cand[i]);
    rec(i + 1);
    chosen.pop_back();
  };
  rec(0);
  return out;
}

bool has_induced_p4(const DiGraph& g) {
  const std::size_t n = g.n();
  auto e = [&](std::size_t u, std::size_t v) { return g.has_edge(u, v); };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a || !e(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == a || c == b || !e(b, c) || e(a, c)) continue;
        for (std::size_t d = 0; d < n; ++d) {
          if (d == a || d == b || d == c) continue;
          if (e(c, d) && !e(a, d) && !e(b, d)) return true;
        }
      }
    }
  return false;
}

DiGraph random_distance_hereditary(std::size_t n, std::uint64_t seed) {
  if (n < 2) return DiGraph(n);
  Rng rng(seed);
  DiGraph g(n);
  g.add_undirected_edge(0, 1);
  for (std::size_t v = 2; v < n; ++v) {
    std::size_t u = rng.range(0, v - 1);
    int kind = static_cast<int>(rng.range(0, 2));
    if (kind == 0) {
      g.add_undirected_edge(u, v);
    } else {
      Subset nu = g.out(u);
      nu.for_each([&](std::size_t w) { g.add_undirected_edge(v, w); });
      if (kind == 1) g.add_undirected_edge(u, v);
    }
  }
  return g;
}

DiGraph random_split_composition(std::size_t n, std::uint64_t seed) {
  if (n < 3) {
    DiGraph g(n);
    if (n == 2) g.add_undirected_edge(0, 1);
    return g;
  }
  Rng rng(seed);
  // Component on k vertices: clique, or star centred at 0.
  auto component = [&](std::size_t k) {
    std::vector<std::vector<std::size_t>> adj(k);
    bool star = rng.bernoulli(0.5);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b)
        if (!star || a == 0) {
          adj[a].push_back(b);
          adj[b].push_back(a);
        }
    return adj;
  };
  // adjacency sets over vertex ids that stay stable; removed ids are skipped
  std::vector<std::set<std::size_t>> g;
  std::vector<bool> alive;
  auto add_vertex = [&] {
    g.emplace_back();
    alive.push_back(true);
    return g.size() - 1;
  };
  auto link = [&](std::size_t a, std::size_t b) {
    g[a].insert(b);
    g[b].insert(a);
  };
  std::size_t k0 = std::min<std::size_t>(n, rng.range(3, 5));
  auto c0 = component(k0);
  for (std::size_t a = 0; a < k0; ++a) add_vertex();
  for (std::size_t a = 0; a < k0; ++a)
    for (auto b : c0[a]) link(a, b);
  std::size_t count = k0;
  while (count < n) {
    std::vector<std::size_t> live;
    for (std::size_t v = 0; v < g.size(); ++v)
      if (alive[v]) live.push_back(v);
    std::size_t v = live[rng.range(0, live.size() - 1)];
    // Replace v by a component minus its marker; the marker's neighbours
    // inherit N(v).
    std::size_t k = std::min<std::size_t>(n - count + 2, rng.range(3, 5));
    auto c = component(k);
    std::size_t marker = rng.range(0, k - 1);
    std::vector<std::size_t> id(k);
    for (std::size_t a = 0; a < k; ++a)
      if (a != marker) id[a] = add_vertex();
    for (std::size_t a = 0; a < k; ++a)
      for (auto b : c[a])
        if (a < b && a != marker && b != marker) link(id[a], id[b]);
    std::set<std::size_t> nv = g[v];
    for (auto b : c[marker])
      for (auto w : nv) link(id[b], w);
    for (auto w : nv) g[w].erase(v);
    g[v].clear();
    alive[v] = false;
    count += k - 2;
  }
  std::vector<std::size_t> index(g.size());
  std::size_t next = 0;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (alive[v]) index[v] = next++;
  DiGraph out(n);
  for (std::size_t v = 0; v < g.size(); ++v)
    if (alive[v])
      for (auto w : g[v])
        if (v < w) out.add_undirected_edge(index[v], index[w]);
  return out;
}

}  // namespace decomp::oracle
