#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "decomp/core_model.hpp"
#include "decomp/guards.hpp"

// Brute-force ground truth and seeded generators. Nothing here calls the
// decomposition algorithms it is meant to check.
namespace decomp::oracle {

SetSystem enumerate_modules(const DiGraph& g, const Guards& guards = default_guards());
BipartitionSystem enumerate_splits(const DiGraph& g, const Guards& guards = default_guards());
BipartitionSystem enumerate_bijoins(const DiGraph& g, const Guards& guards = default_guards());

enum class Law { WeaklyPartitive, Partitive, WeaklyBipartitive, Bipartitive };

struct ClosureViolation {
  Subset x, y, missing;
};

std::optional<ClosureViolation> check_closure(const SetSystem& s, Law law);
std::optional<ClosureViolation> check_closure(const BipartitionSystem& b, Law law);

// Smallest family containing the seeds and closed under the law, normalized.
SetSystem weakly_partitive_closure(const std::vector<Subset>& seeds, std::size_t n,
                                   bool partitive = false, std::size_t cap = 1u << 20);
BipartitionSystem weakly_bipartitive_closure(const std::vector<Subset>& seeds, std::size_t n,
                                             bool bipartitive = false,
                                             std::size_t cap = 1u << 20);

// Deterministic generator: bernoulli draws use the top 53 bits of mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t next() { return g_(); }
  double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform in [lo, hi].
  std::size_t range(std::size_t lo, std::size_t hi) { return lo + g_() % (hi - lo + 1); }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[g_() % i]);
  }

 private:
  std::mt19937_64 g_;
};

DiGraph random_digraph(std::size_t n, double p, std::uint64_t seed);
DiGraph random_graph(std::size_t n, double p, std::uint64_t seed);
// Retries with seed+1, seed+2, ... until the sample is strongly connected.
DiGraph random_connected_graph(std::size_t n, double p, std::uint64_t seed, bool directed = false);

void for_each_digraph(std::size_t n, const std::function<void(const DiGraph&)>& f,
                      const Guards& guards = default_guards());
void for_each_graph(std::size_t n, const std::function<void(const DiGraph&)>& f,
                    const Guards& guards = default_guards());
std::vector<DiGraph> all_digraphs(std::size_t n, const Guards& guards = default_guards());
std::vector<DiGraph> all_graphs(std::size_t n, const Guards& guards = default_guards());

// Random rooted tree with `leaves` leaves, every inner node with 2..max_children
// children, node ids shuffled.
RootedTree random_rooted_tree(std::size_t leaves, std::uint64_t seed, std::size_t max_children = 4);
// Leafset family of a random rooted tree.
SetSystem random_laminar_family(std::size_t n, std::uint64_t seed);
// Edge cuts of a random unrooted tree.
BipartitionSystem random_laminar_bipartitions(std::size_t n, std::uint64_t seed);
// Every laminar family over n elements (n <= 7).
std::vector<SetSystem> all_laminar_families(std::size_t n);

bool has_induced_p4(const DiGraph& g);
// Pendant vertices and true/false twins grown from K2.
DiGraph random_distance_hereditary(std::size_t n, std::uint64_t seed);
// Connected graph glued from random star and clique components by split
// composition, i.e. distance-hereditary.
DiGraph random_split_composition(std::size_t n, std::uint64_t seed);

}  // namespace decomp::oracle
