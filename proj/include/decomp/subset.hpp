#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace decomp {

inline constexpr std::size_t kMaxUniverse = 4096;

// Fixed-universe bitset. Universes up to 128 elements stay inline.
class Subset {
 public:
  using Word = std::uint64_t;

  Subset() = default;
  explicit Subset(std::size_t n) : n_(static_cast<std::uint32_t>(n)), w_((n + 63) / 64, 0) {}
  Subset(std::size_t n, std::initializer_list<std::size_t> elems) : Subset(n) {
    for (auto e : elems) set(e);
  }
  static Subset full(std::size_t n) {
    Subset s(n);
    for (auto& w : s.w_) w = ~Word{0};
    s.trim();
    return s;
  }
  static Subset singleton(std::size_t n, std::size_t e) {
    Subset s(n);
    s.set(e);
    return s;
  }
  template <class Range>
  static Subset from(std::size_t n, const Range& elems) {
    Subset s(n);
    for (auto e : elems) s.set(static_cast<std::size_t>(e));
    return s;
  }
  // Bits of `mask` mapped onto elements 0..63.
  static Subset from_mask(std::size_t n, std::uint64_t mask) {
    Subset s(n);
    if (!s.w_.empty()) s.w_[0] = mask;
    s.trim();
    return s;
  }

  std::size_t universe() const { return n_; }
  std::size_t words() const { return w_.size(); }
  const Word* data() const { return w_.data(); }
  Word* data() { return w_.data(); }

  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { w_[i >> 6] |= Word{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(Word{1} << (i & 63)); }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }
  void clear() {
    for (auto& w : w_) w = 0;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }
  bool any() const { return !empty(); }
  bool is_full() const { return count() == n_; }

  // Smallest element, or universe() when empty.
  std::size_t first() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(w_[k]));
    return n_;
  }
  // Smallest element > i, or universe().
  std::size_t next(std::size_t i) const {
    ++i;
    if (i >= n_) return n_;
    std::size_t k = i >> 6;
    Word w = w_[k] & (~Word{0} << (i & 63));
    while (true) {
      if (w) return k * 64 + static_cast<std::size_t>(std::countr_zero(w));
      if (++k >= w_.size()) return n_;
      w = w_[k];
    }
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < w_.size(); ++k) {
      Word w = w_[k];
      while (w) {
        f(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }
  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t e) { out.push_back(e); });
    return out;
  }

  Subset& operator|=(const Subset& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  Subset& operator&=(const Subset& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }
  Subset& operator-=(const Subset& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
  }
  Subset& operator^=(const Subset& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }
  friend Subset operator|(Subset a, const Subset& b) { return a |= b; }
  friend Subset operator&(Subset a, const Subset& b) { return a &= b; }
  friend Subset operator-(Subset a, const Subset& b) { return a -= b; }
  friend Subset operator^(Subset a, const Subset& b) { return a ^= b; }
  Subset complement() const {
    Subset s(*this);
    for (auto& w : s.w_) w = ~w;
    s.trim();
    return s;
  }

  bool is_subset_of(const Subset& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }
  bool is_proper_subset_of(const Subset& o) const { return is_subset_of(o) && !(*this == o); }
  bool intersects(const Subset& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }

  friend bool operator==(const Subset& a, const Subset& b) {
    if (a.n_ != b.n_) return false;
    for (std::size_t k = 0; k < a.w_.size(); ++k)
      if (a.w_[k] != b.w_[k]) return false;
    return true;
  }
  // Numeric order: element i carries weight 2^i.
  static int compare_value(const Subset& a, const Subset& b) {
    for (std::size_t k = a.w_.size(); k-- > 0;) {
      if (a.w_[k] != b.w_[k]) return a.w_[k] < b.w_[k] ? -1 : 1;
    }
    return 0;
  }
  // Canonical family order: by size, then numeric value.
  friend bool operator<(const Subset& a, const Subset& b) {
    auto ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    return compare_value(a, b) < 0;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ n_;
    for (auto w : w_) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  std::string to_string() const;

 private:
  void trim() {
    if (n_ & 63) w_.back() &= (Word{1} << (n_ & 63)) - 1;
  }

  std::uint32_t n_ = 0;
  boost::container::small_vector<Word, 2> w_;
};

struct SubsetHash {
  std::size_t operator()(const Subset& s) const { return s.hash(); }
};

}  // namespace decomp

template <>
struct std::hash<decomp::Subset> {
  std::size_t operator()(const decomp::Subset& s) const { return s.hash(); }
};
