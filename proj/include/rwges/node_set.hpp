#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace rwges {

inline constexpr int kMaxNodes = 64;

// Small ordered set of node indices backed by a 64-bit mask.
class NodeSet {
 public:
  class iterator {
   public:
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr int operator*() const { return std::countr_zero(rest_); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator t = *this;
      ++*this;
      return t;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr NodeSet() = default;
  constexpr NodeSet(std::initializer_list<int> nodes) {
    for (int v : nodes) insert(v);
  }
  static constexpr NodeSet from_bits(std::uint64_t b) {
    NodeSet s;
    s.bits_ = b;
    return s;
  }
  static constexpr NodeSet range(int p) {
    return from_bits(p >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << p) - 1));
  }
  static constexpr NodeSet single(int v) { return from_bits(std::uint64_t{1} << v); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int v) const { return (bits_ >> v) & 1u; }
  constexpr void insert(int v) { bits_ |= std::uint64_t{1} << v; }
  constexpr void erase(int v) { bits_ &= ~(std::uint64_t{1} << v); }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int min() const { return std::countr_zero(bits_); }
  constexpr int max() const { return 63 - std::countl_zero(bits_); }

  constexpr NodeSet with(int v) const { return from_bits(bits_ | (std::uint64_t{1} << v)); }
  constexpr NodeSet without(int v) const { return from_bits(bits_ & ~(std::uint64_t{1} << v)); }
  constexpr bool subset_of(NodeSet o) const { return (bits_ & ~o.bits_) == 0; }

  constexpr NodeSet operator|(NodeSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr NodeSet operator&(NodeSet o) const { return from_bits(bits_ & o.bits_); }
  constexpr NodeSet operator-(NodeSet o) const { return from_bits(bits_ & ~o.bits_); }
  constexpr NodeSet& operator|=(NodeSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr NodeSet& operator&=(NodeSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  constexpr NodeSet& operator-=(NodeSet o) {
    bits_ &= ~o.bits_;
    return *this;
  }

  constexpr bool operator==(const NodeSet&) const = default;
  // Lexicographic on the sorted element sequence.
  std::strong_ordering operator<=>(const NodeSet& o) const {
    auto a = to_vector(), b = o.to_vector();
    return a <=> b;
  }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<int> to_vector() const {
    std::vector<int> v;
    v.reserve(size());
    for (int x : *this) v.push_back(x);
    return v;
  }

 private:
  std::uint64_t bits_ = 0;
};

// Calls f(subset) for every subset of `s`, smallest masks first.
template <class F>
void for_each_subset(NodeSet s, F&& f) {
  std::uint64_t m = s.bits();
  std::uint64_t sub = 0;
  while (true) {
    f(NodeSet::from_bits(sub));
    if (sub == m) break;
    sub = (sub - m) & m;
  }
}

// Subsets of `s` with at most `k` elements, ordered by size then lexicographically.
inline std::vector<NodeSet> subsets_up_to(NodeSet s, int k) {
  std::vector<NodeSet> out;
  for_each_subset(s, [&](NodeSet t) {
    if (t.size() <= k) out.push_back(t);
  });
  std::sort(out.begin(), out.end(), [](NodeSet a, NodeSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

}  // namespace rwges
