#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "node_set.hpp"

namespace rwges {

using Edge = std::pair<int, int>;

inline void check_node_count(int p) {
  if (p < 0 || p > kMaxNodes)
    throw Error(Errc::invalid_node, "node count " + std::to_string(p) + " outside [0, 64]");
}

// Topological order over raw parent sets, smallest index first among ready nodes.
inline std::vector<int> topological_order(const std::vector<NodeSet>& parents) {
  const int p = static_cast<int>(parents.size());
  std::vector<int> order;
  order.reserve(p);
  NodeSet placed;
  NodeSet remaining = NodeSet::range(p);
  while (!remaining.empty()) {
    int next = -1;
    for (int v : remaining) {
      if (parents[v].subset_of(placed)) {
        next = v;
        break;
      }
    }
    if (next < 0) throw Error(Errc::cycle_detected, "parent sets contain a directed cycle");
    order.push_back(next);
    placed.insert(next);
    remaining.erase(next);
  }
  return order;
}

inline bool is_acyclic(const std::vector<NodeSet>& parents) {
  try {
    topological_order(parents);
    return true;
  } catch (const Error&) {
    return false;
  }
}

class Dag {
 public:
  Dag() = default;
  explicit Dag(int p) : pa_(check_p(p)), ch_(p) {}

  Dag(int p, const std::vector<Edge>& edges) : Dag(p) {
    for (auto [i, j] : edges) {
      check_node(i);
      check_node(j);
      if (i == j) throw Error(Errc::cycle_detected, "self loop on node " + std::to_string(i + 1));
      pa_[j].insert(i);
      ch_[i].insert(j);
    }
    if (!is_acyclic(pa_)) throw Error(Errc::cycle_detected, "edge list is cyclic");
  }

  static Dag from_parents(std::vector<NodeSet> parents) {
    Dag g;
    g.pa_ = std::move(parents);
    check_node_count(g.p());
    g.ch_.assign(g.pa_.size(), NodeSet{});
    for (int j = 0; j < g.p(); ++j) {
      if (!g.pa_[j].subset_of(NodeSet::range(g.p())) || g.pa_[j].contains(j))
        throw Error(Errc::invalid_node, "parent set out of range");
      for (int i : g.pa_[j]) g.ch_[i].insert(j);
    }
    if (!is_acyclic(g.pa_)) throw Error(Errc::cycle_detected, "parent sets are cyclic");
    return g;
  }

  int p() const { return static_cast<int>(pa_.size()); }
  NodeSet parents(int j) const { return pa_[j]; }
  NodeSet children(int j) const { return ch_[j]; }
  NodeSet neighbors(int j) const { return pa_[j] | ch_[j]; }
  const std::vector<NodeSet>& parent_sets() const { return pa_; }
  bool has_edge(int i, int j) const { return pa_[j].contains(i); }
  bool adjacent(int i, int j) const { return pa_[j].contains(i) || pa_[i].contains(j); }
  int in_degree(int j) const { return pa_[j].size(); }
  int out_degree(int j) const { return ch_[j].size(); }

  int num_edges() const {
    int m = 0;
    for (auto s : pa_) m += s.size();
    return m;
  }

  // Sorted by (from, to).
  std::vector<Edge> edges() const {
    std::vector<Edge> e;
    for (int i = 0; i < p(); ++i)
      for (int j : ch_[i]) e.emplace_back(i, j);
    return e;
  }

  NodeSet descendants(int v) const {
    NodeSet seen, frontier = ch_[v];
    while (!frontier.empty()) {
      int u = frontier.min();
      frontier.erase(u);
      if (seen.contains(u)) continue;
      seen.insert(u);
      frontier |= ch_[u] - seen;
    }
    return seen;
  }

  NodeSet ancestors_of(NodeSet s) const {
    NodeSet seen = s, frontier = s;
    while (!frontier.empty()) {
      int u = frontier.min();
      frontier.erase(u);
      NodeSet fresh = pa_[u] - seen;
      seen |= fresh;
      frontier |= fresh;
    }
    return seen;
  }

  // True if a directed path from -> ... -> to exists (length >= 1).
  bool reaches(int from, int to) const { return descendants(from).contains(to); }

  bool can_add_edge(int i, int j) const {
    return i != j && !adjacent(i, j) && !reaches(j, i);
  }

  Dag with_edge(int i, int j) const {
    check_node(i);
    check_node(j);
    if (i == j || has_edge(i, j) || reaches(j, i))
      throw Error(Errc::cycle_detected, "adding edge would create a cycle or duplicate");
    Dag g = *this;
    g.pa_[j].insert(i);
    g.ch_[i].insert(j);
    return g;
  }

  Dag without_edge(int i, int j) const {
    Dag g = *this;
    g.pa_[j].erase(i);
    g.ch_[i].erase(j);
    return g;
  }

  // No acyclicity check: callers guarantee it.
  Dag with_parents_unchecked(int j, NodeSet s) const {
    Dag g = *this;
    for (int i : g.pa_[j]) g.ch_[i].erase(j);
    g.pa_[j] = s;
    for (int i : s) g.ch_[i].insert(j);
    return g;
  }

  Dag reversed_unchecked(int i, int j) const {
    Dag g = without_edge(i, j);
    g.pa_[i].insert(j);
    g.ch_[j].insert(i);
    return g;
  }

  bool operator==(const Dag& o) const { return pa_ == o.pa_; }
  bool operator<(const Dag& o) const { return edges() < o.edges(); }

  std::size_t hash() const {
    std::size_t h = pa_.size();
    for (auto s : pa_) h = h * 0x9E3779B97F4A7C15ull ^ (s.bits() + 0x632BE59BD9B4E019ull + (h >> 7));
    return h;
  }

 private:
  static int check_p(int p) {
    check_node_count(p);
    return p;
  }
  void check_node(int v) const {
    if (v < 0 || v >= p()) throw Error(Errc::invalid_node, "node index out of range: " + std::to_string(v + 1));
  }

  std::vector<NodeSet> pa_;
  std::vector<NodeSet> ch_;
};

struct DagHash {
  std::size_t operator()(const Dag& g) const { return g.hash(); }
};

inline std::vector<int> topological_order(const Dag& g) { return topological_order(g.parent_sets()); }

// Structural Hamming distance: sum over nodes of |Pa_j(a) xor Pa_j(b)|.
inline int hamming(const Dag& a, const Dag& b) {
  if (a.p() != b.p()) throw Error(Errc::dimension_mismatch, "hamming on graphs of different size");
  int d = 0;
  for (int j = 0; j < a.p(); ++j)
    d += std::popcount(a.parents(j).bits() ^ b.parents(j).bits());
  return d;
}

// A permutation: order[k] is the node at position k, pos[v] the position of node v.
class Ordering {
 public:
  Ordering() = default;
  explicit Ordering(std::vector<int> order) : order_(std::move(order)), pos_(order_.size(), -1) {
    const int p = static_cast<int>(order_.size());
    check_node_count(p);
    for (int k = 0; k < p; ++k) {
      int v = order_[k];
      if (v < 0 || v >= p || pos_[v] != -1) throw Error(Errc::invalid_node, "ordering is not a permutation");
      pos_[v] = k;
    }
  }
  static Ordering identity(int p) {
    std::vector<int> o(p);
    std::iota(o.begin(), o.end(), 0);
    return Ordering(std::move(o));
  }

  int p() const { return static_cast<int>(order_.size()); }
  int at(int k) const { return order_[k]; }
  int pos(int v) const { return pos_[v]; }
  const std::vector<int>& order() const { return order_; }

  NodeSet predecessors(int v) const {
    NodeSet s;
    for (int k = 0; k < pos_[v]; ++k) s.insert(order_[k]);
    return s;
  }
  bool respects(const Dag& g) const {
    for (auto [i, j] : g.edges())
      if (pos_[i] >= pos_[j]) return false;
    return true;
  }

  bool operator==(const Ordering&) const = default;
  bool operator<(const Ordering& o) const { return order_ < o.order_; }

 private:
  std::vector<int> order_;
  std::vector<int> pos_;
};

// All permutations of 0..p-1 in lexicographic order.
inline std::vector<Ordering> all_orderings(int p) {
  std::vector<int> o(p);
  std::iota(o.begin(), o.end(), 0);
  std::vector<Ordering> out;
  do {
    out.emplace_back(o);
  } while (std::next_permutation(o.begin(), o.end()));
  return out;
}

}  // namespace rwges
