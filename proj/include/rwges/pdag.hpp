#pragma once

#include <cstddef>
#include <vector>

#include "dag.hpp"

namespace rwges {

// Partially directed graph. For a CPDAG, directed edges are compelled and
// undirected edges reversible.
class Pdag {
 public:
  Pdag() = default;
  explicit Pdag(int p) : pa_(p), ch_(p), un_(p) { check_node_count(p); }

  Pdag(int p, const std::vector<Edge>& directed, const std::vector<Edge>& undirected) : Pdag(p) {
    for (auto [i, j] : directed) add_directed(i, j);
    for (auto [i, j] : undirected) add_undirected(i, j);
  }

  static Pdag from_dag(const Dag& g) {
    Pdag h(g.p());
    for (auto [i, j] : g.edges()) h.add_directed(i, j);
    return h;
  }

  int p() const { return static_cast<int>(pa_.size()); }
  NodeSet parents(int j) const { return pa_[j]; }
  NodeSet children(int j) const { return ch_[j]; }
  NodeSet undirected(int j) const { return un_[j]; }
  NodeSet adjacent_set(int j) const { return pa_[j] | ch_[j] | un_[j]; }
  bool has_directed(int i, int j) const { return pa_[j].contains(i); }
  bool has_undirected(int i, int j) const { return un_[i].contains(j); }
  bool adjacent(int i, int j) const { return adjacent_set(i).contains(j); }

  void add_directed(int i, int j) {
    check(i, j);
    pa_[j].insert(i);
    ch_[i].insert(j);
  }
  void add_undirected(int i, int j) {
    check(i, j);
    un_[i].insert(j);
    un_[j].insert(i);
  }
  void remove_edge(int i, int j) {
    pa_[j].erase(i);
    ch_[i].erase(j);
    pa_[i].erase(j);
    ch_[j].erase(i);
    un_[i].erase(j);
    un_[j].erase(i);
  }
  void orient(int i, int j) {
    remove_edge(i, j);
    add_directed(i, j);
  }

  std::vector<Edge> directed_edges() const {
    std::vector<Edge> e;
    for (int i = 0; i < p(); ++i)
      for (int j : ch_[i]) e.emplace_back(i, j);
    return e;
  }
  // Each undirected edge once, as (smaller, larger).
  std::vector<Edge> undirected_edges() const {
    std::vector<Edge> e;
    for (int i = 0; i < p(); ++i)
      for (int j : un_[i])
        if (i < j) e.emplace_back(i, j);
    return e;
  }
  int num_edges() const {
    return static_cast<int>(directed_edges().size() + undirected_edges().size());
  }

  bool operator==(const Pdag& o) const { return pa_ == o.pa_ && un_ == o.un_; }
  bool operator<(const Pdag& o) const {
    auto a = directed_edges(), b = o.directed_edges();
    if (a != b) return a < b;
    return undirected_edges() < o.undirected_edges();
  }

  std::size_t hash() const {
    std::size_t h = pa_.size();
    for (int j = 0; j < p(); ++j) {
      h = h * 0x9E3779B97F4A7C15ull ^ (pa_[j].bits() + 0x632BE59BD9B4E019ull + (h >> 7));
      h = h * 0xBF58476D1CE4E5B9ull ^ (un_[j].bits() + (h >> 11));
    }
    return h;
  }

 private:
  void check(int i, int j) const {
    if (i < 0 || j < 0 || i >= p() || j >= p() || i == j)
      throw Error(Errc::invalid_node, "edge endpoint out of range");
  }

  std::vector<NodeSet> pa_;
  std::vector<NodeSet> ch_;
  std::vector<NodeSet> un_;
};

struct PdagHash {
  std::size_t operator()(const Pdag& g) const { return g.hash(); }
};

}  // namespace rwges
