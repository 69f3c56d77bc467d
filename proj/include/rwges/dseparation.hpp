#pragma once

#include <vector>

#include "dag.hpp"

namespace rwges {

// Moralised ancestral graph test.
inline bool d_separated(const Dag& g, int i, int j, NodeSet s) {
  if (i == j || s.contains(i) || s.contains(j)) return false;
  NodeSet keep = g.ancestors_of(s.with(i).with(j));
  const int p = g.p();
  std::vector<NodeSet> adj(p);
  for (int v : keep) {
    NodeSet pa = g.parents(v) & keep;
    for (int u : pa) {
      adj[u].insert(v);
      adj[v].insert(u);
    }
    for (int a : pa)
      for (int b : pa)
        if (a != b) adj[a].insert(b);
  }
  NodeSet seen = NodeSet::single(i), frontier = NodeSet::single(i);
  while (!frontier.empty()) {
    int u = frontier.min();
    frontier.erase(u);
    NodeSet next = adj[u] - s - seen;
    if (next.contains(j)) return false;
    seen |= next;
    frontier |= next;
  }
  return true;
}

// Set of statements i _||_ j | S with i < j; indexed by pair then mask of S.
class CiSet {
 public:
  explicit CiSet(const Dag& g) : p_(g.p()) {
    for (int i = 0; i < p_; ++i)
      for (int j = i + 1; j < p_; ++j) {
        NodeSet rest = NodeSet::range(p_).without(i).without(j);
        for_each_subset(rest, [&](NodeSet s) {
          if (d_separated(g, i, j, s)) stmts_.push_back(key(i, j, s));
        });
      }
    std::sort(stmts_.begin(), stmts_.end());
  }
  bool subset_of(const CiSet& o) const {
    return std::includes(o.stmts_.begin(), o.stmts_.end(), stmts_.begin(), stmts_.end());
  }
  std::size_t size() const { return stmts_.size(); }
  bool operator==(const CiSet&) const = default;

 private:
  static std::uint64_t key(int i, int j, NodeSet s) {
    return (static_cast<std::uint64_t>(i) << 58) | (static_cast<std::uint64_t>(j) << 52) | s.bits();
  }
  int p_;
  std::vector<std::uint64_t> stmts_;
};

// G is an independence map of H when every separation in G also holds in H.
inline bool is_imap(const Dag& g, const Dag& truth) {
  if (g.p() > 20) throw Error(Errc::limit_exceeded, "independence-map check limited to p <= 20");
  return CiSet(g).subset_of(CiSet(truth));
}

// Minimal I-map of the true graph under an ordering.
inline Dag minimal_imap(const Dag& truth, const Ordering& sigma) {
  if (truth.p() != sigma.p()) throw Error(Errc::dimension_mismatch, "ordering size differs from graph");
  const int p = truth.p();
  std::vector<NodeSet> pa(p);
  for (int b = 1; b < p; ++b) {
    int j = sigma.at(b);
    NodeSet pred = sigma.predecessors(j);
    for (int i : pred)
      if (!d_separated(truth, i, j, pred.without(i))) pa[j].insert(i);
  }
  return Dag::from_parents(std::move(pa));
}

// Largest |Pa_j + Ch_j| over the minimal I-maps of all orderings (all p! when p <= 7).
inline int max_imap_degree(const Dag& truth) {
  int d = 0;
  for (const auto& s : all_orderings(truth.p())) {
    Dag m = minimal_imap(truth, s);
    for (int j = 0; j < m.p(); ++j) d = std::max(d, m.neighbors(j).size());
  }
  return d;
}

}  // namespace rwges
