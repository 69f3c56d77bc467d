#pragma once

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "space.hpp"

namespace rwges {

// Visits every DAG once, optionally within degree caps or consistent with a
// fixed ordering. Each DAG is produced from the ordering that equals its
// smallest-index-first topological order.
inline void for_each_dag(int p, const std::optional<DegreeCaps>& caps, const std::optional<Ordering>& fixed,
                         const std::function<void(const Dag&)>& visit) {
  check_node_count(p);
  if (p > 8) throw Error(Errc::cap_exceeded, "DAG enumeration limited to p <= 8");
  const int max_in = caps && caps->mode == DegreeMode::in_out ? caps->d_in : p;
  std::vector<NodeSet> pa(p);
  std::vector<int> outdeg(p, 0);

  auto run = [&](const std::vector<int>& order, bool unique) {
    std::vector<int> need(p, -1);  // position a parent must reach for uniqueness
    if (unique)
      for (int m = 0; m < p; ++m)
        for (int k = 0; k < m; ++k)
          if (order[k] > order[m]) need[m] = k;
    std::function<void(int, NodeSet)> rec = [&](int m, NodeSet pred) {
      if (m == p) {
        Dag g = Dag::from_parents(pa);
        if (!caps || caps->admits(g)) visit(g);
        return;
      }
      int v = order[m];
      NodeSet late;
      if (need[m] >= 0)
        for (int k = need[m]; k < m; ++k) late.insert(order[k]);
      for_each_subset(pred, [&](NodeSet s) {
        if (s.size() > max_in) return;
        if (need[m] >= 0 && (s & late).empty()) return;
        if (caps && caps->mode == DegreeMode::in_out) {
          for (int u : s)
            if (outdeg[u] + 1 > caps->d_out) return;
        }
        pa[v] = s;
        for (int u : s) ++outdeg[u];
        rec(m + 1, pred.with(v));
        for (int u : s) --outdeg[u];
        pa[v] = NodeSet{};
      });
    };
    rec(0, NodeSet{});
  };

  if (fixed) {
    if (fixed->p() != p) throw Error(Errc::dimension_mismatch, "ordering size differs from p");
    run(fixed->order(), false);
    return;
  }
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  do {
    run(order, true);
  } while (std::next_permutation(order.begin(), order.end()));
}

inline std::vector<Dag> enumerate_dags(int p, const std::optional<DegreeCaps>& caps = std::nullopt,
                                       const std::optional<Ordering>& fixed = std::nullopt) {
  std::vector<Dag> out;
  for_each_dag(p, caps, fixed, [&](const Dag& g) { out.push_back(g); });
  std::sort(out.begin(), out.end());
  return out;
}

// CPDAGs of the classes with at least one member within the caps.
inline std::vector<Pdag> enumerate_classes(int p, const std::optional<DegreeCaps>& caps = std::nullopt) {
  std::set<Pdag> s;
  for_each_dag(p, caps, std::nullopt, [&](const Dag& g) { s.insert(dag_to_cpdag(g)); });
  return {s.begin(), s.end()};
}

}  // namespace rwges
