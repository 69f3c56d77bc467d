#pragma once

// Independent reference implementations used only by the tests.

#include <map>
#include <set>
#include <vector>

#include "rwges/dag.hpp"

namespace oracle {

using rwges::Dag;
using rwges::NodeSet;

// All DAGs on p nodes by scanning every off-diagonal adjacency pattern.
inline std::vector<Dag> brute_force_dags(int p) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j) slots.emplace_back(i, j);
  std::vector<Dag> out;
  const std::uint64_t total = std::uint64_t{1} << slots.size();
  for (std::uint64_t m = 0; m < total; ++m) {
    std::vector<std::vector<int>> adj(p, std::vector<int>(p, 0));
    bool bad = false;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if ((m >> s) & 1) {
        auto [i, j] = slots[s];
        if (adj[j][i]) bad = true;
        adj[i][j] = 1;
      }
    if (bad) continue;
    // Warshall closure, cyclic iff some node reaches itself.
    auto r = adj;
    for (int k = 0; k < p; ++k)
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
          if (r[i][k] && r[k][j]) r[i][j] = 1;
    for (int i = 0; i < p; ++i)
      if (r[i][i]) bad = true;
    if (bad) continue;
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        if (adj[i][j]) e.emplace_back(i, j);
    out.emplace_back(p, e);
  }
  return out;
}

// Skeleton plus unshielded colliders, as a comparable key.
inline std::pair<std::set<std::pair<int, int>>, std::set<std::vector<int>>> pattern(const Dag& g) {
  std::set<std::pair<int, int>> skel;
  std::set<std::vector<int>> coll;
  for (auto [i, j] : g.edges()) skel.insert({std::min(i, j), std::max(i, j)});
  for (int j = 0; j < g.p(); ++j)
    for (int a = 0; a < g.p(); ++a)
      for (int b = a + 1; b < g.p(); ++b)
        if (g.has_edge(a, j) && g.has_edge(b, j) && !g.adjacent(a, b)) coll.insert({a, j, b});
  return {skel, coll};
}

// d-connection by walking every simple path in the skeleton.
inline bool d_connected(const Dag& g, int x, int y, NodeSet z) {
  const int p = g.p();
  std::vector<int> path{x};
  std::vector<bool> on(p, false);
  on[x] = true;
  auto desc_or_self_in_z = [&](int v) {
    if (z.contains(v)) return true;
    std::vector<int> st{v};
    std::vector<bool> seen(p, false);
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (int c = 0; c < p; ++c)
        if (g.has_edge(u, c) && !seen[c]) {
          if (z.contains(c)) return true;
          seen[c] = true;
          st.push_back(c);
        }
    }
    return false;
  };
  auto active = [&]() {
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
      int a = path[k - 1], b = path[k], c = path[k + 1];
      bool collider = g.has_edge(a, b) && g.has_edge(c, b);
      if (collider && !desc_or_self_in_z(b)) return false;
      if (!collider && z.contains(b)) return false;
    }
    return true;
  };
  std::function<bool(int)> dfs = [&](int u) {
    if (u == y) return active();
    for (int v = 0; v < p; ++v) {
      if (on[v] || !g.adjacent(u, v)) continue;
      on[v] = true;
      path.push_back(v);
      bool hit = dfs(v);
      path.pop_back();
      on[v] = false;
      if (hit) return true;
    }
    return false;
  };
  return dfs(x);
}

}  // namespace oracle

#include "rwges/edge_list.hpp"

namespace rwges {
inline void PrintTo(const Pdag& h, std::ostream* os) {
  *os << "{";
  for (auto [i, j] : h.directed_edges()) *os << " " << i + 1 << "->" << j + 1;
  for (auto [i, j] : h.undirected_edges()) *os << " " << i + 1 << "--" << j + 1;
  *os << " }";
}
inline void PrintTo(const Dag& g, std::ostream* os) { PrintTo(Pdag::from_dag(g), os); }
}  // namespace rwges
