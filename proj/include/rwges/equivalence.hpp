#pragma once

#include <array>
#include <deque>
#include <optional>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "pdag.hpp"

namespace rwges {

inline constexpr std::size_t kDefaultClassCap = 100000;

// (i, j, k) with i < k, i -> j <- k and i, k non-adjacent.
using VStructure = std::array<int, 3>;

inline std::vector<VStructure> v_structures(const Dag& g) {
  std::vector<VStructure> out;
  for (int j = 0; j < g.p(); ++j) {
    NodeSet pa = g.parents(j);
    for (int i : pa)
      for (int k : pa)
        if (i < k && !g.adjacent(i, k)) out.push_back({i, j, k});
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool same_skeleton(const Dag& a, const Dag& b) {
  for (int j = 0; j < a.p(); ++j)
    if (a.neighbors(j) != b.neighbors(j)) return false;
  return true;
}

inline bool markov_equivalent(const Dag& a, const Dag& b) {
  if (a.p() != b.p()) throw Error(Errc::dimension_mismatch, "graphs have different node counts");
  return same_skeleton(a, b) && v_structures(a) == v_structures(b);
}

// Edge i -> j is covered when Pa_j = Pa_i + {i}.
inline bool is_covered(const Dag& g, int i, int j) {
  return g.has_edge(i, j) && g.parents(j) == g.parents(i).with(i);
}

inline std::vector<Dag> covered_reversal_neighbors(const Dag& g) {
  std::vector<Dag> out;
  for (auto [i, j] : g.edges())
    if (is_covered(g, i, j)) out.push_back(g.reversed_unchecked(i, j));
  return out;
}

// Compelled / reversible edge labelling over a total edge order.
inline Pdag dag_to_cpdag(const Dag& g) {
  const int p = g.p();
  std::vector<int> topo = topological_order(g);
  std::vector<int> pos(p);
  for (int k = 0; k < p; ++k) pos[topo[k]] = k;

  std::vector<Edge> ordered;
  ordered.reserve(g.num_edges());
  for (int y : topo) {
    std::vector<int> pa = g.parents(y).to_vector();
    std::sort(pa.begin(), pa.end(), [&](int a, int b) { return pos[a] > pos[b]; });
    for (int x : pa) ordered.emplace_back(x, y);
  }

  enum : char { unknown = 0, compelled = 1, reversible = 2 };
  std::vector<char> label(static_cast<std::size_t>(p) * p, unknown);
  auto lab = [&](int x, int y) -> char& { return label[static_cast<std::size_t>(x) * p + y]; };

  for (auto [x, y] : ordered) {
    if (lab(x, y) != unknown) continue;
    bool done = false;
    for (int w : g.parents(x)) {
      if (lab(w, x) != compelled) continue;
      if (!g.has_edge(w, y)) {
        for (int z : g.parents(y)) lab(z, y) = compelled;
        done = true;
        break;
      }
      lab(w, y) = compelled;
    }
    if (done) continue;
    bool extra = false;
    for (int z : g.parents(y))
      if (z != x && !g.has_edge(z, x)) {
        extra = true;
        break;
      }
    char l = extra ? compelled : reversible;
    for (int z : g.parents(y))
      if (lab(z, y) == unknown) lab(z, y) = l;
  }

  Pdag h(p);
  for (auto [x, y] : ordered) {
    if (lab(x, y) == compelled)
      h.add_directed(x, y);
    else
      h.add_undirected(x, y);
  }
  return h;
}

// Dor-Tarsi: repeatedly removes a directed sink whose undirected neighbours
// are adjacent to all of its other neighbours. Smallest such index first.
inline std::optional<Dag> consistent_extension(const Pdag& h) {
  const int p = h.p();
  std::vector<NodeSet> pa(p), ch(p), un(p);
  for (int v = 0; v < p; ++v) {
    pa[v] = h.parents(v);
    ch[v] = h.children(v);
    un[v] = h.undirected(v);
  }
  std::vector<NodeSet> out_pa(p);
  for (int v = 0; v < p; ++v) out_pa[v] = h.parents(v);

  NodeSet alive = NodeSet::range(p);
  while (!alive.empty()) {
    int pick = -1;
    for (int x : alive) {
      if (!(ch[x] & alive).empty()) continue;
      NodeSet adj = (pa[x] | un[x]) & alive;
      bool ok = true;
      for (int y : un[x] & alive) {
        NodeSet others = adj.without(y);
        NodeSet yadj = pa[y] | ch[y] | un[y];
        if (!others.subset_of(yadj)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        pick = x;
        break;
      }
    }
    if (pick < 0) return std::nullopt;
    for (int y : un[pick] & alive) out_pa[pick].insert(y);
    alive.erase(pick);
  }
  return Dag::from_parents(std::move(out_pa));
}

// Breadth-first over covered reversals.
inline std::vector<Dag> enumerate_equivalence_class(const Dag& g, std::size_t cap = kDefaultClassCap) {
  std::unordered_set<Dag, DagHash> seen{g};
  std::vector<Dag> out{g};
  std::deque<Dag> queue{g};
  while (!queue.empty()) {
    Dag cur = std::move(queue.front());
    queue.pop_front();
    for (Dag& nb : covered_reversal_neighbors(cur)) {
      if (seen.insert(nb).second) {
        if (out.size() >= cap) throw Error(Errc::limit_exceeded, "equivalence class exceeds cap");
        out.push_back(nb);
        queue.push_back(std::move(nb));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Dag> enumerate_equivalence_class(const Pdag& h, std::size_t cap = kDefaultClassCap) {
  auto g = consistent_extension(h);
  if (!g) throw Error(Errc::no_member_in_space, "PDAG admits no consistent extension");
  return enumerate_equivalence_class(*g, cap);
}

}  // namespace rwges
