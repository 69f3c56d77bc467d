#pragma once

#include <optional>
#include <vector>

#include "space.hpp"

namespace rwges {

enum class MoveKind { add, remove, swap };

// add: i -> j.  remove: i -> j.  swap: insert i -> j, drop l -> j.
struct DagMove {
  MoveKind kind;
  int i;
  int j;
  int l = -1;

  Dag apply(const Dag& g) const {
    switch (kind) {
      case MoveKind::add: return g.with_edge(i, j);
      case MoveKind::remove: return g.without_edge(i, j);
      case MoveKind::swap: return g.without_edge(l, j).with_edge(i, j);
    }
    return g;
  }
  auto operator<=>(const DagMove&) const = default;
};

// Restrictions on the neighbourhood: optional degree caps and optional ordering.
struct MoveFilter {
  std::optional<DegreeCaps> caps;
  std::optional<Ordering> order;
};

inline std::vector<std::pair<DagMove, Dag>> dag_neighbor_moves(const Dag& g, const MoveFilter& f = {}) {
  const int p = g.p();
  if (f.order && f.order->p() != p) throw Error(Errc::dimension_mismatch, "ordering size differs from graph");
  std::vector<std::pair<DagMove, Dag>> out;
  auto before = [&](int a, int b) { return !f.order || f.order->pos(a) < f.order->pos(b); };
  auto keep = [&](const DagMove& m, Dag&& h) {
    if (f.caps && !f.caps->admits(h)) return;
    out.emplace_back(m, std::move(h));
  };
  for (int j = 0; j < p; ++j) {
    NodeSet pa = g.parents(j);
    for (int i = 0; i < p; ++i) {
      if (i == j) continue;
      if (pa.contains(i)) {
        keep({MoveKind::remove, i, j}, g.without_edge(i, j));
        continue;
      }
      if (g.has_edge(j, i) || !before(i, j)) continue;
      if (!g.reaches(j, i)) keep({MoveKind::add, i, j}, g.with_edge(i, j));
      for (int l : pa) {
        Dag h = g.without_edge(l, j);
        if (!h.reaches(j, i)) keep({MoveKind::swap, i, j, l}, h.with_edge(i, j));
      }
    }
  }
  return out;
}

inline std::vector<Dag> dag_neighbors(const Dag& g, const MoveFilter& f = {}) {
  std::vector<Dag> out;
  for (auto& [m, h] : dag_neighbor_moves(g, f)) out.push_back(std::move(h));
  return out;
}

inline std::size_t dag_neighborhood_size(const Dag& g, const MoveFilter& f = {}) {
  return dag_neighbor_moves(g, f).size();
}

}  // namespace rwges
