#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "moves.hpp"

namespace rwges {

enum class OpKind { insert, remove, swap_pair };

inline const char* op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::insert: return "insert";
    case OpKind::remove: return "delete";
    case OpKind::swap_pair: return "swap";
  }
  return "?";
}

// insert:    Insert(i, j, s)
// remove:    Delete(i, j, s)
// swap_pair: add i -> j and drop l -> j in the member whose parents of j are
//            the directed parents plus the undirected neighbours in s.
struct GesOperator {
  OpKind kind;
  int i;
  int j;
  NodeSet s;
  int l = -1;

  auto key() const { return std::make_tuple(static_cast<int>(kind), i, j, s.to_vector(), l); }
  bool operator<(const GesOperator& o) const { return key() < o.key(); }
  bool operator==(const GesOperator& o) const { return key() == o.key(); }
};

inline std::vector<GesOperator> enumerate_operators(const Pdag& h) {
  const int p = h.p();
  std::vector<GesOperator> ops;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      NodeSet un_j = h.undirected(j);
      if (!h.adjacent(i, j)) {
        for_each_subset(un_j - h.adjacent_set(i), [&](NodeSet s) { ops.push_back({OpKind::insert, i, j, s}); });
      } else if (h.has_directed(i, j) || h.has_undirected(i, j)) {
        for_each_subset(un_j & h.adjacent_set(i), [&](NodeSet s) { ops.push_back({OpKind::remove, i, j, s}); });
      }
    }
  for (int j = 0; j < p; ++j) {
    NodeSet un_j = h.undirected(j);
    for (int k = 0; k < p; ++k) {
      if (k == j || h.adjacent(k, j)) continue;
      for_each_subset(un_j, [&](NodeSet u) {
        for (int l : h.parents(j) | u) ops.push_back({OpKind::swap_pair, k, j, u, l});
      });
    }
  }
  std::sort(ops.begin(), ops.end());
  return ops;
}

inline bool is_clique(const Pdag& h, NodeSet s) {
  for (int a : s)
    if (!(s.without(a)).subset_of(h.adjacent_set(a))) return false;
  return true;
}

// Some path from `from` to `to` using undirected or forward-directed edges
// that avoids `blocked`.
inline bool semi_directed_path(const Pdag& h, int from, int to, NodeSet blocked) {
  NodeSet seen = NodeSet::single(from), frontier = seen;
  while (!frontier.empty()) {
    int u = frontier.min();
    frontier.erase(u);
    NodeSet next = (h.children(u) | h.undirected(u)) - seen;
    if (next.contains(to)) return true;
    next -= blocked;
    seen |= next;
    frontier |= next;
  }
  return false;
}

// Result class of an operator, or nullopt if it is not valid (no consistent
// extension, or the result leaves the degree caps when caps are given).
inline std::optional<Pdag> apply_operator(const Pdag& h, const GesOperator& op,
                                          const std::optional<DegreeCaps>& caps = std::nullopt) {
  const int p = h.p();
  if (op.i < 0 || op.j < 0 || op.i >= p || op.j >= p || op.i == op.j)
    throw Error(Errc::invalid_node, "operator node out of range");
  std::optional<Dag> g;
  switch (op.kind) {
    case OpKind::insert: {
      if (h.adjacent(op.i, op.j) || !op.s.subset_of(h.undirected(op.j) - h.adjacent_set(op.i))) return std::nullopt;
      NodeSet na = (h.undirected(op.j) & h.adjacent_set(op.i)) | op.s;
      if (!is_clique(h, na) || semi_directed_path(h, op.j, op.i, na)) return std::nullopt;
      Pdag m = h;
      m.add_directed(op.i, op.j);
      for (int k : op.s) m.orient(k, op.j);
      g = consistent_extension(m);
      break;
    }
    case OpKind::remove: {
      if (!(h.has_directed(op.i, op.j) || h.has_undirected(op.i, op.j))) return std::nullopt;
      if (!op.s.subset_of(h.undirected(op.j) & h.adjacent_set(op.i))) return std::nullopt;
      if (!is_clique(h, (h.undirected(op.j) & h.adjacent_set(op.i)) - op.s)) return std::nullopt;
      Pdag m = h;
      m.remove_edge(op.i, op.j);
      for (int k : op.s) {
        m.orient(op.j, k);
        if (m.has_undirected(k, op.i)) m.orient(op.i, k);
      }
      g = consistent_extension(m);
      break;
    }
    case OpKind::swap_pair: {
      if (h.adjacent(op.i, op.j) || !op.s.subset_of(h.undirected(op.j))) return std::nullopt;
      if (!(h.parents(op.j) | op.s).contains(op.l)) return std::nullopt;
      Pdag m = h;
      for (int u : h.undirected(op.j)) {
        if (op.s.contains(u))
          m.orient(u, op.j);
        else
          m.orient(op.j, u);
      }
      auto member = consistent_extension(m);
      if (!member || !(dag_to_cpdag(*member) == h)) return std::nullopt;
      Dag base = member->without_edge(op.l, op.j);
      if (base.reaches(op.j, op.i)) return std::nullopt;
      g = base.with_edge(op.i, op.j);
      break;
    }
  }
  if (!g) return std::nullopt;
  Pdag out = dag_to_cpdag(*g);
  if (caps && !class_in_space(out, *caps)) return std::nullopt;
  return out;
}

struct OperatorResult {
  GesOperator op;
  Pdag result;
};

// Valid operators with their results. Indistinguishable pairs
// (Insert(i,j,{}) / Insert(j,i,{}), Delete(i,j,S) / Delete(j,i,S) over an
// undirected edge) keep only the smaller first index when they coincide.
inline std::vector<OperatorResult> valid_operators(const Pdag& h, const std::optional<DegreeCaps>& caps = std::nullopt) {
  std::vector<OperatorResult> out;
  std::map<std::tuple<int, int, int, std::uint64_t>, std::size_t> twin;
  for (const auto& op : enumerate_operators(h)) {
    auto r = apply_operator(h, op, caps);
    if (!r) continue;
    bool pairable = (op.kind == OpKind::insert && op.s.empty()) ||
                    (op.kind == OpKind::remove && h.has_undirected(op.i, op.j));
    if (pairable) {
      auto key = std::make_tuple(static_cast<int>(op.kind), std::min(op.i, op.j), std::max(op.i, op.j), op.s.bits());
      if (auto it = twin.find(key); it != twin.end() && out[it->second].result == *r) continue;
      twin.emplace(key, out.size());
    }
    out.push_back({op, std::move(*r)});
  }
  return out;
}

// Distinct results with how many valid operators reach each.
inline std::map<Pdag, int> operator_targets(const std::vector<OperatorResult>& ops) {
  std::map<Pdag, int> m;
  for (const auto& r : ops) ++m[r.result];
  return m;
}

// { [G'] : G' in N_ads(G), G in class(h) }, optionally intersected with the caps.
inline std::vector<Pdag> cpdag_neighborhood_exact(const Pdag& h, const std::optional<DegreeCaps>& caps = std::nullopt,
                                                  std::size_t class_cap = kDefaultClassCap) {
  std::set<Pdag> out;
  for (const Dag& g : enumerate_equivalence_class(h, class_cap))
    for (const Dag& nb : dag_neighbors(g)) out.insert(dag_to_cpdag(nb));
  std::vector<Pdag> v;
  for (const auto& e : out)
    if (!caps || class_in_space(e, *caps)) v.push_back(e);
  return v;
}

enum class ProposalMode { operator_count, exact_neighborhood };

inline std::string to_string(ProposalMode m) {
  return m == ProposalMode::operator_count ? "operator-count" : "exact-neighborhood";
}

inline ProposalMode parse_proposal_mode(const std::string& s) {
  if (s == "operator-count" || s == "operator") return ProposalMode::operator_count;
  if (s == "exact-neighborhood" || s == "exact") return ProposalMode::exact_neighborhood;
  throw Error(Errc::unsupported_kind, "unknown proposal mode '" + s + "'");
}

// K(e_next, e) / K(e, e_next). Operator-count mode counts valid operators
// (within caps) and the operators linking the two classes in each direction;
// exact mode uses unrestricted neighbourhood sizes.
inline double proposal_ratio(const Pdag& e, const Pdag& e_next, ProposalMode mode,
                             const std::optional<DegreeCaps>& caps = std::nullopt) {
  if (mode == ProposalMode::exact_neighborhood) {
    auto a = cpdag_neighborhood_exact(e);
    if (!std::binary_search(a.begin(), a.end(), e_next)) throw Error(Errc::unreachable_pair, "classes are not neighbours");
    auto b = cpdag_neighborhood_exact(e_next);
    return static_cast<double>(a.size()) / static_cast<double>(b.size());
  }
  auto oa = valid_operators(e, caps);
  auto ob = valid_operators(e_next, caps);
  auto ta = operator_targets(oa), tb = operator_targets(ob);
  auto fa = ta.find(e_next);
  auto fb = tb.find(e);
  if (fa == ta.end() || fb == tb.end()) throw Error(Errc::unreachable_pair, "no operator links the two classes");
  return (static_cast<double>(fb->second) / ob.size()) / (static_cast<double>(fa->second) / oa.size());
}

}  // namespace rwges
