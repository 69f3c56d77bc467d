#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "dseparation.hpp"
#include "ges_operators.hpp"
#include "score.hpp"

namespace rwges {

enum class FitCase { optimal, overfitted, underfitted_add, underfitted_swap };

struct GjResult {
  NodeSet next;
  FitCase fit = FitCase::optimal;
  bool tie = false;  // argmax attained by more than one candidate
};

// True graph, degree caps and score; minimal I-maps per ordering are memoised.
class CanonicalContext {
 public:
  CanonicalContext(Dag truth, const Scorer& sc, std::size_t class_cap = kDefaultClassCap)
      : truth_(std::move(truth)), sc_(sc), caps_(sc.caps()), class_cap_(class_cap), star_(dag_to_cpdag(truth_)) {
    if (truth_.p() != sc.p()) throw Error(Errc::dimension_mismatch, "true graph and data differ in p");
    if (truth_.p() > 6) throw Error(Errc::cap_exceeded, "canonical paths are limited to p <= 6");
  }

  int p() const { return truth_.p(); }
  const Dag& truth() const { return truth_; }
  const Pdag& star() const { return star_; }
  const Scorer& scorer() const { return sc_; }
  const DegreeCaps& caps() const { return caps_; }
  std::size_t class_cap() const { return class_cap_; }

  const Dag& imap(const Ordering& sigma) const {
    {
      std::shared_lock lk(mu_);
      if (auto it = imaps_.find(sigma.order()); it != imaps_.end()) return it->second;
    }
    Dag m = minimal_imap(truth_, sigma);
    std::unique_lock lk(mu_);
    return imaps_.try_emplace(sigma.order(), std::move(m)).first->second;
  }

  static int degree(const Dag& g) {
    int d = 0;
    for (int j = 0; j < g.p(); ++j) d = std::max(d, g.neighbors(j).size());
    return d;
  }
  int d_star_sigma(const Ordering& sigma) const { return degree(imap(sigma)); }
  int d_star() const {
    int d = 0;
    for (const auto& s : all_orderings(p())) d = std::max(d, d_star_sigma(s));
    return d;
  }

  // Classes of all minimal I-maps.
  const std::set<Pdag>& imap_classes() const {
    std::call_once(imap_classes_once_, [&] {
      for (const auto& s : all_orderings(p())) imap_classes_.insert(dag_to_cpdag(imap(s)));
    });
    return imap_classes_;
  }

  // Largest class among the minimal I-maps.
  std::size_t r_star() const {
    std::size_t r = 0;
    for (const auto& c : imap_classes()) r = std::max(r, enumerate_equivalence_class(c, class_cap_).size());
    return r;
  }

  std::vector<Dag> members(const Pdag& e) const {
    try {
      return enumerate_equivalence_class(e, class_cap_);
    } catch (const Error& err) {
      if (err.code() == Errc::limit_exceeded) throw Error(Errc::cap_exceeded, "equivalence class exceeds cap");
      throw;
    }
  }

 private:
  Dag truth_;
  const Scorer& sc_;
  DegreeCaps caps_;
  std::size_t class_cap_;
  Pdag star_;
  mutable std::shared_mutex mu_;
  mutable std::map<std::vector<int>, Dag> imaps_;
  mutable std::once_flag imap_classes_once_;
  mutable std::set<Pdag> imap_classes_;
};

// Locally optimal move for the parent set of j under sigma.
inline GjResult g_j_sigma(const CanonicalContext& ctx, const Ordering& sigma, int j, NodeSet s) {
  const NodeSet pred = sigma.predecessors(j);
  if (!s.subset_of(pred) || s.size() > ctx.caps().d_in)
    throw Error(Errc::model_space_violation, "parent set is not in the ordered model space");
  const NodeSet target = ctx.imap(sigma).parents(j);
  const NodeSet t = target - s, r = s - target;
  const Scorer& sc = ctx.scorer();
  GjResult out{s, FitCase::optimal, false};
  if (s == target) return out;
  double best = kNegInf;
  bool found = false;
  auto consider = [&](NodeSet cand) {
    double v = sc.local(j, cand);
    if (found && v == best) out.tie = true;
    if (!found || v > best) {
      best = v;
      out.next = cand;
      out.tie = false;
      found = true;
    }
  };
  if (t.empty()) {
    out.fit = FitCase::overfitted;
    for (int l : r) consider(s.without(l));
  } else if (s.size() < ctx.caps().d_in) {
    out.fit = FitCase::underfitted_add;
    for (int k : t) consider(s.with(k));
  } else {
    out.fit = FitCase::underfitted_swap;
    if (r.empty()) throw Error(Errc::model_space_violation, "true parent set exceeds the in-degree cap");
    for (int k : t)
      for (int l : r) consider(s.with(k).without(l));
  }
  return out;
}

inline Dag apply_g_j(const CanonicalContext& ctx, const Ordering& sigma, int j, const Dag& g) {
  return g.with_parents_unchecked(j, g_j_sigma(ctx, sigma, j, g.parents(j)).next);
}

// g_j^sigma(G) for the smallest j that changes G and stays inside the caps.
inline std::optional<Dag> try_canonical_dag_move(const CanonicalContext& ctx, const Ordering& sigma, const Dag& g) {
  for (int j = 0; j < g.p(); ++j) {
    Dag h = apply_g_j(ctx, sigma, j, g);
    if (!(h == g) && ctx.caps().admits(h)) return h;
  }
  return std::nullopt;
}

inline Dag canonical_dag_move(const CanonicalContext& ctx, const Ordering& sigma, const Dag& g) {
  if (!sigma.respects(g) || !ctx.caps().admits(g))
    throw Error(Errc::model_space_violation, "graph is not in the ordered model space");
  if (g == ctx.imap(sigma)) return g;
  auto h = try_canonical_dag_move(ctx, sigma, g);
  if (!h) throw Error(Errc::no_valid_move, "every locally optimal move leaves the degree caps");
  return *h;
}

struct CanonicalRep {
  int h = 0;
  Dag graph;
  Ordering sigma;
};

inline std::vector<Ordering> linear_extensions(const Dag& g) {
  std::vector<Ordering> out;
  for (const auto& s : all_orderings(g.p()))
    if (s.respects(g)) out.push_back(s);
  return out;
}

// Minimiser of Hd(G, G*_sigma) + |G*_sigma| - |G*|; ties go to the smallest
// (sigma, sorted edge list).
inline CanonicalRep canonical_representation(const CanonicalContext& ctx, const Pdag& e) {
  std::optional<CanonicalRep> best;
  const int base = ctx.truth().num_edges();
  for (const auto& sigma : all_orderings(ctx.p())) {
    const Dag& star = ctx.imap(sigma);
    for (const auto& g : ctx.members(e)) {
      if (!sigma.respects(g) || !ctx.caps().admits(g)) continue;
      int h = hamming(g, star) + star.num_edges() - base;
      if (!best || h < best->h) best = CanonicalRep{h, g, sigma};
    }
  }
  if (!best) throw Error(Errc::model_space_violation, "class has no member within the degree caps");
  return *best;
}

inline int h_star(const CanonicalContext& ctx, const Pdag& e) { return canonical_representation(ctx, e).h; }

// One step of the canonical transition function on classes.
inline Pdag canonical_step(const CanonicalContext& ctx, const Pdag& e) {
  if (e == ctx.star()) return e;
  CanonicalRep rep = canonical_representation(ctx, e);
  if (!(rep.graph == ctx.imap(rep.sigma))) {
    auto h = try_canonical_dag_move(ctx, rep.sigma, rep.graph);
    if (!h) throw Error(Errc::no_valid_move, "no locally optimal move stays inside the degree caps");
    return dag_to_cpdag(*h);
  }
  // The class holds a minimal I-map other than the truth: delete an
  // overfitted parent from some member while remaining an I-map.
  for (const auto& tau : all_orderings(ctx.p())) {
    const Dag& star = ctx.imap(tau);
    for (const auto& g0 : ctx.members(e)) {
      if (!tau.respects(g0) || !ctx.caps().admits(g0)) continue;
      for (int j = 0; j < ctx.p(); ++j) {
        if (!(star.parents(j).subset_of(g0.parents(j)) && star.parents(j) != g0.parents(j))) continue;
        Dag h = apply_g_j(ctx, tau, j, g0);
        if (is_imap(h, ctx.truth())) return dag_to_cpdag(h);
      }
    }
  }
  throw Error(Errc::no_valid_move, "no I-map preserving deletion found");
}

struct PathReport {
  std::vector<Pdag> path;
  std::vector<int> h;
  std::vector<double> delta_score;
  int length = 0;
  int k = -1;  // first index whose class holds a minimal I-map
  int d_star = 0;
  bool k_bound = false;
  bool length_bound = false;
  bool descending = true;
  bool neighbors = true;
  bool ok() const { return k_bound && length_bound && descending && neighbors; }
};

inline PathReport verify_path(const CanonicalContext& ctx, const Pdag& e) {
  PathReport r;
  r.d_star = ctx.d_star();
  const auto& imaps = ctx.imap_classes();
  const int p = ctx.p(), d_in = ctx.caps().d_in;
  Pdag cur = e;
  r.path.push_back(cur);
  r.h.push_back(h_star(ctx, cur));
  const int max_steps = r.h.front() + 1;
  while (!(cur == ctx.star())) {
    if (r.k < 0 && imaps.count(cur)) r.k = r.length;
    Pdag next = canonical_step(ctx, cur);
    auto nb = cpdag_neighborhood_exact(cur);
    if (!std::binary_search(nb.begin(), nb.end(), next)) r.neighbors = false;
    r.delta_score.push_back(ctx.scorer().cpdag_score(next) - ctx.scorer().cpdag_score(cur));
    int hn = h_star(ctx, next);
    if (hn >= r.h.back()) r.descending = false;
    r.path.push_back(next);
    r.h.push_back(hn);
    cur = next;
    if (++r.length > max_steps) {
      r.descending = false;
      break;
    }
  }
  if (r.k < 0) r.k = r.length;
  r.k_bound = r.k <= (r.d_star + d_in) * p;
  r.length_bound = r.length <= (2 * r.d_star + d_in) * p;
  return r;
}

}  // namespace rwges
