#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "sem.hpp"

namespace rwges {

// Representatives of the eleven 3-node classes, numbered 1..11.
inline Dag three_node_graph(int k) {
  static const std::array<std::vector<Edge>, 11> e{{
      {{0, 1}},                  // 1: 1-2
      {{1, 2}},                  // 2: 2-3
      {{0, 2}},                  // 3: 1-3
      {{0, 1}, {1, 2}},          // 4: 1-2-3
      {{1, 0}, {0, 2}},          // 5: 2-1-3
      {{0, 2}, {2, 1}},          // 6: 1-3-2
      {{0, 1}, {2, 1}},          // 7: 1->2<-3
      {{1, 0}, {2, 0}},          // 8: 2->1<-3
      {{0, 2}, {1, 2}},          // 9: 1->3<-2
      {{0, 1}, {0, 2}, {1, 2}},  // 10: complete
      {},                        // 11: empty
  }};
  if (k < 1 || k > 11) throw Error(Errc::invalid_node, "three-node classes are numbered 1..11");
  return Dag(3, e[k - 1]);
}

inline Pdag three_node_class(int k) { return dag_to_cpdag(three_node_graph(k)); }

enum class DemoKind { ex1, ex2, ex3 };

inline DemoKind parse_demo_kind(const std::string& s) {
  if (s == "ex1") return DemoKind::ex1;
  if (s == "ex2") return DemoKind::ex2;
  if (s == "ex3") return DemoKind::ex3;
  throw Error(Errc::unsupported_kind, "unknown demo '" + s + "'");
}

inline std::string to_string(DemoKind k) { return k == DemoKind::ex1 ? "ex1" : k == DemoKind::ex2 ? "ex2" : "ex3"; }

struct RatioCheck {
  std::string name;
  double expected_log = 0;
  double computed_log = 0;
  double rel_error = 0;  // |ratio / expected - 1|
  bool pass = false;
};

struct MixingPoint {
  int n = 0;
  std::uint64_t t_mix = 0;
  bool capped = false;
  double slope = 0;  // log-log slope from the previous grid point
  double self_transition = 0;
  double self_transition_bound = 0;
};

struct DemoConfig {
  int n = 400;
  double alpha = 1.0;
  double gamma = 1.0;
  double a1 = 1.0, a2 = 1.0;  // second example
  double w = 1.0;             // edge weight of the five-node example
  std::vector<int> grid{100, 200, 400, 800, 1600};
  double tol = 1e-6;
  int max_doublings = 62;
};

struct DemoReport {
  DemoKind kind = DemoKind::ex1;
  int p = 3;
  int n = 0;
  double c2 = 0;
  std::vector<RatioCheck> ratios;
  double self_transition = 0;
  double self_transition_bound = 0;
  bool bottleneck = false;
  double fitted_c = 0;
  bool local_mode = false;  // no neighbour of the trap scores higher
  std::vector<MixingPoint> mixing;
  std::vector<std::string> notes;
  std::size_t neighborhood_size = 0;
  bool ok() const {
    for (const auto& r : ratios)
      if (!r.pass) return false;
    return bottleneck;
  }
};

// Prior constants of the examples: c2 = sqrt(n), kappa = 0, c1 sqrt(1 + alpha/gamma) = 1.
inline ScoreParams demo_params(int n, int p, const DemoConfig& cfg) {
  ScoreParams prm;
  prm.alpha = cfg.alpha;
  prm.gamma = cfg.gamma;
  prm.kappa = 0;
  prm.c1 = 1.0 / std::sqrt(1.0 + cfg.alpha / cfg.gamma);
  prm.c2 = std::sqrt(static_cast<double>(n));
  prm.d_in = 2;
  prm.d_out = 2;
  if (p > 3) prm.d_in = prm.d_out = p - 1;
  return prm;
}

inline SemModel ex1_sem(int n, const DemoConfig& cfg) {
  const double c2 = std::sqrt(static_cast<double>(n));
  const double b = std::sqrt(4.0 * c2 * std::log(3.0) / (cfg.alpha * n));
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 1) = b;
  w(1, 2) = b;
  return SemModel{Dag(3, {{0, 1}, {1, 2}}), w, Eigen::VectorXd::Ones(3)};
}

inline SemModel ex2_sem(const DemoConfig& cfg) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 2) = cfg.a1;
  w(1, 2) = cfg.a2;
  return SemModel{Dag(3, {{0, 2}, {1, 2}}), w, Eigen::VectorXd::Ones(3)};
}

// Five nodes: 1->5, 2->5, 3->5 and the triangle 2-3-4 oriented 2->3->4, 2->4.
inline SemModel ex3_sem(const DemoConfig& cfg) {
  std::vector<Edge> e{{1, 2}, {1, 3}, {2, 3}, {0, 4}, {1, 4}, {2, 4}};
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(5, 5);
  for (auto [i, j] : e) w(i, j) = cfg.w;
  return SemModel{Dag(5, e), w, Eigen::VectorXd::Ones(5)};
}

inline Dag ex3_local_mode() { return Dag(5, {{1, 2}, {1, 3}, {2, 3}, {0, 4}, {1, 4}, {2, 4}, {0, 3}}); }

inline RatioCheck ratio_check(std::string name, double expected_log, double computed_log, double tol) {
  RatioCheck r{std::move(name), expected_log, computed_log, std::abs(std::expm1(computed_log - expected_log)), false};
  r.pass = r.rel_error <= tol;
  return r;
}

struct ThreeNodeChain {
  Scorer sc;
  ClassSpace space;
  RwgesKernel kernel;
  Posterior post;
  TransitionMatrix tm;
  ThreeNodeChain(std::shared_ptr<const Dataset> d, ScoreParams prm)
      : sc(std::move(d), prm), space(class_space(3, prm.caps())), kernel(sc, ProposalMode::exact_neighborhood),
        post(exact_posterior(kernel, space)), tm(build_transition_matrix(kernel, space)) {}
};

inline void fill_mixing(DemoReport& rep, const DemoConfig& cfg, const std::function<SemModel(int)>& make, int trap) {
  double prev_log_t = 0, prev_log_n = 0;
  for (std::size_t k = 0; k < cfg.grid.size(); ++k) {
    const int n = cfg.grid[k];
    ThreeNodeChain ch(std::make_shared<Dataset>(exact_design(make(n), n)), demo_params(n, 3, cfg));
    MixingResult m = exact_mixing_time(ch.tm, ch.post.prob, 0.25, cfg.max_doublings);
    const std::size_t x = ch.space.at(three_node_class(trap));
    MixingPoint pt{n, m.t, m.capped, 0, ch.tm(x, x), 1.0 - 3.0 * std::pow(3.0, -std::sqrt(static_cast<double>(n)) / 2)};
    double lt = std::log(static_cast<double>(m.t)), ln = std::log(static_cast<double>(n));
    if (k > 0) pt.slope = (lt - prev_log_t) / (ln - prev_log_n);
    prev_log_t = lt;
    prev_log_n = ln;
    rep.mixing.push_back(pt);
  }
}

inline DemoReport demo_ex1(const DemoConfig& cfg) {
  DemoReport rep;
  rep.kind = DemoKind::ex1;
  rep.n = cfg.n;
  const double n = cfg.n, an2 = cfg.alpha * n / 2, lp = std::log(3.0);
  rep.c2 = std::sqrt(n);
  SemModel m = ex1_sem(cfg.n, cfg);
  const double b2 = m.weights(0, 1) * m.weights(0, 1);
  ThreeNodeChain ch(std::make_shared<Dataset>(exact_design(m, cfg.n)), demo_params(cfg.n, 3, cfg));
  auto lpi = [&](int k) { return ch.post.log_prob[ch.space.at(three_node_class(k))]; };
  const double q = b2 * b2 + b2 + 1;
  rep.ratios.push_back(ratio_check("pi(G7)/pi(G1)", -rep.c2 * lp + an2 * std::log1p(b2), lpi(7) - lpi(1), cfg.tol));
  rep.ratios.push_back(ratio_check("pi(G7)/pi(G2)", -rep.c2 * lp + an2 * std::log((b2 + 1) * (b2 + 1) / q),
                                   lpi(7) - lpi(2), cfg.tol));
  rep.ratios.push_back(ratio_check("pi(G7)/pi(G10)", rep.c2 * lp - an2 * std::log(q / (b2 + 1)), lpi(7) - lpi(10), cfg.tol));
  rep.ratios.push_back(ratio_check("pi(G4)/pi(G7)", an2 * std::log(q / (b2 + 1)), lpi(4) - lpi(7), cfg.tol));
  const std::size_t trap = ch.space.at(three_node_class(7));
  rep.self_transition = ch.tm(trap, trap);
  rep.self_transition_bound = 1.0 - 3.0 * std::pow(3.0, -rep.c2 / 2);
  rep.bottleneck = rep.self_transition >= rep.self_transition_bound;
  rep.local_mode = true;
  for (const auto& [e, pr] : ch.kernel.proposals(three_node_class(7))) {
    (void)pr;
    if (ch.sc.cpdag_score(e) > ch.sc.cpdag_score(three_node_class(7))) rep.local_mode = false;
  }
  rep.neighborhood_size = ch.kernel.proposals(three_node_class(7)).size();
  fill_mixing(rep, cfg, [&](int nn) { return ex1_sem(nn, cfg); }, 7);
  return rep;
}

inline DemoReport demo_ex2(const DemoConfig& cfg) {
  DemoReport rep;
  rep.kind = DemoKind::ex2;
  rep.n = cfg.n;
  const double n = cfg.n, an2 = cfg.alpha * n / 2, lp = std::log(3.0);
  rep.c2 = std::sqrt(n);
  const double a1 = cfg.a1 * cfg.a1, a2 = cfg.a2 * cfg.a2;
  ThreeNodeChain ch(std::make_shared<Dataset>(exact_design(ex2_sem(cfg), cfg.n)), demo_params(cfg.n, 3, cfg));
  auto lpi = [&](int k) { return ch.post.log_prob[ch.space.at(three_node_class(k))]; };
  rep.ratios.push_back(ratio_check("pi(G10)/pi(G9)", -rep.c2 * lp, lpi(10) - lpi(9), cfg.tol));
  std::array<double, 3> escape{-rep.c2 * lp + an2 * std::log1p(a1), -rep.c2 * lp + an2 * std::log1p(a2),
                               -rep.c2 * lp + an2 * std::log((a1 + 1) * (a2 + 1) / (a1 + a2 + 1))};
  std::array<int, 3> to{4, 5, 6};
  rep.fitted_c = std::numeric_limits<double>::infinity();
  double leave = 0;
  for (int k = 0; k < 3; ++k) {
    rep.ratios.push_back(ratio_check("pi(G10)/pi(G" + std::to_string(to[k]) + ")", escape[k], lpi(10) - lpi(to[k]), cfg.tol));
    double computed = lpi(10) - lpi(to[k]);
    rep.fitted_c = std::min(rep.fitted_c, computed / n);
    // uniform proposal over the three stated neighbours; acceptance at most the reverse ratio
    leave += std::min(1.0, std::exp(-computed)) / 3.0;
  }
  rep.self_transition = 1.0 - leave;
  rep.self_transition_bound = 1.0 - 3.0 * std::exp(-rep.fitted_c * n);
  rep.bottleneck = rep.fitted_c > 0 && rep.self_transition >= rep.self_transition_bound;
  rep.neighborhood_size = 3;
  rep.notes.push_back("trap neighbourhood is {G4, G5, G6}; the add/delete/swap chain reaches G9 in one step");
  fill_mixing(rep, cfg, [&](int) { return ex2_sem(cfg); }, 10);
  return rep;
}

inline DemoReport demo_ex3(const DemoConfig& cfg) {
  DemoReport rep;
  rep.kind = DemoKind::ex3;
  rep.p = 5;
  rep.n = cfg.n;
  const double n = cfg.n, lp = std::log(5.0);
  ScoreParams prm = demo_params(cfg.n, 5, cfg);
  rep.c2 = prm.c2;
  Scorer sc(std::make_shared<Dataset>(exact_design(ex3_sem(cfg), cfg.n)), prm);
  const Dag h = ex3_local_mode();
  const double sh = sc.dag_score(h);
  // Members of the eight neighbouring classes.
  const std::vector<std::pair<std::string, Dag>> nb{
      {"insert 1-2", h.with_edge(0, 1)},    {"insert 1-3", h.with_edge(0, 2)},
      {"insert 4-5", h.with_edge(3, 4)},    {"delete 2-3", h.without_edge(1, 2)},
      {"delete 3->4", h.without_edge(2, 3)}, {"delete 3->5", h.without_edge(2, 4)},
      {"delete 2->4", h.without_edge(1, 3)}, {"delete 2->5", h.without_edge(1, 4)}};
  rep.fitted_c = std::numeric_limits<double>::infinity();
  double leave = 0;
  for (std::size_t k = 0; k < nb.size(); ++k) {
    double computed = sc.dag_score(nb[k].second) - sh;
    if (k < 3) {
      rep.ratios.push_back(ratio_check("pi(" + nb[k].first + ")/pi(H)", -rep.c2 * lp, computed, cfg.tol));
    } else {
      rep.fitted_c = std::min(rep.fitted_c, -computed / n);
    }
    leave += std::min(1.0, std::exp(computed)) / nb.size();
  }
  rep.self_transition = 1.0 - leave;
  rep.self_transition_bound = 1.0 - 3.0 * std::pow(5.0, -rep.c2) - 5.0 * std::exp(-rep.fitted_c * n);
  rep.bottleneck = rep.fitted_c > 0 && rep.self_transition >= rep.self_transition_bound;
  Pdag hc = dag_to_cpdag(h);
  rep.neighborhood_size = valid_operators(hc, prm.caps()).size();
  auto full = cpdag_neighborhood_exact(hc);
  bool reaches = std::binary_search(full.begin(), full.end(), dag_to_cpdag(ex3_sem(cfg).graph));
  rep.notes.push_back(std::string("add/delete/swap neighbourhood of H ") + (reaches ? "contains" : "misses") +
                      " the true class");
  return rep;
}

inline DemoReport slow_mixing_demo(DemoKind k, const DemoConfig& cfg = {}) {
  switch (k) {
    case DemoKind::ex1: return demo_ex1(cfg);
    case DemoKind::ex2: return demo_ex2(cfg);
    case DemoKind::ex3: return demo_ex3(cfg);
  }
  throw Error(Errc::unsupported_kind, "unknown demo");
}

}  // namespace rwges
