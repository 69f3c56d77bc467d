#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ges_operators.hpp"
#include "rng.hpp"
#include "score.hpp"

namespace rwges {

enum class SamplerKind { rwges, ads, structure };

inline std::string to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::rwges: return "rwges";
    case SamplerKind::ads: return "ads";
    case SamplerKind::structure: return "structure";
  }
  return "?";
}

inline SamplerKind parse_sampler_kind(const std::string& s) {
  if (s == "rwges") return SamplerKind::rwges;
  if (s == "ads") return SamplerKind::ads;
  if (s == "structure") return SamplerKind::structure;
  throw Error(Errc::unsupported_kind, "unknown sampler '" + s + "'");
}

struct ChainConfig {
  SamplerKind kind = SamplerKind::rwges;
  ProposalMode mode = ProposalMode::operator_count;
  bool lazy = false;
  double q = 0.1;  // equivalence-jump probability, structure sampler only
  std::uint64_t iterations = 1000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;

  void validate() const {
    if (kind == SamplerKind::structure && !(q > 0.0 && q < 1.0))
      throw Error(Errc::dimension_mismatch, "q must lie in (0, 1)");
  }
};

struct TraceRecord {
  std::uint64_t iter = 0;
  std::string move;
  bool accepted = false;
  double log_score = 0;
  int n_edges = 0;
  double log_alpha = 0;
};

using TraceSink = std::function<void(const TraceRecord&)>;

template <class State>
struct ChainResult {
  State final_state;
  std::uint64_t accepted = 0;
  std::uint64_t iterations = 0;
};

template <class State>
struct Proposed {
  State target;
  std::string move;
};

inline double log_or_neg_inf(double v) { return v > 0 ? std::log(v) : kNegInf; }

// Uniform proposals over the add/delete/swap neighbourhood of a class,
// either by valid GES operator or by the exact neighbourhood.
class RwgesKernel {
 public:
  using State = Pdag;

  RwgesKernel(const Scorer& sc, ProposalMode mode) : sc_(sc), mode_(mode) {}

  double log_target(const Pdag& e) const { return info(e).log_target; }

  // Distinct targets with their proposal probabilities.
  std::vector<std::pair<Pdag, double>> proposals(const Pdag& e) const {
    const Info& in = info(e);
    std::vector<std::pair<Pdag, double>> out;
    for (const auto& [t, m] : in.targets) out.emplace_back(t, static_cast<double>(m) / in.total);
    return out;
  }

  double proposal_prob(const Pdag& from, const Pdag& to) const {
    const Info& in = info(from);
    auto it = in.targets.find(to);
    return it == in.targets.end() ? 0.0 : static_cast<double>(it->second) / in.total;
  }

  Proposed<Pdag> sample(const Pdag& e, Rng& rng) const {
    const Info& in = info(e);
    if (in.total == 0) return {e, "none"};
    std::size_t k = uniform_index(rng, in.total);
    if (mode_ == ProposalMode::operator_count) {
      const auto& r = in.ops[k];
      std::string d = std::string(op_kind_name(r.op.kind)) + "(" + std::to_string(r.op.i + 1) + "," +
                      std::to_string(r.op.j + 1);
      if (r.op.kind == OpKind::swap_pair) d += ",-" + std::to_string(r.op.l + 1);
      return {r.result, d + ")"};
    }
    return {in.order[k], "neighbor"};
  }

  int edges(const Pdag& e) const { return e.num_edges(); }

 private:
  struct Info {
    double log_target = kNegInf;
    std::map<Pdag, int> targets;
    std::size_t total = 0;
    std::vector<OperatorResult> ops;
    std::vector<Pdag> order;
  };

  const Info& info(const Pdag& e) const {
    if (auto it = memo_.find(e); it != memo_.end()) return *it->second;
    if (memo_.size() > 200000) memo_.clear();
    auto in = std::make_unique<Info>();
    in->log_target = sc_.cpdag_score_or_neg_inf(e);
    if (mode_ == ProposalMode::operator_count) {
      in->ops = valid_operators(e, sc_.caps());
      in->targets = operator_targets(in->ops);
      in->total = in->ops.size();
    } else {
      in->order = cpdag_neighborhood_exact(e);
      for (const auto& t : in->order) in->targets.emplace(t, 1);
      in->total = in->order.size();
    }
    return *memo_.emplace(e, std::move(in)).first->second;
  }

  const Scorer& sc_;
  ProposalMode mode_;
  mutable std::unordered_map<Pdag, std::unique_ptr<Info>, PdagHash> memo_;
};

// Add/delete/swap on DAGs consistent with a fixed ordering.
class AdsKernel {
 public:
  using State = Dag;

  AdsKernel(const Scorer& sc, Ordering sigma) : sc_(sc), sigma_(std::move(sigma)) {}

  double log_target(const Dag& g) const { return sigma_.respects(g) ? sc_.dag_score(g) : kNegInf; }

  std::vector<std::pair<Dag, double>> proposals(const Dag& g) const {
    auto nb = dag_neighbors(g, {std::nullopt, sigma_});
    std::vector<std::pair<Dag, double>> out;
    for (auto& h : nb) out.emplace_back(std::move(h), 1.0 / static_cast<double>(nb.size()));
    return out;
  }

  double proposal_prob(const Dag& from, const Dag& to) const {
    auto nb = dag_neighbors(from, {std::nullopt, sigma_});
    for (const auto& h : nb)
      if (h == to) return 1.0 / static_cast<double>(nb.size());
    return 0.0;
  }

  Proposed<Dag> sample(const Dag& g, Rng& rng) const {
    auto moves = dag_neighbor_moves(g, {std::nullopt, sigma_});
    if (moves.empty()) return {g, "none"};
    auto& [m, h] = moves[uniform_index(rng, moves.size())];
    return {h, describe(m)};
  }

  int edges(const Dag& g) const { return g.num_edges(); }
  const Ordering& ordering() const { return sigma_; }

  static std::string describe(const DagMove& m) {
    std::string k = m.kind == MoveKind::add ? "add" : m.kind == MoveKind::remove ? "delete" : "swap";
    std::string d = k + "(" + std::to_string(m.i + 1) + "," + std::to_string(m.j + 1);
    if (m.kind == MoveKind::swap) d += ",-" + std::to_string(m.l + 1);
    return d + ")";
  }

 private:
  const Scorer& sc_;
  Ordering sigma_;
};

// Mixture of add/delete/swap (1 - q) and a jump to another member of the class (q).
class StructureKernel {
 public:
  using State = Dag;

  StructureKernel(const Scorer& sc, double q, std::size_t class_cap = kDefaultClassCap)
      : sc_(sc), q_(q), class_cap_(class_cap) {}

  double log_target(const Dag& g) const { return sc_.dag_score(g); }

  std::vector<std::pair<Dag, double>> proposals(const Dag& g) const {
    std::vector<std::pair<Dag, double>> out;
    auto nb = dag_neighbors(g);
    for (auto& h : nb) out.emplace_back(std::move(h), (1 - q_) / static_cast<double>(nb.size()));
    auto cls = members(g);
    if (cls.size() > 1) {
      for (const auto& h : cls)
        if (!(h == g)) out.emplace_back(h, q_ / static_cast<double>(cls.size() - 1));
    } else {
      out.emplace_back(g, q_);
    }
    return out;
  }

  double proposal_prob(const Dag& from, const Dag& to) const {
    double s = 0;
    for (const auto& [h, pr] : proposals(from))
      if (h == to) s += pr;
    return s;
  }

  Proposed<Dag> sample(const Dag& g, Rng& rng) const {
    if (uniform01(rng) < q_) {
      auto cls = members(g);
      if (cls.size() <= 1) return {g, "equiv-none"};
      std::size_t k = uniform_index(rng, cls.size() - 1);
      std::size_t seen = 0;
      for (const auto& h : cls) {
        if (h == g) continue;
        if (seen++ == k) return {h, "equiv"};
      }
    }
    auto moves = dag_neighbor_moves(g);
    if (moves.empty()) return {g, "none"};
    auto& [m, h] = moves[uniform_index(rng, moves.size())];
    return {h, AdsKernel::describe(m)};
  }

  int edges(const Dag& g) const { return g.num_edges(); }

 private:
  std::vector<Dag> members(const Dag& g) const {
    try {
      return enumerate_equivalence_class(g, class_cap_);
    } catch (const Error& e) {
      if (e.code() == Errc::limit_exceeded) throw Error(Errc::class_cap_exceeded, "equivalence class exceeds cap");
      throw;
    }
  }

  const Scorer& sc_;
  double q_;
  std::size_t class_cap_;
};

// Metropolis-Hastings driver shared by all three samplers.
template <class Kernel>
ChainResult<typename Kernel::State> run_chain(const Kernel& k, typename Kernel::State init, const ChainConfig& cfg,
                                              const TraceSink& sink = {},
                                              const std::function<void(const typename Kernel::State&)>& observe = {}) {
  cfg.validate();
  using State = typename Kernel::State;
  double cur_score = k.log_target(init);
  if (cur_score == kNegInf) throw Error(Errc::init_out_of_space, "initial state lies outside the model space");
  Rng rng = make_stream(cfg.seed, cfg.stream);
  ChainResult<State> res{std::move(init), 0, cfg.iterations};
  State& x = res.final_state;
  for (std::uint64_t it = 1; it <= cfg.iterations; ++it) {
    TraceRecord rec;
    rec.iter = it;
    if (cfg.lazy && uniform01(rng) < 0.5) {
      rec.move = "hold";
      rec.log_alpha = 0;
    } else {
      Proposed<State> pr = k.sample(x, rng);
      rec.move = pr.move;
      double y_score = k.log_target(pr.target);
      if (pr.target == x) {
        rec.log_alpha = 0;
      } else if (y_score == kNegInf) {
        rec.log_alpha = kNegInf;
      } else {
        double la = y_score - cur_score + log_or_neg_inf(k.proposal_prob(pr.target, x)) -
                    log_or_neg_inf(k.proposal_prob(x, pr.target));
        rec.log_alpha = la;
        if (la >= 0 || std::log(uniform01(rng)) < la) {
          x = std::move(pr.target);
          cur_score = y_score;
          rec.accepted = true;
          ++res.accepted;
        }
      }
    }
    rec.log_score = cur_score;
    rec.n_edges = k.edges(x);
    if (sink) sink(rec);
    if (observe) observe(x);
  }
  return res;
}

inline ChainResult<Pdag> rwges_run(const Scorer& sc, const ChainConfig& cfg, const Pdag& init,
                                   const TraceSink& sink = {}, const std::function<void(const Pdag&)>& observe = {}) {
  RwgesKernel k(sc, cfg.mode);
  return run_chain(k, init, cfg, sink, observe);
}

inline ChainResult<Dag> ads_dag_run(const Scorer& sc, const ChainConfig& cfg, const Ordering& sigma, const Dag& init,
                                    const TraceSink& sink = {}, const std::function<void(const Dag&)>& observe = {}) {
  AdsKernel k(sc, sigma);
  return run_chain(k, init, cfg, sink, observe);
}

inline ChainResult<Dag> structure_mcmc_run(const Scorer& sc, const ChainConfig& cfg, const Dag& init,
                                           const TraceSink& sink = {},
                                           const std::function<void(const Dag&)>& observe = {}) {
  StructureKernel k(sc, cfg.q);
  return run_chain(k, init, cfg, sink, observe);
}

struct GreedyStep {
  Pdag state;
  double log_score;
  std::string move;
};

// Moves to the best-scoring neighbour until none improves; ties keep the
// first candidate in operator order (kind, i, j, sorted S) or class order.
inline std::vector<GreedyStep> greedy_search(const Scorer& sc, const Pdag& init,
                                             ProposalMode mode = ProposalMode::operator_count,
                                             std::size_t max_steps = 100000) {
  double cur = sc.cpdag_score_or_neg_inf(init);
  if (cur == kNegInf) throw Error(Errc::init_out_of_space, "initial class lies outside the model space");
  std::vector<GreedyStep> path{{init, cur, "start"}};
  Pdag x = init;
  for (std::size_t step = 0; step < max_steps; ++step) {
    std::optional<Pdag> best;
    double best_score = cur;
    std::string best_move;
    if (mode == ProposalMode::operator_count) {
      for (const auto& r : valid_operators(x, sc.caps())) {
        double s = sc.cpdag_score(r.result);
        if (s > best_score) {
          best_score = s;
          best = r.result;
          best_move = std::string(op_kind_name(r.op.kind)) + "(" + std::to_string(r.op.i + 1) + "," +
                      std::to_string(r.op.j + 1) + ")";
        }
      }
    } else {
      for (const auto& e : cpdag_neighborhood_exact(x, sc.caps())) {
        double s = sc.cpdag_score(e);
        if (s > best_score) {
          best_score = s;
          best = e;
          best_move = "neighbor";
        }
      }
    }
    if (!best) return path;
    x = *best;
    cur = best_score;
    path.push_back({x, cur, best_move});
  }
  throw Error(Errc::iteration_cap_exceeded, "greedy search did not terminate");
}

}  // namespace rwges
