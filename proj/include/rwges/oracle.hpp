#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>
#include <vector>

#include "canonical.hpp"
#include "enumerate.hpp"
#include "samplers.hpp"

namespace rwges {

inline constexpr int kOracleMaxNodes = 6;

template <class State, class Hash>
struct StateSpace {
  std::vector<State> states;
  std::unordered_map<State, std::size_t, Hash> index;

  explicit StateSpace(std::vector<State> s) : states(std::move(s)) {
    for (std::size_t k = 0; k < states.size(); ++k) index.emplace(states[k], k);
  }
  std::size_t size() const { return states.size(); }
  std::size_t at(const State& s) const {
    auto it = index.find(s);
    if (it == index.end()) throw Error(Errc::model_space_violation, "state is not in the enumerated space");
    return it->second;
  }
  bool contains(const State& s) const { return index.count(s) > 0; }
};

using ClassSpace = StateSpace<Pdag, PdagHash>;
using DagSpace = StateSpace<Dag, DagHash>;

inline void check_oracle_size(int p) {
  if (p > kOracleMaxNodes) throw Error(Errc::cap_exceeded, "exact oracles are limited to p <= 6");
}

inline ClassSpace class_space(int p, const std::optional<DegreeCaps>& caps = std::nullopt) {
  check_oracle_size(p);
  return ClassSpace(enumerate_classes(p, caps));
}

inline DagSpace dag_space(int p, const std::optional<DegreeCaps>& caps, const std::optional<Ordering>& sigma = std::nullopt) {
  check_oracle_size(p);
  return DagSpace(enumerate_dags(p, caps, sigma));
}

// Normalised probabilities and their logs from unnormalised log weights.
struct Posterior {
  std::vector<double> prob;
  std::vector<double> log_prob;
  std::size_t mode = 0;
};

inline Posterior normalize_log_weights(const std::vector<double>& lw) {
  Posterior post;
  const std::size_t n = lw.size();
  double mx = kNegInf;
  for (std::size_t k = 0; k < n; ++k)
    if (lw[k] > mx) {
      mx = lw[k];
      post.mode = k;
    }
  double s = 0;
  for (double v : lw) s += std::exp(v - mx);
  double lz = mx + std::log(s);
  for (double v : lw) {
    post.log_prob.push_back(v - lz);
    post.prob.push_back(std::exp(v - lz));
  }
  return post;
}

template <class Kernel, class Space>
Posterior exact_posterior(const Kernel& k, const Space& space) {
  std::vector<double> lw;
  for (const auto& s : space.states) {
    double v = k.log_target(s);
    if (v == kNegInf) throw Error(Errc::model_space_violation, "enumerated state has zero target mass");
    lw.push_back(v);
  }
  return normalize_log_weights(lw);
}

// Row-stochastic matrix kept as off-diagonal entries plus the row deficit
// 1 - P(x, x), so tiny escape probabilities keep full relative precision.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(std::size_t n) : off_(Eigen::MatrixXd::Zero(n, n)), deficit_(Eigen::VectorXd::Zero(n)) {}
  TransitionMatrix(Eigen::MatrixXd off, Eigen::VectorXd deficit) : off_(std::move(off)), deficit_(std::move(deficit)) {}

  static TransitionMatrix from_dense(const Eigen::MatrixXd& p) {
    TransitionMatrix t(p.rows());
    for (Eigen::Index i = 0; i < p.rows(); ++i)
      for (Eigen::Index j = 0; j < p.cols(); ++j)
        if (i != j) t.off_(i, j) = p(i, j);
    t.refresh_deficit();
    return t;
  }

  std::size_t size() const { return static_cast<std::size_t>(off_.rows()); }
  double operator()(std::size_t x, std::size_t y) const { return x == y ? 1.0 - deficit_(x) : off_(x, y); }
  double escape(std::size_t x) const { return deficit_(x); }
  const Eigen::MatrixXd& off() const { return off_; }
  Eigen::MatrixXd& off() { return off_; }

  void refresh_deficit() { deficit_ = off_.rowwise().sum(); }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd d = off_;
    for (Eigen::Index i = 0; i < d.rows(); ++i) d(i, i) = 1.0 - deficit_(i);
    return d;
  }

  double max_row_sum_error() const {
    double e = 0;
    Eigen::MatrixXd d = dense();
    for (Eigen::Index i = 0; i < d.rows(); ++i) e = std::max(e, std::abs(d.row(i).sum() - 1.0));
    return e;
  }

  bool nonnegative() const { return off_.minCoeff() >= 0 && deficit_.maxCoeff() <= 1.0 + 1e-15; }

  // (P + I) / 2
  TransitionMatrix lazy() const { return TransitionMatrix(off_ / 2, deficit_ / 2); }

  // Product without cancellation: every off-diagonal term is a sum of non-negative parts.
  TransitionMatrix operator*(const TransitionMatrix& b) const {
    Eigen::VectorXd da = Eigen::VectorXd::Ones(size()) - deficit_;
    Eigen::VectorXd db = Eigen::VectorXd::Ones(size()) - b.deficit_;
    Eigen::MatrixXd c = da.asDiagonal() * b.off_ + off_ * db.asDiagonal();
    c.noalias() += off_ * b.off_;
    c.diagonal().setZero();
    TransitionMatrix t(std::move(c), Eigen::VectorXd());
    t.refresh_deficit();
    return t;
  }

  double detailed_balance_residual(const std::vector<double>& pi) const {
    double r = 0;
    for (std::size_t x = 0; x < size(); ++x)
      for (std::size_t y = x + 1; y < size(); ++y)
        r = std::max(r, std::abs(pi[x] * off_(x, y) - pi[y] * off_(y, x)));
    return r;
  }

  double stationarity_residual(const std::vector<double>& pi) const {
    Eigen::Map<const Eigen::VectorXd> v(pi.data(), static_cast<Eigen::Index>(pi.size()));
    Eigen::VectorXd flow_in = off_.transpose() * v;
    Eigen::VectorXd flow_out = v.cwiseProduct(deficit_);
    return (flow_in - flow_out).cwiseAbs().maxCoeff();
  }

  // Eigenvalues of the symmetrised reversible chain, sqrt(P(x,y) P(y,x)) off the diagonal.
  Eigen::VectorXd reversible_spectrum() const {
    Eigen::MatrixXd s = (off_.cwiseProduct(off_.transpose())).cwiseSqrt();
    for (Eigen::Index i = 0; i < s.rows(); ++i) s(i, i) = 1.0 - deficit_(i);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues();
  }

  // Every state reaches every other through positive entries.
  bool irreducible() const {
    const std::size_t n = size();
    for (int dir = 0; dir < 2; ++dir) {
      std::vector<char> seen(n, 0);
      std::deque<std::size_t> q{0};
      seen[0] = 1;
      while (!q.empty()) {
        std::size_t u = q.front();
        q.pop_front();
        for (std::size_t v = 0; v < n; ++v) {
          double w = dir == 0 ? off_(u, v) : off_(v, u);
          if (w > 0 && !seen[v]) {
            seen[v] = 1;
            q.push_back(v);
          }
        }
      }
      for (char s : seen)
        if (!s) return false;
    }
    return true;
  }

 private:
  Eigen::MatrixXd off_;
  Eigen::VectorXd deficit_;
};

// P(x, y) = K(x, y) min{1, pi(y) K(y, x) / (pi(x) K(x, y))}; rejected and
// out-of-space mass stays on the diagonal.
template <class Kernel, class Space>
TransitionMatrix build_transition_matrix(const Kernel& k, const Space& space) {
  const std::size_t n = space.size();
  TransitionMatrix t(n);
  std::vector<double> lt(n);
  for (std::size_t x = 0; x < n; ++x) lt[x] = k.log_target(space.states[x]);
  for (std::size_t x = 0; x < n; ++x) {
    for (const auto& [y, kxy] : k.proposals(space.states[x])) {
      if (y == space.states[x] || kxy <= 0) continue;
      auto it = space.index.find(y);
      if (it == space.index.end()) {
        if (k.log_target(y) != kNegInf) throw Error(Errc::model_space_violation, "proposal with mass outside the space");
        continue;
      }
      std::size_t yi = it->second;
      double kyx = k.proposal_prob(y, space.states[x]);
      double la = lt[yi] - lt[x] + std::log(kyx) - std::log(kxy);
      t.off()(x, yi) += kxy * (la >= 0 ? 1.0 : std::exp(la));
    }
  }
  t.refresh_deficit();
  return t;
}

inline double total_variation_row(const TransitionMatrix& pt, std::size_t x, const std::vector<double>& pi) {
  double s = std::abs((1.0 - pi[x]) - pt.escape(x));
  for (std::size_t y = 0; y < pt.size(); ++y)
    if (y != x) s += std::abs(pt.off()(x, y) - pi[y]);
  return 0.5 * s;
}

inline double worst_total_variation(const TransitionMatrix& pt, const std::vector<double>& pi) {
  double d = 0;
  for (std::size_t x = 0; x < pt.size(); ++x) d = std::max(d, total_variation_row(pt, x, pi));
  return d;
}

struct MixingResult {
  std::uint64_t t = 0;  // mixing time, or a lower bound when capped
  bool capped = false;
  double tv = 0;        // worst distance at t
};

// Smallest t with max_x TV(P^t(x, .), pi) <= eps: doubling, then binary lifting.
inline MixingResult exact_mixing_time(const TransitionMatrix& p, const std::vector<double>& pi, double eps = 0.25,
                                      int max_doublings = 62) {
  if (!p.irreducible()) throw Error(Errc::not_ergodic, "transition matrix is reducible");
  std::vector<TransitionMatrix> pow{p};
  if (worst_total_variation(p, pi) <= eps) return {1, false, worst_total_variation(p, pi)};
  int k = 0;
  while (true) {
    if (k + 1 > max_doublings) return {std::uint64_t{1} << k, true, worst_total_variation(pow[k], pi)};
    pow.push_back(pow[k] * pow[k]);
    ++k;
    if (worst_total_variation(pow[k], pi) <= eps) break;
  }
  // d(2^(k-1)) > eps >= d(2^k)
  std::uint64_t lo = std::uint64_t{1} << (k - 1);
  TransitionMatrix cur = pow[k - 1];
  for (int i = k - 2; i >= 0; --i) {
    TransitionMatrix m = cur * pow[i];
    if (worst_total_variation(m, pi) > eps) {
      cur = std::move(m);
      lo += std::uint64_t{1} << i;
    }
  }
  TransitionMatrix at = cur * pow[0];
  return {lo + 1, false, worst_total_variation(at, pi)};
}

// Expected steps to reach `target` from each state: (I - P restricted) h = 1.
inline std::vector<double> hitting_time(const TransitionMatrix& p, std::size_t target) {
  const std::size_t n = p.size();
  std::vector<char> reach(n, 0);
  reach[target] = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t x = 0; x < n; ++x) {
      if (reach[x]) continue;
      for (std::size_t y = 0; y < n; ++y)
        if (reach[y] && p.off()(x, y) > 0) {
          reach[x] = 1;
          grew = true;
          break;
        }
    }
  }
  for (char r : reach)
    if (!r) throw Error(Errc::singular_system, "target is not reachable from every state");
  std::vector<std::size_t> rest;
  for (std::size_t x = 0; x < n; ++x)
    if (x != target) rest.push_back(x);
  const auto m = static_cast<Eigen::Index>(rest.size());
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) a(r, c) = r == c ? p.escape(rest[r]) : -p.off()(rest[r], rest[c]);
  Eigen::VectorXd h = a.fullPivLu().solve(Eigen::VectorXd::Ones(m));
  if (!h.allFinite() || (a * h - Eigen::VectorXd::Ones(m)).cwiseAbs().maxCoeff() > 1e-6 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    throw Error(Errc::singular_system, "hitting-time system is singular");
  std::vector<double> out(n, 0.0);
  for (Eigen::Index r = 0; r < m; ++r) out[rest[r]] = h(r);
  return out;
}

// Asymptotic variance of the indicator of each state along a stationary
// chain, from the fundamental matrix Z = (I - P + 1 pi^T)^{-1}.
inline std::vector<double> indicator_asymptotic_variance(const TransitionMatrix& p, const std::vector<double>& pi) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::Map<const Eigen::VectorXd> v(pi.data(), n);
  Eigen::MatrixXd a = -p.off();
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = p.escape(i);
  a += Eigen::VectorXd::Ones(n) * v.transpose();
  Eigen::MatrixXd z = a.partialPivLu().inverse();
  std::vector<double> out(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    Eigen::VectorXd f = -v(x) * Eigen::VectorXd::Ones(n);
    f(x) += 1.0;
    Eigen::VectorXd zf = z * f;
    out[x] = std::max(0.0, (v.array() * f.array() * (2.0 * zf.array() - f.array())).sum());
  }
  return out;
}

inline double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct PathBoundReport {
  double t1 = 0, t2 = 0, t3 = 0;
  int l_max = 0;
  double log_pi_min = 0;
  bool applicable = false;  // t2 > t1 and every g-step has positive probability
  double bound = std::numeric_limits<double>::infinity();
  double log_rho = 0;       // congestion of the induced canonical paths
  int path_length = 0;      // longest canonical path
  double congestion_bound = std::numeric_limits<double>::infinity();  // rho * length * log(4 / pi_min)
};

// Path-method bound from a transition function g with fixed point `star`.
inline PathBoundReport verify_path_bound(const TransitionMatrix& tm, const Posterior& post, const std::vector<std::size_t>& g,
                                       std::size_t star, int p) {
  const std::size_t n = tm.size();
  if (g.size() != n || g[star] != star) throw Error(Errc::dimension_mismatch, "g must be a map on the space fixing the mode");
  const double logp = std::log(static_cast<double>(p));
  PathBoundReport r;
  std::vector<std::vector<std::size_t>> fwd(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t c = x;
    fwd[x].push_back(c);
    while (c != star) {
      c = g[c];
      fwd[x].push_back(c);
      if (fwd[x].size() > n + 1) throw Error(Errc::condition_violated, "g does not lead to the mode");
    }
    r.l_max = std::max(r.l_max, static_cast<int>(fwd[x].size()) - 1);
  }
  std::vector<int> preimage(n, 0);
  for (std::size_t x = 0; x < n; ++x) ++preimage[g[x]];
  r.t1 = std::log(static_cast<double>(*std::max_element(preimage.begin(), preimage.end()))) / logp;
  double min_ratio = std::numeric_limits<double>::infinity(), min_step = 1.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (x == star) continue;
    min_ratio = std::min(min_ratio, post.log_prob[g[x]] - post.log_prob[x]);
    min_step = std::min(min_step, tm(x, g[x]));
  }
  r.t2 = min_ratio / logp;
  r.t3 = min_step > 0 ? -std::log(min_step) / logp : std::numeric_limits<double>::infinity();
  r.log_pi_min = *std::min_element(post.log_prob.begin(), post.log_prob.end());
  const double log4pi = std::log(4.0) - r.log_pi_min;
  r.applicable = n > 1 && r.t2 > r.t1 && min_step > 0;
  if (r.applicable)
    r.bound = 2.0 * r.l_max * std::pow(static_cast<double>(p), r.t3) / (1.0 - std::pow(static_cast<double>(p), -(r.t2 - r.t1))) * log4pi;

  // Canonical paths: prefix of a forward path, reversed prefix, or through the mode.
  std::vector<double> load(n * n, kNegInf);
  auto add_edge = [&](std::size_t a, std::size_t b, double w) { load[a * n + b] = log_sum_exp(load[a * n + b], w); };
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      std::vector<std::size_t> path;
      auto fx = std::find(fwd[x].begin(), fwd[x].end(), y);
      auto fy = std::find(fwd[y].begin(), fwd[y].end(), x);
      if (fx != fwd[x].end()) {
        path.assign(fwd[x].begin(), fx + 1);
      } else if (fy != fwd[y].end()) {
        path.assign(fwd[y].begin(), fy + 1);
        std::reverse(path.begin(), path.end());
      } else {
        path = fwd[x];
        path.insert(path.end(), fwd[y].rbegin() + 1, fwd[y].rend());
      }
      r.path_length = std::max(r.path_length, static_cast<int>(path.size()) - 1);
      double w = post.log_prob[x] + post.log_prob[y];
      for (std::size_t s = 0; s + 1 < path.size(); ++s) add_edge(path[s], path[s + 1], w);
    }
  r.log_rho = kNegInf;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (load[a * n + b] == kNegInf) continue;
      double pab = tm.off()(a, b);
      double v = pab > 0 ? load[a * n + b] - post.log_prob[a] - std::log(pab) : std::numeric_limits<double>::infinity();
      r.log_rho = std::max(r.log_rho, v);
    }
  r.congestion_bound = std::exp(r.log_rho) * r.path_length * log4pi;
  return r;
}

// Canonical transition function as an index map on the class space.
inline std::vector<std::size_t> canonical_transition_map(const CanonicalContext& ctx, const ClassSpace& space) {
  std::vector<std::size_t> g(space.size());
  for (std::size_t k = 0; k < space.size(); ++k) g[k] = space.at(canonical_step(ctx, space.states[k]));
  return g;
}

}  // namespace rwges
