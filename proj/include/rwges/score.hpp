#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "sem.hpp"
#include "space.hpp"

namespace rwges {

struct ScoreParams {
  double alpha = 0.5;
  double gamma = 1.0;
  double kappa = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  int d_in = 2;
  int d_out = 2;
  DegreeMode degree_mode = DegreeMode::in_out;

  DegreeCaps caps() const { return {d_in, d_out, degree_mode}; }

  void validate(int p) const {
    auto bad = [](const std::string& m) { throw Error(Errc::dimension_mismatch, "score parameters: " + m); };
    if (!(alpha > 0.0 && alpha <= 1.0)) bad("alpha must lie in (0, 1]");
    if (!(gamma > 0.0)) bad("gamma must be positive");
    if (!(kappa >= 0.0)) bad("kappa must be non-negative");
    if (!(c1 > 0.0)) bad("c1 must be positive");
    if (!(c2 >= 0.0)) bad("c2 must be non-negative");
    if (d_in < 1 || d_out < 1 || d_in > p || d_out > p) bad("degree caps must lie in [1, p]");
  }

  // log(c1 p^c2 sqrt(1 + alpha/gamma)), the per-parent penalty.
  double edge_penalty(int p) const {
    return std::log(c1) + c2 * std::log(static_cast<double>(p)) + 0.5 * std::log1p(alpha / gamma);
  }
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Residual sum of squares of column j regressed on columns s (no intercept).
inline double residual_ss(const Eigen::MatrixXd& x, int j, NodeSet s) {
  const Eigen::Index n = x.rows();
  Eigen::VectorXd y = x.col(j);
  double rss;
  if (s.empty()) {
    rss = y.squaredNorm();
  } else {
    const int k = s.size();
    if (k >= n) throw Error(Errc::rank_deficient_design, "more regressors than observations");
    Eigen::MatrixXd xs(n, k);
    int c = 0;
    for (int i : s) xs.col(c++) = x.col(i);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) throw Error(Errc::rank_deficient_design, "regressor columns are linearly dependent");
    Eigen::VectorXd qty = y;
    qty.applyOnTheLeft(qr.householderQ().transpose());
    rss = qty.tail(n - k).squaredNorm();
  }
  if (!(rss > 1e-20 * y.squaredNorm()) || rss <= 0.0)
    throw Error(Errc::empty_residual, "residual sum of squares is zero");
  return rss;
}

inline double local_score(const Dataset& d, const ScoreParams& prm, int j, NodeSet s) {
  if (j < 0 || j >= d.p() || !s.subset_of(NodeSet::range(d.p())) || s.contains(j))
    throw Error(Errc::invalid_node, "local score index out of range");
  const double n = d.n();
  double rss = residual_ss(d.x, j, s);
  return -s.size() * prm.edge_penalty(d.p()) - 0.5 * (prm.alpha * n + prm.kappa) * std::log(rss);
}

// Memoised local scores, safe to share between chains.
class Scorer {
 public:
  Scorer(std::shared_ptr<const Dataset> data, ScoreParams params)
      : data_(std::move(data)), params_(params) {
    if (!data_) throw Error(Errc::dimension_mismatch, "scorer needs a dataset");
    params_.validate(data_->p());
  }

  const Dataset& data() const { return *data_; }
  const ScoreParams& params() const { return params_; }
  DegreeCaps caps() const { return params_.caps(); }
  int p() const { return data_->p(); }

  double local(int j, NodeSet s) const {
    std::uint64_t key = (s.bits() << 6) | static_cast<std::uint64_t>(j);
    const bool small = p() <= 58;
    if (small) {
      std::shared_lock lk(mu_);
      if (auto it = cache_.find(key); it != cache_.end()) {
        hits_.fetch_add(1, std::memory_order_relaxed);
        return it->second;
      }
    }
    double v = local_score(*data_, params_, j, s);
    misses_.fetch_add(1, std::memory_order_relaxed);
    if (small) {
      std::unique_lock lk(mu_);
      cache_.emplace(key, v);
    }
    return v;
  }

  // Sum of local scores, ignoring the degree caps.
  double dag_score_unrestricted(const Dag& g) const {
    check_size(g.p());
    double s = 0.0;
    for (int j = 0; j < g.p(); ++j) s += local(j, g.parents(j));
    return s;
  }

  // Minus infinity outside the degree-restricted space.
  double dag_score(const Dag& g) const {
    check_size(g.p());
    if (!caps().admits(g)) return kNegInf;
    return dag_score_unrestricted(g);
  }

  double cpdag_score(const Pdag& h) const {
    check_size(h.p());
    auto m = member_in_space(h, caps());
    if (!m) throw Error(Errc::no_member_in_space, "class has no member within the degree caps");
    return dag_score_unrestricted(*m);
  }

  double cpdag_score_or_neg_inf(const Pdag& h) const {
    auto m = member_in_space(h, caps());
    return m ? dag_score_unrestricted(*m) : kNegInf;
  }

  std::uint64_t cache_hits() const { return hits_.load(); }
  std::uint64_t cache_misses() const { return misses_.load(); }

 private:
  void check_size(int p) const {
    if (p != data_->p()) throw Error(Errc::dimension_mismatch, "graph size differs from data columns");
  }

  std::shared_ptr<const Dataset> data_;
  ScoreParams params_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::uint64_t, double> cache_;
  mutable std::atomic<std::uint64_t> hits_{0}, misses_{0};
};

}  // namespace rwges
