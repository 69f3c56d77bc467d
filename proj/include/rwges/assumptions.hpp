#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "dseparation.hpp"
#include "score.hpp"

namespace rwges {

struct AssumptionConstants {
  double delta0 = 0.0;     // slack between eigenvalue bounds and the population spectrum
  double t = 1.0;          // consistency margin
  double c_b = 8.0 / 3.0;  // beta-min constant, at its smallest allowed value 8t/3
  std::size_t subset_cap = 1000000;
  int enumerate_orderings_up_to = 7;
  int sampled_orderings = 5000;
};

struct AssumptionReport {
  double nu_lower = 0;
  double nu_upper = 0;
  double nu0 = 0;
  double beta_min_sq = 0;            // smallest squared non-zero coefficient over the checked orderings
  double beta_min_threshold = 0;     // with the eigenvalue ratio factor
  double beta_min_threshold_iso = 0; // same bound with nu_upper = nu_lower
  double omega_min = 0;              // extreme residual variances over orderings
  double omega_max = 0;
  int d_star = 0;
  std::vector<int> d_star_sigma;     // per checked ordering
  std::size_t orderings_checked = 0;
  bool orderings_sampled = false;
  double sample_size_ratio = 0;      // d_in log p / n, reported only

  bool a = false;      // eigenvalue bounds exist and are ordered
  bool c = false;      // prior and fractional exponent constraints
  bool d = false;      // (nu0 + 1) d* <= d_in
  bool d_iso = false;  // d* <= d_in
  bool e = false;      // strong beta-min
  bool e_iso = false;  // strong beta-min without the eigenvalue ratio factor
  bool omega_in_range = false;

  bool literal_pass() const { return a && c && d && e; }
  double margin() const { return beta_min_threshold > 0 ? beta_min_sq / beta_min_threshold : 0; }
  double margin_iso() const { return beta_min_threshold_iso > 0 ? beta_min_sq / beta_min_threshold_iso : 0; }
};

// `sigma` drives the orderings and coefficients; `eig_source` (defaults to
// sigma) the restricted eigenvalue bounds, e.g. a sample Gram matrix over n.
inline AssumptionReport check_assumptions(const Eigen::MatrixXd& sigma, const ScoreParams& prm, int n,
                                          const AssumptionConstants& k = {},
                                          const Eigen::MatrixXd* eig_source = nullptr) {
  const int p = static_cast<int>(sigma.rows());
  if (sigma.cols() != p) throw Error(Errc::dimension_mismatch, "covariance must be square");
  prm.validate(p);
  const Eigen::MatrixXd& ev = eig_source ? *eig_source : sigma;
  if (ev.rows() != p || ev.cols() != p) throw Error(Errc::dimension_mismatch, "eigenvalue source has wrong size");

  AssumptionReport r;
  const int smax = std::min(2 * prm.d_in, p);
  std::size_t count = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for_each_subset(NodeSet::range(p), [&](NodeSet s) {
    if (s.empty() || s.size() > smax) return;
    if (++count > k.subset_cap) throw Error(Errc::cap_exceeded, "too many subsets for restricted eigenvalues");
    std::vector<int> idx = s.to_vector();
    Eigen::MatrixXd sub(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = ev(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  });
  r.nu_lower = lo * (1 - k.delta0) * (1 - k.delta0);
  r.nu_upper = hi * (1 + k.delta0) * (1 + k.delta0);
  r.a = r.nu_lower > 0 && r.nu_lower <= r.nu_upper;
  r.nu0 = r.nu_lower > 0 ? 4 * r.nu_upper * r.nu_upper * std::pow(r.nu_lower, -4) * std::pow(r.nu_upper - r.nu_lower, 2)
                         : std::numeric_limits<double>::infinity();

  std::vector<Ordering> orders;
  if (p <= k.enumerate_orderings_up_to) {
    orders = all_orderings(p);
  } else {
    r.orderings_sampled = true;
    Rng rng = make_stream(0x5EEDull, 0);
    std::vector<int> o(p);
    std::iota(o.begin(), o.end(), 0);
    for (int s = 0; s < k.sampled_orderings; ++s) {
      std::shuffle(o.begin(), o.end(), rng);
      orders.emplace_back(o);
    }
  }
  r.beta_min_sq = std::numeric_limits<double>::infinity();
  r.omega_min = std::numeric_limits<double>::infinity();
  r.omega_max = 0;
  for (const auto& s : orders) {
    CholeskyResult ch = modified_cholesky(sigma, s);
    int dmax = 0;
    for (int j = 0; j < p; ++j) {
      dmax = std::max(dmax, ch.support.neighbors(j).size());
      for (int i : ch.support.parents(j)) r.beta_min_sq = std::min(r.beta_min_sq, ch.b(i, j) * ch.b(i, j));
      r.omega_min = std::min(r.omega_min, ch.omega(j));
      r.omega_max = std::max(r.omega_max, ch.omega(j));
    }
    r.d_star_sigma.push_back(dmax);
    r.d_star = std::max(r.d_star, dmax);
  }
  r.orderings_checked = orders.size();

  const double logp = std::log(static_cast<double>(p));
  const double base = 5 * (k.c_b + 4 * prm.c2) * logp / (prm.alpha * n);
  r.beta_min_threshold_iso = base;
  r.beta_min_threshold = base * (r.nu_upper * r.nu_upper) / (r.nu_lower * r.nu_lower);
  r.e = r.beta_min_sq >= r.beta_min_threshold;
  r.e_iso = r.beta_min_sq >= r.beta_min_threshold_iso;
  r.d = (r.nu0 + 1) * r.d_star <= prm.d_in;
  r.d_iso = r.d_star <= prm.d_in;
  const double c1_eff = prm.c1 * std::sqrt(1 + prm.alpha / prm.gamma);
  r.c = prm.kappa <= n && c1_eff >= 1 - 1e-12 && c1_eff <= p &&
        prm.c2 >= (prm.alpha + 1) * (4 * prm.d_in + 6) + k.t;
  r.omega_in_range = r.omega_min >= r.nu_lower - 1e-12 && r.omega_max <= r.nu_upper + 1e-12;
  r.sample_size_ratio = prm.d_in * logp / n;
  return r;
}

inline AssumptionReport check_assumptions(const Dataset& d, const Eigen::MatrixXd& sigma, const ScoreParams& prm,
                                          const AssumptionConstants& k = {}) {
  Eigen::MatrixXd gram = d.x.transpose() * d.x / static_cast<double>(d.n());
  return check_assumptions(sigma, prm, d.n(), k, &gram);
}

}  // namespace rwges
