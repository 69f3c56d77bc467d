#pragma once

#include <memory>
#include <tuple>
#include <vector>

#include "rwges/sem.hpp"
#include "rwges/score.hpp"

namespace fixture {

using namespace rwges;

// 0-based weighted edges, unit noise unless given.
inline SemModel sem(int p, const std::vector<std::tuple<int, int, double>>& w, std::vector<double> omega = {}) {
  std::vector<Edge> e;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
  for (auto [i, j, v] : w) {
    e.emplace_back(i, j);
    b(i, j) = v;
  }
  Eigen::VectorXd om = Eigen::VectorXd::Ones(p);
  for (std::size_t k = 0; k < omega.size(); ++k) om(k) = omega[k];
  return SemModel{Dag(p, e), b, om};
}

inline std::shared_ptr<const Dataset> draw(const SemModel& m, int n, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return std::make_shared<Dataset>(sample_data(m, n, rng));
}

inline std::shared_ptr<const Dataset> random_data(int p, int n, std::uint64_t seed, double edge_prob = 0.6) {
  Rng rng = make_stream(seed, 0);
  SemModel m = sample_sem({p, p - 1, p - 1, edge_prob}, rng);
  return std::make_shared<Dataset>(sample_data(m, n, rng));
}

inline ScoreParams params(int d_in, int d_out, double alpha = 0.5, double c2 = 1.0) {
  ScoreParams prm;
  prm.alpha = alpha;
  prm.c2 = c2;
  prm.d_in = d_in;
  prm.d_out = d_out;
  return prm;
}

}  // namespace fixture
