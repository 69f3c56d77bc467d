#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "dag.hpp"
#include "rng.hpp"

namespace rwges {

struct SemModel {
  Dag graph;
  Eigen::MatrixXd weights;  // weights(i, j) is the coefficient of i -> j
  Eigen::VectorXd omega;    // noise variances

  int p() const { return graph.p(); }

  void validate() const {
    const int p = graph.p();
    if (weights.rows() != p || weights.cols() != p || omega.size() != p)
      throw Error(Errc::dimension_mismatch, "SEM parameters do not match graph size");
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        if ((weights(i, j) != 0.0) != graph.has_edge(i, j))
          throw Error(Errc::dimension_mismatch, "weight support differs from graph edges");
    for (int j = 0; j < p; ++j)
      if (!(omega(j) > 0.0)) throw Error(Errc::not_positive_definite, "noise variance must be positive");
  }
};

struct Dataset {
  Eigen::MatrixXd x;  // n x p

  int n() const { return static_cast<int>(x.rows()); }
  int p() const { return static_cast<int>(x.cols()); }
};

// Sigma = (I - B^T)^{-1} Omega (I - B)^{-1}
inline Eigen::MatrixXd sigma_from_sem(const SemModel& m) {
  m.validate();
  const int p = m.p();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p, p) - m.weights;
  Eigen::MatrixXd ainv = a.inverse();
  return ainv.transpose() * m.omega.asDiagonal() * ainv;
}

struct CholeskyResult {
  Eigen::MatrixXd b;      // b(i, j): coefficient of i in the regression of j on its predecessors
  Eigen::VectorXd omega;  // residual variances
  Dag support;
};

inline constexpr double kCholeskyZero = 1e-9;

// Regress each node on its predecessors in sigma; small coefficients are zeroed.
inline CholeskyResult modified_cholesky(const Eigen::MatrixXd& s, const Ordering& sigma,
                                        double zero_tol = kCholeskyZero) {
  const int p = static_cast<int>(s.rows());
  if (s.cols() != p || sigma.p() != p) throw Error(Errc::dimension_mismatch, "covariance and ordering sizes differ");
  Eigen::LLT<Eigen::MatrixXd> full(s);
  if (full.info() != Eigen::Success) throw Error(Errc::not_positive_definite, "covariance is not positive definite");
  CholeskyResult r{Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p), Dag(p)};
  std::vector<NodeSet> pa(p);
  for (int k = 0; k < p; ++k) {
    int j = sigma.at(k);
    if (k == 0) {
      r.omega(j) = s(j, j);
      continue;
    }
    std::vector<int> pred(sigma.order().begin(), sigma.order().begin() + k);
    Eigen::MatrixXd spp(k, k);
    Eigen::VectorXd spj(k);
    for (int a = 0; a < k; ++a) {
      spj(a) = s(pred[a], j);
      for (int b = 0; b < k; ++b) spp(a, b) = s(pred[a], pred[b]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(spp);
    Eigen::VectorXd beta = llt.solve(spj);
    r.omega(j) = s(j, j) - spj.dot(beta);
    for (int a = 0; a < k; ++a) {
      if (std::abs(beta(a)) < zero_tol) continue;
      r.b(pred[a], j) = beta(a);
      pa[j].insert(pred[a]);
    }
  }
  r.support = Dag::from_parents(std::move(pa));
  return r;
}

struct SemSpec {
  int p = 5;
  int d_in = 2;
  int d_out = 2;
  double edge_prob = 0.5;
  double weight_low = 0.5;
  double weight_high = 1.5;
  double omega_low = 0.5;
  double omega_high = 1.5;
};

// Random order, then each forward pair kept with edge_prob while degree caps allow.
inline SemModel sample_sem(const SemSpec& spec, Rng& rng) {
  check_node_count(spec.p);
  if (spec.edge_prob > 0.0 && (spec.d_in < 1 || spec.d_out < 1))
    throw Error(Errc::infeasible_degree, "edges requested but degree caps admit none");
  if (spec.weight_low < 0 || spec.weight_high < spec.weight_low || spec.omega_low <= 0 ||
      spec.omega_high < spec.omega_low)
    throw Error(Errc::infeasible_degree, "invalid weight or variance range");
  const int p = spec.p;
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<NodeSet> pa(p);
  std::vector<int> outdeg(p, 0);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
  for (int b = 1; b < p; ++b)
    for (int a = 0; a < b; ++a) {
      int i = order[a], j = order[b];
      if (uniform01(rng) >= spec.edge_prob) continue;
      if (pa[j].size() >= spec.d_in || outdeg[i] >= spec.d_out) continue;
      pa[j].insert(i);
      ++outdeg[i];
      double mag = spec.weight_low + (spec.weight_high - spec.weight_low) * uniform01(rng);
      w(i, j) = uniform01(rng) < 0.5 ? -mag : mag;
    }
  Eigen::VectorXd om(p);
  for (int j = 0; j < p; ++j) om(j) = spec.omega_low + (spec.omega_high - spec.omega_low) * uniform01(rng);
  return SemModel{Dag::from_parents(std::move(pa)), w, om};
}

inline Dataset sample_data(const SemModel& m, int n, Rng& rng) {
  m.validate();
  if (n < 1) throw Error(Errc::dimension_mismatch, "sample size must be positive");
  const int p = m.p();
  std::vector<int> topo = topological_order(m.graph);
  Dataset d{Eigen::MatrixXd::Zero(n, p)};
  std::normal_distribution<double> z(0.0, 1.0);
  for (int r = 0; r < n; ++r)
    for (int j : topo) {
      double v = std::sqrt(m.omega(j)) * z(rng);
      for (int i : m.graph.parents(j)) v += m.weights(i, j) * d.x(r, i);
      d.x(r, j) = v;
    }
  return d;
}

// Sylvester-Hadamard matrix of order 2^k.
inline Eigen::MatrixXd hadamard(int order) {
  if (order < 1 || (order & (order - 1)) != 0) throw Error(Errc::dimension_mismatch, "Hadamard order must be a power of two");
  Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
  while (h.rows() < order) {
    const auto m = h.rows();
    Eigen::MatrixXd next(2 * m, 2 * m);
    next << h, h, h, -h;
    h = next;
  }
  return h;
}

// Noise columns z_j are orthogonal with |z_j|^2 = n * omega_j, taken from
// non-constant Hadamard columns repeated n / order times. Then X = Z (I - B)^{-1}.
inline Dataset exact_design(const SemModel& m, int n) {
  m.validate();
  const int p = m.p();
  int order = 1;
  while (order < p + 1) order *= 2;
  if (n % order != 0)
    throw Error(Errc::dimension_mismatch, "exact design needs n divisible by " + std::to_string(order));
  Eigen::MatrixXd h = hadamard(order);
  Eigen::MatrixXd z(n, p);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < p; ++j) z(r, j) = h(r % order, j + 1) * std::sqrt(m.omega(j));
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p, p) - m.weights;
  return Dataset{z * a.inverse()};
}

}  // namespace rwges
