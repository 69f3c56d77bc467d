#include <gtest/gtest.h>

#include <thread>

#include "oracles.hpp"
#include "rwges/enumerate.hpp"
#include "rwges/score.hpp"

using namespace rwges;

namespace {

std::shared_ptr<const Dataset> make_data(int p, int n, std::uint64_t seed, double edge_prob = 0.6) {
  Rng rng = make_stream(seed, 0);
  SemModel m = sample_sem({p, p - 1, p - 1, edge_prob}, rng);
  return std::make_shared<Dataset>(sample_data(m, n, rng));
}

// RSS by normal equations in long double, independent of the QR path.
long double rss_normal_equations(const Dataset& d, int j, NodeSet s) {
  std::vector<int> idx = s.to_vector();
  const std::size_t k = idx.size();
  std::vector<std::vector<long double>> a(k, std::vector<long double>(k + 1, 0));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c)
      for (int t = 0; t < d.n(); ++t) a[r][c] += (long double)d.x(t, idx[r]) * d.x(t, idx[c]);
    for (int t = 0; t < d.n(); ++t) a[r][k] += (long double)d.x(t, idx[r]) * d.x(t, j);
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t r = c + 1; r < k; ++r) {
      long double f = a[r][c] / a[c][c];
      for (std::size_t q = c; q <= k; ++q) a[r][q] -= f * a[c][q];
    }
  }
  std::vector<long double> beta(k);
  for (std::size_t c = k; c-- > 0;) {
    long double v = a[c][k];
    for (std::size_t q = c + 1; q < k; ++q) v -= a[c][q] * beta[q];
    beta[c] = v / a[c][c];
  }
  long double rss = 0;
  for (int t = 0; t < d.n(); ++t) {
    long double e = d.x(t, j);
    for (std::size_t c = 0; c < k; ++c) e -= beta[c] * d.x(t, idx[c]);
    rss += e * e;
  }
  return rss;
}

}  // namespace

TEST(LocalScore, EmptyParentSet) {
  auto d = make_data(3, 40, 1);
  ScoreParams prm;
  prm.alpha = 0.7;
  prm.kappa = 2;
  double expect = -0.5 * (0.7 * 40 + 2) * std::log(d->x.col(1).squaredNorm());
  EXPECT_NEAR(local_score(*d, prm, 1, {}), expect, 1e-12 * std::abs(expect));
}

TEST(LocalScore, MatchesNormalEquationsOracle) {
  auto d = make_data(5, 60, 2);
  ScoreParams prm;
  prm.c1 = 0.8;
  prm.c2 = 1.5;
  prm.gamma = 2;
  for (int j = 0; j < 5; ++j)
    for_each_subset(NodeSet::range(5).without(j), [&](NodeSet s) {
      double rss = static_cast<double>(rss_normal_equations(*d, j, s));
      double pen = s.size() * (std::log(0.8) + 1.5 * std::log(5.0) + 0.5 * std::log(1 + 0.5 / 2));
      double expect = -pen - 0.5 * (0.5 * 60) * std::log(rss);
      EXPECT_NEAR(local_score(*d, prm, j, s), expect, 1e-9 * std::abs(expect));
    });
}

TEST(LocalScore, Errors) {
  Dataset d{Eigen::MatrixXd::Random(20, 3)};
  d.x.col(2) = 2 * d.x.col(0);
  ScoreParams prm;
  try {
    local_score(d, prm, 1, NodeSet{0, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::rank_deficient_design);
  }
  try {
    local_score(d, prm, 2, NodeSet{0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_residual);
  }
  EXPECT_THROW(local_score(d, prm, 3, {}), Error);
  EXPECT_THROW(local_score(d, prm, 0, NodeSet{0}), Error);
}

TEST(DagScore, PriorTimesMarginalLikelihood) {
  auto d = make_data(4, 30, 3);
  ScoreParams prm{0.6, 1.5, 1.0, 0.9, 1.2, 3, 3, DegreeMode::in_out};
  Scorer sc(d, prm);
  Dag g(4, {{0, 1}, {1, 2}, {0, 3}, {2, 3}});
  const double p = 4, n = 30;
  double log_prior = -g.num_edges() * std::log(prm.c1 * std::pow(p, prm.c2));
  double log_f = -0.5 * g.num_edges() * std::log(1 + prm.alpha / prm.gamma);
  for (int j = 0; j < 4; ++j)
    log_f -= 0.5 * (prm.alpha * n + prm.kappa) * std::log(static_cast<double>(rss_normal_equations(*d, j, g.parents(j))));
  EXPECT_NEAR(sc.dag_score(g), log_prior + log_f, 1e-9 * std::abs(log_prior + log_f));
}

TEST(DagScore, DegreeCaps) {
  auto d = make_data(4, 30, 4);
  ScoreParams prm;
  prm.d_in = 1;
  prm.d_out = 3;
  Scorer sc(d, prm);
  Dag v(4, {{0, 2}, {1, 2}});
  EXPECT_EQ(sc.dag_score(v), kNegInf);
  EXPECT_TRUE(std::isfinite(sc.dag_score_unrestricted(v)));
  ScoreParams tot = prm;
  tot.degree_mode = DegreeMode::total;
  tot.d_in = 1;
  tot.d_out = 1;
  Scorer st(d, tot);
  EXPECT_TRUE(std::isfinite(st.dag_score(v)));
  EXPECT_EQ(st.dag_score(Dag(4, {{0, 2}, {1, 2}, {3, 2}})), kNegInf);
}

TEST(DagScore, InvariantWithinClass) {
  for (int rep = 0; rep < 10; ++rep) {
    auto d = make_data(4, 50, 100 + rep);
    ScoreParams prm;
    prm.d_in = prm.d_out = 4;
    Scorer sc(d, prm);
    for (const auto& g : enumerate_dags(4)) {
      double s0 = sc.dag_score(g);
      for (const auto& m : enumerate_equivalence_class(g))
        EXPECT_LE(std::abs(sc.dag_score(m) - s0), 1e-8 * std::abs(s0));
    }
  }
}

TEST(CpdagScore, MemberAndMissingMember) {
  auto d = make_data(4, 30, 5);
  ScoreParams prm;
  prm.d_in = 2;
  prm.d_out = 4;
  Scorer sc(d, prm);
  Dag g(4, {{0, 1}, {1, 2}});
  EXPECT_NEAR(sc.cpdag_score(dag_to_cpdag(g)), sc.dag_score(g), 1e-9);
  Pdag three_parents(4, {{0, 3}, {1, 3}, {2, 3}}, {});
  try {
    sc.cpdag_score(three_parents);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_member_in_space);
  }
  // Undirected star 2-1-3: only members with centre in-degree <= 1 ... all fit here.
  ScoreParams tight = prm;
  tight.d_out = 1;
  Scorer st(d, tight);
  Pdag star(4, {}, {{0, 1}, {0, 2}});
  EXPECT_TRUE(std::isfinite(st.cpdag_score(star)));
}

TEST(Scorer, CacheIsConsistentAcrossThreads) {
  auto d = make_data(5, 40, 6);
  Scorer sc(d, ScoreParams{});
  std::vector<double> ref;
  for (int j = 0; j < 5; ++j)
    for_each_subset(NodeSet::range(5).without(j), [&](NodeSet s) { ref.push_back(local_score(*d, sc.params(), j, s)); });
  std::vector<std::thread> ts;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t)
    ts.emplace_back([&] {
      std::size_t k = 0;
      for (int j = 0; j < 5; ++j)
        for_each_subset(NodeSet::range(5).without(j), [&](NodeSet s) {
          if (sc.local(j, s) != ref[k++]) ++mismatches;
        });
    });
  for (auto& t : ts) t.join();
  EXPECT_EQ(mismatches.load(), 0);
  EXPECT_GT(sc.cache_hits(), 0u);
}

TEST(ScoreParams, Validation) {
  auto d = make_data(3, 20, 7);
  ScoreParams bad;
  bad.alpha = 1.5;
  EXPECT_THROW(Scorer(d, bad), Error);
  bad = {};
  bad.d_in = 0;
  EXPECT_THROW(Scorer(d, bad), Error);
}
