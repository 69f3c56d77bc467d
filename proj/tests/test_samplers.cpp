#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rwges/enumerate.hpp"
#include "rwges/samplers.hpp"

using namespace rwges;

namespace {

Pdag best_class(const Scorer& sc, int p) {
  auto classes = enumerate_classes(p, sc.caps());
  Pdag best = classes.front();
  double bs = sc.cpdag_score(best);
  for (const auto& c : classes)
    if (double s = sc.cpdag_score(c); s > bs) {
      bs = s;
      best = c;
    }
  return best;
}

std::vector<TraceRecord> trace_of(const Scorer& sc, const ChainConfig& cfg, const Pdag& init) {
  std::vector<TraceRecord> out;
  rwges_run(sc, cfg, init, [&](const TraceRecord& r) { out.push_back(r); });
  return out;
}

}  // namespace

TEST(Rwges, ZeroIterationsReturnsInit) {
  Scorer sc(fixture::random_data(4, 60, 3), fixture::params(2, 2));
  ChainConfig cfg;
  cfg.iterations = 0;
  Pdag init = dag_to_cpdag(Dag(4, {{0, 1}, {2, 1}}));
  auto r = rwges_run(sc, cfg, init);
  EXPECT_EQ(r.final_state, init);
  EXPECT_EQ(r.accepted, 0u);
}

TEST(Rwges, SameSeedSameTrace) {
  Scorer sc(fixture::random_data(5, 80, 4), fixture::params(2, 2));
  ChainConfig cfg;
  cfg.iterations = 400;
  cfg.seed = 7;
  Pdag init(5);
  auto a = trace_of(sc, cfg, init);
  auto b = trace_of(sc, cfg, init);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].move, b[k].move);
    EXPECT_EQ(a[k].accepted, b[k].accepted);
    EXPECT_EQ(a[k].log_score, b[k].log_score);
  }
  cfg.seed = 8;
  auto c = trace_of(sc, cfg, init);
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) differs |= a[k].move != c[k].move;
  EXPECT_TRUE(differs);
}

TEST(Rwges, TraceScoreMatchesRecomputation) {
  Scorer sc(fixture::random_data(5, 100, 5), fixture::params(2, 2));
  for (auto mode : {ProposalMode::operator_count, ProposalMode::exact_neighborhood}) {
    ChainConfig cfg;
    cfg.iterations = 5000;
    cfg.mode = mode;
    std::vector<Pdag> states;
    std::vector<double> logged;
    std::uint64_t it = 0;
    rwges_run(
        sc, cfg, Pdag(5), [&](const TraceRecord& r) { it = r.iter; if (r.iter % 1000 == 0) logged.push_back(r.log_score); },
        [&](const Pdag& x) { if (it % 1000 == 0) states.push_back(x); });
    ASSERT_EQ(states.size(), 5u);
    for (std::size_t k = 0; k < states.size(); ++k) {
      EXPECT_NEAR(logged[k], sc.cpdag_score(states[k]), 1e-9 * std::abs(logged[k]));
      EXPECT_TRUE(class_in_space(states[k], sc.caps()));
    }
  }
}

TEST(Rwges, InitOutsideSpaceRejected) {
  Scorer sc(fixture::random_data(4, 60, 6), fixture::params(1, 2));
  Pdag collider = dag_to_cpdag(Dag(4, {{0, 2}, {1, 2}}));
  ChainConfig cfg;
  try {
    rwges_run(sc, cfg, collider);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::init_out_of_space);
  }
}

TEST(Rwges, LazyChainHoldsAboutHalfTheTime) {
  Scorer sc(fixture::random_data(4, 60, 7), fixture::params(2, 2));
  ChainConfig cfg;
  cfg.iterations = 4000;
  cfg.lazy = true;
  int holds = 0;
  rwges_run(sc, cfg, Pdag(4), [&](const TraceRecord& r) {
    if (r.move == "hold") {
      ++holds;
      EXPECT_FALSE(r.accepted);
    }
  });
  EXPECT_NEAR(holds / 4000.0, 0.5, 0.05);
}

TEST(Ads, TwoStateAcceptanceIsClosedForm) {
  auto m = fixture::sem(2, {{0, 1, 0.4}});
  Scorer sc(fixture::draw(m, 50, 2), fixture::params(1, 1));
  Dag empty(2), edge(2, {{0, 1}});
  double delta = sc.dag_score(edge) - sc.dag_score(empty);
  ChainConfig cfg;
  cfg.kind = SamplerKind::ads;
  cfg.iterations = 2000;
  int from_empty = 0, acc_empty = 0;
  Dag cur = empty;
  ads_dag_run(sc, cfg, Ordering::identity(2), empty, [&](const TraceRecord& r) {
    double expect = cur == empty ? delta : -delta;
    EXPECT_NEAR(r.log_alpha, expect, 1e-12 * std::max(1.0, std::abs(delta)));
    if (cur == empty) {
      ++from_empty;
      acc_empty += r.accepted;
    }
    cur = r.n_edges == 1 ? edge : empty;
  });
  double a = std::min(1.0, std::exp(delta));
  double se = std::sqrt(a * (1 - a) / from_empty) + 1e-12;
  EXPECT_NEAR(static_cast<double>(acc_empty) / from_empty, a, 4 * se + 1e-9);
}

TEST(Ads, InitAgainstOrderingRejected) {
  Scorer sc(fixture::random_data(3, 40, 8), fixture::params(2, 2));
  ChainConfig cfg;
  cfg.kind = SamplerKind::ads;
  EXPECT_THROW(ads_dag_run(sc, cfg, Ordering::identity(3), Dag(3, {{2, 0}})), Error);
}

TEST(Ads, StaysOnOrderedDags) {
  Scorer sc(fixture::random_data(4, 60, 9), fixture::params(2, 2));
  ChainConfig cfg;
  cfg.kind = SamplerKind::ads;
  cfg.iterations = 3000;
  Ordering sigma({2, 0, 3, 1});
  ads_dag_run(sc, cfg, sigma, Dag(4), {}, [&](const Dag& g) {
    ASSERT_TRUE(sigma.respects(g));
    ASSERT_TRUE(sc.caps().admits(g));
  });
}

TEST(Structure, SingletonClassJumpIsSelfLoop) {
  auto m = fixture::sem(3, {{0, 2, 1.0}, {1, 2, 1.0}});
  Scorer sc(fixture::draw(m, 400, 3), fixture::params(2, 2));
  Dag collider(3, {{0, 2}, {1, 2}});
  StructureKernel k(sc, 0.3);
  double self = 0;
  for (const auto& [h, pr] : k.proposals(collider))
    if (h == collider) self += pr;
  EXPECT_DOUBLE_EQ(self, 0.3);
  ChainConfig cfg;
  cfg.kind = SamplerKind::structure;
  cfg.q = 0.9;
  cfg.iterations = 300;
  int none = 0;
  structure_mcmc_run(sc, cfg, collider, [&](const TraceRecord& r) {
    if (r.move == "equiv-none") {
      ++none;
      EXPECT_FALSE(r.accepted);
      EXPECT_EQ(r.log_alpha, 0.0);
    }
  });
  EXPECT_GT(none, 0);
}

TEST(Structure, EquivalenceJumpAlwaysAccepted) {
  Scorer sc(fixture::random_data(3, 80, 10), fixture::params(2, 2));
  ChainConfig cfg;
  cfg.kind = SamplerKind::structure;
  cfg.q = 0.5;
  cfg.iterations = 2000;
  structure_mcmc_run(sc, cfg, Dag(3, {{0, 1}, {1, 2}}), [&](const TraceRecord& r) {
    if (r.move == "equiv") {
      EXPECT_TRUE(r.accepted);
    }
  });
}

TEST(Structure, QOutsideUnitIntervalRejected) {
  Scorer sc(fixture::random_data(3, 40, 11), fixture::params(2, 2));
  ChainConfig cfg;
  cfg.kind = SamplerKind::structure;
  cfg.q = 1.0;
  EXPECT_THROW(structure_mcmc_run(sc, cfg, Dag(3)), Error);
}

TEST(Samplers, KindNames) {
  for (auto k : {SamplerKind::rwges, SamplerKind::ads, SamplerKind::structure})
    EXPECT_EQ(parse_sampler_kind(to_string(k)), k);
  EXPECT_THROW(parse_sampler_kind("gibbs"), Error);
}

TEST(Greedy, OptimumIsFixedPoint) {
  Scorer sc(fixture::random_data(4, 80, 12), fixture::params(2, 2));
  Pdag best = best_class(sc, 4);
  for (auto mode : {ProposalMode::operator_count, ProposalMode::exact_neighborhood}) {
    auto path = greedy_search(sc, best, mode);
    ASSERT_EQ(path.size(), 1u);
    EXPECT_EQ(path.back().state, best);
  }
}

TEST(Greedy, ScoresStrictlyIncreaseAndEndAtLocalMax) {
  Scorer sc(fixture::random_data(5, 100, 13), fixture::params(2, 2));
  auto path = greedy_search(sc, Pdag(5));
  for (std::size_t k = 1; k < path.size(); ++k) EXPECT_GT(path[k].log_score, path[k - 1].log_score);
  const Pdag& end = path.back().state;
  for (const auto& r : valid_operators(end, sc.caps())) EXPECT_LE(sc.cpdag_score(r.result), path.back().log_score);
}

TEST(Greedy, StrongSignalFindsMode) {
  auto m = fixture::sem(4, {{0, 2, 1.0}, {1, 2, -1.0}, {2, 3, 1.0}});
  Scorer sc(fixture::draw(m, 2000, 14), fixture::params(2, 2));
  Pdag best = best_class(sc, 4);
  EXPECT_EQ(best, dag_to_cpdag(m.graph));
  EXPECT_EQ(greedy_search(sc, Pdag(4)).back().state, best);
}
