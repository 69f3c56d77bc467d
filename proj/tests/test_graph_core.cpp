#include <gtest/gtest.h>

#include <chrono>
#include <map>

#include "oracles.hpp"
#include "rwges/dseparation.hpp"
#include "rwges/edge_list.hpp"
#include "rwges/enumerate.hpp"

using namespace rwges;

namespace {

Dag chain3() { return Dag(3, {{0, 1}, {1, 2}}); }
Dag collider3() { return Dag(3, {{0, 1}, {2, 1}}); }

}  // namespace

TEST(Dag, RejectsCycles) {
  EXPECT_THROW(Dag(3, {{0, 1}, {1, 2}, {2, 0}}), Error);
  try {
    Dag(2, {{0, 1}, {1, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::cycle_detected);
  }
  EXPECT_THROW(Dag(2, {{0, 2}}), Error);
  EXPECT_THROW(chain3().with_edge(2, 0), Error);
}

TEST(Dag, TopologicalOrderSmallestIndexFirst) {
  EXPECT_EQ(topological_order(Dag(3)), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(topological_order(Dag(4, {{3, 0}, {2, 1}})), (std::vector<int>{2, 1, 3, 0}));
  std::vector<NodeSet> cyc{NodeSet{1}, NodeSet{0}};
  EXPECT_THROW(topological_order(cyc), Error);
}

TEST(Dag, HammingCountsParentSymmetricDifference) {
  Dag a(3, {{0, 1}, {1, 2}});
  Dag b(3, {{1, 0}, {1, 2}});
  EXPECT_EQ(hamming(a, a), 0);
  EXPECT_EQ(hamming(a, b), 2);
  EXPECT_EQ(hamming(Dag(3), a), 2);
  EXPECT_THROW(hamming(Dag(2), a), Error);
}

TEST(Enumeration, DagCountsMatchBruteForce) {
  const std::vector<std::size_t> known{1, 1, 3, 25, 543, 29281};
  for (int p = 1; p <= 4; ++p) {
    auto a = enumerate_dags(p);
    auto b = oracle::brute_force_dags(p);
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a.size(), known[p]);
    EXPECT_EQ(a, b);
  }
  EXPECT_EQ(enumerate_dags(5).size(), known[5]);
}

TEST(Enumeration, OrderedSpaceAndCaps) {
  Ordering id = Ordering::identity(3);
  EXPECT_EQ(enumerate_dags(3, std::nullopt, id).size(), 8u);
  DegreeCaps caps{1, 1, DegreeMode::in_out};
  for (const auto& g : enumerate_dags(4, caps)) EXPECT_TRUE(caps.admits(g));
  std::size_t brute = 0;
  for (const auto& g : oracle::brute_force_dags(4)) brute += caps.admits(g);
  EXPECT_EQ(enumerate_dags(4, caps).size(), brute);
}

TEST(Equivalence, ThreeNodeClasses) {
  auto t0 = std::chrono::steady_clock::now();
  auto classes = enumerate_classes(3);
  EXPECT_EQ(classes.size(), 11u);
  EXPECT_TRUE(markov_equivalent(Dag(3, {{0, 1}, {1, 2}}), Dag(3, {{2, 1}, {1, 0}})));
  EXPECT_FALSE(markov_equivalent(chain3(), collider3()));
  EXPECT_THROW(markov_equivalent(Dag(2), Dag(3)), Error);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 10.0);
}

// Covered-reversal closure, CPDAG identity and the skeleton/collider pattern
// must define the same partition.
TEST(Equivalence, ClosureMatchesPartition) {
  for (int p = 2; p <= 4; ++p) {
    auto dags = oracle::brute_force_dags(p);
    std::map<decltype(oracle::pattern(dags[0])), std::set<Dag>> groups;
    for (const auto& g : dags) groups[oracle::pattern(g)].insert(g);
    for (const auto& g : dags) {
      auto cls = enumerate_equivalence_class(g);
      std::set<Dag> got(cls.begin(), cls.end());
      EXPECT_EQ(got, groups[oracle::pattern(g)]);
    }
    std::set<Pdag> cps;
    for (const auto& g : dags) cps.insert(dag_to_cpdag(g));
    EXPECT_EQ(cps.size(), groups.size());
  }
}

TEST(Cpdag, SmallCases) {
  Pdag c = dag_to_cpdag(collider3());
  EXPECT_EQ(c.directed_edges().size(), 2u);
  EXPECT_TRUE(c.undirected_edges().empty());
  Pdag ch = dag_to_cpdag(chain3());
  EXPECT_TRUE(ch.directed_edges().empty());
  EXPECT_EQ(ch.undirected_edges().size(), 2u);
  Pdag full = dag_to_cpdag(Dag(3, {{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(full.undirected_edges().size(), 3u);
}

// An edge is directed in the CPDAG exactly when every member orients it the same way.
TEST(Cpdag, CompelledEdgesAgreeWithMembers) {
  for (int p = 3; p <= 4; ++p) {
    for (const auto& g : oracle::brute_force_dags(p)) {
      auto members = enumerate_equivalence_class(g);
      Pdag h = dag_to_cpdag(g);
      for (auto [i, j] : g.edges()) {
        bool all_same = true;
        for (const auto& m : members) all_same = all_same && m.has_edge(i, j);
        EXPECT_EQ(h.has_directed(i, j), all_same);
        EXPECT_EQ(h.has_undirected(i, j), !all_same);
      }
    }
  }
}

TEST(Extension, RecoversMembers) {
  for (const auto& g : enumerate_dags(4)) {
    Pdag h = dag_to_cpdag(g);
    auto e = consistent_extension(h);
    ASSERT_TRUE(e.has_value());
    EXPECT_TRUE(markov_equivalent(*e, g));
    EXPECT_EQ(dag_to_cpdag(*e), h);
  }
  Pdag cycle4(4, {}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  EXPECT_FALSE(consistent_extension(cycle4).has_value());
  Pdag forced(3, {{0, 1}}, {{1, 2}});
  auto e = consistent_extension(forced);
  ASSERT_TRUE(e);
  EXPECT_TRUE(e->has_edge(1, 2));
}

TEST(Equivalence, ClassCap) {
  Dag complete(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) complete = complete.with_edge(i, j);
  EXPECT_EQ(enumerate_equivalence_class(complete).size(), 120u);
  try {
    enumerate_equivalence_class(complete, 50);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::limit_exceeded);
  }
}

TEST(DSeparation, MatchesPathOracle) {
  for (int p = 3; p <= 4; ++p)
    for (const auto& g : oracle::brute_force_dags(p))
      for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
          NodeSet rest = NodeSet::range(p).without(i).without(j);
          for_each_subset(rest, [&](NodeSet s) {
            EXPECT_EQ(d_separated(g, i, j, s), !oracle::d_connected(g, i, j, s));
          });
        }
}

TEST(DSeparation, EquivalentGraphsShareIndependences) {
  for (const auto& g : enumerate_dags(4))
    for (const auto& m : enumerate_equivalence_class(g)) EXPECT_EQ(CiSet(g), CiSet(m));
}

TEST(MinimalImap, ChainAndCollider) {
  Dag chain = chain3();
  EXPECT_EQ(minimal_imap(chain, Ordering::identity(3)), chain);
  // Collider 1 -> 2 <- 3 under order (2, 1, 3): all pairs become adjacent.
  Dag m = minimal_imap(collider3(), Ordering({1, 0, 2}));
  EXPECT_EQ(m.num_edges(), 3);
  EXPECT_THROW(minimal_imap(chain, Ordering::identity(2)), Error);
}

TEST(MinimalImap, IsMinimalIndependenceMap) {
  for (const auto& g : enumerate_dags(4)) {
    if (g.num_edges() % 2) continue;  // thin the sweep
    for (const auto& s : all_orderings(4)) {
      Dag m = minimal_imap(g, s);
      EXPECT_TRUE(s.respects(m));
      EXPECT_TRUE(is_imap(m, g));
      for (auto [i, j] : m.edges()) EXPECT_FALSE(is_imap(m.without_edge(i, j), g));
    }
  }
}

TEST(EdgeList, RoundTrip) {
  Pdag h(4, {{0, 2}, {1, 2}}, {{2, 3}});
  std::string text = format_edge_list(h);
  EXPECT_EQ(parse_edge_list(text, 4), h);
  Pdag parsed = parse_edge_list("# comment\n\n1 -> 3  # trailing\n2 -> 3\n3 -- 4\n", 4);
  EXPECT_EQ(parsed, h);
  EXPECT_EQ(parse_dag_edge_list("1 -> 2\n", 2), Dag(2, {{0, 1}}));
}

TEST(EdgeList, Errors) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::condition_violated;
  };
  EXPECT_EQ(code([] { parse_edge_list("1 => 2", 3); }), Errc::parse_error);
  EXPECT_EQ(code([] { parse_edge_list("1 -> 5", 3); }), Errc::invalid_node);
  EXPECT_EQ(code([] { parse_edge_list("a -> 2", 3); }), Errc::parse_error);
  EXPECT_EQ(code([] { parse_dag_edge_list("1 -> 2\n2 -> 1", 3); }), Errc::parse_error);
  EXPECT_EQ(code([] { parse_dag_edge_list("1 -> 2\n2 -> 3\n3 -> 1", 3); }), Errc::cycle_detected);
}
