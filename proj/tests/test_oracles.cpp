#include <gtest/gtest.h>

#include <fmatch/oracles.hpp>
#include <fmatch/random.hpp>

using namespace fmatch;

TEST(BruteForce, KnownValues) {
  EXPECT_EQ(brute_force_max_f_matching(parse_graph("p fgraph 3 3\ne 0 1\ne 1 2\ne 2 0\n").graph,
                                       degree_bound(3, 1)).max_cardinality,
            1u);
  const auto tri2 = parse_graph("p fgraph 3 3\nf 0 2\nf 1 2\nf 2 2\ne 0 1\ne 1 2\ne 2 0\n");
  EXPECT_EQ(brute_force_max_f_matching(tri2.graph, tri2.f).max_cardinality, 3u);
  const auto loop = parse_graph("p fgraph 1 2\nf 0 3\ne 0 0\ne 0 0\n");
  const auto r = brute_force_max_f_matching(loop.graph, loop.f);
  EXPECT_EQ(r.max_cardinality, 1u);
  EXPECT_TRUE(feasible(loop.f, r.witness));
  EXPECT_EQ(r.witness.size(), r.max_cardinality);
}

TEST(BruteForce, RefusesLargeGraphs) {
  random_params p;
  p.n = 10;
  p.m = 30;
  const auto in = random_instance(p, 1);
  EXPECT_THROW(brute_force_max_f_matching(in.graph, in.f), oracle_refusal);
}

TEST(Flow, RefusesNonBipartite) {
  const auto tri = parse_graph("p fgraph 3 3\ne 0 1\ne 1 2\ne 2 0\n");
  EXPECT_THROW(bipartite_flow_oracle(tri.graph, tri.f), oracle_refusal);
  const auto loop = parse_graph("p fgraph 2 2\ne 0 1\ne 1 1\n");
  EXPECT_THROW(bipartite_flow_oracle(loop.graph, loop.f), oracle_refusal);
  EXPECT_TRUE(bipartition(tri.graph).empty());
}

TEST(Flow, AgreesWithBruteForce) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    random_params p;
    p.n = 2 + seed % 9;
    p.m = seed % 16;
    p.f_max = 3;
    p.bipartite = true;
    const auto in = random_instance(p, seed);
    const auto fl = bipartite_flow_oracle(in.graph, in.f);
    EXPECT_EQ(fl.max_cardinality, brute_force_max_f_matching(in.graph, in.f).max_cardinality) << "seed " << seed;
    EXPECT_TRUE(feasible(in.f, fl.witness));
    EXPECT_EQ(fl.witness.size(), fl.max_cardinality);
  }
}

TEST(Edmonds, AgreesWithBruteForce) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    random_params p;
    p.n = 2 + seed % 10;
    p.m = seed % 18;
    p.loop_share = 0;
    const auto in = random_instance(p, seed);
    EXPECT_EQ(unit_matching_oracle(in.graph, in.f).max_cardinality,
              brute_force_max_f_matching(in.graph, in.f).max_cardinality)
        << "seed " << seed;
  }
  const auto in = parse_graph("p fgraph 2 1\nf 0 2\ne 0 1\n");
  EXPECT_THROW(unit_matching_oracle(in.graph, in.f), oracle_refusal);
}

TEST(Random, DeterministicAndShaped) {
  random_params p;
  p.n = 30;
  p.m = 60;
  p.simple = true;
  const auto a = random_instance(p, 5), b = random_instance(p, 5);
  ASSERT_EQ(a.graph.edge_count(), 60u);
  for (edge_id e = 0; e < 60; ++e) EXPECT_EQ(a.graph.ends(e).u, b.graph.ends(e).u);
  EXPECT_TRUE(a.graph.is_simple());
  EXPECT_FALSE(a.graph.has_loops());
  p.bipartite = true;
  const auto c = random_instance(p, 5);
  EXPECT_FALSE(bipartition(c.graph).empty());
  p.n = 4;
  EXPECT_EQ(random_instance(p, 5).graph.edge_count(), 4u);  // capped at the 2x2 complete bipartite graph
}

// M xor N splits into alternating pieces; augmenting minus reducing trails is |N| - |M|.
TEST(Decomposition, CountsMatchCardinalities) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    random_params p;
    p.n = 3 + seed % 7;
    p.m = 3 + seed % 12;
    p.f_max = 1 + seed % 3;
    const auto in = random_instance(p, seed);
    const auto best = brute_force_max_f_matching(in.graph, in.f).witness;
    // A greedy maximal matching as the smaller side.
    matching m(in.graph);
    for (edge_id e = static_cast<edge_id>(in.graph.edge_count()); e-- > 0;) {
      m.insert(in.graph, e);
      if (!feasible(in.f, m)) m.erase(in.graph, e);
    }
    const auto d = symmetric_difference_decompose(in.graph, m, best);
    std::vector<int> count(in.graph.edge_count(), 0);
    for (const auto* list : {&d.trails, &d.circuits})
      for (const auto& t : *list) {
        EXPECT_NO_THROW(check_walk(in.graph, t));
        EXPECT_TRUE(is_alternating(t, m));
        for (const auto& s : t.steps()) ++count[s.edge];
      }
    for (edge_id e = 0; e < in.graph.edge_count(); ++e)
      EXPECT_EQ(count[e], m.contains(e) != best.contains(e) ? 1 : 0);
    EXPECT_EQ(static_cast<long>(d.augmenting) - static_cast<long>(d.reducing),
              static_cast<long>(best.size()) - static_cast<long>(m.size()))
        << "seed " << seed;
  }
}

TEST(Decomposition, AlternatingCycleIsACircuit) {
  const auto in = parse_graph("p fgraph 4 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n");
  matching m(in.graph), n(in.graph);
  m.insert(in.graph, 0);
  m.insert(in.graph, 2);
  n.insert(in.graph, 1);
  n.insert(in.graph, 3);
  const auto d = symmetric_difference_decompose(in.graph, m, n);
  EXPECT_TRUE(d.trails.empty());
  ASSERT_EQ(d.circuits.size(), 1u);
  EXPECT_EQ(d.circuits[0].size(), 4u);
  EXPECT_EQ(d.circuits[0].start(), d.circuits[0].end());
}

TEST(Checks, SatMonotonicity) {
  phase_stats st;
  st.phases = {{1, 2, 2, 0}, {3, 1, 3, 1}, {7, 1, 4, 3}};
  EXPECT_TRUE(check_sat_monotonicity(st).ok());
  st.phases.push_back({7, 1, 5, 3});
  EXPECT_FALSE(check_sat_monotonicity(st).ok());
  phase_stats even;
  even.phases = {{2, 1, 1, 0}};
  EXPECT_FALSE(check_sat_monotonicity(even).ok());
  phase_stats late;
  late.phases = {{1, 1, 1, 0}, {1, 1, 2, 0}};
  EXPECT_FALSE(check_sat_monotonicity(late).ok());
}

TEST(Checks, PhaseBounds) {
  phase_stats st;
  for (int k = 0; k < 5; ++k) st.phases.push_back({static_cast<std::size_t>(2 * k + 1), 1, 0, k});
  EXPECT_TRUE(bound_check(st, 100, 100, true).ok());
  EXPECT_FALSE(bound_check(st, 100, 3, false).ok());  // 5 > 2 sqrt(3) + 1
  EXPECT_FALSE(bound_check(st, 3, 100, false).ok());  // s = 9 > 2n
}

TEST(Enumeration, FindsAllShortestTrails) {
  // Path 0-1-2-3 with 1-2 matched: one sat of length 3.
  const auto in = parse_graph("p fgraph 4 3\ne 0 1\ne 1 2\ne 2 3\n");
  matching m(in.graph);
  m.insert(in.graph, 1);
  const auto en = shortest_augmenting_trails(in.graph, in.f, m, 10);
  EXPECT_EQ(en.length, 3u);
  ASSERT_EQ(en.trails.size(), 1u);
  EXPECT_EQ(shortest_augmenting_trails(in.graph, in.f, m, 2).length, 0u);
  // Empty matching on a 4-cycle: four sats of length 1.
  const auto c4 = parse_graph("p fgraph 4 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n");
  const auto e4 = shortest_augmenting_trails(c4.graph, c4.f, matching(c4.graph), 10);
  EXPECT_EQ(e4.length, 1u);
  EXPECT_EQ(e4.trails.size(), 4u);
}
