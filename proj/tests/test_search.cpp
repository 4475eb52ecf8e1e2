#include <gtest/gtest.h>

#include <fmatch/oracles.hpp>
#include <fmatch/random.hpp>

using namespace fmatch;

namespace {

// Triangle 0-1-2 with 1-2 matched; 0 is the only free vertex.
graph_input matched_triangle() { return parse_graph("p fgraph 3 3\ne 0 1\ne 1 2\ne 2 0\n"); }

matching with(const multigraph& g, std::initializer_list<edge_id> es) {
  matching m(g);
  for (auto e : es) m.insert(g, e);
  return m;
}

}  // namespace

TEST(Search, SingleEdge) {
  const auto in = parse_graph("p fgraph 2 1\ne 0 1\n");
  const auto out = f_matching_search(in.graph, in.f, matching(in.graph));
  ASSERT_TRUE(out.result);
  EXPECT_EQ(out.sat_length, 1u);
  EXPECT_EQ(out.L, 0);
}

TEST(Search, PathOfThree) {
  // 0-1-2-3 with 1-2 matched: the only sat has length 3 and needs one dual unit.
  const auto in = parse_graph("p fgraph 4 3\ne 0 1\ne 1 2\ne 2 3\n");
  const auto m = with(in.graph, {1});
  const auto out = f_matching_search(in.graph, in.f, m, {.validate_each_step = true});
  ASSERT_TRUE(out.result);
  EXPECT_EQ(out.sat_length, 3u);
  EXPECT_EQ(out.L, 1);
  EXPECT_TRUE(classify_trail(in.graph, *out.result, m, in.f).augmenting);
}

TEST(Search, DualUnitOnPendantPath) {
  // a=0, c=1, b=2, d=3: edges a-c, c-b, c-d with c-d matched. One unit lowers y_free to -1.
  const auto in = parse_graph("p fgraph 4 3\ne 0 1\ne 1 2\ne 1 3\n");
  const auto m = with(in.graph, {2});
  search_state st(in.graph, in.f, m, {.validate_each_step = true});
  st.grow(0);
  EXPECT_EQ(st.io(1), io_type::inner);
  st.dual_adjust();
  EXPECT_EQ(st.structured().duals.y_free, -1);
  EXPECT_EQ(st.L(), 1);
  EXPECT_EQ(st.structured().duals.y[0], -1);
  EXPECT_EQ(st.structured().duals.y[2], -1);
  EXPECT_EQ(st.structured().duals.y[1], 1);
  EXPECT_TRUE(st.validate().ok());
}

TEST(Search, NoAugmentingTrail) {
  const auto in = parse_graph("p fgraph 4 3\ne 0 1\ne 1 2\ne 1 3\n");
  const auto out = f_matching_search(in.graph, in.f, with(in.graph, {2}));
  EXPECT_FALSE(out.result);
  EXPECT_EQ(out.sat_length, 0u);
}

TEST(Search, LoopNeedsDeficiencyTwo) {
  auto in = parse_graph("p fgraph 1 1\ne 0 0\n");
  EXPECT_FALSE(f_matching_search(in.graph, in.f, matching(in.graph)).result);
  in.f.set(0, 2);
  const auto out = f_matching_search(in.graph, in.f, matching(in.graph));
  ASSERT_TRUE(out.result);
  EXPECT_EQ(out.sat_length, 1u);
}

TEST(Search, BlossomThenExpandIsInverse) {
  const auto in = matched_triangle();
  const auto m = with(in.graph, {1});
  search_state st(in.graph, in.f, m, {.validate_each_step = true});
  st.grow(0);
  st.grow(2);
  st.dual_adjust();
  std::vector<node_ref> before;
  std::vector<io_type> io_before;
  for (vertex_id v = 0; v < 3; ++v) {
    before.push_back(st.node_of(v));
    io_before.push_back(st.io(v));
  }
  EXPECT_FALSE(st.join(1));
  ASSERT_EQ(st.structured().forest.size(), 1u);
  const auto b = st.node_of(1);
  ASSERT_TRUE(b.is_blossom);
  EXPECT_EQ(st.node_of(0), b);
  EXPECT_EQ(st.node_base(b), 0u);
  EXPECT_EQ(st.parent_edge(b), artificial_edge);
  st.expand(b.id);
  for (vertex_id v = 0; v < 3; ++v) {
    EXPECT_EQ(st.node_of(v), before[v]);
    EXPECT_EQ(st.io(v), io_before[v]);
  }
  EXPECT_FALSE(st.structured().forest[b.id].active);
  EXPECT_TRUE(st.validate().ok());
}

TEST(Search, ExpandRefusesPositiveZ) {
  const auto in = matched_triangle();
  search_state st(in.graph, in.f, with(in.graph, {1}));
  st.grow(0);
  st.grow(2);
  st.dual_adjust();
  st.join(1);
  st.dual_adjust();
  EXPECT_THROW(st.expand(0), std::invalid_argument);
}

TEST(Search, ManualStepsRejectBadEdges) {
  const auto in = parse_graph("p fgraph 4 3\ne 0 1\ne 1 2\ne 2 3\n");
  search_state st(in.graph, in.f, with(in.graph, {1}));
  EXPECT_THROW(st.grow(1), std::invalid_argument);  // not tight
  EXPECT_THROW(st.join(0), std::invalid_argument);  // vertex 1 not yet in the structure
}

TEST(Search, TraceRecordsSteps) {
  const auto in = parse_graph("p fgraph 4 3\ne 0 1\ne 1 2\ne 2 3\n");
  search_trace tr;
  const auto out = f_matching_search(in.graph, in.f, with(in.graph, {1}), {.trace = &tr});
  ASSERT_TRUE(out.result);
  ASSERT_FALSE(tr.events.empty());
  EXPECT_EQ(tr.events.back().kind, step_kind::augment);
  std::size_t duals = 0;
  for (std::size_t i = 0; i < tr.events.size(); ++i) {
    if (tr.events[i].kind == step_kind::dual) {
      ++duals;
      ASSERT_GT(i, 0u);
      EXPECT_NE(tr.events[i].dual_hash, tr.events[i - 1].dual_hash);
    }
  }
  EXPECT_EQ(static_cast<long>(duals), out.L);
}

TEST(Search, EdgeMaskIsRespected) {
  const auto in = parse_graph("p fgraph 2 2\ne 0 1\ne 0 1\n");
  std::vector<char> mask{0, 1};
  const auto out = f_matching_search(in.graph, in.f, matching(in.graph), {.enabled = &mask});
  ASSERT_TRUE(out.result);
  EXPECT_EQ(out.result->steps()[0].edge, 1u);
}

// The search returns a shortest augmenting trail: compare with exhaustive enumeration.
TEST(Search, FindsShortestTrailOnRandomGraphs) {
  std::size_t searches = 0, with_blossoms = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    random_params p;
    p.n = 2 + seed % 8;
    p.m = seed % 15;
    p.f_max = 1 + seed % 3;
    p.loop_share = 0.15;
    const auto in = random_instance(p, seed);
    matching m(in.graph);
    for (;;) {
      const auto out = f_matching_search(in.graph, in.f, m, {.validate_each_step = true});
      const auto en = shortest_augmenting_trails(in.graph, in.f, m, in.graph.edge_count());
      ++searches;
      if (out.structured.forest.size() > 0) ++with_blossoms;
      ASSERT_EQ(out.sat_length, en.length) << "seed " << seed;
      if (!out.result) break;
      ASSERT_EQ(static_cast<long>(out.sat_length), 1 + 2 * out.L);
      ASSERT_TRUE(classify_trail(in.graph, *out.result, m, in.f).augmenting);
      m = augment(in.graph, in.f, m, *out.result);
    }
  }
  EXPECT_GT(searches, 1000u);
  EXPECT_GT(with_blossoms, 20u);
}
