#include <gtest/gtest.h>

#include <fmatch/blocking.hpp>
#include <fmatch/petalevels.hpp>
#include <fmatch/random.hpp>

using namespace fmatch;

namespace {

// Light free triangle blossom on 0-1-2 (1-2 matched) with z = 2.
structured_matching triangle_state() {
  multigraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  structured_matching s;
  s.m = matching(g);
  s.m.insert(g, 1);
  s.forest = blossom_forest(3);
  blossom b;
  b.base = 0;
  b.children = {node_ref::atom(0), node_ref::atom(1), node_ref::atom(2)};
  b.links = {{0, 0, 1}, {1, 1, 2}, {2, 2, 0}};
  s.forest.add(b);
  s.duals.y = {-2, -2, -2};
  s.duals.z = {2};
  s.duals.y_free = -8;
  return s;
}

template <class F>
void for_each_phase(std::uint64_t seeds, F&& body) {
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    random_params p;
    p.n = 4 + seed % 12;
    p.m = p.n + seed % 16;
    p.f_max = 1 + seed % 3;
    const auto in = random_instance(p, seed);
    solve_options opt;
    opt.on_phase = [&](const phase_view& v) { body(in, v, seed); };
    solve_max_f_matching(in.graph, in.f, opt);
  }
}

}  // namespace

TEST(Levels, WorkedExample) {
  const auto s = triangle_state();
  EXPECT_EQ(ordinary_level(s, 0, io_type::outer), 6);   // -2 - (-8)
  EXPECT_EQ(ordinary_level(s, 0, io_type::inner), 9);   // 1 - (-2 - 8 + 2)
  const entrance_sequence petal{{0, entry::petal}}, base{{0, entry::base}};
  EXPECT_EQ(petalevel(s, 0, io_type::outer, petal), 8);  // -2 - (-8) + 2
  EXPECT_EQ(petalevel(s, 0, io_type::outer, base), 6);
  EXPECT_EQ(petalevel(s, 0, io_type::inner, base), 9);
  EXPECT_EQ(petalevel(s, 0, io_type::inner, petal), 11);
  EXPECT_THROW(petalevel(s, 0, io_type::outer, {}), std::invalid_argument);
  EXPECT_EQ(lookup(base, 0), entry::base);
  EXPECT_THROW(lookup({}, 0), std::invalid_argument);
  EXPECT_EQ(shorten_delta(s, 0, io_type::outer, petal, base), 2);
  EXPECT_EQ(shorten_delta(s, 0, io_type::inner, petal, base), 2);
  EXPECT_THROW(shorten_delta(s, 0, io_type::outer, base, petal), std::invalid_argument);
}

TEST(Levels, EntranceRules) {
  auto s = triangle_state();
  // Entering from outside: base entry only through the base edge.
  const auto from_outside = entrance_update_natural(s, {}, no_vertex, 1, 0);
  ASSERT_EQ(from_outside.size(), 1u);
  EXPECT_EQ(from_outside[0].kind, entry::petal);
  // A free blossom counts as entered on its (artificial) base edge at a trail start.
  EXPECT_EQ(entrance_update_natural(s, {}, no_vertex, 0, artificial_edge)[0].kind, entry::base);
  // Moving inside keeps the entry.
  const entrance_sequence petal{{0, entry::petal}};
  EXPECT_EQ(entrance_update_natural(s, petal, 1, 2, 1), petal);
  // Shortened rule uses the base-entered set.
  std::vector<char> be{1};
  EXPECT_EQ(entrance_update_shortened(s, {}, no_vertex, 1, be)[0].kind, entry::base);
  be[0] = 0;
  EXPECT_EQ(entrance_update_shortened(s, {}, no_vertex, 1, be)[0].kind, entry::petal);
  // z = 0 blossoms are not tracked.
  s.duals.z[0] = 0;
  EXPECT_TRUE(positive_chain(s, 1).empty());
  EXPECT_EQ(petalevel(s, 1, io_type::outer, {}), ordinary_level(s, 1, io_type::outer));
}

// Every sat of every phase starts at level 0 and climbs exactly 1 per edge to 1 + 2L.
TEST(Tracking, SearchSatsAdvanceByOne) {
  std::size_t tracked = 0, through_blossoms = 0;
  for_each_phase(300, [&](const graph_input&, const phase_view& v, std::uint64_t seed) {
    const auto& s = v.outcome.structured;
    for (const auto& t : v.blocking.trails) {
      const auto tr = track_trail(s, t, track_mode::natural);
      ++tracked;
      EXPECT_EQ(tr.start_level, 0) << "seed " << seed;
      EXPECT_TRUE(tr.advances_by_one()) << "seed " << seed;
      EXPECT_EQ(tr.final_level(), 1 + 2 * v.outcome.L) << "seed " << seed;
      for (const auto& st : tr.steps)
        if (!st.iota.empty()) {
          ++through_blossoms;
          break;
        }
    }
  });
  EXPECT_GT(tracked, 1000u);
  EXPECT_GT(through_blossoms, 20u);
}

// check_advancement reports equality exactly when the step has zero slack.
TEST(Tracking, EqualityMatchesZeroSlack) {
  std::mt19937_64 rng(11);
  std::size_t checked = 0, equal = 0;
  for_each_phase(120, [&](const graph_input& in, const phase_view& v, std::uint64_t) {
    const auto& s = v.outcome.structured;
    auto random_iota = [&](vertex_id x) {
      entrance_sequence it;
      for (auto a : positive_chain(s, x)) it.push_back({a, rng() % 2 ? entry::base : entry::petal});
      return it;
    };
    for (edge_id e = 0; e < in.graph.edge_count(); ++e) {
      const auto& ends = in.graph.ends(e);
      for (vertex_id u : {ends.u, ends.v}) {
        const vertex_id w = ends.other(u);
        const auto iu = random_iota(u);
        // A trail that entered a blossom on its base edge cannot leave on it.
        bool impossible = false;
        for (const auto& en : iu)
          if (!s.forest.contains(en.blossom, w) && en.kind == entry::base && e == s.forest[en.blossom].base_edge)
            impossible = true;
        if (impossible) continue;
        const auto iw = entrance_update_natural(s, iu, u, w, e);
        const auto a = check_advancement(in.graph, s, u, w, e, iu, iw);
        ++checked;
        if (a.equality) ++equal;
        EXPECT_EQ(a.equality, a.slack == 0);
      }
    }
  });
  EXPECT_GT(checked, 5000u);
  EXPECT_GT(equal, 500u);
}

// Turning petal entries into base entries lowers the level by at least 2 per blossom.
TEST(Tracking, ShorteningLowersLevels) {
  std::mt19937_64 rng(3);
  std::size_t changed_total = 0;
  for_each_phase(150, [&](const graph_input& in, const phase_view& v, std::uint64_t) {
    const auto& s = v.outcome.structured;
    for (vertex_id x = 0; x < in.graph.vertex_count(); ++x) {
      const auto chain = positive_chain(s, x);
      if (chain.empty()) continue;
      entrance_sequence a, b;
      long changed = 0;
      for (auto bl : chain) {
        const auto k = rng() % 3;
        a.push_back({bl, k == 0 ? entry::base : entry::petal});
        b.push_back({bl, k == 2 ? entry::base : a.back().kind});
        changed += k == 2;
      }
      for (auto j : {io_type::inner, io_type::outer}) {
        const auto d = shorten_delta(s, x, j, a, b);
        EXPECT_GE(d, 2 * changed);
      }
      changed_total += changed;
    }
  });
  EXPECT_GT(changed_total, 20u);
}

TEST(LevelGraph, LayersAndBottleneck) {
  std::size_t phases = 0;
  for_each_phase(200, [&](const graph_input& in, const phase_view& v, std::uint64_t seed) {
    ++phases;
    const auto& s = v.outcome.structured;
    const std::size_t n = in.graph.vertex_count();
    const auto lg = build_level_graph(in.graph, s, v.blocking.trails);
    EXPECT_EQ(static_cast<long>(lg.layer_count()), 2 * v.outcome.L + 1);
    EXPECT_LE(lg.nodes.size(), 2 * n);
    for (const auto& t : v.blocking.trails) {
      const auto r = check_lg_tracking(s, lg, t);
      EXPECT_TRUE(r.ok()) << "seed " << seed << ": " << (r.ok() ? "" : r.violations[0]);
    }
    const auto bn = bottleneck_layer(lg, n);
    EXPECT_TRUE(bn.nodes_within_bound) << "seed " << seed;
    // Parallel edges can exceed the node-pair count, so only simple graphs are checked.
    if (in.graph.is_simple()) {
      EXPECT_LE(bn.edge_count, bn.edge_capacity);
    }
    // Each node sits on the level given by its petalevel.
    for (std::size_t k = 0; k < lg.levels.size(); ++k)
      for (auto i : lg.levels[k]) EXPECT_EQ(lg.nodes[i].level, static_cast<long>(k));
  });
  EXPECT_GT(phases, 300u);
}
