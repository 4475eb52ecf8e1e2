#pragma once

// The nested-blossom family EG(b): sat length 4b+1 with quadratically many petalevels.

#include <algorithm>
#include <array>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "petalevels.hpp"

namespace fmatch {

struct eg_instance {
  unsigned b = 0;
  multigraph graph;
  degree_bound f;
  matching m0;
  std::vector<std::string> names;

  std::vector<vertex_id> beta;                 // beta[1..b]
  vertex_id beta1_prime = no_vertex;
  std::vector<std::array<vertex_id, 5>> s;     // s[k][1..4] for k = 2..b; s[k][4] is shared
  std::vector<vertex_id> p;                    // p[0..3b-2]

  std::vector<edge_id> c, d;                   // c[k] = beta_{k-1} beta_k, d[k] = beta_k s_k1
  std::vector<std::array<edge_id, 4>> gs;      // gs[k][1..3] along S_k
  edge_id t = no_edge, h = no_edge, h_prime = no_edge;  // triangle beta_1 s_24 beta_1'
  std::vector<edge_id> cross;                  // cross[i] = beta_i p_{1+3(b-i)}
  std::vector<edge_id> q;                      // q[k] = p_{k-1} p_k

  blossom_forest forest;                       // B_1..B_b as nested blossoms
  std::vector<blossom_id> blossoms;            // blossoms[i] is B_i

  std::size_t expected_sat_length() const noexcept { return 4 * b + 1; }
  vertex_id s24() const { return s[2][4]; }
};

inline eg_instance generate_eg(unsigned b) {
  if (b < 2 || b % 2 != 0) throw std::invalid_argument("EG(b) needs an even b >= 2");
  eg_instance in;
  in.b = b;
  std::vector<std::string> names;
  auto vertex = [&](std::string name) {
    names.push_back(std::move(name));
    return static_cast<vertex_id>(names.size() - 1);
  };
  in.beta.assign(b + 1, no_vertex);
  for (unsigned k = 1; k <= b; ++k) in.beta[k] = vertex("beta" + std::to_string(k));
  in.beta1_prime = vertex("beta1'");
  in.s.assign(b + 1, {no_vertex, no_vertex, no_vertex, no_vertex, no_vertex});
  const vertex_id s24 = vertex("s24");
  for (unsigned k = 2; k <= b; ++k)
    for (unsigned j = 1; j <= 3; ++j) in.s[k][j] = vertex("s" + std::to_string(k) + std::to_string(j));
  for (unsigned k = 2; k <= b; ++k) in.s[k][4] = k == 2 ? s24 : in.s[k - 1][1];
  const unsigned plen = 3 * b - 2;
  for (unsigned k = 0; k <= plen; ++k) in.p.push_back(vertex("p" + std::to_string(k)));

  in.graph = multigraph(names.size());
  in.names = std::move(names);
  std::vector<std::pair<edge_id, bool>> typed;
  auto edge = [&](vertex_id u, vertex_id v, bool matched) {
    const auto e = in.graph.add_edge(u, v);
    typed.emplace_back(e, matched);
    return e;
  };
  in.t = edge(in.beta[1], s24, true);
  in.h = edge(s24, in.beta1_prime, false);
  in.h_prime = edge(in.beta1_prime, in.beta[1], true);
  in.c.assign(b + 1, no_edge);
  in.d.assign(b + 1, no_edge);
  in.gs.assign(b + 1, {no_edge, no_edge, no_edge, no_edge});
  for (unsigned k = 2; k <= b; ++k) {
    const bool odd = k % 2 == 1;
    in.c[k] = edge(in.beta[k - 1], in.beta[k], odd);
    in.d[k] = edge(in.beta[k], in.s[k][1], odd);
    in.gs[k][1] = edge(in.s[k][1], in.s[k][2], !odd);
    in.gs[k][2] = edge(in.s[k][2], in.s[k][3], odd);
    in.gs[k][3] = edge(in.s[k][3], in.s[k][4], !odd);
  }
  in.cross.assign(b + 1, no_edge);
  for (unsigned i = 1; i <= b; ++i) in.cross[i] = edge(in.beta[i], in.p[1 + 3 * (b - i)], i % 2 == 0);
  in.q.assign(plen + 1, no_edge);
  for (unsigned k = 1; k <= plen; ++k) in.q[k] = edge(in.p[k - 1], in.p[k], k % 2 == 0);

  in.m0 = matching(in.graph);
  for (auto [e, matched] : typed)
    if (matched) in.m0.insert(in.graph, e);
  // Everything saturated except p_0 and beta_b, which keep deficiency 1.
  std::vector<unsigned> f(in.graph.vertex_count());
  for (vertex_id v = 0; v < f.size(); ++v) f[v] = in.m0.degree(v);
  f[in.p[0]] += 1;
  f[in.beta[b]] += 1;
  in.f = degree_bound(std::move(f));

  in.forest = blossom_forest(in.graph.vertex_count());
  in.blossoms.assign(b + 1, no_blossom);
  blossom b1;
  b1.type = m_type::matched;
  b1.base = in.beta[1];
  b1.base_edge = b >= 2 ? in.c[2] : artificial_edge;
  b1.children = {node_ref::atom(in.beta[1]), node_ref::atom(s24), node_ref::atom(in.beta1_prime)};
  b1.links = {{in.t, in.beta[1], s24}, {in.h, s24, in.beta1_prime}, {in.h_prime, in.beta1_prime, in.beta[1]}};
  in.blossoms[1] = in.forest.add(std::move(b1));
  for (unsigned i = 2; i <= b; ++i) {
    blossom bi;
    bi.type = in.m0.type(in.c[i]);
    bi.base = in.beta[i];
    bi.base_edge = i < b ? in.c[i + 1] : artificial_edge;
    bi.children = {node_ref::atom(in.beta[i]), node_ref::of(in.blossoms[i - 1]), node_ref::atom(in.s[i][3]),
                   node_ref::atom(in.s[i][2]), node_ref::atom(in.s[i][1])};
    bi.links = {{in.c[i], in.beta[i], in.beta[i - 1]},
                {in.gs[i][3], in.s[i][4], in.s[i][3]},
                {in.gs[i][2], in.s[i][3], in.s[i][2]},
                {in.gs[i][1], in.s[i][2], in.s[i][1]},
                {in.d[i], in.s[i][1], in.beta[i]}};
    in.blossoms[i] = in.forest.add(std::move(bi));
  }
  return in;
}

// beta_b ... beta_i S beta_1' beta_1 ... beta_i, then the cross edge and P down to p_0.
inline trail expected_cross_trail(const eg_instance& in, unsigned i) {
  if (i < 1 || i > in.b) throw std::invalid_argument("cross edge index out of range");
  trail t(in.beta[in.b]);
  for (unsigned k = in.b; k > i; --k) t.push(in.c[k], in.beta[k - 1]);
  if (i == 1) {
    t.push(in.t, in.s24());
  } else {
    t.push(in.d[i], in.s[i][1]);
    for (unsigned k = i; k >= 2; --k) {
      t.push(in.gs[k][1], in.s[k][2]);
      t.push(in.gs[k][2], in.s[k][3]);
      t.push(in.gs[k][3], in.s[k][4]);
    }
  }
  t.push(in.h, in.beta1_prime);
  t.push(in.h_prime, in.beta[1]);
  for (unsigned k = 2; k <= i; ++k) t.push(in.c[k], in.beta[k]);
  const unsigned j = 1 + 3 * (in.b - i);
  t.push(in.cross[i], in.p[j]);
  for (unsigned k = j; k >= 1; --k) t.push(in.q[k], in.p[k - 1]);
  return t;
}

// Index i whose expected trail has the same edge set as t, or 0. Orientation around the
// blossom cycles does not matter since augmenting only depends on the edge set.
inline unsigned eg_match_expected(const eg_instance& in, const trail& t) {
  auto edge_set = [](const trail& x) {
    std::vector<edge_id> es;
    for (const auto& st : x.steps()) es.push_back(st.edge);
    std::sort(es.begin(), es.end());
    return es;
  };
  const auto mine = edge_set(t);
  for (unsigned i = 1; i <= in.b; ++i)
    if (edge_set(expected_cross_trail(in, i)) == mine) return i;
  return 0;
}

// Length of the prefix ending at the last visit of beta_i.
inline std::size_t expected_prefix_length(unsigned b, unsigned i) { return b + 3 * i - 1; }

// row i-1 lists the natural petalevel of beta_1..beta_i at their last visit in the sat of e_i.
inline std::vector<std::vector<long>> eg_level_table(const eg_instance& in, const structured_matching& s) {
  std::vector<std::vector<long>> table;
  for (unsigned i = 1; i <= in.b; ++i) {
    const auto t = expected_cross_trail(in, i);
    const auto tr = track_trail(s, t, track_mode::natural);
    std::vector<long> row(i, -1);
    for (const auto& st : tr.steps)
      for (unsigned k = 1; k <= i; ++k)
        if (st.to == in.beta[k]) row[k - 1] = st.level;
    table.push_back(std::move(row));
  }
  return table;
}

// Distinct (vertex, level) pairs on the expected sats whose level is not the vertex's ordinary level.
inline std::size_t eg_non_ordinary_pairs(const eg_instance& in, const structured_matching& s) {
  std::set<std::pair<vertex_id, long>> pairs;
  for (unsigned i = 1; i <= in.b; ++i) {
    const auto tr = track_trail(s, expected_cross_trail(in, i), track_mode::natural);
    for (const auto& st : tr.steps)
      if (st.level != ordinary_level(s, st.to, st.j)) pairs.insert({st.to, st.level});
  }
  return pairs.size();
}

// All distinct (vertex, level) pairs on the expected sats, ordinary or not.
inline std::size_t eg_distinct_pairs(const eg_instance& in, const structured_matching& s) {
  std::set<std::pair<vertex_id, long>> pairs;
  for (unsigned i = 1; i <= in.b; ++i) {
    const auto t = expected_cross_trail(in, i);
    const auto tr = track_trail(s, t, track_mode::natural);
    pairs.insert({t.start(), tr.start_level});
    for (const auto& st : tr.steps) pairs.insert({st.to, st.level});
  }
  return pairs.size();
}

struct eg_report {
  validation_report issues;
  std::size_t enumerated_sats = 0;
  std::size_t enumerated_length = 0;
  std::size_t enumerated_classes = 0;  // distinct edge sets among the enumerated sats
  std::vector<std::vector<long>> level_table;
  std::size_t non_ordinary_base_levels = 0;
  std::size_t non_ordinary_pairs = 0;
};

// Edges of the shortest-path tree of B_b claimed for the family.
inline std::vector<edge_id> eg_claimed_tree(const eg_instance& in) {
  std::vector<edge_id> out;
  for (auto e : in.forest.edges(in.blossoms[in.b])) {
    bool drop = e == in.h;
    for (unsigned k = 2; k <= in.b; ++k) drop = drop || e == in.gs[k][3];
    if (!drop) out.push_back(e);
  }
  return out;
}

inline eg_report verify_eg(const eg_instance& in, const structured_matching& s, bool enumerate) {
  eg_report rep;
  auto& r = rep.issues;
  const auto& g = in.graph;
  r.merge(validate_forest(g, in.forest, in.m0));
  for (unsigned i = 1; i <= in.b; ++i) {
    const auto t = expected_cross_trail(in, i);
    const auto cls = classify_trail(g, t, in.m0, in.f);
    if (!cls.augmenting) r.add("expected trail of e_" + std::to_string(i) + " is not augmenting");
    if (t.size() != in.expected_sat_length()) r.add("expected trail of e_" + std::to_string(i) + " has wrong length");
  }

  // (i) exhaustive enumeration of sats
  if (enumerate) {
    if (in.b > 4) throw std::invalid_argument("sat enumeration is limited to b <= 4");
    const auto en = shortest_augmenting_trails(g, in.f, in.m0, in.expected_sat_length() + 2);
    rep.enumerated_sats = en.trails.size();
    rep.enumerated_length = en.length;
    if (en.length != in.expected_sat_length()) r.add("shortest augmenting trail has length " + std::to_string(en.length));
    std::set<unsigned> classes;
    for (const auto& t : en.trails) {
      const unsigned cls = eg_match_expected(in, t);
      if (cls == 0) r.add("enumerated sat matches no expected trail");
      classes.insert(cls);
      unsigned hits = 0, which = 0;
      for (unsigned i = 1; i <= in.b; ++i)
        for (const auto& st : t.steps())
          if (st.edge == in.cross[i]) ++hits, which = i;
      if (hits != 1) {
        r.add("sat with " + std::to_string(hits) + " cross edges");
        continue;
      }
      std::set<edge_id> on_p, want;
      for (const auto& st : t.steps())
        for (std::size_t k = 1; k < in.q.size(); ++k)
          if (st.edge == in.q[k]) on_p.insert(st.edge);
      for (unsigned k = 1; k <= 1 + 3 * (in.b - which); ++k) want.insert(in.q[k]);
      if (on_p != want) r.add("sat through e_" + std::to_string(which) + " meets P outside p_0..p_j");
    }
    rep.enumerated_classes = classes.size();
    if (classes.size() != in.b) r.add("enumerated sats form " + std::to_string(classes.size()) + " edge sets");
  }

  // (ii) shortest-path tree inside B_b from its base
  {
    const auto eb = in.forest.edges(in.blossoms[in.b]);
    const auto vb = in.forest.vertices(in.blossoms[in.b]);
    std::map<vertex_id, long> dist;
    for (auto v : vb) dist[v] = -1;
    std::map<vertex_id, std::vector<vertex_id>> adj;
    for (auto e : eb) {
      adj[g.ends(e).u].push_back(g.ends(e).v);
      adj[g.ends(e).v].push_back(g.ends(e).u);
    }
    std::queue<vertex_id> bfs;
    dist[in.beta[in.b]] = 0;
    bfs.push(in.beta[in.b]);
    while (!bfs.empty()) {
      const auto v = bfs.front();
      bfs.pop();
      for (auto w : adj[v])
        if (dist[w] < 0) dist[w] = dist[v] + 1, bfs.push(w);
    }
    const auto tree = eg_claimed_tree(in);
    if (tree.size() + 1 != vb.size()) r.add("claimed tree has the wrong number of edges");
    std::map<vertex_id, int> parents;
    for (auto e : tree) {
      auto [u, v] = g.ends(e);
      if (dist[u] > dist[v]) std::swap(u, v);
      if (dist[v] != dist[u] + 1) r.add("tree edge " + std::to_string(e) + " does not go down one BFS level");
      ++parents[v];
    }
    for (auto v : vb)
      if (v != in.beta[in.b] && parents[v] != 1) r.add("vertex " + in.names[v] + " lacks a unique tree parent");
  }

  // (iii) levels along the expected sats
  rep.level_table = eg_level_table(in, s);
  for (unsigned i = 1; i <= in.b; ++i) {
    const auto tr = track_trail(s, expected_cross_trail(in, i), track_mode::natural);
    if (!tr.advances_by_one() || tr.final_level() != static_cast<long>(in.expected_sat_length()))
      r.add("expected trail of e_" + std::to_string(i) + " does not advance one level per edge");
    for (unsigned k = 1; k <= i; ++k) {
      const long want = static_cast<long>(in.b + 2 * i + k) - 1;
      if (rep.level_table[i - 1][k - 1] != want)
        r.add("beta_" + std::to_string(k) + " on the sat of e_" + std::to_string(i) + " sits on level " +
              std::to_string(rep.level_table[i - 1][k - 1]) + ", expected " + std::to_string(want));
    }
    std::vector<const tracked_step*> last(i + 1, nullptr);
    for (const auto& st : tr.steps)
      for (unsigned k = 1; k <= i; ++k)
        if (st.to == in.beta[k]) last[k] = &st;
    for (unsigned k = 1; k <= i; ++k)
      if (last[k] && last[k]->level != ordinary_level(s, in.beta[k], last[k]->j)) ++rep.non_ordinary_base_levels;
  }
  if (rep.non_ordinary_base_levels < in.b * (in.b - 1) / 2) r.add("too few non-ordinary base levels");
  rep.non_ordinary_pairs = eg_non_ordinary_pairs(in, s);
  return rep;
}

}  // namespace fmatch
