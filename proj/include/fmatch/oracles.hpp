#pragma once

// Independent ground truth: exhaustive search, bipartite max-flow, Edmonds matching
// for f = 1, symmetric-difference decomposition, and phase-statistic checks.

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>
#include <boost/graph/push_relabel_max_flow.hpp>

#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "blocking.hpp"

namespace fmatch {

class oracle_refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct oracle_result {
  std::size_t max_cardinality = 0;
  matching witness;
  std::string method;
};

inline constexpr std::size_t brute_force_edge_limit = 24;

inline oracle_result brute_force_max_f_matching(const multigraph& g, const degree_bound& f) {
  const std::size_t m = g.edge_count();
  if (m > brute_force_edge_limit) throw oracle_refusal("brute force limited to 24 edges");
  std::vector<unsigned> room(f.values());
  std::vector<char> chosen(m, 0), best(m, 0);
  std::size_t best_size = 0, size = 0;
  const std::size_t cap = static_cast<std::size_t>(f.total() / 2);

  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (size > best_size) {
      best_size = size;
      best = chosen;
    }
    if (i == m || size + (m - i) <= best_size || best_size == cap) return;
    const auto& e = g.ends(static_cast<edge_id>(i));
    const unsigned need_u = e.is_loop() ? 2 : 1;
    if (room[e.u] >= need_u && (e.is_loop() || room[e.v] >= 1)) {
      room[e.u] -= need_u;
      if (!e.is_loop()) room[e.v] -= 1;
      chosen[i] = 1;
      ++size;
      self(self, i + 1);
      --size;
      chosen[i] = 0;
      room[e.u] += need_u;
      if (!e.is_loop()) room[e.v] += 1;
    }
    self(self, i + 1);
  };
  rec(rec, 0);

  oracle_result r{best_size, matching(g), "brute"};
  for (edge_id e = 0; e < m; ++e)
    if (best[e]) r.witness.insert(g, e);
  return r;
}

// Two-colouring, or an empty vector when the graph is not bipartite.
inline std::vector<int> bipartition(const multigraph& g) {
  std::vector<int> side(g.vertex_count(), -1);
  for (vertex_id s = 0; s < g.vertex_count(); ++s) {
    if (side[s] != -1) continue;
    side[s] = 0;
    std::queue<vertex_id> q;
    q.push(s);
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (auto e : g.incident(v)) {
        const auto w = g.ends(e).other(v);
        if (side[w] == -1) {
          side[w] = 1 - side[v];
          q.push(w);
        } else if (side[w] == side[v]) {
          return {};
        }
      }
    }
  }
  return side;
}

inline oracle_result bipartite_flow_oracle(const multigraph& g, const degree_bound& f) {
  if (g.has_loops()) throw oracle_refusal("flow oracle needs a loopless graph");
  const auto side = bipartition(g);
  if (side.empty() && g.vertex_count() > 0) throw oracle_refusal("graph is not bipartite");

  using traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
  using flow_graph = boost::adjacency_list<
      boost::vecS, boost::vecS, boost::directedS, boost::no_property,
      boost::property<boost::edge_capacity_t, long,
                      boost::property<boost::edge_residual_capacity_t, long,
                                      boost::property<boost::edge_reverse_t, traits::edge_descriptor>>>>;
  const std::size_t n = g.vertex_count();
  flow_graph fg(n + 2);
  const auto source = n, sink = n + 1;
  auto cap = boost::get(boost::edge_capacity, fg);
  auto rev = boost::get(boost::edge_reverse, fg);
  auto res = boost::get(boost::edge_residual_capacity, fg);
  auto arc = [&](std::size_t a, std::size_t b, long c) {
    auto fwd = boost::add_edge(a, b, fg).first;
    auto back = boost::add_edge(b, a, fg).first;
    cap[fwd] = c;
    cap[back] = 0;
    rev[fwd] = back;
    rev[back] = fwd;
    return fwd;
  };
  for (vertex_id v = 0; v < n; ++v) {
    if (side[v] == 0)
      arc(source, v, f(v));
    else
      arc(v, sink, f(v));
  }
  std::vector<traits::edge_descriptor> middle;
  for (edge_id e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.ends(e);
    if (side[u] != 0) std::swap(u, v);
    middle.push_back(arc(u, v, 1));
  }
  const long flow = boost::push_relabel_max_flow(fg, source, sink);

  oracle_result r{static_cast<std::size_t>(flow), matching(g), "flow"};
  for (edge_id e = 0; e < g.edge_count(); ++e)
    if (cap[middle[e]] - res[middle[e]] > 0) r.witness.insert(g, e);
  return r;
}

// Maximum matching for f = 1 via Edmonds' algorithm; loops are never usable there.
inline oracle_result unit_matching_oracle(const multigraph& g, const degree_bound& f) {
  for (vertex_id v = 0; v < g.vertex_count(); ++v)
    if (f(v) != 1) throw oracle_refusal("unit matching oracle needs f = 1");
  using ugraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  ugraph ug(g.vertex_count());
  for (const auto& e : g.edges())
    if (!e.is_loop()) boost::add_edge(e.u, e.v, ug);
  std::vector<boost::graph_traits<ugraph>::vertex_descriptor> mate(g.vertex_count());
  boost::edmonds_maximum_cardinality_matching(ug, &mate[0]);
  oracle_result r{boost::matching_size(ug, &mate[0]), matching(g), "edmonds"};
  for (edge_id e = 0; e < g.edge_count(); ++e) {
    const auto& ends = g.ends(e);
    if (!ends.is_loop() && mate[ends.u] == ends.v && r.witness.degree(ends.u) == 0 && r.witness.degree(ends.v) == 0)
      r.witness.insert(g, e);
  }
  return r;
}

struct decomposition {
  std::vector<trail> trails;    // open, or closed at a vertex where they start and end
  std::vector<trail> circuits;  // alternating all the way round
  std::size_t augmenting = 0;   // trails starting and ending with N-edges
  std::size_t reducing = 0;     // trails starting and ending with M-edges
};

// Splits M xor N into alternating trails and circuits by pairing N-edges with M-edges at each vertex.
inline decomposition symmetric_difference_decompose(const multigraph& g, const matching& m, const matching& n) {
  const std::size_t edges = g.edge_count();
  // Half-edge h = 2e + side; side 0 sits at ends(e).u, side 1 at ends(e).v.
  std::vector<std::uint32_t> partner(2 * edges, no_edge);
  std::vector<char> in_d(edges, 0);
  std::vector<std::vector<std::uint32_t>> at_n(g.vertex_count()), at_m(g.vertex_count());
  for (edge_id e = 0; e < edges; ++e) {
    if (m.contains(e) == n.contains(e)) continue;
    in_d[e] = 1;
    auto& bucket = n.contains(e) ? at_n : at_m;
    bucket[g.ends(e).u].push_back(2 * e);
    bucket[g.ends(e).v].push_back(2 * e + 1);
  }
  for (vertex_id v = 0; v < g.vertex_count(); ++v) {
    const std::size_t k = std::min(at_n[v].size(), at_m[v].size());
    for (std::size_t i = 0; i < k; ++i) {
      partner[at_n[v][i]] = at_m[v][i];
      partner[at_m[v][i]] = at_n[v][i];
    }
  }
  auto vertex_of = [&](std::uint32_t h) { return h % 2 == 0 ? g.ends(h / 2).u : g.ends(h / 2).v; };
  std::vector<char> seen(edges, 0);
  // Follows pairings from half-edge h until an unpaired half-edge or the start again.
  auto walk = [&](std::uint32_t h) {
    trail t(vertex_of(h));
    for (;;) {
      const edge_id e = h / 2;
      seen[e] = 1;
      const auto far = h ^ 1u;
      t.push(e, vertex_of(far));
      const auto next = partner[far];
      if (next == no_edge || seen[next / 2]) break;
      h = next;
    }
    return t;
  };

  decomposition d;
  // Start open trails preferably from an N-end so augmenting trails read forwards.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::uint32_t h = 0; h < 2 * edges; ++h) {
      const edge_id e = h / 2;
      if (!in_d[e] || seen[e] || partner[h] != no_edge) continue;
      if (pass == 0 && !n.contains(e)) continue;
      auto t = walk(h);
      const bool first_n = n.contains(t[0].edge), last_n = n.contains(t.steps().back().edge);
      if (first_n && last_n) ++d.augmenting;
      if (!first_n && !last_n) ++d.reducing;
      d.trails.push_back(std::move(t));
    }
  }
  for (std::uint32_t h = 0; h < 2 * edges; ++h)
    if (in_d[h / 2] && !seen[h / 2]) d.circuits.push_back(walk(h));
  return d;
}

inline validation_report check_sat_monotonicity(const phase_stats& stats) {
  validation_report r;
  for (std::size_t k = 0; k < stats.phases.size(); ++k) {
    const auto s = stats.phases[k].sat_length;
    if (s % 2 == 0) r.add("phase " + std::to_string(k) + " has even sat length " + std::to_string(s));
    if (k > 0 && s <= stats.phases[k - 1].sat_length)
      r.add("sat length does not increase at phase " + std::to_string(k));
    if (s < 2 * k + 1) r.add("sat length below 2k+1 at phase " + std::to_string(k));
  }
  return r;
}

inline validation_report bound_check(const phase_stats& stats, std::size_t n, std::uint64_t f_total, bool simple) {
  validation_report r;
  const double phases = static_cast<double>(stats.phase_count());
  if (phases > 2.0 * std::sqrt(static_cast<double>(f_total)) + 1.0)
    r.add("phase count exceeds 2 sqrt(f(V)) + 1");
  if (simple && n > 0 && !(phases < 4.0 * std::cbrt(static_cast<double>(n) * static_cast<double>(n))))
    r.add("phase count reaches 4 n^(2/3) on a simple graph");
  for (const auto& p : stats.phases)
    if (p.sat_length > 2 * n) r.add("sat length " + std::to_string(p.sat_length) + " exceeds 2n");
  return r;
}

struct sat_enumeration {
  std::size_t length = 0;     // 0 when no augmenting trail exists within the limit
  std::vector<trail> trails;  // each sat once, in one orientation
};

// All shortest augmenting trails by iterative deepening over alternating extensions.
inline sat_enumeration shortest_augmenting_trails(const multigraph& g, const degree_bound& f, const matching& m,
                                                  std::size_t max_length) {
  sat_enumeration out;
  std::vector<char> used(g.edge_count(), 0);
  std::vector<trail_step> path;
  auto keep = [&](vertex_id start) {
    trail t(start, path);
    const trail r = t.reversed();
    auto key = [](const trail& x) {
      std::vector<edge_id> k;
      for (const auto& st : x.steps()) k.push_back(st.edge);
      return k;
    };
    if (t.start() > t.end() || (t.start() == t.end() && key(r) < key(t))) return;
    if (toggled_feasible(g, f, m, t)) out.trails.push_back(std::move(t));
  };
  auto dfs = [&](auto&& self, vertex_id start, vertex_id at, std::size_t len) -> void {
    const m_type want = path.empty() ? m_type::unmatched : opposite(m.type(path.back().edge));
    if (path.size() == len) {
      if (m.type(path.back().edge) == m_type::unmatched && is_free(f, m, at)) keep(start);
      return;
    }
    for (auto e : g.incident(at)) {
      if (used[e] || m.type(e) != want) continue;
      used[e] = 1;
      path.push_back({e, g.ends(e).other(at)});
      self(self, start, path.back().to, len);
      path.pop_back();
      used[e] = 0;
    }
  };
  for (std::size_t len = 1; len <= max_length && len <= g.edge_count(); len += 2) {
    for (vertex_id v = 0; v < g.vertex_count(); ++v)
      if (is_free(f, m, v)) dfs(dfs, v, v, len);
    if (!out.trails.empty()) {
      out.length = len;
      break;
    }
  }
  return out;
}

}  // namespace fmatch
