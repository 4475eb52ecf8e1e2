#pragma once

// Phase driver: per phase one search, a maximal set of edge-disjoint sats over the
// tight edges, and their joint augmentation.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "search.hpp"

namespace fmatch {

struct blocking_set {
  std::vector<trail> trails;
  std::size_t sat_length = 0;
};

struct phase_record {
  std::size_t sat_length = 0;
  std::size_t trails = 0;
  std::size_t cardinality_after = 0;
  long L = 0;
};

struct phase_stats {
  std::vector<phase_record> phases;
  std::size_t initial_cardinality = 0;
  std::size_t final_cardinality = 0;

  std::size_t phase_count() const noexcept { return phases.size(); }
};

// Everything an observer may want to inspect about one phase.
struct phase_view {
  std::size_t index;
  const matching& before;
  const search_outcome& outcome;
  const blocking_set& blocking;
};

struct solve_options {
  search_options search;
  std::function<void(const phase_view&)> on_phase;
};

struct solve_result {
  matching m;
  phase_stats stats;
  search_outcome final_search;  // the search that found no augmenting trail
};

// Tight edges of the phase's first search.
inline std::vector<char> tight_edges(const multigraph& g, const structured_matching& s) {
  std::vector<char> out(g.edge_count(), 0);
  for (edge_id e = 0; e < g.edge_count(); ++e) out[e] = slack(g, s, e) == 0;
  return out;
}

inline blocking_set find_blocking_set(const multigraph& g, const degree_bound& f, const matching& m,
                                      const search_outcome& first, const search_options& opt = {}) {
  if (!first.result) throw std::invalid_argument("blocking set needs a search that found a sat");
  blocking_set out;
  out.sat_length = first.sat_length;
  const auto tight = tight_edges(g, first.structured);
  std::vector<char> used(g.edge_count(), 0);
  std::vector<unsigned> ends(g.vertex_count(), 0);
  auto take = [&](const trail& t) {
    for (const auto& s : t.steps()) used[s.edge] = 1;
    ++ends[t.start()];
    ++ends[t.end()];
    out.trails.push_back(t);
  };
  take(*first.result);

  for (;;) {
    std::vector<char> enabled(g.edge_count(), 0);
    for (edge_id e = 0; e < g.edge_count(); ++e) enabled[e] = tight[e] && !used[e];
    matching residual(g);
    for (edge_id e = 0; e < g.edge_count(); ++e)
      if (enabled[e] && m.contains(e)) residual.insert(g, e);
    // Residual deficiency is the original one minus the trail ends already placed.
    std::vector<unsigned> fr(g.vertex_count());
    for (vertex_id v = 0; v < g.vertex_count(); ++v) {
      const unsigned def = deficiency(f, m, v);
      if (ends[v] > def) throw std::logic_error("blocking trails overuse a deficiency");
      fr[v] = residual.degree(v) + def - ends[v];
    }
    const degree_bound f_res(std::move(fr));
    search_options o = opt;
    o.enabled = &enabled;
    search_state st(g, f_res, residual, o);
    const auto t = st.run();
    if (!t) break;
    if (t->size() < out.sat_length) throw std::logic_error("residual search found a trail shorter than the sat length");
    if (t->size() > out.sat_length) break;
    take(*t);
  }
  return out;
}

inline solve_result solve_max_f_matching(const multigraph& g, const degree_bound& f, matching m,
                                         const solve_options& opt = {}) {
  if (!feasible(f, m)) throw std::invalid_argument("initial matching exceeds degree bounds");
  solve_result res;
  res.stats.initial_cardinality = m.size();
  for (std::size_t phase = 0;; ++phase) {
    auto outcome = f_matching_search(g, f, m, opt.search);
    if (!outcome.result) {
      res.final_search = std::move(outcome);
      break;
    }
    const auto bs = find_blocking_set(g, f, m, outcome, opt.search);
    if (opt.on_phase) opt.on_phase(phase_view{phase, m, outcome, bs});
    matching next = m;
    for (const auto& t : bs.trails) {
      if (!classify_trail(g, t, next, f).augmenting) throw std::logic_error("blocking trail is not augmenting");
      next = augment(g, f, next, t);
    }
    if (next.size() != m.size() + bs.trails.size()) throw std::logic_error("augmentation did not add one edge per trail");
    m = std::move(next);
    res.stats.phases.push_back({bs.sat_length, bs.trails.size(), m.size(), outcome.L});
  }
  res.stats.final_cardinality = m.size();
  res.m = std::move(m);
  return res;
}

inline solve_result solve_max_f_matching(const multigraph& g, const degree_bound& f, const solve_options& opt = {}) {
  return solve_max_f_matching(g, f, matching(g), opt);
}

// The final search must have found nothing and its duals must be a valid structured matching.
inline validation_report certify(const multigraph& g, const degree_bound& f, const matching& m,
                                 const search_outcome& final_search) {
  validation_report r;
  if (final_search.result) r.add("final search still found an augmenting trail");
  if (!(final_search.structured.m == m)) r.add("certificate belongs to a different matching");
  r.merge(validate_structured(g, f, final_search.structured));
  if (!feasible(f, m)) r.add("matching exceeds degree bounds");
  return r;
}

}  // namespace fmatch
