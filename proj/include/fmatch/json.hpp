#pragma once

// JSON views of results. Field names here are documented in the README and kept stable.

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <string>

#include "eg.hpp"
#include "oracles.hpp"
#include "petalevels.hpp"

namespace fmatch {

using json = nlohmann::ordered_json;

inline std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Edge ids outside the graph (artificial, absent) become null.
inline json edge_json(edge_id e) { return e >= artificial_edge ? json(nullptr) : json(e); }

inline json to_json(const trail& t) {
  json edges = json::array();
  for (const auto& s : t.steps()) edges.push_back(s.edge);
  return {{"start", t.start()}, {"end", t.end()}, {"length", t.size()}, {"edges", edges}, {"vertices", t.vertices()}};
}

inline json to_json(const matching& m) {
  json out = json::array();
  for (auto e : m.edges()) out.push_back(e);
  return out;
}

inline json to_json(const blossom_forest& forest, blossom_id id) {
  const auto& b = forest[id];
  json children = json::array(), links = json::array();
  for (const auto& c : b.children) children.push_back({{"kind", c.is_blossom ? "blossom" : "vertex"}, {"id", c.id}});
  for (const auto& l : b.links) links.push_back({{"edge", l.edge}, {"from", l.from}, {"to", l.to}});
  return {{"id", id},
          {"type", b.type == m_type::matched ? "heavy" : "light"},
          {"base", b.base},
          {"eta", edge_json(b.base_edge)},
          {"parent", b.parent == no_blossom ? json(nullptr) : json(b.parent)},
          {"children", children},
          {"links", links}};
}

inline json to_json(const blossom_forest& forest) {
  json out = json::array();
  for (blossom_id id = 0; id < forest.size(); ++id)
    if (forest[id].active) out.push_back(to_json(forest, id));
  return out;
}

inline json to_json(const search_trace& tr) {
  json out = json::array();
  for (const auto& ev : tr.events)
    out.push_back({{"kind", to_string(ev.kind)},
                   {"edge", edge_json(ev.edge)},
                   {"blossom", ev.blossom == no_blossom ? json(nullptr) : json(ev.blossom)},
                   {"L", ev.L},
                   {"dual_hash", hex64(ev.dual_hash)}});
  return out;
}

inline json to_json(const entrance_sequence& iota) {
  json out = json::array();
  for (const auto& en : iota) out.push_back({{"blossom", en.blossom}, {"kind", en.kind == entry::base ? "base" : "petal"}});
  return out;
}

inline json to_json(const tracking& tr) {
  json steps = json::array();
  for (const auto& s : tr.steps)
    steps.push_back({{"edge", s.edge},
                     {"from", s.from},
                     {"to", s.to},
                     {"io", to_string(s.j)},
                     {"iota", to_json(s.iota)},
                     {"level", s.level},
                     {"slack", s.slack}});
  return {{"start_level", tr.start_level},
          {"start_iota", to_json(tr.start_iota)},
          {"final_level", tr.final_level()},
          {"advances_by_one", tr.advances_by_one()},
          {"steps", steps}};
}

inline json to_json(const level_graph& lg, const bottleneck& bn) {
  json level_sizes = json::array(), layer_edges = json::array();
  for (const auto& l : lg.levels) level_sizes.push_back(l.size());
  for (const auto& l : lg.layers) layer_edges.push_back(l.size());
  return {{"L", lg.L},
          {"nodes", lg.nodes.size()},
          {"layers", lg.layer_count()},
          {"level_sizes", level_sizes},
          {"layer_edges", layer_edges},
          {"bottleneck",
           {{"layer", bn.layer},
            {"nodes", bn.node_count},
            {"edge_capacity", bn.edge_capacity},
            {"edges", bn.edge_count},
            {"nodes_within_bound", bn.nodes_within_bound},
            {"capacity_within_bound", bn.capacity_within_bound}}}};
}

// Per-phase statistics together with the bound checks for the run.
inline json to_json(const phase_stats& st, std::size_t n, std::uint64_t f_total, bool simple) {
  json phases = json::array();
  for (std::size_t i = 0; i < st.phases.size(); ++i) {
    const auto& p = st.phases[i];
    phases.push_back({{"index", i},
                      {"sat_length", p.sat_length},
                      {"L", p.L},
                      {"trails", p.trails},
                      {"cardinality_after", p.cardinality_after}});
  }
  const auto mono = check_sat_monotonicity(st);
  const auto bounds = bound_check(st, n, f_total, simple);
  const double nd = static_cast<double>(n);
  return {{"n", n},
          {"f_total", f_total},
          {"simple", simple},
          {"initial_cardinality", st.initial_cardinality},
          {"final_cardinality", st.final_cardinality},
          {"phase_count", st.phase_count()},
          {"phase_limit_sqrt_f", 2.0 * std::sqrt(static_cast<double>(f_total)) + 1.0},
          {"phase_limit_n23", 4.0 * std::cbrt(nd * nd)},
          {"sat_monotone", mono.ok()},
          {"bounds_ok", bounds.ok()},
          {"violations", [&] {
             json v = json::array();
             for (const auto& s : mono.violations) v.push_back(s);
             for (const auto& s : bounds.violations) v.push_back(s);
             return v;
           }()},
          {"phases", phases}};
}

// The sidecar written next to a generated EG(b) graph.
inline json eg_sidecar(const eg_instance& in) {
  json trails = json::array();
  for (unsigned i = 1; i <= in.b; ++i) {
    auto j = to_json(expected_cross_trail(in, i));
    j["cross_index"] = i;
    trails.push_back(std::move(j));
  }
  json blossoms = json::array();
  for (unsigned i = 1; i <= in.b; ++i) {
    auto j = to_json(in.forest, in.blossoms[i]);
    j["name"] = "B" + std::to_string(i);
    blossoms.push_back(std::move(j));
  }
  return {{"b", in.b},
          {"n", in.graph.vertex_count()},
          {"m", in.graph.edge_count()},
          {"expected_sat_length", in.expected_sat_length()},
          {"vertex_names", in.names},
          {"m0", to_json(in.m0)},
          {"blossoms", blossoms},
          {"expected_trails", trails}};
}

}  // namespace fmatch
