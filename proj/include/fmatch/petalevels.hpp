#pragma once

// Ordinary levels, petalevels, entrance sequences, trail tracking and the level graph LG*.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "search.hpp"

namespace fmatch {

enum class entry : std::uint8_t { base, petal };

inline const char* to_string(entry k) noexcept { return k == entry::base ? "b" : "p"; }

struct entrance {
  blossom_id blossom;
  entry kind;
  friend bool operator==(const entrance&, const entrance&) = default;
};

// One entry per positive blossom containing the vertex, innermost first.
using entrance_sequence = std::vector<entrance>;

inline std::vector<blossom_id> positive_chain(const structured_matching& s, vertex_id v) {
  auto c = s.forest.chain(v);
  std::erase_if(c, [&](blossom_id b) { return s.duals.z_of(b) <= 0; });
  return c;
}

inline long ordinary_level(const structured_matching& s, vertex_id v, io_type j) {
  const long y = s.duals.y.at(v), yf = s.duals.y_free;
  if (j == io_type::outer) return y - yf;
  return 1 - (y + yf + z_sum(s, v));
}

inline void require_complete(const structured_matching& s, vertex_id v, const entrance_sequence& iota) {
  const auto c = positive_chain(s, v);
  if (c.size() != iota.size()) throw std::invalid_argument("entrance sequence incomplete for vertex " + std::to_string(v));
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != iota[i].blossom) throw std::invalid_argument("entrance sequence does not match the blossoms of " + std::to_string(v));
}

inline long petalevel(const structured_matching& s, vertex_id v, io_type j, const entrance_sequence& iota) {
  require_complete(s, v, iota);
  long zb = 0, zp = 0;
  for (const auto& en : iota) (en.kind == entry::base ? zb : zp) += s.duals.z_of(en.blossom);
  const long y = s.duals.y.at(v), yf = s.duals.y_free;
  if (j == io_type::outer) return y - yf + zp;
  return 1 - (y + yf + zb);
}

inline entry lookup(const entrance_sequence& iota, blossom_id b) {
  for (const auto& en : iota)
    if (en.blossom == b) return en.kind;
  throw std::invalid_argument("blossom missing from entrance sequence");
}

// u = no_vertex with e = artificial_edge is the start of a trail at v.
inline entrance_sequence entrance_update_natural(const structured_matching& s, const entrance_sequence& iota_u,
                                                 vertex_id u, vertex_id v, edge_id e) {
  entrance_sequence out;
  for (auto a : positive_chain(s, v)) {
    if (u != no_vertex && s.forest.contains(a, u))
      out.push_back({a, lookup(iota_u, a)});
    else
      out.push_back({a, e == s.forest[a].base_edge ? entry::base : entry::petal});
  }
  return out;
}

inline entrance_sequence entrance_update_shortened(const structured_matching& s, const entrance_sequence& iota_u,
                                                   vertex_id u, vertex_id v, const std::vector<char>& base_entered) {
  entrance_sequence out;
  for (auto a : positive_chain(s, v)) {
    if (u != no_vertex && s.forest.contains(a, u))
      out.push_back({a, lookup(iota_u, a)});
    else
      out.push_back({a, a < base_entered.size() && base_entered[a] ? entry::base : entry::petal});
  }
  return out;
}

// Positive blossoms that some trail of the collection enters on its base edge.
inline std::vector<char> base_entered_set(const structured_matching& s, const std::vector<trail>& trails) {
  std::vector<char> out(s.forest.size(), 0);
  for (const auto& t : trails) {
    for (auto a : positive_chain(s, t.start()))
      if (s.forest[a].base_edge == artificial_edge) out[a] = 1;
    vertex_id u = t.start();
    for (const auto& st : t.steps()) {
      for (auto a : positive_chain(s, st.to))
        if (!s.forest.contains(a, u) && s.forest[a].base_edge == st.edge) out[a] = 1;
      u = st.to;
    }
  }
  return out;
}

enum class track_mode { natural, shortened };

struct tracked_step {
  edge_id edge;
  vertex_id from;
  vertex_id to;
  io_type j;
  entrance_sequence iota;
  long level;
  long slack;  // previous level + 1 - level
};

struct tracking {
  long start_level = 0;
  entrance_sequence start_iota;
  std::vector<tracked_step> steps;

  long final_level() const { return steps.empty() ? start_level : steps.back().level; }
  bool advances_by_one() const {
    return std::all_of(steps.begin(), steps.end(), [](const tracked_step& s) { return s.slack == 0; });
  }
};

class advancement_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Levels along T from its free start. Negative slack anywhere throws advancement_error.
inline tracking track_trail(const structured_matching& s, const trail& t, track_mode mode,
                            const std::vector<char>* base_entered = nullptr) {
  if (mode == track_mode::shortened && !base_entered) throw std::invalid_argument("shortened tracking needs base_entered");
  auto update = [&](const entrance_sequence& iu, vertex_id u, vertex_id v, edge_id e) {
    return mode == track_mode::natural ? entrance_update_natural(s, iu, u, v, e)
                                       : entrance_update_shortened(s, iu, u, v, *base_entered);
  };
  tracking tr;
  tr.start_iota = update({}, no_vertex, t.start(), artificial_edge);
  tr.start_level = petalevel(s, t.start(), io_type::outer, tr.start_iota);
  tr.steps.reserve(t.size());
  vertex_id u = t.start();
  const entrance_sequence* iu = &tr.start_iota;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& st = t[i];
    const io_type j = io_of(s.m.type(st.edge));
    const long prev = petalevel(s, u, flip(j), *iu);
    auto iv = update(*iu, u, st.to, st.edge);
    const long lv = petalevel(s, st.to, j, iv);
    const long sl = prev + 1 - lv;
    if (sl < 0)
      throw advancement_error("level jumps by " + std::to_string(-sl + 1) + " on edge " + std::to_string(st.edge));
    tr.steps.push_back({st.edge, u, st.to, j, std::move(iv), lv, sl});
    u = st.to;
    iu = &tr.steps.back().iota;
  }
  return tr;
}

struct advancement {
  bool equality;  // tight and alternating at every positive blossom it leaves
  long slack;
};

inline advancement check_advancement(const multigraph& g, const structured_matching& s, vertex_id u, vertex_id v,
                                     edge_id e, const entrance_sequence& iota_u, const entrance_sequence& iota_v) {
  const io_type j = io_of(s.m.type(e));
  const long sl = petalevel(s, u, flip(j), iota_u) + 1 - petalevel(s, v, j, iota_v);
  if (sl < 0) throw advancement_error("negative advancement slack on edge " + std::to_string(e));
  bool eq = slack(g, s, e) == 0;
  for (const auto& en : iota_u) {
    if (s.forest.contains(en.blossom, v)) continue;
    if (!(en.kind == entry::base || e == s.forest[en.blossom].base_edge)) eq = false;
  }
  return {eq, sl};
}

// Level drop from turning petal entries into base entries; at least 2 per changed blossom.
inline long shorten_delta(const structured_matching& s, vertex_id v, io_type j, const entrance_sequence& iota,
                          const entrance_sequence& iota2) {
  if (iota.size() != iota2.size()) throw std::invalid_argument("entrance sequences differ in blossoms");
  long changed = 0;
  for (std::size_t i = 0; i < iota.size(); ++i) {
    if (iota[i].blossom != iota2[i].blossom) throw std::invalid_argument("entrance sequences differ in blossoms");
    if (iota[i].kind == iota2[i].kind) continue;
    if (iota[i].kind != entry::petal) throw std::invalid_argument("shortening only turns petal entries into base entries");
    ++changed;
  }
  const long d = petalevel(s, v, j, iota) - petalevel(s, v, j, iota2);
  if (d < 2 * changed) throw std::logic_error("shortening lowered the level by less than 2 per blossom");
  return d;
}

struct lg_node {
  vertex_id v;
  io_type j;
  long level;
};

struct lg_edge {
  std::size_t from;  // node index on level k
  std::size_t to;    // node index on level k + 1
  edge_id edge;
};

struct level_graph {
  long L = 0;
  std::vector<lg_node> nodes;
  std::vector<std::vector<std::size_t>> levels;  // node indices per level 0..2L+1
  std::vector<std::vector<lg_edge>> layers;      // layer k joins level k to k+1
  std::vector<char> base_entered;
  std::vector<std::size_t> node_index;  // 2v + (j == outer), or npos

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t find(vertex_id v, io_type j) const { return node_index.at(2 * v + (j == io_type::outer)); }
  std::size_t layer_count() const { return layers.size(); }
};

inline entrance_sequence lg_entrances(const structured_matching& s, vertex_id v, const std::vector<char>& base_entered) {
  entrance_sequence out;
  for (auto a : positive_chain(s, v)) out.push_back({a, base_entered[a] ? entry::base : entry::petal});
  return out;
}

inline level_graph build_level_graph(const multigraph& g, const structured_matching& s, const std::vector<trail>& trails) {
  std::vector<char> used(g.edge_count(), 0);
  for (const auto& t : trails)
    for (const auto& st : t.steps())
      if (used[st.edge]++) throw std::invalid_argument("trails of the collection share an edge");

  level_graph lg;
  lg.L = s.duals.L();
  const long top = 2 * lg.L + 1;
  lg.base_entered = base_entered_set(s, trails);
  lg.levels.assign(static_cast<std::size_t>(top + 1), {});
  lg.layers.assign(static_cast<std::size_t>(top), {});
  lg.node_index.assign(2 * g.vertex_count(), level_graph::npos);
  for (vertex_id v = 0; v < g.vertex_count(); ++v) {
    const auto iota = lg_entrances(s, v, lg.base_entered);
    for (io_type j : {io_type::inner, io_type::outer}) {
      const long l = petalevel(s, v, j, iota);
      if (l < 0 || l > top) continue;
      lg.node_index[2 * v + (j == io_type::outer)] = lg.nodes.size();
      lg.levels[static_cast<std::size_t>(l)].push_back(lg.nodes.size());
      lg.nodes.push_back({v, j, l});
    }
  }
  for (edge_id e = 0; e < g.edge_count(); ++e) {
    const auto& ends = g.ends(e);
    const io_type j = io_of(s.m.type(e));
    auto orient = [&](vertex_id u, vertex_id v) {
      const auto a = lg.find(u, flip(j)), b = lg.find(v, j);
      if (a == level_graph::npos || b == level_graph::npos) return;
      if (lg.nodes[b].level != lg.nodes[a].level + 1) return;
      lg.layers[static_cast<std::size_t>(lg.nodes[a].level)].push_back({a, b, e});
    };
    orient(ends.u, ends.v);
    if (!ends.is_loop()) orient(ends.v, ends.u);
  }
  return lg;
}

struct bottleneck {
  std::size_t layer = 0;
  std::size_t node_count = 0;
  std::size_t edge_capacity = 0;  // product of the two level sizes
  std::size_t edge_count = 0;     // edges actually present in the layer
  bool nodes_within_bound = true;     // node_count <= 4n/s
  bool capacity_within_bound = true;  // edge_capacity <= 4(n/s)^2
};

inline bottleneck bottleneck_layer(const level_graph& lg, std::size_t n) {
  bottleneck best;
  bool first = true;
  for (std::size_t k = 0; k < lg.layers.size(); ++k) {
    const auto cnt = lg.levels[k].size() + lg.levels[k + 1].size();
    if (first || cnt < best.node_count) {
      first = false;
      best.layer = k;
      best.node_count = cnt;
      best.edge_capacity = lg.levels[k].size() * lg.levels[k + 1].size();
      best.edge_count = lg.layers[k].size();
    }
  }
  const std::size_t s = lg.layers.size();  // 1 + 2L
  if (s > 0) {
    best.nodes_within_bound = best.node_count * s <= 4 * n;
    best.capacity_within_bound = best.edge_capacity * s * s <= 4 * n * n;
  }
  return best;
}

// Does the shortened tracking of t use an LG* edge on every layer, with every advancing step on LG* nodes?
inline validation_report check_lg_tracking(const structured_matching& s, const level_graph& lg, const trail& t) {
  validation_report r;
  const auto tr = track_trail(s, t, track_mode::shortened, &lg.base_entered);
  std::vector<char> crossed(lg.layers.size(), 0);
  if (tr.start_level != 0) r.add("trail does not start on level 0");
  vertex_id u = t.start();
  for (const auto& st : tr.steps) {
    if (st.slack == 0) {
      const auto a = lg.find(u, flip(st.j)), b = lg.find(st.to, st.j);
      if (a == level_graph::npos || b == level_graph::npos || lg.nodes[b].level != st.level ||
          lg.nodes[a].level + 1 != st.level)
        r.add("advancing edge " + std::to_string(st.edge) + " has no LG* counterpart");
      else
        crossed[static_cast<std::size_t>(lg.nodes[a].level)] = 1;
    }
    u = st.to;
  }
  if (tr.final_level() != 2 * lg.L + 1) r.add("trail ends on level " + std::to_string(tr.final_level()));
  for (std::size_t k = 0; k < crossed.size(); ++k)
    if (!crossed[k]) r.add("trail misses layer " + std::to_string(k));
  return r;
}

}  // namespace fmatch
