#pragma once

// Primal-dual f-matching search over tight edges. Finds a shortest augmenting trail
// (length 1 + 2L) or certifies that none exists.

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "blossom.hpp"

namespace fmatch {

enum class io_type : std::uint8_t { inner, outer };

constexpr io_type flip(io_type j) noexcept { return j == io_type::inner ? io_type::outer : io_type::inner; }
constexpr io_type io_of(m_type mu) noexcept { return mu == m_type::unmatched ? io_type::inner : io_type::outer; }
inline const char* to_string(io_type j) noexcept { return j == io_type::inner ? "inner" : "outer"; }

enum class step_kind : std::uint8_t { grow, blossom, expand, dual, augment };

inline const char* to_string(step_kind k) noexcept {
  switch (k) {
    case step_kind::grow: return "grow";
    case step_kind::blossom: return "blossom";
    case step_kind::expand: return "expand";
    case step_kind::dual: return "dual";
    case step_kind::augment: return "augment";
  }
  return "?";
}

struct search_event {
  step_kind kind;
  edge_id edge = no_edge;
  blossom_id blossom = no_blossom;
  long L = 0;
  std::uint64_t dual_hash = 0;
};

struct search_trace {
  std::vector<search_event> events;
};

inline bool debug_assert_enabled() {
  const char* v = std::getenv("FMATCH_DEBUG_ASSERT");
  return v != nullptr && std::string(v) == "1";
}

struct search_options {
  const std::vector<char>* enabled = nullptr;  // edge mask; null means every edge
  bool validate_each_step = false;             // also switched on by FMATCH_DEBUG_ASSERT=1
  search_trace* trace = nullptr;
};

struct search_outcome {
  structured_matching structured;
  std::optional<trail> result;
  std::size_t sat_length = 0;
  long L = 0;
  std::vector<char> in_structure;
  std::vector<io_type> io;  // meaningful for vertices that are atoms of the structure
};

class search_state {
 public:
  search_state(const multigraph& g, const degree_bound& f, const matching& m, search_options opt = {})
      : g_(g), f_(f), opt_(opt), n_(g.vertex_count()) {
    if (f.size() != n_) throw std::invalid_argument("degree bound size mismatch");
    if (!feasible(f, m)) throw std::invalid_argument("matching exceeds degree bounds");
    if (opt_.enabled && opt_.enabled->size() != g.edge_count()) throw std::invalid_argument("edge mask size mismatch");
    if (debug_assert_enabled()) opt_.validate_each_step = true;
    s_.m = m;
    s_.forest = blossom_forest(n_);
    s_.duals.y.assign(n_, 0);
    in_s_.assign(n_, 0);
    top_.assign(n_, node_ref{});
    io_.assign(n_, io_type::outer);
    tau_edge_.assign(n_, no_edge);
    tau_parent_.assign(n_, no_vertex);
    tree_.assign(n_, no_vertex);
    atom_mark_.assign(n_, 0);
    for (vertex_id v = 0; v < n_; ++v) {
      if (deficiency(f_, s_.m, v) == 0) continue;
      join_structure(v, artificial_edge, no_vertex, io_type::outer, v);
    }
    for (auto v : s_vertices_) scan(v);
    check_step();
  }

  // Runs until an augmenting trail is found or the search stalls.
  std::optional<trail> run() {
    for (;;) {
      while (!heap_.empty()) {
        const edge_id e = heap_.top();
        heap_.pop();
        if (auto t = handle(e)) return t;
      }
      if (buckets_.empty()) return std::nullopt;
      dual_adjust();
      if (auto it = buckets_.find(L_); it != buckets_.end()) {
        auto due = std::move(it->second);
        buckets_.erase(it);
        for (auto e : due) consider(e);
      }
    }
  }

  long L() const noexcept { return L_; }
  const structured_matching& structured() const noexcept { return s_; }
  bool in_structure(vertex_id v) const { return in_s_.at(v) != 0; }
  node_ref node_of(vertex_id v) const { return top_.at(v); }
  io_type io(vertex_id v) const { return io_.at(v); }

  vertex_id node_base(node_ref n) const { return n.is_blossom ? s_.forest[n.id].base : n.id; }
  edge_id parent_edge(node_ref n) const { return tau_edge_[node_base(n)]; }
  std::optional<node_ref> parent_node(node_ref n) const {
    const auto p = tau_parent_[node_base(n)];
    if (p == no_vertex) return std::nullopt;
    return top_[p];
  }
  vertex_id tree_of(node_ref n) const { return tree_[node_base(n)]; }

  bool eligible_at(vertex_id x, edge_id e) const {
    const auto n = top_[x];
    if (n.is_blossom) return e != s_.forest[n.id].base_edge;
    return io_[x] == io_type::outer ? !s_.m.contains(e) : s_.m.contains(e);
  }

  // Adds the far endpoint of tight edge e as a new atom.
  void grow(edge_id e) {
    const auto& ends = g_.ends(e);
    require_tight(e);
    vertex_id x = ends.u, w = ends.v;
    if (!in_s_[x]) std::swap(x, w);
    if (!in_s_[x] || in_s_[w] || !eligible_at(x, e)) throw std::invalid_argument("edge cannot grow the structure");
    join_structure(w, e, x, io_of(s_.m.type(e)), tree_of(top_[x]));
    record(step_kind::grow, e);
    scan(w);
    check_step();
  }

  // Tight edge e joins two structure nodes: forms a blossom or returns an augmenting trail.
  std::optional<trail> join(edge_id e) {
    require_tight(e);
    const auto& ends = g_.ends(e);
    const vertex_id x = ends.u, y = ends.v;
    if (!in_s_[x] || !in_s_[y] || !eligible_at(x, e) || !eligible_at(y, e))
      throw std::invalid_argument("edge does not join two structure nodes");
    const auto X = top_[x], Y = top_[y];
    if (X == Y && X.is_blossom) throw std::invalid_argument("edge is internal to a blossom");
    if (tree_of(X) != tree_of(Y)) return augmenting_trail(e);
    const auto A = lca(X, Y);
    if (!A.is_blossom && tau_edge_[A.id] == artificial_edge && deficiency(f_, s_.m, A.id) >= 2)
      return augmenting_trail(e);
    form_blossom(e, A);
    return std::nullopt;
  }

  // Undoes a maximal blossom that has not been through a dual adjustment.
  void expand(blossom_id b) {
    const auto& bl = s_.forest[b];
    if (!bl.active || bl.parent != no_blossom || s_.duals.z_of(b) != 0)
      throw std::invalid_argument("only maximal blossoms with z = 0 can be expanded");
    const auto children = bl.children;
    s_.forest.dissolve(b);
    for (const auto& c : children) {
      if (!c.is_blossom) {
        top_[c.id] = c;
      } else {
        for (auto v : s_.forest.vertices(c.id)) top_[v] = c;
      }
    }
    record(step_kind::expand, no_edge, b);
    for (const auto& c : children)
      if (!c.is_blossom) scan(c.id);
    check_step();
  }

  // One unit: y_free drops by 1, outer-behaving vertices by 1, inner atoms rise by 1, maximal z by 2.
  void dual_adjust() {
    for (auto v : s_vertices_) {
      if (top_[v].is_blossom || io_[v] == io_type::outer)
        --s_.duals.y[v];
      else
        ++s_.duals.y[v];
    }
    for (blossom_id b = 0; b < s_.forest.size(); ++b)
      if (s_.forest[b].active && s_.forest[b].parent == no_blossom) s_.duals.z[b] += 2;
    --s_.duals.y_free;
    ++L_;
    record(step_kind::dual, no_edge);
    check_step();
  }

  validation_report validate() const {
    auto r = validate_structured(g_, f_, s_, opt_.enabled);
    r.merge(validate_forest(g_, s_.forest, s_.m));
    for (auto v : s_vertices_) {
      const auto n = top_[v];
      const auto te = parent_edge(n);
      if (te == artificial_edge) continue;
      if (slack(g_, s_, te) != 0) r.add("structure edge " + std::to_string(te) + " is not tight");
      if (!n.is_blossom && io_[v] != io_of(s_.m.type(te))) r.add("io type of " + std::to_string(v) + " mismatches its arc");
    }
    return r;
  }

  search_outcome outcome(std::optional<trail> t) const {
    search_outcome out;
    out.structured = s_;
    out.L = L_;
    out.in_structure = in_s_;
    out.io = io_;
    if (t) {
      out.sat_length = t->size();
      if (static_cast<long>(t->size()) != 1 + 2 * L_)
        throw std::logic_error("search trail length " + std::to_string(t->size()) + " differs from 1+2L");
      out.result = std::move(t);
    }
    return out;
  }

 private:
  bool enabled(edge_id e) const { return !opt_.enabled || (*opt_.enabled)[e]; }

  void require_tight(edge_id e) const {
    if (!enabled(e)) throw std::invalid_argument("edge is disabled");
    if (slack(g_, s_, e) != 0) throw std::invalid_argument("edge " + std::to_string(e) + " is not tight");
  }

  void join_structure(vertex_id v, edge_id tau, vertex_id parent, io_type j, vertex_id tree) {
    in_s_[v] = 1;
    top_[v] = node_ref::atom(v);
    io_[v] = j;
    tau_edge_[v] = tau;
    tau_parent_[v] = parent;
    tree_[v] = tree;
    s_vertices_.push_back(v);
  }

  // Change in yz(e) per dual unit.
  long side_rate(vertex_id x, edge_id e) const {
    if (!in_s_[x]) return 0;
    const auto n = top_[x];
    if (!n.is_blossom) return io_[x] == io_type::outer ? -1 : 1;
    return in_incidence_set(s_.forest[n.id], s_.m, e) ? 1 : -1;
  }

  long slack_rate(edge_id e) const {
    const auto& ends = g_.ends(e);
    if (in_s_[ends.u] && in_s_[ends.v] && top_[ends.u] == top_[ends.v] && top_[ends.u].is_blossom) return 0;
    const long d = side_rate(ends.u, e) + side_rate(ends.v, e);
    return s_.m.contains(e) ? -d : d;
  }

  void consider(edge_id e) {
    const long sl = slack(g_, s_, e);
    if (sl < 0) throw std::logic_error("edge " + std::to_string(e) + " has negative slack");
    if (sl == 0) {
      heap_.push(e);
      return;
    }
    const long r = slack_rate(e);
    if (r >= 0) return;
    if (sl % -r != 0) throw std::logic_error("slack parity broken on edge " + std::to_string(e));
    buckets_[L_ + sl / -r].push_back(e);
  }

  void scan(vertex_id v) {
    for (auto e : g_.incident(v))
      if (enabled(e)) consider(e);
  }

  std::optional<trail> handle(edge_id e) {
    if (slack(g_, s_, e) != 0) return std::nullopt;
    const auto& ends = g_.ends(e);
    const bool iu = in_s_[ends.u], iv = in_s_[ends.v];
    if (!iu && !iv) return std::nullopt;
    if (iu != iv) {
      if (eligible_at(iu ? ends.u : ends.v, e)) grow(e);
      return std::nullopt;
    }
    if (top_[ends.u] == top_[ends.v] && top_[ends.u].is_blossom) return std::nullopt;
    if (!eligible_at(ends.u, e) || !eligible_at(ends.v, e)) return std::nullopt;
    return join(e);
  }

  node_ref lca(node_ref a, node_ref b) {
    ++stamp_;
    blossom_mark_.resize(s_.forest.size(), 0);
    auto mark = [&](node_ref n) -> std::uint32_t& { return n.is_blossom ? blossom_mark_[n.id] : atom_mark_[n.id]; };
    for (std::optional<node_ref> n = a; n; n = parent_node(*n)) mark(*n) = stamp_;
    for (std::optional<node_ref> n = b; n; n = parent_node(*n))
      if (mark(*n) == stamp_) return *n;
    throw std::logic_error("nodes of one tree without a common ancestor");
  }

  // Trail from v to its tree's root whose first edge has type `first`.
  trail path_to_root(vertex_id v, m_type first) const {
    trail t(v);
    vertex_id cur = v;
    m_type need = first;
    for (;;) {
      const auto n = top_[cur];
      if (n.is_blossom) {
        const auto& b = s_.forest[n.id];
        t.append(p_trail(g_, s_.m, s_.forest, cur, n.id, need == b.type ? 1 : 0));
        need = opposite(b.type);
      }
      const vertex_id base = node_base(n);
      const edge_id te = tau_edge_[base];
      if (s_.m.type(te) != need) throw std::logic_error("structure path does not alternate");
      if (te == artificial_edge) break;
      t.push(te, tau_parent_[base]);
      need = opposite(s_.m.type(te));
      cur = tau_parent_[base];
    }
    return t;
  }

  trail augmenting_trail(edge_id e) {
    const auto& ends = g_.ends(e);
    const auto start = opposite(s_.m.type(e));
    trail t = path_to_root(ends.u, start).reversed();
    t.push(e, ends.v);
    t.append(path_to_root(ends.v, start));
    if (!classify_trail(g_, t, s_.m, f_).augmenting) throw std::logic_error("search produced a non-augmenting trail");
    record(step_kind::augment, e);
    return t;
  }

  void form_blossom(edge_id e, node_ref A) {
    const auto& ends = g_.ends(e);
    const vertex_id x = ends.u, y = ends.v;
    auto climb = [&](node_ref from) {
      std::vector<node_ref> path;
      for (node_ref n = from; !(n == A); n = *parent_node(n)) path.push_back(n);
      return path;
    };
    const auto px = climb(top_[x]);
    const auto py = climb(top_[y]);

    blossom b;
    b.children.push_back(A);
    for (auto it = px.rbegin(); it != px.rend(); ++it) {
      const auto beta = node_base(*it);
      b.children.push_back(*it);
      b.links.push_back({tau_edge_[beta], tau_parent_[beta], beta});
    }
    b.links.push_back({e, x, y});
    for (const auto& n : py) {
      const auto beta = node_base(n);
      b.children.push_back(n);
      b.links.push_back({tau_edge_[beta], beta, tau_parent_[beta]});
    }
    if (A.is_blossom) {
      b.type = s_.forest[A.id].type;
    } else {
      b.type = s_.m.type(b.links.front().edge);
      if (s_.m.type(b.links.back().edge) != b.type) throw std::logic_error("cycle ends disagree at atomic base");
    }
    b.base = node_base(A);
    b.base_edge = tau_edge_[b.base];
    const auto id = s_.forest.add(std::move(b));
    s_.duals.z.push_back(0);
    for (auto v : s_.forest.vertices(id)) top_[v] = node_ref::of(id);
    record(step_kind::blossom, e, id);
    for (const auto& c : s_.forest[id].children)
      if (!c.is_blossom) scan(c.id);
    check_step();
  }

  std::uint64_t dual_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](long x) {
      for (int i = 0; i < 8; ++i) {
        h ^= static_cast<std::uint64_t>(x >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
      }
    };
    for (auto y : s_.duals.y) mix(y);
    for (auto z : s_.duals.z) mix(z);
    mix(L_);
    return h;
  }

  void record(step_kind k, edge_id e, blossom_id b = no_blossom) {
    if (opt_.trace) opt_.trace->events.push_back({k, e, b, L_, dual_hash()});
  }

  void check_step() const {
    if (!opt_.validate_each_step) return;
    const auto r = validate();
    if (!r.ok()) throw std::logic_error("structured matching invalid: " + r.violations.front());
  }

  const multigraph& g_;
  const degree_bound& f_;
  search_options opt_;
  std::size_t n_;
  structured_matching s_;
  long L_ = 0;

  std::vector<char> in_s_;
  std::vector<node_ref> top_;  // atom, or maximal blossom containing the vertex
  std::vector<io_type> io_;
  std::vector<edge_id> tau_edge_;
  std::vector<vertex_id> tau_parent_;
  std::vector<vertex_id> tree_;
  std::vector<vertex_id> s_vertices_;

  std::priority_queue<edge_id, std::vector<edge_id>, std::greater<>> heap_;
  std::map<long, std::vector<edge_id>> buckets_;

  std::vector<std::uint32_t> atom_mark_;
  std::vector<std::uint32_t> blossom_mark_;
  std::uint32_t stamp_ = 0;
};

inline search_outcome f_matching_search(const multigraph& g, const degree_bound& f, const matching& m,
                                        const search_options& opt = {}) {
  search_state st(g, f, m, opt);
  auto t = st.run();
  return st.outcome(std::move(t));
}

}  // namespace fmatch
