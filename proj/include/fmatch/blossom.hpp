#pragma once

// Nested blossoms, dual variables, P-trails and structured-matching validation.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"

namespace fmatch {

using blossom_id = std::uint32_t;
inline constexpr blossom_id no_blossom = std::numeric_limits<blossom_id>::max();

// An atom (vertex) or a blossom, as a member of a closed trail or a search node.
struct node_ref {
  bool is_blossom = false;
  std::uint32_t id = no_vertex;

  static node_ref atom(vertex_id v) { return {false, v}; }
  static node_ref of(blossom_id b) { return {true, b}; }
  friend bool operator==(const node_ref&, const node_ref&) = default;
};

// links[t] joins children[t] (at `from`) to children[t+1 mod k] (at `to`).
struct blossom_link {
  edge_id edge;
  vertex_id from;
  vertex_id to;
};

struct blossom {
  m_type type = m_type::unmatched;  // matched: heavy, unmatched: light
  vertex_id base = no_vertex;
  edge_id base_edge = artificial_edge;
  std::vector<node_ref> children;  // children[0] contains the base
  std::vector<blossom_link> links;
  blossom_id parent = no_blossom;
  bool active = true;

  bool is_free() const noexcept { return base_edge == artificial_edge; }
};

class structural_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class blossom_forest {
 public:
  blossom_forest() = default;
  explicit blossom_forest(std::size_t n) : vertex_parent_(n, no_blossom) {}

  std::size_t vertex_count() const noexcept { return vertex_parent_.size(); }
  std::size_t size() const noexcept { return blossoms_.size(); }
  const blossom& operator[](blossom_id b) const { return blossoms_.at(b); }
  const std::vector<blossom>& all() const noexcept { return blossoms_; }

  // Children must currently be maximal.
  blossom_id add(blossom b) {
    const auto id = static_cast<blossom_id>(blossoms_.size());
    for (const auto& c : b.children) {
      if (c.is_blossom) {
        auto& child = blossoms_.at(c.id);
        if (child.parent != no_blossom || !child.active) throw structural_error("child blossom is not maximal");
        child.parent = id;
      } else {
        if (c.id >= vertex_parent_.size()) throw structural_error("atom out of range");
        if (vertex_parent_[c.id] != no_blossom) throw structural_error("atom already in a blossom");
        vertex_parent_[c.id] = id;
      }
    }
    b.parent = no_blossom;
    b.active = true;
    blossoms_.push_back(std::move(b));
    return id;
  }

  // Removes a maximal blossom, its children become maximal.
  void dissolve(blossom_id id) {
    auto& b = blossoms_.at(id);
    if (!b.active || b.parent != no_blossom) throw structural_error("only maximal blossoms can be dissolved");
    for (const auto& c : b.children) {
      if (c.is_blossom)
        blossoms_[c.id].parent = no_blossom;
      else
        vertex_parent_[c.id] = no_blossom;
    }
    b.active = false;
  }

  blossom_id innermost(vertex_id v) const { return vertex_parent_.at(v); }

  // Blossoms containing v, innermost first.
  std::vector<blossom_id> chain(vertex_id v) const {
    std::vector<blossom_id> out;
    for (auto b = vertex_parent_.at(v); b != no_blossom; b = blossoms_[b].parent) out.push_back(b);
    return out;
  }

  blossom_id maximal(vertex_id v) const {
    auto b = vertex_parent_.at(v);
    if (b == no_blossom) return b;
    while (blossoms_[b].parent != no_blossom) b = blossoms_[b].parent;
    return b;
  }

  bool contains(blossom_id b, vertex_id v) const {
    for (auto a = vertex_parent_.at(v); a != no_blossom; a = blossoms_[a].parent)
      if (a == b) return true;
    return false;
  }

  // The member of b's closed trail that contains v.
  node_ref child_containing(blossom_id b, vertex_id v) const {
    node_ref below = node_ref::atom(v);
    for (auto a = vertex_parent_.at(v); a != no_blossom; a = blossoms_[a].parent) {
      if (a == b) return below;
      below = node_ref::of(a);
    }
    throw structural_error("vertex not in blossom");
  }

  std::size_t child_index(blossom_id b, node_ref c) const {
    const auto& ch = blossoms_.at(b).children;
    for (std::size_t i = 0; i < ch.size(); ++i)
      if (ch[i] == c) return i;
    throw structural_error("not a child of the blossom");
  }

  std::vector<vertex_id> vertices(blossom_id b) const {
    std::vector<vertex_id> out;
    collect_vertices(b, out);
    return out;
  }

  std::vector<vertex_id> vertices(node_ref n) const {
    if (!n.is_blossom) return {n.id};
    return vertices(n.id);
  }

  // E(B): the closed-trail edges of b and of every sub-blossom.
  std::vector<edge_id> edges(blossom_id b) const {
    std::vector<edge_id> out;
    collect_edges(b, out);
    return out;
  }

 private:
  void collect_vertices(blossom_id b, std::vector<vertex_id>& out) const {
    for (const auto& c : blossoms_.at(b).children) {
      if (c.is_blossom)
        collect_vertices(c.id, out);
      else
        out.push_back(c.id);
    }
  }
  void collect_edges(blossom_id b, std::vector<edge_id>& out) const {
    const auto& bl = blossoms_.at(b);
    for (const auto& l : bl.links) out.push_back(l.edge);
    for (const auto& c : bl.children)
      if (c.is_blossom) collect_edges(c.id, out);
  }

  std::vector<blossom> blossoms_;
  std::vector<blossom_id> vertex_parent_;
};

struct dual_state {
  std::vector<long> y;
  std::vector<long> z;  // indexed by blossom id
  long y_free = 0;

  long L() const noexcept { return -y_free; }
  long z_of(blossom_id b) const { return b < z.size() ? z[b] : 0; }
};

struct structured_matching {
  matching m;
  blossom_forest forest;
  dual_state duals;
};

// z(v): total z over blossoms containing v.
inline long z_sum(const structured_matching& s, vertex_id v) {
  long t = 0;
  for (auto b : s.forest.chain(v)) t += s.duals.z_of(b);
  return t;
}

// Does e belong to I(B) for a blossom B containing exactly one endpoint?
inline bool in_incidence_set(const blossom& b, const matching& m, edge_id e) {
  return m.contains(e) != (e == b.base_edge);
}

inline long yz_hat(const multigraph& g, const structured_matching& s, edge_id e) {
  const auto& ends = g.ends(e);
  const auto& f = s.forest;
  long val = s.duals.y.at(ends.u) + s.duals.y.at(ends.v);
  const auto cu = f.chain(ends.u);
  const auto cv = ends.is_loop() ? cu : f.chain(ends.v);
  // Common ancestors form a common suffix of the two chains.
  std::size_t common = 0;
  while (common < cu.size() && common < cv.size() && cu[cu.size() - 1 - common] == cv[cv.size() - 1 - common])
    ++common;
  for (std::size_t i = cu.size() - common; i < cu.size(); ++i) val += s.duals.z_of(cu[i]);
  auto one_side = [&](const std::vector<blossom_id>& c) {
    for (std::size_t i = 0; i + common < c.size(); ++i) {
      const auto z = s.duals.z_of(c[i]);
      if (z != 0 && in_incidence_set(f[c[i]], s.m, e)) val += z;
    }
  };
  one_side(cu);
  one_side(cv);
  return val;
}

enum class edge_status { tight, strictly_dominated, strictly_underrated, infeasible };

inline const char* to_string(edge_status s) noexcept {
  switch (s) {
    case edge_status::tight: return "tight";
    case edge_status::strictly_dominated: return "strictly_dominated";
    case edge_status::strictly_underrated: return "strictly_underrated";
    case edge_status::infeasible: return "infeasible";
  }
  return "?";
}

// Distance to tightness: 2 - yz for matched edges, yz for unmatched ones.
inline long slack(const multigraph& g, const structured_matching& s, edge_id e) {
  const long v = yz_hat(g, s, e);
  return s.m.contains(e) ? 2 - v : v;
}

inline edge_status classify_edge(const multigraph& g, const structured_matching& s, edge_id e) {
  const long sl = slack(g, s, e);
  if (sl < 0) return edge_status::infeasible;
  if (sl == 0) return edge_status::tight;
  return s.m.contains(e) ? edge_status::strictly_underrated : edge_status::strictly_dominated;
}

struct validation_report {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
  void add(std::string v) { violations.push_back(std::move(v)); }
  void merge(const validation_report& r, const std::string& prefix = {}) {
    for (const auto& v : r.violations) violations.push_back(prefix + v);
  }
};

// Checks the recursive blossom clauses for b; children are assumed validated.
// Throws structural_error for references that do not resolve.
inline validation_report validate_blossom(const multigraph& g, const blossom_forest& forest, blossom_id id,
                                          const matching& m) {
  validation_report r;
  const auto& b = forest[id];
  const std::string tag = "blossom " + std::to_string(id) + ": ";
  const std::size_t k = b.children.size();
  if (k == 0 || b.links.size() != k) throw structural_error(tag + "closed trail needs one link per child");
  auto node_has = [&](node_ref c, vertex_id v) {
    if (!c.is_blossom) return c.id == v;
    if (c.id >= forest.size()) throw structural_error(tag + "dangling child blossom");
    return forest.contains(c.id, v);
  };
  auto node_base = [&](node_ref c) { return c.is_blossom ? forest[c.id].base : c.id; };
  auto node_type = [&](node_ref c) { return forest[c.id].type; };

  for (std::size_t i = 0; i < k; ++i) {
    const auto& c = b.children[i];
    if (c.is_blossom ? c.id >= forest.size() : c.id >= g.vertex_count())
      throw structural_error(tag + "dangling child reference");
    for (std::size_t j = 0; j < i; ++j)
      if (b.children[j] == c) r.add(tag + "child appears twice in the closed trail");
  }
  for (std::size_t t = 0; t < k; ++t) {
    const auto& l = b.links[t];
    if (l.edge >= g.edge_count()) throw structural_error(tag + "dangling link edge");
    const auto& ends = g.ends(l.edge);
    if (!ends.touches(l.from) || ends.other(l.from) != l.to) r.add(tag + "link endpoints do not match its edge");
    if (!node_has(b.children[t], l.from)) r.add(tag + "link " + std::to_string(t) + " does not leave its child");
    if (!node_has(b.children[(t + 1) % k], l.to))
      r.add(tag + "link " + std::to_string(t) + " does not enter the next child");
    for (std::size_t u = 0; u < t; ++u)
      if (b.links[u].edge == l.edge) r.add(tag + "closed trail repeats an edge");
  }

  // Atoms alternate; sub-blossoms have an opposite-type edge at their base.
  for (std::size_t t = 1; t < k; ++t) {
    const auto& c = b.children[t];
    const auto& in = b.links[t - 1];
    const auto& out = b.links[t];
    if (!c.is_blossom) {
      if (m.type(in.edge) == m.type(out.edge)) r.add(tag + "closed trail does not alternate at atom " + std::to_string(c.id));
    } else {
      const auto beta = node_base(c);
      const auto want = opposite(node_type(c));
      const bool ok = (in.to == beta && m.type(in.edge) == want) || (out.from == beta && m.type(out.edge) == want);
      if (!ok) r.add(tag + "sub-blossom " + std::to_string(c.id) + " lacks an opposite-type edge at its base");
      const auto eta = forest[c.id].base_edge;
      const bool eta_ok = (eta == in.edge && in.to == beta) || (eta == out.edge && out.from == beta);
      if (!eta_ok) r.add(tag + "sub-blossom " + std::to_string(c.id) + " base edge is not on the closed trail at its base");
    }
  }

  const auto& alpha = b.children[0];
  if (!alpha.is_blossom) {
    if (m.type(b.links.front().edge) != m.type(b.links.back().edge))
      r.add(tag + "closed trail at atomic base starts and ends with different types");
    if (b.type != m.type(b.links.front().edge)) r.add(tag + "type differs from the end edges at the base");
    if (b.base != alpha.id) r.add(tag + "base is not the atomic base child");
  } else {
    const auto& a = forest[alpha.id];
    if (b.type != a.type) r.add(tag + "type differs from the base sub-blossom");
    if (b.base != a.base) r.add(tag + "base differs from the base sub-blossom");
    if (b.base_edge != a.base_edge) r.add(tag + "base edge differs from the base sub-blossom");
  }

  if (b.base_edge == artificial_edge) {
    if (b.type != m_type::unmatched) r.add(tag + "free blossom must be light");
  } else {
    if (b.base_edge >= g.edge_count()) throw structural_error(tag + "dangling base edge");
    const auto& ends = g.ends(b.base_edge);
    if (!ends.touches(b.base)) r.add(tag + "base edge does not touch the base");
    else if (forest.contains(id, ends.other(b.base)))
      r.add(tag + "base edge does not leave the blossom");
    if (m.type(b.base_edge) == b.type) r.add(tag + "base edge has the blossom's own type");
  }
  return r;
}

inline validation_report validate_forest(const multigraph& g, const blossom_forest& forest, const matching& m) {
  validation_report r;
  for (blossom_id b = 0; b < forest.size(); ++b)
    if (forest[b].active) r.merge(validate_blossom(g, forest, b, m));
  return r;
}

namespace detail {

class p_trail_builder {
 public:
  p_trail_builder(const multigraph& g, const matching& m, const blossom_forest& f) : g_(g), m_(m), f_(f) {}

  // Appends P(v, base(b)) starting with type `first` (the empty P_0(base, base) included).
  void to_base(blossom_id b, vertex_id v, m_type first, std::vector<trail_step>& out) const {
    const auto& bl = f_[b];
    const auto c = f_.child_containing(b, v);
    const auto t = f_.child_index(b, c);
    const std::size_t k = bl.children.size();
    if (t == 0) {
      if (c.is_blossom) return to_base(c.id, v, first, out);
      if (first != bl.type) return;  // P_0 at the base
      for (std::size_t u = 0; u < k; ++u) cross_forward(b, u, out);
      return;
    }
    bool forward;
    if (!c.is_blossom) {
      if (m_.type(bl.links[t].edge) == first)
        forward = true;
      else if (m_.type(bl.links[t - 1].edge) == first)
        forward = false;
      else
        throw structural_error("no P-trail with the requested parity");
    } else {
      const auto& cb = f_[c.id];
      forward = bl.links[t].edge == cb.base_edge && bl.links[t].from == cb.base;
      if (!forward && !(bl.links[t - 1].edge == cb.base_edge && bl.links[t - 1].to == cb.base))
        throw structural_error("sub-blossom base edge is not on the closed trail");
      to_base(c.id, v, first, out);
      if (out_end(out, v) != cb.base) throw structural_error("P-trail did not reach the sub-blossom base");
    }
    if (forward) {
      for (std::size_t u = t; u < k; ++u) cross_forward(b, u, out);
    } else {
      for (std::size_t u = t; u-- > 0;) cross_backward(b, u, out);
    }
  }

 private:
  vertex_id out_end(const std::vector<trail_step>& out, vertex_id start) const {
    return out.empty() ? start : out.back().to;
  }

  // Take link u forward, then pass through child u+1 toward link u+1 (or to the base when u+1 wraps).
  void cross_forward(blossom_id b, std::size_t u, std::vector<trail_step>& out) const {
    const auto& bl = f_[b];
    const std::size_t k = bl.children.size();
    const auto& l = bl.links[u];
    out.push_back({l.edge, l.to});
    const auto next = bl.children[(u + 1) % k];
    if (!next.is_blossom) return;
    const auto in_type = m_.type(l.edge);
    if ((u + 1) % k == 0) return to_base(next.id, l.to, opposite(in_type), out);
    pass(next.id, l.to, l.edge, bl.links[u + 1].from, bl.links[u + 1].edge, out);
  }

  void cross_backward(blossom_id b, std::size_t u, std::vector<trail_step>& out) const {
    const auto& bl = f_[b];
    const auto& l = bl.links[u];
    out.push_back({l.edge, l.from});
    const auto next = bl.children[u];
    if (!next.is_blossom) return;
    if (u == 0) return to_base(next.id, l.from, opposite(m_.type(l.edge)), out);
    pass(next.id, l.from, l.edge, bl.links[u - 1].to, bl.links[u - 1].edge, out);
  }

  // Through sub-blossom c, entering at a by e_in and leaving at x by e_out.
  void pass(blossom_id c, vertex_id a, edge_id e_in, vertex_id x, edge_id e_out, std::vector<trail_step>& out) const {
    const auto& cb = f_[c];
    if (e_out == cb.base_edge && x == cb.base) return to_base(c, a, opposite(m_.type(e_in)), out);
    if (e_in != cb.base_edge || a != cb.base) throw structural_error("closed trail passes a sub-blossom without its base edge");
    std::vector<trail_step> back;
    to_base(c, x, opposite(m_.type(e_out)), back);
    const trail rev = trail(x, std::move(back)).reversed();
    out.insert(out.end(), rev.steps().begin(), rev.steps().end());
  }

  const multigraph& g_;
  const matching& m_;
  const blossom_forest& f_;
};

}  // namespace detail

// P_parity(v, base(b)): parity 1 starts with b's type, parity 0 with the opposite; both end with b's type.
inline trail p_trail(const multigraph& g, const matching& m, const blossom_forest& f, vertex_id v, blossom_id b,
                     int parity) {
  if (!f.contains(b, v)) throw structural_error("vertex not in blossom");
  const auto first = parity == 1 ? f[b].type : opposite(f[b].type);
  std::vector<trail_step> steps;
  detail::p_trail_builder(g, m, f).to_base(b, v, first, steps);
  trail t(v, std::move(steps));
  if (t.end() != f[b].base) throw structural_error("P-trail does not end at the base");
  if (!t.empty() && (m.type(t[0].edge) != first || m.type(t.steps().back().edge) != f[b].type))
    throw structural_error("P-trail end types are wrong");
  return t;
}

// Structured-matching conditions over the enabled edges (all edges when mask is null).
inline validation_report validate_structured(const multigraph& g, const degree_bound& f, const structured_matching& s,
                                             const std::vector<char>* enabled = nullptr) {
  validation_report r;
  const auto on = [&](edge_id e) { return !enabled || (*enabled)[e]; };
  if (s.duals.y.size() != g.vertex_count()) {
    r.add("dual vector size mismatch");
    return r;
  }
  for (edge_id e = 0; e < g.edge_count(); ++e) {
    if (!on(e)) continue;
    const long sl = slack(g, s, e);
    if (sl < 0)
      r.add(std::string(s.m.contains(e) ? "matched edge not underrated: " : "unmatched edge not dominated: ") +
            std::to_string(e));
  }
  for (blossom_id b = 0; b < s.forest.size(); ++b) {
    const long z = s.duals.z_of(b);
    if (z < 0 || z % 2 != 0) r.add("blossom " + std::to_string(b) + " has invalid z " + std::to_string(z));
    if (z == 0) continue;
    if (!s.forest[b].active) {
      r.add("dissolved blossom " + std::to_string(b) + " keeps positive z");
      continue;
    }
    for (auto e : s.forest.edges(b))
      if (slack(g, s, e) != 0) r.add("edge " + std::to_string(e) + " of positive blossom " + std::to_string(b) + " not tight");
    const auto eta = s.forest[b].base_edge;
    if (eta != artificial_edge && slack(g, s, eta) != 0)
      r.add("base edge of positive blossom " + std::to_string(b) + " not tight");
  }
  for (vertex_id v = 0; v < g.vertex_count(); ++v)
    if (s.m.degree(v) < f(v) && s.duals.y[v] != s.duals.y_free)
      r.add("free vertex " + std::to_string(v) + " has y " + std::to_string(s.duals.y[v]) + " instead of " +
            std::to_string(s.duals.y_free));
  return r;
}

}  // namespace fmatch
