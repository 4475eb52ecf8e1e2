#pragma once

// Multigraphs with degree bounds, f-matchings, trails and the 0/2 weight calculus.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fmatch {

using vertex_id = std::uint32_t;
using edge_id = std::uint32_t;

inline constexpr vertex_id no_vertex = std::numeric_limits<vertex_id>::max();
inline constexpr edge_id no_edge = std::numeric_limits<edge_id>::max();
// Marks the matched edge from the sentinel vertex to a free blossom base or trail start.
inline constexpr edge_id artificial_edge = no_edge - 1;

enum class m_type : std::uint8_t { unmatched, matched };

constexpr m_type opposite(m_type t) noexcept {
  return t == m_type::matched ? m_type::unmatched : m_type::matched;
}

inline const char* to_string(m_type t) noexcept {
  return t == m_type::matched ? "matched" : "unmatched";
}

class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct edge_ends {
  vertex_id u;
  vertex_id v;

  bool is_loop() const noexcept { return u == v; }
  vertex_id other(vertex_id x) const {
    if (x == u) return v;
    if (x == v) return u;
    throw std::invalid_argument("vertex is not an endpoint of the edge");
  }
  bool touches(vertex_id x) const noexcept { return x == u || x == v; }
};

class multigraph {
 public:
  multigraph() = default;
  explicit multigraph(std::size_t n) : incident_(n) {}

  edge_id add_edge(vertex_id u, vertex_id v) {
    if (u >= vertex_count() || v >= vertex_count())
      throw std::out_of_range("edge endpoint out of range");
    const auto id = static_cast<edge_id>(edges_.size());
    edges_.push_back({u, v});
    incident_[u].push_back(id);
    if (v != u) incident_[v].push_back(id);
    return id;
  }

  std::size_t vertex_count() const noexcept { return incident_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const edge_ends& ends(edge_id e) const { return edges_.at(e); }
  const std::vector<edge_ends>& edges() const noexcept { return edges_; }

  // Incident edges in ascending id order; a loop is listed once.
  std::span<const edge_id> incident(vertex_id v) const { return incident_.at(v); }

  // No two edges share an endpoint pair. Single loops are allowed.
  bool is_simple() const {
    std::vector<std::pair<vertex_id, vertex_id>> keys;
    keys.reserve(edges_.size());
    for (auto [u, v] : edges_) keys.emplace_back(std::min(u, v), std::max(u, v));
    std::sort(keys.begin(), keys.end());
    return std::adjacent_find(keys.begin(), keys.end()) == keys.end();
  }

  bool has_loops() const {
    return std::any_of(edges_.begin(), edges_.end(), [](const edge_ends& e) { return e.is_loop(); });
  }

 private:
  std::vector<edge_ends> edges_;
  std::vector<std::vector<edge_id>> incident_;
};

class degree_bound {
 public:
  degree_bound() = default;
  explicit degree_bound(std::size_t n, unsigned value = 1) : f_(n, value) {}
  explicit degree_bound(std::vector<unsigned> f) : f_(std::move(f)) {}

  unsigned operator()(vertex_id v) const { return f_.at(v); }
  void set(vertex_id v, unsigned k) { f_.at(v) = k; }
  std::size_t size() const noexcept { return f_.size(); }
  const std::vector<unsigned>& values() const noexcept { return f_; }

  std::uint64_t total() const noexcept {
    std::uint64_t t = 0;
    for (auto k : f_) t += k;
    return t;
  }

 private:
  std::vector<unsigned> f_;
};

// Edge-id set with per-vertex degree accounting. A loop adds 2 to its vertex.
class matching {
 public:
  matching() = default;
  explicit matching(const multigraph& g) : member_(g.edge_count(), 0), degree_(g.vertex_count(), 0) {}

  bool contains(edge_id e) const { return e != artificial_edge && member_.at(e) != 0; }
  m_type type(edge_id e) const {
    return e == artificial_edge || contains(e) ? m_type::matched : m_type::unmatched;
  }
  unsigned degree(vertex_id v) const { return degree_.at(v); }
  std::size_t size() const noexcept { return size_; }

  void insert(const multigraph& g, edge_id e) {
    if (contains(e)) throw std::invalid_argument("edge already matched");
    member_[e] = 1;
    bump(g.ends(e), +1);
    ++size_;
  }

  void erase(const multigraph& g, edge_id e) {
    if (!contains(e)) throw std::invalid_argument("edge not matched");
    member_[e] = 0;
    bump(g.ends(e), -1);
    --size_;
  }

  void toggle(const multigraph& g, edge_id e) {
    if (contains(e))
      erase(g, e);
    else
      insert(g, e);
  }

  std::vector<edge_id> edges() const {
    std::vector<edge_id> out;
    out.reserve(size_);
    for (edge_id e = 0; e < member_.size(); ++e)
      if (member_[e]) out.push_back(e);
    return out;
  }

  friend bool operator==(const matching&, const matching&) = default;

 private:
  void bump(const edge_ends& ends, int delta) {
    degree_[ends.u] += delta;
    degree_[ends.v] += delta;
  }

  std::vector<std::uint8_t> member_;
  std::vector<unsigned> degree_;
  std::size_t size_ = 0;
};

inline bool feasible(const degree_bound& f, const matching& m) {
  for (vertex_id v = 0; v < f.size(); ++v)
    if (m.degree(v) > f(v)) return false;
  return true;
}

inline unsigned deficiency(const degree_bound& f, const matching& m, vertex_id v) {
  if (m.degree(v) > f(v)) throw std::invalid_argument("matching exceeds degree bound");
  return f(v) - m.degree(v);
}

inline bool is_free(const degree_bound& f, const matching& m, vertex_id v) {
  return deficiency(f, m, v) > 0;
}

inline int edge_weight(const matching& m, edge_id e) { return m.contains(e) ? 2 : 0; }

struct trail_step {
  edge_id edge;
  vertex_id to;

  friend bool operator==(const trail_step&, const trail_step&) = default;
};

class trail {
 public:
  trail() = default;
  explicit trail(vertex_id start) : start_(start) {}
  trail(vertex_id start, std::vector<trail_step> steps) : start_(start), steps_(std::move(steps)) {}

  vertex_id start() const noexcept { return start_; }
  vertex_id end() const noexcept { return steps_.empty() ? start_ : steps_.back().to; }
  std::size_t size() const noexcept { return steps_.size(); }
  bool empty() const noexcept { return steps_.empty(); }
  const std::vector<trail_step>& steps() const noexcept { return steps_; }
  const trail_step& operator[](std::size_t i) const { return steps_.at(i); }

  void push(edge_id e, vertex_id to) { steps_.push_back({e, to}); }
  void append(const trail& t) {
    if (t.start() != end()) throw std::invalid_argument("trails do not meet");
    steps_.insert(steps_.end(), t.steps_.begin(), t.steps_.end());
  }

  // Vertex sequence including the start, size() + 1 entries.
  std::vector<vertex_id> vertices() const {
    std::vector<vertex_id> out{start_};
    for (const auto& s : steps_) out.push_back(s.to);
    return out;
  }

  trail reversed() const {
    trail r(end());
    const auto vs = vertices();
    for (std::size_t i = steps_.size(); i-- > 0;) r.push(steps_[i].edge, vs[i]);
    return r;
  }

  friend bool operator==(const trail&, const trail&) = default;

 private:
  vertex_id start_ = no_vertex;
  std::vector<trail_step> steps_;
};

struct trail_class {
  bool alternating = false;
  bool closed = false;
  bool augmenting = false;
};

// Throws std::invalid_argument for a non-walk or a repeated edge.
inline void check_walk(const multigraph& g, const trail& t) {
  if (t.start() >= g.vertex_count()) throw std::invalid_argument("trail start out of range");
  std::vector<std::uint8_t> seen(g.edge_count(), 0);
  vertex_id at = t.start();
  for (const auto& s : t.steps()) {
    if (s.edge >= g.edge_count()) throw std::invalid_argument("trail edge out of range");
    const auto& ends = g.ends(s.edge);
    if (!ends.touches(at) || ends.other(at) != s.to)
      throw std::invalid_argument("trail steps do not form a walk");
    if (seen[s.edge]++) throw std::invalid_argument("trail repeats edge " + std::to_string(s.edge));
    at = s.to;
  }
}

inline bool is_alternating(const trail& t, const matching& m) {
  for (std::size_t i = 1; i < t.size(); ++i)
    if (m.type(t[i].edge) == m.type(t[i - 1].edge)) return false;
  return true;
}

// Degrees after toggling the trail's edges; empty result when M xor T exceeds f.
inline bool toggled_feasible(const multigraph& g, const degree_bound& f, const matching& m, const trail& t) {
  std::vector<std::pair<vertex_id, long>> delta;
  for (const auto& s : t.steps()) {
    const auto& ends = g.ends(s.edge);
    const long d = m.contains(s.edge) ? -1 : 1;
    delta.emplace_back(ends.u, d);
    delta.emplace_back(ends.v, d);
  }
  std::sort(delta.begin(), delta.end());
  for (std::size_t i = 0; i < delta.size();) {
    const vertex_id v = delta[i].first;
    long sum = 0;
    for (; i < delta.size() && delta[i].first == v; ++i) sum += delta[i].second;
    const long deg = static_cast<long>(m.degree(v)) + sum;
    if (deg < 0 || deg > static_cast<long>(f(v))) return false;
  }
  return true;
}

inline trail_class classify_trail(const multigraph& g, const trail& t, const matching& m, const degree_bound& f) {
  check_walk(g, t);
  trail_class c;
  c.alternating = is_alternating(t, m);
  c.closed = !t.empty() && t.start() == t.end();
  c.augmenting = c.alternating && !t.empty() && !m.contains(t[0].edge) &&
                 !m.contains(t.steps().back().edge) && is_free(f, m, t.start()) && is_free(f, m, t.end()) &&
                 toggled_feasible(g, f, m, t);
  return c;
}

// w(T,M) = w(T-M) - w(T cap M), which is -2 per matched edge.
inline long incremental_weight(const trail& t, const matching& m) {
  if (!is_alternating(t, m)) throw std::invalid_argument("incremental weight needs an alternating trail");
  long w = 0;
  for (const auto& s : t.steps()) w -= edge_weight(m, s.edge);
  return w;
}

inline matching augment(const multigraph& g, const degree_bound& f, const matching& m, const trail& t) {
  check_walk(g, t);
  if (!toggled_feasible(g, f, m, t)) throw std::invalid_argument("augmentation violates degree bounds");
  matching out = m;
  for (const auto& s : t.steps()) out.toggle(g, s.edge);
  return out;
}

struct graph_input {
  multigraph graph;
  degree_bound f;
};

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline std::uint64_t to_count(const std::string& tok, std::size_t line) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw parse_error(line, "expected a non-negative integer, got '" + tok + "'");
  try {
    return std::stoull(tok);
  } catch (const std::out_of_range&) {
    throw parse_error(line, "integer too large: " + tok);
  }
}

}  // namespace detail

inline graph_input parse_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::uint64_t n = 0, m = 0;
  graph_input out;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (tok[0] == "p") {
      if (have_header) throw parse_error(lineno, "duplicate problem line");
      if (tok.size() != 4 || tok[1] != "fgraph") throw parse_error(lineno, "expected 'p fgraph <n> <m>'");
      n = detail::to_count(tok[2], lineno);
      m = detail::to_count(tok[3], lineno);
      if (n >= no_vertex || m >= artificial_edge) throw parse_error(lineno, "graph too large");
      out.graph = multigraph(n);
      out.f = degree_bound(n, 1);
      have_header = true;
      continue;
    }
    if (!have_header) throw parse_error(lineno, "missing 'p fgraph' line before data");
    if (tok[0] == "e") {
      if (tok.size() != 3) throw parse_error(lineno, "expected 'e <u> <v>'");
      const auto u = detail::to_count(tok[1], lineno), v = detail::to_count(tok[2], lineno);
      if (u >= n || v >= n) throw std::out_of_range("line " + std::to_string(lineno) + ": endpoint out of range");
      out.graph.add_edge(static_cast<vertex_id>(u), static_cast<vertex_id>(v));
    } else if (tok[0] == "f") {
      if (tok.size() != 3) throw parse_error(lineno, "expected 'f <v> <k>'");
      const auto v = detail::to_count(tok[1], lineno), k = detail::to_count(tok[2], lineno);
      if (v >= n) throw std::out_of_range("line " + std::to_string(lineno) + ": vertex out of range");
      if (k > std::numeric_limits<unsigned>::max()) throw parse_error(lineno, "degree bound too large");
      out.f.set(static_cast<vertex_id>(v), static_cast<unsigned>(k));
    } else {
      throw parse_error(lineno, "unknown line type '" + tok[0] + "'");
    }
  }
  if (!have_header) throw parse_error(lineno, "empty input");
  if (out.graph.edge_count() != m)
    throw parse_error(lineno, "header declares " + std::to_string(m) + " edges, found " +
                                  std::to_string(out.graph.edge_count()));
  return out;
}

inline graph_input parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline void write_graph(std::ostream& out, const multigraph& g, const degree_bound& f) {
  out << "p fgraph " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (vertex_id v = 0; v < g.vertex_count(); ++v)
    if (f(v) != 1) out << "f " << v << ' ' << f(v) << '\n';
  for (const auto& e : g.edges()) out << "e " << e.u << ' ' << e.v << '\n';
}

inline matching parse_matching(std::istream& in, const multigraph& g) {
  matching m(g);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 1) throw parse_error(lineno, "expected one edge id per line");
    const auto e = detail::to_count(tok[0], lineno);
    if (e >= g.edge_count()) throw std::out_of_range("line " + std::to_string(lineno) + ": edge id out of range");
    if (m.contains(static_cast<edge_id>(e))) throw parse_error(lineno, "edge listed twice");
    m.insert(g, static_cast<edge_id>(e));
  }
  return m;
}

inline void write_matching(std::ostream& out, const matching& m) {
  for (auto e : m.edges()) out << e << '\n';
}

}  // namespace fmatch
