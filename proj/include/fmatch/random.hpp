#pragma once

// Seeded random instances for tests and benchmarks.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <utility>

#include "graph.hpp"

namespace fmatch {

struct random_params {
  std::size_t n = 8;
  std::size_t m = 12;
  unsigned f_min = 1;
  unsigned f_max = 1;
  bool simple = false;     // no parallel edges and no loops
  bool bipartite = false;  // edges only between the halves [0, n/2) and [n/2, n)
  double loop_share = 0.1; // chance that a multigraph edge is a loop
};

inline graph_input random_instance(const random_params& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  graph_input out{multigraph(p.n), degree_bound(p.n, 1)};
  for (vertex_id v = 0; v < p.n; ++v)
    out.f.set(v, static_cast<unsigned>(pick(p.f_min, p.f_max)));
  if (p.n == 0) return out;

  const std::size_t half = p.n / 2;
  std::size_t cap = p.m;
  if (p.simple) {
    const std::size_t pairs = p.bipartite ? half * (p.n - half) : p.n * (p.n - 1) / 2;
    cap = std::min(cap, pairs);
  }
  if (p.bipartite && (half == 0 || half == p.n)) cap = 0;
  std::set<std::pair<vertex_id, vertex_id>> seen;
  std::bernoulli_distribution loop(p.loop_share);
  while (out.graph.edge_count() < cap) {
    vertex_id u, v;
    if (p.bipartite) {
      u = static_cast<vertex_id>(pick(0, half - 1));
      v = static_cast<vertex_id>(pick(half, p.n - 1));
    } else {
      u = static_cast<vertex_id>(pick(0, p.n - 1));
      v = !p.simple && loop(rng) ? u : static_cast<vertex_id>(pick(0, p.n - 1));
      if (p.simple && u == v) continue;
    }
    if (p.simple && !seen.insert({std::min(u, v), std::max(u, v)}).second) continue;
    out.graph.add_edge(u, v);
  }
  return out;
}

}  // namespace fmatch
