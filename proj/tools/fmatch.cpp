// fmatch command line: solve, oracle, verify, gen-eg, trace, bench.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmatch/json.hpp>
#include <fmatch/random.hpp>

using namespace fmatch;

namespace {

// 1: an invariant or cross-check failed. 2: bad input or usage.
constexpr int exit_violation = 1;
constexpr int exit_input = 2;

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

graph_input load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  try {
    return parse_graph(in);
  } catch (const std::exception& e) {
    throw input_error(path + ": " + e.what());
  }
}

matching load_matching(const std::string& path, const multigraph& g) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  try {
    return parse_matching(in, g);
  } catch (const std::exception& e) {
    throw input_error(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path);
  return out;
}

// Shared by solve and trace.
struct run_flags {
  std::string graph;
  std::string initial;
  std::string trace_search;
  bool validate = false;
};

void add_run_flags(CLI::App* cmd, run_flags& r) {
  cmd->add_option("file", r.graph, "graph file")->required();
  cmd->add_option("--initial", r.initial, "start from this matching instead of the empty one");
  cmd->add_option("--trace-search", r.trace_search, "write the search step log as JSON");
  cmd->add_flag("--validate", r.validate, "validate the structured matching after every step");
}

matching initial_matching(const run_flags& r, const graph_input& in) {
  if (r.initial.empty()) return matching(in.graph);
  auto m = load_matching(r.initial, in.graph);
  if (!feasible(in.f, m)) throw input_error(r.initial + ": initial matching exceeds degree bounds");
  return m;
}

// Tags each logged event with the phase it belongs to; the last group is the final, failing search.
struct trace_recorder {
  search_trace trace;
  std::vector<std::size_t> phase_end;

  void close_phase() { phase_end.push_back(trace.events.size()); }

  json to_json() const {
    json events = fmatch::to_json(trace);
    std::size_t phase = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      while (phase < phase_end.size() && i >= phase_end[phase]) ++phase;
      events[i]["phase"] = phase;
    }
    return {{"phases", phase_end.size()}, {"events", events}};
  }
};

int cmd_solve(const run_flags& r, const std::string& stats_path, const std::string& matching_path, bool certify_flag) {
  const auto in = load_graph(r.graph);
  trace_recorder rec;
  solve_options opt;
  opt.search.validate_each_step = r.validate;
  if (!r.trace_search.empty()) {
    opt.search.trace = &rec.trace;
    opt.on_phase = [&](const phase_view&) { rec.close_phase(); };
  }
  const auto res = solve_max_f_matching(in.graph, in.f, initial_matching(r, in), opt);
  const bool simple = in.graph.is_simple() && !in.graph.has_loops();
  const auto st = to_json(res.stats, in.graph.vertex_count(), in.f.total(), simple);

  std::cout << "cardinality " << res.m.size() << "\nphases " << res.stats.phase_count() << "\n";
  int code = 0;
  for (const auto& v : st["violations"]) {
    std::cerr << "violation: " << v.get<std::string>() << "\n";
    code = exit_violation;
  }
  if (certify_flag) {
    const auto c = certify(in.graph, in.f, res.m, res.final_search);
    std::cout << "certificate " << (c.ok() ? "ok" : "FAILED") << "\n";
    for (const auto& v : c.violations) std::cerr << "certificate: " << v << "\n";
    if (!c.ok()) code = exit_violation;
  }
  if (!stats_path.empty()) write_json(stats_path, st);
  if (!matching_path.empty()) {
    auto out = open_out(matching_path);
    write_matching(out, res.m);
  }
  if (!r.trace_search.empty()) write_json(r.trace_search, rec.to_json());
  return code;
}

int cmd_oracle(const std::string& path, const std::string& method) {
  const auto in = load_graph(path);
  oracle_result o;
  try {
    o = method == "brute" ? brute_force_max_f_matching(in.graph, in.f) : bipartite_flow_oracle(in.graph, in.f);
  } catch (const oracle_refusal& e) {
    std::cerr << "oracle refused: " << e.what() << "\n";
    return exit_input;
  }
  const auto res = solve_max_f_matching(in.graph, in.f);
  std::cout << "oracle " << o.max_cardinality << "\nsolver " << res.m.size() << "\n";
  if (o.max_cardinality != res.m.size()) {
    std::cerr << "mismatch between solver and " << method << " oracle\n";
    return exit_violation;
  }
  return 0;
}

int cmd_verify(const std::string& gpath, const std::string& mpath) {
  const auto in = load_graph(gpath);
  const auto m = load_matching(mpath, in.graph);
  for (vertex_id v = 0; v < in.graph.vertex_count(); ++v) {
    if (m.degree(v) > in.f(v)) {
      std::cout << "infeasible: vertex " << v << " has degree " << m.degree(v) << " > f = " << in.f(v) << "\n";
      return exit_violation;
    }
  }
  std::cout << "feasible size " << m.size() << "\n";
  return 0;
}

int cmd_gen_eg(unsigned b, const std::string& out_path, const std::string& sidecar_path, const std::string& m0_path) {
  eg_instance in;
  try {
    in = generate_eg(b);
  } catch (const std::invalid_argument& e) {
    throw input_error(e.what());
  }
  {
    auto out = open_out(out_path);
    out << "# EG(" << b << "), vertex names in the sidecar\n";
    write_graph(out, in.graph, in.f);
  }
  const std::string side = sidecar_path.empty() ? out_path + ".json" : sidecar_path;
  write_json(side, eg_sidecar(in));
  const std::string m0 = m0_path.empty() ? out_path + ".m0" : m0_path;
  {
    auto out = open_out(m0);
    write_matching(out, in.m0);
  }
  std::cout << "wrote " << out_path << ", " << side << " and " << m0 << "\n";
  return 0;
}

int cmd_trace(const run_flags& r, const std::string& levels_path) {
  const auto in = load_graph(r.graph);
  const std::size_t n = in.graph.vertex_count();
  trace_recorder rec;
  solve_options opt;
  opt.search.validate_each_step = r.validate;
  if (!r.trace_search.empty()) opt.search.trace = &rec.trace;
  json phases = json::array();
  bool ok = true;
  opt.on_phase = [&](const phase_view& pv) {
    rec.close_phase();
    const auto& s = pv.outcome.structured;
    const auto lg = build_level_graph(in.graph, s, pv.blocking.trails);
    const auto bn = bottleneck_layer(lg, n);
    json trails = json::array();
    for (const auto& t : pv.blocking.trails) {
      const auto tr = track_trail(s, t, track_mode::natural);
      const auto lgc = check_lg_tracking(s, lg, t);
      if (!tr.advances_by_one() || !lgc.ok()) ok = false;
      trails.push_back({{"trail", to_json(t)}, {"tracking", to_json(tr)}, {"lg_violations", lgc.violations}});
    }
    if (lg.nodes.size() > 2 * n || !bn.nodes_within_bound) ok = false;
    phases.push_back({{"index", pv.index},
                      {"sat_length", pv.outcome.sat_length},
                      {"L", pv.outcome.L},
                      {"blossoms", to_json(s.forest)},
                      {"level_graph", to_json(lg, bn)},
                      {"trails", trails}});
  };
  const auto res = solve_max_f_matching(in.graph, in.f, initial_matching(r, in), opt);
  write_json(levels_path, {{"n", n}, {"m", in.graph.edge_count()}, {"final_cardinality", res.m.size()}, {"phases", phases}});
  if (!r.trace_search.empty()) write_json(r.trace_search, rec.to_json());
  std::cout << "cardinality " << res.m.size() << "\nphases " << res.stats.phase_count() << "\n";
  if (!ok) std::cerr << "violation: level tracking or LG* bounds failed, see " << levels_path << "\n";
  return ok ? 0 : exit_violation;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const auto v = std::stoul(s);
      return {v, v};
    }
    return {std::stoul(s.substr(0, dots)), std::stoul(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw input_error("bad range '" + s + "', expected LO..HI");
  }
}

int cmd_bench(const std::string& family, const std::string& range, std::uint64_t seed, double degree,
              const std::string& out_path) {
  const auto [lo, hi] = parse_range(range);
  if (lo < 2 || hi < lo) throw input_error("range must satisfy 2 <= LO <= HI");
  std::ofstream file;
  if (!out_path.empty()) file = open_out(out_path);
  std::ostream& out = out_path.empty() ? std::cout : file;
  out << "n,m,phases,4n^(2/3),max_s\n";
  int code = 0;
  for (std::size_t n = lo; n <= hi; n *= 2) {
    random_params p;
    p.n = n;
    p.m = static_cast<std::size_t>(degree * static_cast<double>(n) / 2.0);
    p.simple = family != "random-multi";
    p.bipartite = family == "bipartite";
    const auto in = random_instance(p, seed + n);
    const auto res = solve_max_f_matching(in.graph, in.f);
    std::size_t max_s = 0;
    for (const auto& ph : res.stats.phases) max_s = std::max(max_s, ph.sat_length);
    const double bound = 4.0 * std::cbrt(static_cast<double>(n) * static_cast<double>(n));
    out << n << ',' << in.graph.edge_count() << ',' << res.stats.phase_count() << ',' << bound << ',' << max_s << '\n';
    if (p.simple && static_cast<double>(res.stats.phase_count()) >= bound) code = exit_violation;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum cardinality f-matching by shortest augmenting trails"};
  app.require_subcommand(1);

  run_flags solve_r;
  std::string stats_path, matching_path;
  bool certify_flag = false;
  auto* solve = app.add_subcommand("solve", "compute a maximum f-matching");
  add_run_flags(solve, solve_r);
  solve->add_option("--stats", stats_path, "write per-phase statistics as JSON");
  solve->add_option("--matching", matching_path, "write the matching, one edge id per line");
  solve->add_flag("--certify", certify_flag, "check the final dual certificate");

  std::string oracle_file, method = "brute";
  auto* oracle = app.add_subcommand("oracle", "compare the solver with an independent oracle");
  oracle->add_option("file", oracle_file, "graph file")->required();
  oracle->add_option("--method", method, "brute or flow")->check(CLI::IsMember({"brute", "flow"}));

  std::string verify_g, verify_m;
  auto* verify = app.add_subcommand("verify", "check that a matching respects the degree bounds");
  verify->add_option("graph", verify_g, "graph file")->required();
  verify->add_option("matching", verify_m, "matching file")->required();

  unsigned eg_b = 0;
  std::string eg_out, eg_side, eg_m0;
  auto* gen = app.add_subcommand("gen-eg", "write the EG(b) instance and its sidecar JSON");
  gen->add_option("b", eg_b, "even size parameter")->required();
  gen->add_option("-o,--output", eg_out, "graph file")->required();
  gen->add_option("--sidecar", eg_side, "sidecar path, default <output>.json");
  gen->add_option("--m0", eg_m0, "initial matching path, default <output>.m0");

  run_flags trace_r;
  std::string levels_path;
  auto* trace = app.add_subcommand("trace", "per-phase level graphs and trail tracking");
  add_run_flags(trace, trace_r);
  trace->add_option("--levels", levels_path, "output JSON")->required();

  std::string family = "random-simple", range = "64..1024", bench_out;
  std::uint64_t seed = 7;
  double degree = 6.0;
  auto* bench = app.add_subcommand("bench", "phase counts on random families, CSV");
  bench->add_option("--family", family, "random-simple, random-multi or bipartite")
      ->check(CLI::IsMember({"random-simple", "random-multi", "bipartite"}));
  bench->add_option("--n", range, "LO..HI, doubling from LO");
  bench->add_option("--seed", seed, "base seed");
  bench->add_option("--degree", degree, "average degree");
  bench->add_option("-o,--output", bench_out, "CSV path, default stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(solve_r, stats_path, matching_path, certify_flag);
    if (*oracle) return cmd_oracle(oracle_file, method);
    if (*verify) return cmd_verify(verify_g, verify_m);
    if (*gen) return cmd_gen_eg(eg_b, eg_out, eg_side, eg_m0);
    if (*trace) return cmd_trace(trace_r, levels_path);
    if (*bench) return cmd_bench(family, range, seed, degree, bench_out);
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::exception& e) {
    // Anything else escaping the library is a broken invariant.
    std::cerr << "invariant violation: " << e.what() << "\n";
    return exit_violation;
  }
  return exit_input;
}
