#include "gpop/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "gpop/engine.hpp"
#include "gpop/graph.hpp"
#include "gpop/oracle.hpp"
#include "gpop/programs.hpp"

namespace gpop::cli {

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::pagerank: return "pagerank";
    case Algo::bfs: return "bfs";
    case Algo::sssp: return "sssp";
    case Algo::cc: return "cc";
    case Algo::nibble: return "nibble";
  }
  return "?";
}

std::uint32_t resolve_max_iters(const RunConfig& cfg) {
  if (cfg.max_iters != 0) return cfg.max_iters;
  switch (cfg.algo) {
    case Algo::pagerank: return 10;
    case Algo::nibble: return 500;
    default: return 0;  // until the frontier empties
  }
}

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"partition-centric graph processing benchmark"};

  std::string algo_str;
  std::string mode_str = "dc";
  std::string probs_str;
  std::int64_t rmat_scale = -1;
  std::uint32_t cache_kb = 256;
  bool threads_given = false;

  app.add_option("--algo", algo_str, "pagerank|bfs|sssp|cc|nibble")->required();
  app.add_option("--input", cfg.input_path, "edge list path");
  app.add_option("--rmat-scale", rmat_scale, "generate 2^scale vertices");
  app.add_option("--rmat-degree", cfg.rmat.avg_degree, "edges per vertex (default 16)");
  app.add_option("--rmat-probs", probs_str, "quadrant probabilities a,b,c,d");
  app.add_option("--threads", cfg.threads, "worker threads")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { threads_given = true; });
  app.add_option("--partitions", cfg.partitions, "override partition count");
  app.add_option("--cache-kb", cache_kb, "per-partition cache budget (default 256)");
  app.add_option("--mode", mode_str, "sc|pc|dc (default dc)");
  app.add_flag("--isg", cfg.isg, "interleave scatter and gather");
  app.add_option("--bw-ratio", cfg.bw_ratio, "sequential/random bandwidth ratio");
  app.add_option("--source", cfg.source, "root / seed vertex");
  app.add_option("--epsilon", cfg.epsilon, "diffusion threshold");
  app.add_option("--damping", cfg.damping, "pagerank damping factor");
  app.add_option("--iters", cfg.max_iters, "iteration cap");
  app.add_option("--seed", cfg.seed, "generator seed");
  app.add_option("--weight-seed", cfg.weight_seed, "synthetic weight seed (default --seed)");
  app.add_flag("--verify", cfg.verify, "check results against the serial oracle");
  app.add_flag("--weighted", cfg.weighted_input, "input carries edge weights");
  app.add_option("--format", cfg.format, "text|bin input format");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw help_requested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw config_error(e.what());
  }

  static const std::map<std::string, Algo> kAlgos = {
      {"pagerank", Algo::pagerank}, {"bfs", Algo::bfs},       {"sssp", Algo::sssp},
      {"cc", Algo::cc},             {"nibble", Algo::nibble}};
  const auto it = kAlgos.find(algo_str);
  if (it == kAlgos.end()) throw config_error("unknown algorithm '" + algo_str + "'");
  cfg.algo = it->second;

  if (mode_str == "sc") {
    cfg.mode_policy = ModePolicy::force_sc;
  } else if (mode_str == "pc") {
    cfg.mode_policy = ModePolicy::force_pc;
  } else if (mode_str == "dc") {
    cfg.mode_policy = ModePolicy::dual;
  } else {
    throw config_error("unknown mode '" + mode_str + "'");
  }

  if (cfg.format != "text" && cfg.format != "bin") {
    throw config_error("unknown format '" + cfg.format + "'");
  }

  const bool have_input = !cfg.input_path.empty();
  const bool have_rmat = rmat_scale >= 0;
  if (have_input == have_rmat) {
    throw config_error("exactly one of --input and --rmat-scale is required");
  }
  cfg.use_rmat = have_rmat;
  if (have_rmat) {
    if (rmat_scale < 1 || rmat_scale > 31) throw config_error("rmat scale out of range");
    cfg.rmat.scale = static_cast<std::uint32_t>(rmat_scale);
    cfg.rmat.seed = cfg.seed;
  }
  if (!probs_str.empty()) {
    double a, b, c, d;
    if (std::sscanf(probs_str.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) != 4) {
      throw config_error("--rmat-probs expects a,b,c,d");
    }
    cfg.rmat.a = a;
    cfg.rmat.b = b;
    cfg.rmat.c = c;
    cfg.rmat.d = d;
  }

  if (!threads_given) {
    if (const char* env = std::getenv("GPOP_THREADS")) {
      const long n = std::strtol(env, nullptr, 10);
      if (n < 1) throw config_error("GPOP_THREADS must be a positive integer");
      cfg.threads = static_cast<std::uint32_t>(n);
    }
  }
  if (cfg.weight_seed == 0) cfg.weight_seed = cfg.seed;
  cfg.cache_bytes = std::size_t{cache_kb} * 1024;
  if (cache_kb == 0) throw config_error("--cache-kb must be positive");
  if (cfg.bw_ratio <= 0.0) throw config_error("--bw-ratio must be positive");

  if (cfg.isg && cfg.algo != Algo::sssp && cfg.algo != Algo::cc) {
    throw config_error("isg requires idempotent gather");
  }
  if (cfg.algo == Algo::nibble && cfg.mode_policy == ModePolicy::force_pc) {
    throw config_error("nibble supports source-centric scatter only");
  }
  if (cfg.algo == Algo::sssp && !cfg.use_rmat && !cfg.weighted_input &&
      cfg.format != "bin") {
    throw config_error("sssp needs --weighted input or a synthetic graph");
  }
  return cfg;
}

namespace {

std::string format_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", ms);
  return buf;
}

}  // namespace

void emit_report(const RunReport& report, std::ostream& out) {
  for (const IterationStats& it : report.iterations) {
    out << "iter=" << it.index << " frontier=" << it.frontier_before
        << " msgs=" << it.messages_written << " ids=" << it.ids_written
        << " sc=" << it.sc_parts << " pc=" << it.pc_parts
        << " scatter_ms=" << format_ms(it.scatter_ms)
        << " gather_ms=" << format_ms(it.gather_ms) << "\n";
  }
  for (const auto& [key, value] : report.summary) {
    out << key << "=" << value << "\n";
  }
  for (const CheckResult& check : report.checks) {
    out << "check=" << check.name << " status=" << (check.pass ? "PASS" : "FAIL");
    if (!check.detail.empty()) out << " detail=" << check.detail;
    out << "\n";
  }
}

int exit_code_for(const RunReport& report) {
  for (const CheckResult& check : report.checks) {
    if (!check.pass) return 2;
  }
  return 0;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Graph load_graph(const RunConfig& cfg) {
  if (cfg.use_rmat) {
    Graph g = build_csr(generate_rmat(cfg.rmat));
    if (cfg.algo == Algo::sssp || cfg.weighted_input) {
      assign_weights(g, cfg.weight_seed);
    }
    return g;
  }
  std::ifstream in(cfg.input_path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + cfg.input_path + "'");
  if (cfg.format == "bin") return read_binary(in);
  return build_csr(load_edge_list(in, cfg.weighted_input));
}

struct SummaryBuilder {
  std::vector<std::pair<std::string, std::string>> rows;
  void add(const std::string& key, const std::string& value) { rows.emplace_back(key, value); }
  void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
};

double max_rel_error(const std::vector<double>& got, const std::vector<double>& want) {
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double denom = std::max({std::abs(want[i]), std::abs(got[i]), 1e-300});
    worst = std::max(worst, std::abs(got[i] - want[i]) / denom);
  }
  return worst;
}

template <typename P>
RunReport execute(const RunConfig& cfg, const Graph& g, P& program, double load_ms) {
  RunReport report;
  const auto t_pre = Clock::now();

  const std::size_t state_bytes = P::state_bytes + kFrontierBytesPerVertex;
  PartitionLayout layout =
      cfg.partitions > 0
          ? make_layout(g.num_vertices, cfg.partitions)
          : make_layout_auto(g.num_vertices, state_bytes, cfg.cache_bytes, cfg.threads);
  const Png png = build_png(g, layout);

  EngineConfig ec;
  ec.threads = cfg.threads;
  ec.mode_policy = cfg.mode_policy;
  ec.isg = cfg.isg;
  ec.bw_ratio = cfg.bw_ratio;
  ec.max_iterations = resolve_max_iters(cfg);
  Engine<P> engine(g, layout, png, program, ec);

  if (P::all_active || cfg.algo == Algo::cc) {
    engine.load_frontier_all();
  } else {
    engine.load_frontier(cfg.source);
  }
  const double preprocess_ms = ms_since(t_pre);

  const auto t_run = Clock::now();
  report.iterations = engine.run_until();
  const double run_ms = ms_since(t_run);

  std::uint64_t total_msgs = 0, total_ids = 0, sc_parts = 0, pc_parts = 0;
  double scatter_ms = 0.0, gather_ms = 0.0;
  for (const auto& it : report.iterations) {
    total_msgs += it.messages_written;
    total_ids += it.ids_written;
    sc_parts += it.sc_parts;
    pc_parts += it.pc_parts;
    scatter_ms += it.scatter_ms;
    gather_ms += it.gather_ms;
  }

  SummaryBuilder summary;
  summary.add("algo", algo_name(cfg.algo));
  summary.add("vertices", g.num_vertices);
  summary.add("edges", g.num_edges);
  summary.add("partitions", layout.k);
  summary.add("threads", cfg.threads);
  summary.add("mode", cfg.mode_policy == ModePolicy::force_sc   ? "sc"
                      : cfg.mode_policy == ModePolicy::force_pc ? "pc"
                                                                : "dc");
  summary.add("isg", cfg.isg ? "on" : "off");
  summary.add("iterations", report.iterations.size());
  summary.add("total_msgs", total_msgs);
  summary.add("total_ids", total_ids);
  summary.add("sc_parts", sc_parts);
  summary.add("pc_parts", pc_parts);
  summary.add("frontier_final", engine.frontier_size());
  summary.add("scatter_ms", format_ms(scatter_ms));
  summary.add("gather_ms", format_ms(gather_ms));
  summary.add("load_ms", format_ms(load_ms));
  summary.add("preprocess_ms", format_ms(preprocess_ms));
  summary.add("run_ms", format_ms(run_ms));
  summary.add("total_ms", format_ms(load_ms + preprocess_ms + run_ms));
  report.summary = summary.rows;
  return report;
}

CheckResult check_pagerank(const RunConfig& cfg, const Graph& g,
                           const std::vector<double>& ranks) {
  const auto want = oracle::pagerank(g, cfg.damping, resolve_max_iters(cfg));
  const double err = max_rel_error(ranks, want);
  return {"pagerank_oracle", err <= 1e-6, "max_rel_err=" + std::to_string(err)};
}

CheckResult check_bfs(const RunConfig& cfg, const Graph& g,
                      const std::vector<vertex_t>& parents) {
  const auto levels = oracle::bfs_levels(g, cfg.source);
  std::string why;
  const bool ok = oracle::bfs_tree_valid(g, cfg.source, parents, levels, &why);
  return {"bfs_tree_valid", ok, why};
}

CheckResult check_sssp(const RunConfig& cfg, const Graph& g,
                       const std::vector<std::uint32_t>& distances) {
  return {"sssp_distances", distances == oracle::dijkstra(g, cfg.source), ""};
}

CheckResult check_cc(const Graph& g, const std::vector<vertex_t>& labels) {
  return {"cc_labels", labels == oracle::connected_components(g), ""};
}

CheckResult check_nibble(const RunConfig& cfg, const Graph& g,
                         const std::vector<double>& pr) {
  const auto want = oracle::nibble(g, cfg.source, cfg.epsilon, resolve_max_iters(cfg));
  const double tol = cfg.threads == 1 ? 1e-10 : 1e-8;
  const double err = max_rel_error(pr, want.pr);
  return {"nibble_probabilities", err <= tol, "max_rel_err=" + std::to_string(err)};
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out) {
  const auto t_load = Clock::now();
  Graph g = load_graph(cfg);
  if (cfg.algo == Algo::cc) g = symmetrize_csr(g);
  if (cfg.algo == Algo::sssp && !g.weighted()) {
    throw config_error("sssp requires a weighted graph");
  }
  const double load_ms = ms_since(t_load);

  RunReport report;
  switch (cfg.algo) {
    case Algo::pagerank: {
      PageRankProgram program(g, cfg.damping);
      report = execute(cfg, g, program, load_ms);
      if (cfg.verify) report.checks.push_back(check_pagerank(cfg, g, program.ranks()));
      break;
    }
    case Algo::bfs: {
      BfsProgram program(g, cfg.source);
      report = execute(cfg, g, program, load_ms);
      if (cfg.verify) report.checks.push_back(check_bfs(cfg, g, program.parents()));
      break;
    }
    case Algo::sssp: {
      SsspProgram program(g, cfg.source);
      report = execute(cfg, g, program, load_ms);
      if (cfg.verify) report.checks.push_back(check_sssp(cfg, g, program.distances()));
      break;
    }
    case Algo::cc: {
      CcProgram program(g);
      report = execute(cfg, g, program, load_ms);
      if (cfg.verify) report.checks.push_back(check_cc(g, program.labels()));
      break;
    }
    case Algo::nibble: {
      NibbleProgram program(g, cfg.source, cfg.epsilon);
      report = execute(cfg, g, program, load_ms);
      if (cfg.verify) report.checks.push_back(check_nibble(cfg, g, program.probabilities()));
      break;
    }
  }

  emit_report(report, out);
  return exit_code_for(report);
}

}  // namespace gpop::cli
