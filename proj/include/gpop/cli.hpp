#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gpop/edge_list.hpp"
#include "gpop/mode.hpp"
#include "gpop/stats.hpp"
#include "gpop/types.hpp"

namespace gpop::cli {

enum class Algo { pagerank, bfs, sssp, cc, nibble };

const char* algo_name(Algo a);

struct RunConfig {
  Algo algo = Algo::pagerank;

  std::string input_path;  // empty when generating
  bool use_rmat = false;
  RmatParams rmat;
  std::string format = "text";  // "text" or "bin"
  bool weighted_input = false;

  std::uint32_t threads = 1;
  part_t partitions = 0;  // 0 = size from the cache budget
  std::size_t cache_bytes = 262144;
  ModePolicy mode_policy = ModePolicy::dual;
  bool isg = false;
  double bw_ratio = 2.0;

  vertex_t source = 0;
  double epsilon = 1e-9;
  double damping = 0.85;
  std::uint32_t max_iters = 0;  // 0 = per-algorithm default
  std::uint64_t seed = 42;
  std::uint64_t weight_seed = 0;  // defaults to seed

  bool verify = false;
};

// Effective iteration cap: pagerank runs a fixed 10 by default, the seeded
// diffusion is bounded at 500, traversals run until the frontier empties.
std::uint32_t resolve_max_iters(const RunConfig& cfg);

// Thrown by parse_args when --help is requested.
struct help_requested {
  std::string text;
};

// Parses the flag set and validates cross-flag constraints. Throws
// config_error on unknown flags or violated constraints.
RunConfig parse_args(const std::vector<std::string>& args);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  std::vector<IterationStats> iterations;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<CheckResult> checks;
};

// One line per iteration, a key=value summary block, then check verdicts.
void emit_report(const RunReport& report, std::ostream& out);

// 0 success, 2 if any verification check failed.
int exit_code_for(const RunReport& report);

// Loads or generates the graph, executes, writes the report. Returns the
// process exit code; configuration and IO problems propagate as exceptions.
int run(const RunConfig& cfg, std::ostream& out);

}  // namespace gpop::cli
