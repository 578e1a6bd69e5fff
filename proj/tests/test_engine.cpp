#include <algorithm>
#include <set>
#include <thread>

#include "doctest.h"
#include "gpop/engine.hpp"
#include "gpop/oracle.hpp"
#include "gpop/programs.hpp"
#include "helpers.hpp"

using namespace gpop;
using test::TestRun;

namespace {

// Records every delivered (value, destination) pair. Single-threaded tests
// only; gather never activates, so exactly one iteration runs.
struct CaptureProgram {
  using value_type = vertex_t;
  static constexpr bool idempotent_gather = false;
  static constexpr bool all_active = false;
  static constexpr bool weighted = false;
  static constexpr bool pc_safe = true;
  static constexpr std::uint32_t value_bytes = 4;
  static constexpr std::size_t state_bytes = 4;

  std::vector<std::pair<vertex_t, vertex_t>>* log;

  value_type scatter_value(vertex_t v) const { return v; }
  bool init(vertex_t) { return false; }
  bool gather(value_type val, vertex_t v) {
    log->push_back({val, v});
    return false;
  }
  bool filter(vertex_t) { return true; }
};
static_assert(VertexProgram<CaptureProgram>);

EngineConfig single_thread(ModePolicy policy = ModePolicy::dual) {
  EngineConfig ec;
  ec.threads = 1;
  ec.mode_policy = policy;
  return ec;
}

}  // namespace

TEST_CASE("sc scatter on a chain emits one aggregated record") {
  const Graph g = test::make_chain(4);
  std::vector<std::pair<vertex_t, vertex_t>> log;
  CaptureProgram prog{&log};
  TestRun<CaptureProgram> run(g, prog, single_thread(ModePolicy::force_sc), 2);
  run.engine().load_frontier(0);

  const IterationStats st = run.engine().run_iteration();
  CHECK(st.frontier_before == 1);
  CHECK(st.messages_written == 1);
  CHECK(st.ids_written == 2);  // header + one destination
  CHECK(st.sc_parts == 1);
  CHECK(log == std::vector<std::pair<vertex_t, vertex_t>>{{0, 1}});
  CHECK(st.gather_parts == std::vector<part_t>{0});
}

TEST_CASE("sc scatter on a star aggregates per destination partition") {
  const Graph g =
      test::make_graph(8, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}, {0, 7}});
  std::vector<std::pair<vertex_t, vertex_t>> log;
  CaptureProgram prog{&log};
  TestRun<CaptureProgram> run(g, prog, single_thread(ModePolicy::force_sc), 4);
  run.engine().load_frontier(0);

  const IterationStats st = run.engine().run_iteration();
  CHECK(st.messages_written == 4);   // one record per neighboring partition
  CHECK(st.ids_written == 7 + 4);    // destinations plus headers
  CHECK(log.size() == 7);
  std::set<vertex_t> dests;
  for (auto [val, v] : log) {
    CHECK(val == 0);
    dests.insert(v);
  }
  CHECK(dests == std::set<vertex_t>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("empty frontier performs no work and no bin probes") {
  const Graph g = test::make_chain(4);
  std::vector<std::pair<vertex_t, vertex_t>> log;
  CaptureProgram prog{&log};
  TestRun<CaptureProgram> run(g, prog, single_thread(), 2);

  const IterationStats st = run.engine().run_iteration();
  CHECK(st.frontier_before == 0);
  CHECK(st.messages_written == 0);
  CHECK(st.bin_opens == 0);
  CHECK(st.empty_bin_opens == 0);
  CHECK(st.frontier_after == 0);
  CHECK(st.gather_parts.empty());
}

TEST_CASE("pc scatter writes every listed source regardless of the frontier") {
  const Graph g = test::make_chain(4);
  std::vector<std::pair<vertex_t, vertex_t>> log;
  CaptureProgram prog{&log};
  TestRun<CaptureProgram> run(g, prog, single_thread(ModePolicy::force_pc), 2);
  run.engine().load_frontier(0);

  const IterationStats st = run.engine().run_iteration();
  // Partition 0 lists sources {0} -> p0 and {1} -> p1; vertex 1 is inactive
  // but still scattered.
  CHECK(st.pc_parts == 1);
  CHECK(st.messages_written == 2);
  CHECK(st.ids_written == 0);  // adjacency reused from the PNG
  std::set<std::pair<vertex_t, vertex_t>> got(log.begin(), log.end());
  CHECK(got == std::set<std::pair<vertex_t, vertex_t>>{{0, 1}, {1, 2}});
}

TEST_CASE("pc scatter completes one bin before starting the next") {
  const Graph g = test::make_rmat_graph(6, 3, 8);
  std::vector<std::pair<vertex_t, vertex_t>> log;
  CaptureProgram prog{&log};
  TestRun<CaptureProgram> run(g, prog, single_thread(ModePolicy::force_pc), 4);

  std::vector<BinMatrix<vertex_t>::AppendEvent> events;
  run.engine().bins().append_log = &events;
  run.engine().load_frontier_all();
  run.engine().run_iteration();

  REQUIRE(!events.empty());
  bool open = false;
  part_t cur_src = 0, cur_dst = 0, last_dst = 0;
  bool first_cell = true;
  for (const auto& ev : events) {
    if (ev.begin) {
      CHECK(!open);  // previous bin finished before this one starts
      open = true;
      if (!first_cell && ev.src == cur_src) {
        CHECK(ev.dst > last_dst);  // destinations ascending within a partition
      }
      cur_src = ev.src;
      cur_dst = ev.dst;
      first_cell = false;
    } else {
      CHECK(open);
      CHECK(ev.src == cur_src);
      CHECK(ev.dst == cur_dst);
      open = false;
      last_dst = ev.dst;
    }
  }
  CHECK(!open);
}

TEST_CASE("bfs on a chain produces the expected parents and iteration count") {
  const Graph g = test::make_chain(3);
  BfsProgram prog(g, 0);
  TestRun<BfsProgram> run(g, prog, single_thread());
  run.engine().load_frontier(0);
  const auto history = run.engine().run_until();
  CHECK(prog.parents() == std::vector<vertex_t>{0, 0, 1});
  CHECK(history.size() == 3);  // chain of length L scatters L times
}

TEST_CASE("bfs with an isolated root terminates immediately") {
  const Graph g = test::make_graph(3, {{1, 2}});
  BfsProgram prog(g, 0);
  TestRun<BfsProgram> run(g, prog, single_thread());
  run.engine().load_frontier(0);
  const auto history = run.engine().run_until();
  CHECK(history.size() <= 2);
  CHECK(prog.parents()[0] == 0);
  CHECK(prog.parents()[1] == kInvalidVertex);
  CHECK(prog.parents()[2] == kInvalidVertex);
}

TEST_CASE("bfs is valid under forced pc despite unvisited sources") {
  const Graph g = test::make_rmat_graph(8, 17);
  const auto levels = oracle::bfs_levels(g, 0);
  for (ModePolicy policy : {ModePolicy::force_sc, ModePolicy::force_pc, ModePolicy::dual}) {
    BfsProgram prog(g, 0);
    TestRun<BfsProgram> run(g, prog, single_thread(policy), 8);
    run.engine().load_frontier(0);
    run.engine().run_until();
    std::string why;
    CHECK_MESSAGE(oracle::bfs_tree_valid(g, 0, prog.parents(), levels, &why), why);
  }
}

TEST_CASE("single threaded runs are exactly reproducible") {
  const Graph g = test::make_rmat_graph(8, 5);
  auto run_once = [&] {
    BfsProgram prog(g, 1);
    TestRun<BfsProgram> run(g, prog, single_thread());
    run.engine().load_frontier(1);
    return run.engine().run_until();
  };
  const auto a = run_once();
  const auto b = run_once();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].messages_written == b[i].messages_written);
    CHECK(a[i].ids_written == b[i].ids_written);
    CHECK(a[i].frontier_before == b[i].frontier_before);
    CHECK(a[i].frontier_after == b[i].frontier_after);
    CHECK(a[i].gather_parts == b[i].gather_parts);
    CHECK(a[i].part_mode == b[i].part_mode);
  }
}

TEST_CASE("sc message counts match the counting oracle every iteration") {
  const Graph g = test::make_rmat_graph(10, 23);
  BfsProgram prog(g, 0);
  TestRun<BfsProgram> run(g, prog, single_thread(ModePolicy::force_sc));
  run.engine().load_frontier(0);

  while (run.engine().frontier_size() > 0) {
    const auto frontier = run.engine().frontier_vertices();
    const auto want = oracle::message_count(g, run.layout(), frontier);
    const IterationStats st = run.engine().run_iteration();
    CHECK(st.messages_written == want.messages);
    CHECK(st.ids_written == want.ids + want.messages);  // destinations + headers
    CHECK(st.records_gathered == st.messages_written);  // conservation, no isg
    CHECK(st.empty_bin_opens == 0);
  }
}

TEST_CASE("per-partition sc work matches the frontier's out-partition degrees") {
  const Graph g = test::make_rmat_graph(9, 41);
  BfsProgram prog(g, 2);
  TestRun<BfsProgram> run(g, prog, single_thread(ModePolicy::force_sc), 8);
  run.engine().load_frontier(2);

  while (run.engine().frontier_size() > 0) {
    const auto frontier = run.engine().frontier_vertices();
    std::vector<std::uint64_t> want_msgs(run.layout().k, 0);
    for (vertex_t v : frontier) {
      want_msgs[run.layout().partition_of(v)] += run.png().out_part_degree[v];
    }
    const IterationStats st = run.engine().run_iteration();
    REQUIRE(st.part_messages.size() == run.layout().k);
    for (part_t p = 0; p < run.layout().k; ++p) {
      CHECK(st.part_messages[p] == want_msgs[p]);
    }
  }
}

TEST_CASE("gather part list is exact") {
  const Graph g = test::make_rmat_graph(8, 77);
  BfsProgram prog(g, 3);
  TestRun<BfsProgram> run(g, prog, single_thread(ModePolicy::force_sc), 8);
  run.engine().load_frontier(3);

  while (run.engine().frontier_size() > 0) {
    const auto frontier = run.engine().frontier_vertices();
    std::set<part_t> want;
    for (vertex_t v : frontier) {
      for (vertex_t u : g.neighbors_of(v)) want.insert(run.layout().partition_of(u));
    }
    const IterationStats st = run.engine().run_iteration();
    // Sorted and duplicate-free by contract.
    CHECK(std::adjacent_find(st.gather_parts.begin(), st.gather_parts.end()) ==
          st.gather_parts.end());
    const std::set<part_t> got(st.gather_parts.begin(), st.gather_parts.end());
    CHECK(got == want);
  }
}

TEST_CASE("frontier seeds are range checked") {
  const Graph g = test::make_chain(4);
  BfsProgram prog(g, 0);
  TestRun<BfsProgram> run(g, prog, single_thread());
  CHECK_THROWS_AS(run.engine().load_frontier(4), config_error);
}

TEST_CASE("dual mode only picks pc when the model allows it") {
  const Graph g = test::make_rmat_graph(10, 9);
  CcProgram prog(g);
  TestRun<CcProgram> run(g, prog, single_thread(ModePolicy::dual), 16);
  run.engine().load_frontier_all();

  bool saw_pc = false, saw_sc = false;
  while (run.engine().frontier_size() > 0) {
    const IterationStats st = run.engine().run_iteration();
    for (part_t p = 0; p < run.layout().k; ++p) {
      if (st.part_mode[p] == kPartIdle) continue;
      ModeInputs mi;
      mi.active_vertices = st.part_active_vertices[p];
      mi.active_edges = st.part_active_edges[p];
      mi.part_edges = run.png().part_out_edges[p];
      mi.aggregation = run.png().aggregation[p];
      mi.k = run.layout().k;
      mi.value_bytes = CcProgram::value_bytes;
      mi.bw_ratio = 2.0;
      if (st.part_mode[p] == kPartPc) {
        saw_pc = true;
        // Work guarantee: pc volume within bw_ratio of the sc volume.
        CHECK(pc_model_cost(mi) <= 2.0 * sc_model_cost(mi));
      } else {
        saw_sc = true;
        CHECK(pc_model_cost(mi) > 2.0 * sc_model_cost(mi));
      }
    }
  }
  CHECK(saw_pc);  // dense early iterations
  CHECK(saw_sc);  // sparse tail
}

TEST_CASE("pagerank on a 2-cycle is the symmetric fixed point") {
  const Graph g = test::make_graph(2, {{0, 1}, {1, 0}});
  PageRankProgram prog(g, 0.85);
  EngineConfig ec = single_thread();
  ec.max_iterations = 10;
  TestRun<PageRankProgram> run(g, prog, ec);
  run.engine().load_frontier_all();
  const auto history = run.engine().run_until();
  CHECK(history.size() == 10);
  CHECK(prog.ranks()[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prog.ranks()[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("an isolated vertex settles at the teleport share after one iteration") {
  const Graph g = test::make_graph(3, {{0, 1}, {1, 0}});  // vertex 2 isolated
  PageRankProgram prog(g, 0.85);
  EngineConfig ec = single_thread();
  ec.max_iterations = 1;
  TestRun<PageRankProgram> run(g, prog, ec);
  run.engine().load_frontier_all();
  run.engine().run_until();
  CHECK(prog.ranks()[2] == doctest::Approx(0.15 / 3.0));
}

TEST_CASE("pagerank chooses pc everywhere on a dense graph") {
  const Graph g = test::make_rmat_graph(10, 3);
  PageRankProgram prog(g, 0.85);
  EngineConfig ec = single_thread();
  ec.max_iterations = 3;
  TestRun<PageRankProgram> run(g, prog, ec, 16);
  run.engine().load_frontier_all();
  const auto history = run.engine().run_until();
  for (const auto& st : history) {
    CHECK(st.sc_parts == 0);
    CHECK(st.pc_parts > 0);
  }
}

TEST_CASE("pagerank matches the dense oracle") {
  const Graph g = test::make_rmat_graph(9, 29);
  PageRankProgram prog(g, 0.85);
  EngineConfig ec = single_thread();
  ec.max_iterations = 10;
  TestRun<PageRankProgram> run(g, prog, ec);
  run.engine().load_frontier_all();
  run.engine().run_until();
  const auto want = oracle::pagerank(g, 0.85, 10);
  for (vertex_t v = 0; v < g.num_vertices; ++v) {
    CHECK(prog.ranks()[v] == doctest::Approx(want[v]).epsilon(1e-6));
  }
}

TEST_CASE("message conservation holds with multiple threads") {
  const Graph g = symmetrize_csr(test::make_rmat_graph(9, 13));
  EngineConfig ec;
  ec.threads = 4;
  CcProgram prog(g);
  TestRun<CcProgram> run(g, prog, ec);
  run.engine().load_frontier_all();
  for (const auto& st : run.engine().run_until()) {
    CHECK(st.records_gathered + st.records_pregathered == st.messages_written);
  }
  CHECK(prog.labels() == oracle::connected_components(g));
}

TEST_CASE("isg on a directed chain converges in strictly fewer iterations") {
  Graph g = test::make_chain(64);
  assign_weights(g, 4);
  const auto want = oracle::dijkstra(g, 0);

  auto run_sssp = [&](bool isg) {
    SsspProgram prog(g, 0);
    EngineConfig ec = single_thread();
    ec.isg = isg;
    TestRun<SsspProgram> run(g, prog, ec, 8);
    run.engine().load_frontier(0);
    const auto history = run.engine().run_until();
    CHECK(prog.distances() == want);
    return history.size();
  };

  const std::size_t without = run_sssp(false);
  const std::size_t with = run_sssp(true);
  CHECK(without == 64);
  CHECK(with < without);
  CHECK(with == 64 - 7);  // one iteration saved per partition boundary
}

TEST_CASE("isg cc matches union-find for any schedule") {
  const Graph g = symmetrize_csr(test::make_rmat_graph(9, 37));
  const auto want = oracle::connected_components(g);
  for (std::uint32_t threads : {1u, 4u}) {
    CcProgram prog(g);
    EngineConfig ec;
    ec.threads = threads;
    ec.isg = true;
    TestRun<CcProgram> run(g, prog, ec);
    run.engine().load_frontier_all();
    run.engine().run_until();
    CHECK(prog.labels() == want);
  }
}

TEST_CASE("isg requires an idempotent gather") {
  const Graph g = test::make_chain(4);
  PageRankProgram prog(g, 0.85);
  const PartitionLayout layout = make_layout(4, 2);
  const Png png = build_png(g, layout);
  EngineConfig ec = single_thread();
  ec.isg = true;
  CHECK_THROWS_AS((Engine<PageRankProgram>(g, layout, png, prog, ec)), config_error);
}

TEST_CASE("forcing pc for a sc-only program is a config error") {
  const Graph g = test::make_chain(4);
  NibbleProgram prog(g, 0, 1e-9);
  const PartitionLayout layout = make_layout(4, 2);
  const Png png = build_png(g, layout);
  CHECK_THROWS_AS(
      (Engine<NibbleProgram>(g, layout, png, prog, single_thread(ModePolicy::force_pc))),
      config_error);
}

TEST_CASE("results are independent of thread count") {
  const Graph base = test::make_rmat_graph(8, 51);
  Graph weighted = base;
  assign_weights(weighted, 8);
  const Graph sym = symmetrize_csr(base);

  const auto bfs_levels = oracle::bfs_levels(base, 0);
  const auto dij = oracle::dijkstra(weighted, 0);
  const auto uf = oracle::connected_components(sym);

  for (std::uint32_t threads : {1u, 2u, 4u, 8u}) {
    EngineConfig ec;
    ec.threads = threads;
    {
      BfsProgram prog(base, 0);
      TestRun<BfsProgram> run(base, prog, ec);
      run.engine().load_frontier(0);
      run.engine().run_until();
      std::string why;
      CHECK_MESSAGE(oracle::bfs_tree_valid(base, 0, prog.parents(), bfs_levels, &why), why);
    }
    {
      SsspProgram prog(weighted, 0);
      TestRun<SsspProgram> run(weighted, prog, ec);
      run.engine().load_frontier(0);
      run.engine().run_until();
      CHECK(prog.distances() == dij);
    }
    {
      CcProgram prog(sym);
      TestRun<CcProgram> run(sym, prog, ec);
      run.engine().load_frontier_all();
      run.engine().run_until();
      CHECK(prog.labels() == uf);
    }
  }
}

TEST_CASE("randomized scheduling stress keeps results exact") {
  const Graph g = symmetrize_csr(test::make_rmat_graph(8, 71));
  const auto want = oracle::connected_components(g);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    EngineConfig ec;
    ec.threads = 8;
    ec.chaos_seed = seed;
    ec.isg = (seed % 2) == 0;
    CcProgram prog(g);
    TestRun<CcProgram> run(g, prog, ec);
    run.engine().load_frontier_all();
    run.engine().run_until();
    CHECK(prog.labels() == want);
  }
}

TEST_CASE("publication makes whole records visible to a racing reader") {
  // One producer appending records and release-publishing, one consumer
  // acquire-polling and draining the published prefix, like an ISG
  // pre-gather racing a scatter.
  constexpr std::uint32_t kRecords = 20000;
  BinCell<std::uint32_t> cell;
  cell.data.resize(kRecords);
  cell.ids.resize(2 * kRecords);

  std::thread producer([&] {
    for (std::uint32_t rec = 0; rec < kRecords; ++rec) {
      cell.data[cell.data_pos] = rec * 3 + 1;
      cell.ids[cell.ids_pos++] = 1;
      cell.ids[cell.ids_pos++] = rec ^ 0x5555u;
      ++cell.data_pos;
      cell.published.store(cell.data_pos, std::memory_order_release);
      if ((rec & 1023) == 0) std::this_thread::yield();
    }
  });

  std::uint32_t seen = 0;
  bool consistent = true;
  while (seen < kRecords) {
    const std::uint32_t published = cell.published.load(std::memory_order_acquire);
    if (published == cell.consumed) {
      std::this_thread::yield();
      continue;
    }
    detail::drain_sc_records<false>(
        cell, cell.consumed, published,
        [&](std::uint32_t val, std::uint32_t, vertex_t local) {
          if (val != seen * 3 + 1 || local != (seen ^ 0x5555u)) consistent = false;
          ++seen;
        });
  }
  producer.join();
  CHECK(consistent);
  CHECK(seen == kRecords);
}

TEST_CASE("corrupt framing is detected") {
  BinCell<vertex_t> cell;
  cell.data.assign(1, 7);
  cell.ids.assign(4, 0);  // a pc-written bin has no id records
  cell.data_pos = 1;
  cell.published.store(1);
  cell.mode = Mode::sc;
  auto sink = [](vertex_t, std::uint32_t, vertex_t) {};
  CHECK_THROWS_AS(detail::drain_sc_records<false>(cell, 0, 1, sink), engine_error);
}
