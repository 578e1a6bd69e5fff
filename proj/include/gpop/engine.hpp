#pragma once

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <random>
#include <thread>
#include <vector>

#include "gpop/active_state.hpp"
#include "gpop/bins.hpp"
#include "gpop/graph.hpp"
#include "gpop/mode.hpp"
#include "gpop/partition.hpp"
#include "gpop/program.hpp"
#include "gpop/stats.hpp"
#include "gpop/types.hpp"

namespace gpop {

struct EngineConfig {
  std::uint32_t threads = 1;
  ModePolicy mode_policy = ModePolicy::dual;
  bool isg = false;  // interleave a pre-gather before each partition's scatter
  double bw_ratio = 2.0;
  bool exact_sc_count = false;  // model with exact message counts instead of r * E_a
  std::uint32_t max_iterations = 0;  // 0 = run until the frontier empties
  bool stop_on_empty = true;
  std::uint64_t chaos_seed = 0;  // test hook: randomized claim-loop jitter
  bool collect_partition_stats = true;
};

namespace detail {

// SC framing: records of [count][local id (, weight)...] paired with one
// value each. Bounds failures mean the stream does not match the mode tag.
template <bool Weighted, typename V, typename OnMsg>
void drain_sc_records(BinCell<V>& cell, std::uint32_t from, std::uint32_t to, OnMsg&& on) {
  std::uint32_t c = cell.consumed_ids;
  for (std::uint32_t rec = from; rec < to; ++rec) {
    if (c >= cell.ids.size()) throw engine_error("sc bin stream truncated");
    const std::uint32_t count = cell.ids[c++];
    const std::uint32_t slots = count * (Weighted ? 2 : 1);
    if (count == 0 || c + slots > cell.ids.size()) {
      throw engine_error("sc bin stream framing does not match mode tag");
    }
    const V val = cell.data[rec];
    for (std::uint32_t i = 0; i < count; ++i) {
      const vertex_t local = cell.ids[c++];
      const std::uint32_t w = Weighted ? cell.ids[c++] : 0;
      on(val, w, local);
    }
  }
  cell.consumed_ids = c;
  cell.consumed = to;
}

// PC framing: one value per listed source, destinations read from the static
// PNG lists.
template <bool Weighted, typename V, typename OnMsg>
void drain_pc_records(BinCell<V>& cell, const Png& png, const PngCell& pcell,
                      std::uint32_t from, std::uint32_t to, OnMsg&& on) {
  std::uint64_t d = pcell.dst_begin + cell.consumed_dst;
  for (std::uint32_t rec = from; rec < to; ++rec) {
    const V val = cell.data[rec];
    const std::uint32_t count = png.src_counts[pcell.src_begin + rec];
    if (d + count > pcell.dst_end) {
      throw engine_error("pc bin stream framing does not match mode tag");
    }
    for (std::uint32_t i = 0; i < count; ++i, ++d) {
      const std::uint32_t w = Weighted ? png.dst_weights[d] : 0;
      on(val, w, png.dst_local[d]);
    }
  }
  cell.consumed_dst = d - pcell.dst_begin;
  cell.consumed = to;
}

struct alignas(64) ThreadStats {
  std::uint64_t msgs = 0, ids = 0;
  std::uint64_t gathered = 0, pregathered = 0;
  std::uint64_t opens = 0, empty_opens = 0;
  std::uint32_t sc_parts = 0, pc_parts = 0;
};

}  // namespace detail

// Phase-parallel executor. Each iteration: workers claim partitions from the
// scatter list (optional pre-gather, mode selection, scatter, init), a full
// barrier, then claim from the gather list (drain bins, filter), a second
// barrier implied by the join, then serial bookkeeping swaps frontiers and
// resets only the touched bins and lists. T=1 runs the same code inline.
template <VertexProgram P>
class Engine {
 public:
  using value_type = typename P::value_type;

  Engine(const Graph& g, const PartitionLayout& layout, const Png& png, P& program,
         EngineConfig config)
      : graph_(&g),
        layout_(&layout),
        png_(&png),
        program_(&program),
        config_(config),
        caps_(bin_capacities(png, P::weighted)),
        bins_(png, caps_),
        active_(layout),
        part_mode_(layout.k, kPartIdle),
        part_va_(layout.k, 0),
        part_ea_(layout.k, 0),
        part_msgs_(layout.k, 0),
        scatter_entries_(layout.k),
        scatter_listed_(layout.k) {
    for (auto& e : scatter_entries_) e.store(ActiveState::kEmptySlot, std::memory_order_relaxed);
    if (config_.threads == 0) throw config_error("thread count must be positive");
    if (config_.isg && !P::idempotent_gather) {
      throw config_error("isg requires idempotent gather");
    }
    if (config_.mode_policy == ModePolicy::force_pc && !P::pc_safe) {
      throw config_error("program does not support partition-centric scatter");
    }
    if (P::weighted && !g.weighted()) {
      throw config_error("program requires edge weights");
    }
  }

  void load_frontier(vertex_t seed) {
    if (seed >= graph_->num_vertices) throw config_error("frontier seed out of range");
    reset_run();
    const part_t p = layout_->partition_of(seed);
    activate(active_.parts[p], seed - layout_->part_begin(p), seed, /*next=*/false);
    active_.spart_list.assign(1, p);
  }

  void load_frontier_all() {
    reset_run();
    for (part_t p = 0; p < layout_->k; ++p) {
      PartitionFrontier& fr = active_.parts[p];
      const vertex_t begin = layout_->part_begin(p), end = layout_->part_end(p);
      for (vertex_t v = begin; v < end; ++v) {
        activate(fr, v - begin, v, /*next=*/false);
      }
      if (!fr.cur.empty()) active_.spart_list.push_back(p);
    }
  }

  // Clears frontiers and the touched-vertex history in O(touched).
  void reset_run() {
    for (part_t p = 0; p < layout_->k; ++p) {
      PartitionFrontier& fr = active_.parts[p];
      for (vertex_t v : fr.cur) PartitionFrontier::clear(fr.cur_bits, local_of(p, v));
      for (vertex_t v : fr.next) PartitionFrontier::clear(fr.next_bits, local_of(p, v));
      for (vertex_t v : fr.ever) PartitionFrontier::clear(fr.ever_bits, local_of(p, v));
      fr.cur.clear();
      fr.next.clear();
      fr.ever.clear();
    }
    active_.spart_list.clear();
    iteration_ = 0;
  }

  IterationStats run_iteration() {
    IterationStats stats;
    stats.index = ++iteration_;
    for (part_t p : active_.spart_list) {
      stats.frontier_before += active_.parts[p].cur.size();
    }

    // Seed the scatter work list. With ISG enabled it also grows during the
    // phase: a partition that receives its first message gets enlisted so its
    // pre-gather can forward the update within this very iteration.
    for (std::size_t i = 0; i < active_.spart_list.size(); ++i) {
      scatter_entries_[i].store(active_.spart_list[i], std::memory_order_relaxed);
      scatter_listed_[active_.spart_list[i]].store(1, std::memory_order_relaxed);
    }
    scatter_n_.store(static_cast<std::uint32_t>(active_.spart_list.size()),
                     std::memory_order_relaxed);

    const std::uint32_t nthreads = config_.threads;
    scatter_claim_.store(0, std::memory_order_relaxed);
    gather_claim_.store(0, std::memory_order_relaxed);
    std::vector<detail::ThreadStats> tls(nthreads);
    std::vector<std::exception_ptr> errors(nthreads);

    const auto t_start = std::chrono::steady_clock::now();
    auto on_scatter_done = [this]() noexcept {
      phase_boundary_ = std::chrono::steady_clock::now();
      std::sort(active_.gather_list.begin(),
                active_.gather_list.begin() +
                    active_.gather_n.load(std::memory_order_relaxed));
    };
    std::barrier barrier(static_cast<std::ptrdiff_t>(nthreads), on_scatter_done);

    auto work = [&](std::uint32_t tid) {
      try {
        scatter_phase(tid, tls[tid]);
      } catch (...) {
        errors[tid] = std::current_exception();
      }
      barrier.arrive_and_wait();
      if (!errors[tid]) {
        try {
          gather_phase(tid, tls[tid]);
        } catch (...) {
          errors[tid] = std::current_exception();
        }
      }
    };

    if (nthreads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(nthreads - 1);
      for (std::uint32_t t = 1; t < nthreads; ++t) pool.emplace_back(work, t);
      work(0);
      for (auto& th : pool) th.join();
    }
    const auto t_end = std::chrono::steady_clock::now();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }

    finalize_iteration(stats, tls, t_start, t_end);
    return stats;
  }

  std::vector<IterationStats> run_until() {
    if (!config_.stop_on_empty && config_.max_iterations == 0) {
      throw config_error("run_until needs a stop condition");
    }
    std::vector<IterationStats> history;
    while (true) {
      if (config_.max_iterations && history.size() >= config_.max_iterations) break;
      if (config_.stop_on_empty && frontier_size() == 0) break;
      history.push_back(run_iteration());
    }
    return history;
  }

  std::uint64_t frontier_size() const {
    std::uint64_t n = 0;
    for (part_t p : active_.spart_list) n += active_.parts[p].cur.size();
    return n;
  }

  // Sorted global ids of the current frontier.
  std::vector<vertex_t> frontier_vertices() const {
    std::vector<vertex_t> out;
    for (part_t p : active_.spart_list) {
      const auto& cur = active_.parts[p].cur;
      out.insert(out.end(), cur.begin(), cur.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Every vertex activated (or loaded) since the last load_frontier; backs
  // amortized program resets across repeated runs.
  template <typename F>
  void visit_touched(F&& fn) const {
    for (part_t p = 0; p < layout_->k; ++p) {
      for (vertex_t v : active_.parts[p].ever) fn(v);
    }
  }

  std::uint64_t touched_count() const {
    std::uint64_t n = 0;
    for (part_t p = 0; p < layout_->k; ++p) n += active_.parts[p].ever.size();
    return n;
  }

  const ActiveState& state() const { return active_; }
  BinMatrix<value_type>& bins() { return bins_; }
  const PartitionLayout& layout() const { return *layout_; }

 private:
  vertex_t local_of(part_t p, vertex_t v) const { return v - layout_->part_begin(p); }

  void activate(PartitionFrontier& fr, vertex_t local, vertex_t global, bool next) {
    auto& bits = next ? fr.next_bits : fr.cur_bits;
    auto& list = next ? fr.next : fr.cur;
    if (!PartitionFrontier::test(bits, local)) {
      PartitionFrontier::set(bits, local);
      list.push_back(global);
    }
    if (!PartitionFrontier::test(fr.ever_bits, local)) {
      PartitionFrontier::set(fr.ever_bits, local);
      fr.ever.push_back(global);
    }
  }

  // ---- scatter phase ----

  // Claims advance only while below the committed size, so a partition
  // enlisted by a still-running peer is never skipped: the enlisting thread
  // itself loops around and picks it up.
  void scatter_phase(std::uint32_t tid, detail::ThreadStats& ts) {
    std::mt19937_64 chaos(config_.chaos_seed ^ (std::uint64_t{tid} * 0x9E3779B97F4A7C15ull) ^
                          iteration_);
    while (true) {
      std::uint32_t i = scatter_claim_.load(std::memory_order_relaxed);
      if (i >= scatter_n_.load(std::memory_order_acquire)) break;
      if (!scatter_claim_.compare_exchange_weak(i, i + 1, std::memory_order_relaxed)) {
        continue;
      }
      std::uint32_t p;
      do {
        p = scatter_entries_[i].load(std::memory_order_acquire);
      } while (p == ActiveState::kEmptySlot);  // slot reserved, store in flight
      if (config_.chaos_seed) jitter(chaos);
      scatter_partition(static_cast<part_t>(p), ts);
    }
  }

  void enlist_for_scatter(part_t q) {
    if (scatter_listed_[q].exchange(1, std::memory_order_relaxed) == 0) {
      const std::uint32_t slot = scatter_n_.fetch_add(1, std::memory_order_relaxed);
      scatter_entries_[slot].store(q, std::memory_order_release);
    }
  }

  void scatter_partition(part_t p, detail::ThreadStats& ts) {
    if (config_.isg && P::idempotent_gather) pregather(p, ts);

    PartitionFrontier& fr = active_.parts[p];
    if (fr.cur.empty()) return;
    std::sort(fr.cur.begin(), fr.cur.end());

    std::uint64_t ea = 0, msgs_exact = 0;
    for (vertex_t v : fr.cur) {
      ea += graph_->out_degree(v);
      msgs_exact += png_->out_part_degree[v];
    }

    Mode mode = Mode::sc;
    if constexpr (P::pc_safe) {
      switch (config_.mode_policy) {
        case ModePolicy::force_sc: mode = Mode::sc; break;
        case ModePolicy::force_pc: mode = Mode::pc; break;
        case ModePolicy::dual: {
          ModeInputs mi;
          mi.active_vertices = fr.cur.size();
          mi.active_edges = ea;
          mi.part_edges = png_->part_out_edges[p];
          mi.active_messages = msgs_exact;
          mi.aggregation = png_->aggregation[p];
          mi.k = layout_->k;
          mi.value_bytes = P::value_bytes;
          mi.bw_ratio = config_.bw_ratio;
          mi.exact_count = config_.exact_sc_count;
          mode = select_mode(mi);
          break;
        }
      }
    }

    part_mode_[p] = mode == Mode::pc ? kPartPc : kPartSc;
    part_va_[p] = fr.cur.size();
    part_ea_[p] = ea;
    const std::uint64_t msgs_prev = ts.msgs;
    if (mode == Mode::pc) {
      ++ts.pc_parts;
      scatter_pc(p, ts);
    } else {
      ++ts.sc_parts;
      scatter_sc(p, ts);
    }
    part_msgs_[p] = ts.msgs - msgs_prev;

    // Re-init: a scattered vertex stays in the next frontier only if the
    // program asks to continue it.
    for (vertex_t v : fr.cur) {
      if (program_->init(v)) {
        activate(fr, local_of(p, v), v, /*next=*/true);
      }
    }
    if (!fr.next.empty()) active_.register_gather(p);
  }

  void scatter_sc(part_t p, detail::ThreadStats& ts) {
    PartitionFrontier& fr = active_.parts[p];
    constexpr bool weighted = P::weighted;
    for (vertex_t v : fr.cur) {
      const auto nbrs = graph_->neighbors_of(v);
      if (nbrs.empty()) continue;
      const value_type val = program_->scatter_value(v);
      const std::uint32_t* wts =
          weighted ? graph_->weights.data() + graph_->offsets[v] : nullptr;
      std::size_t i = 0;
      while (i < nbrs.size()) {
        const part_t q = layout_->partition_of(nbrs[i]);
        std::size_t j = i + 1;
        while (j < nbrs.size() && layout_->partition_of(nbrs[j]) == q) ++j;
        const std::uint32_t count = static_cast<std::uint32_t>(j - i);

        BinCell<value_type>& cell = bins_.at(p, q);
        if (cell.data_pos == 0) cell.mode = Mode::sc;
        const std::uint32_t slots = 1 + count * (weighted ? 2 : 1);
        if (cell.data_pos >= cell.data.size() || cell.ids_pos + slots > cell.ids.size()) {
          throw engine_error("sc scatter overflowed bin capacity");
        }
        cell.data[cell.data_pos] = val;
        cell.ids[cell.ids_pos++] = count;
        const vertex_t base = layout_->part_begin(q);
        for (std::size_t n = i; n < j; ++n) {
          cell.ids[cell.ids_pos++] = nbrs[n] - base;
          if constexpr (weighted) cell.ids[cell.ids_pos++] = wts[n];
        }
        ++cell.data_pos;
        cell.published.store(cell.data_pos, std::memory_order_release);
        if (cell.data_pos == 1) {
          active_.register_message(p, q);
          if (config_.isg) enlist_for_scatter(q);
        }

        ts.msgs += 1;
        ts.ids += 1 + count;
        i = j;
      }
    }
  }

  void scatter_pc(part_t p, detail::ThreadStats& ts) {
    // One bin at a time: all values for bin[p][q] land before bin[p][q+1] is
    // touched. Ids are never rewritten; gather walks the static PNG lists.
    for (std::uint64_t ci = png_->part_cells[p]; ci < png_->part_cells[p + 1]; ++ci) {
      const PngCell& pcell = png_->cells[ci];
      BinCell<value_type>& cell = bins_.at(p, pcell.dst_part);
      if (bins_.append_log) bins_.append_log->push_back({p, pcell.dst_part, true});

      const std::uint64_t n = pcell.src_count();
      if (cell.data_pos != 0 || n > cell.data.size()) {
        throw engine_error("pc scatter overflowed bin capacity");
      }
      cell.mode = Mode::pc;
      for (std::uint64_t s = 0; s < n; ++s) {
        cell.data[s] = program_->scatter_value(png_->srcs[pcell.src_begin + s]);
      }
      cell.data_pos = static_cast<std::uint32_t>(n);
      cell.published.store(cell.data_pos, std::memory_order_release);
      active_.register_message(p, pcell.dst_part);
      if (config_.isg) enlist_for_scatter(pcell.dst_part);
      ts.msgs += n;

      if (bins_.append_log) bins_.append_log->push_back({p, pcell.dst_part, false});
    }
  }

  // Drain whatever has already been published into column p before
  // scattering it, so this iteration's messages carry fresh values. The
  // consumed cursors advance, leaving only the remainder for the gather
  // phase. Entries still being registered show up as empty slots and are
  // simply picked up later.
  void pregather(part_t p, detail::ThreadStats& ts) {
    const std::uint32_t nsrc = active_.binpart_n[p].load(std::memory_order_acquire);
    if (nsrc == 0) return;
    PartitionFrontier& fr = active_.parts[p];
    const vertex_t base = layout_->part_begin(p);
    for (std::uint32_t slot = 0; slot < nsrc; ++slot) {
      const std::uint32_t s =
          active_.binpart_entries[std::size_t{p} * active_.k + slot].load(
              std::memory_order_acquire);
      if (s == ActiveState::kEmptySlot) continue;
      BinCell<value_type>& cell = bins_.at(s, p);
      const std::uint32_t published = cell.published.load(std::memory_order_acquire);
      if (published == cell.consumed) continue;
      ts.pregathered += published - cell.consumed;
      drain_cell(cell, static_cast<part_t>(s), p, published,
                 [&](value_type val, std::uint32_t w, vertex_t local) {
                   if (program_->gather(deliver(val, w), base + local)) {
                     activate(fr, local, base + local, /*next=*/false);
                   }
                 });
    }
  }

  // ---- gather phase ----

  void gather_phase(std::uint32_t tid, detail::ThreadStats& ts) {
    std::mt19937_64 chaos(config_.chaos_seed ^ (std::uint64_t{tid} * 0xC2B2AE3D27D4EB4Full) ^
                          iteration_);
    const std::uint32_t n = active_.gather_n.load(std::memory_order_relaxed);
    while (true) {
      const std::uint32_t i = gather_claim_.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) break;
      if (config_.chaos_seed) jitter(chaos);
      gather_partition(active_.gather_list[i], ts);
    }
  }

  void gather_partition(part_t q, detail::ThreadStats& ts) {
    PartitionFrontier& fr = active_.parts[q];
    const vertex_t base = layout_->part_begin(q);

    const std::uint32_t nsrc = active_.binpart_n[q].load(std::memory_order_relaxed);
    if (nsrc > 0) {
      std::vector<part_t> sources(nsrc);
      for (std::uint32_t slot = 0; slot < nsrc; ++slot) {
        sources[slot] = static_cast<part_t>(
            active_.binpart_entries[std::size_t{q} * active_.k + slot].load(
                std::memory_order_relaxed));
      }
      std::sort(sources.begin(), sources.end());

      for (part_t s : sources) {
        BinCell<value_type>& cell = bins_.at(s, q);
        const std::uint32_t published = cell.published.load(std::memory_order_acquire);
        if (published == cell.consumed) {
          ++ts.empty_opens;  // pre-gather drained it; nothing left to read
          continue;
        }
        ++ts.opens;
        ts.gathered += published - cell.consumed;
        drain_cell(cell, s, q, published,
                   [&](value_type val, std::uint32_t w, vertex_t local) {
                     if (program_->gather(deliver(val, w), base + local)) {
                       activate(fr, local, base + local, /*next=*/true);
                     }
                   });
        check_fully_drained(cell, s, q);
      }
    }

    // Filter the preliminary next frontier: init-retained plus
    // gather-activated vertices.
    auto& next = fr.next;
    std::size_t keep = 0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      const vertex_t v = next[i];
      if (program_->filter(v)) {
        next[keep++] = v;
      } else {
        PartitionFrontier::clear(fr.next_bits, v - base);
      }
    }
    next.resize(keep);
  }

  value_type deliver(value_type val, std::uint32_t w) const {
    if constexpr (P::weighted) {
      return program_->apply_weight(val, w);
    } else {
      (void)w;
      return val;
    }
  }

  template <typename OnMsg>
  void drain_cell(BinCell<value_type>& cell, part_t s, part_t q, std::uint32_t to,
                  OnMsg&& on) {
    if (cell.mode == Mode::sc) {
      detail::drain_sc_records<P::weighted>(cell, cell.consumed, to, on);
    } else {
      const PngCell* pcell = png_->cell(s, q);
      if (!pcell) throw engine_error("pc bin without a png cell");
      detail::drain_pc_records<P::weighted>(cell, *png_, *pcell, cell.consumed, to, on);
    }
  }

  // Post-barrier framing audit: once a bin is fully drained, the read
  // cursors must land exactly on the write cursors.
  void check_fully_drained(const BinCell<value_type>& cell, part_t s, part_t q) {
    if (cell.consumed != cell.data_pos) return;
    if (cell.mode == Mode::sc) {
      if (cell.consumed_ids != cell.ids_pos) {
        throw engine_error("sc bin drained with dangling id stream");
      }
    } else {
      const PngCell* pcell = png_->cell(s, q);
      if (pcell && cell.consumed == pcell->src_count() &&
          cell.consumed_dst != pcell->dst_count()) {
        throw engine_error("pc bin drained with dangling destination cursor");
      }
    }
  }

  // ---- end-of-iteration bookkeeping (serial) ----

  void finalize_iteration(IterationStats& stats,
                          const std::vector<detail::ThreadStats>& tls,
                          std::chrono::steady_clock::time_point t_start,
                          std::chrono::steady_clock::time_point t_end) {
    for (const auto& ts : tls) {
      stats.messages_written += ts.msgs;
      stats.ids_written += ts.ids;
      stats.records_gathered += ts.gathered;
      stats.records_pregathered += ts.pregathered;
      stats.bin_opens += ts.opens;
      stats.empty_bin_opens += ts.empty_opens;
      stats.sc_parts += ts.sc_parts;
      stats.pc_parts += ts.pc_parts;
    }
    if (stats.records_gathered + stats.records_pregathered != stats.messages_written) {
      throw engine_error("message conservation violated");
    }
    stats.scatter_ms = std::chrono::duration<double, std::milli>(phase_boundary_ - t_start).count();
    stats.gather_ms = std::chrono::duration<double, std::milli>(t_end - phase_boundary_).count();

    const std::uint32_t gn = active_.gpart_n.load(std::memory_order_relaxed);
    stats.gather_parts.assign(active_.gpart_list.begin(), active_.gpart_list.begin() + gn);
    std::sort(stats.gather_parts.begin(), stats.gather_parts.end());

    if (config_.collect_partition_stats) {
      stats.part_mode.assign(part_mode_.begin(), part_mode_.end());
      stats.part_active_vertices = part_va_;
      stats.part_active_edges = part_ea_;
      stats.part_messages = part_msgs_;
    }

    // Reset bins and presence flags for exactly the cells that saw traffic.
    for (std::uint32_t gi = 0; gi < gn; ++gi) {
      const part_t q = active_.gpart_list[gi];
      const std::uint32_t nsrc = active_.binpart_n[q].load(std::memory_order_relaxed);
      for (std::uint32_t slot = 0; slot < nsrc; ++slot) {
        auto& entry = active_.binpart_entries[std::size_t{q} * active_.k + slot];
        const part_t p = static_cast<part_t>(entry.load(std::memory_order_relaxed));
        entry.store(ActiveState::kEmptySlot, std::memory_order_relaxed);
        active_.binpart_flag[std::size_t{q} * active_.k + p].store(0, std::memory_order_relaxed);
        bins_.at(p, q).reset();
      }
      active_.binpart_n[q].store(0, std::memory_order_relaxed);
      active_.gpart_flag[q].store(0, std::memory_order_relaxed);
    }
    active_.gpart_n.store(0, std::memory_order_relaxed);

    // Retire the scattered frontiers (including ISG-enlisted partitions),
    // then promote next -> cur.
    const std::uint32_t claimed = scatter_n_.load(std::memory_order_relaxed);
    for (std::uint32_t i = 0; i < claimed; ++i) {
      const part_t p =
          static_cast<part_t>(scatter_entries_[i].load(std::memory_order_relaxed));
      scatter_entries_[i].store(ActiveState::kEmptySlot, std::memory_order_relaxed);
      scatter_listed_[p].store(0, std::memory_order_relaxed);
      PartitionFrontier& fr = active_.parts[p];
      const vertex_t base = layout_->part_begin(p);
      for (vertex_t v : fr.cur) PartitionFrontier::clear(fr.cur_bits, v - base);
      fr.cur.clear();
      part_mode_[p] = kPartIdle;
      part_va_[p] = part_ea_[p] = part_msgs_[p] = 0;
    }
    scatter_n_.store(0, std::memory_order_relaxed);
    active_.spart_list.clear();

    const std::uint32_t wn = active_.gather_n.load(std::memory_order_relaxed);
    for (std::uint32_t wi = 0; wi < wn; ++wi) {
      const part_t q = active_.gather_list[wi];  // sorted at the phase barrier
      PartitionFrontier& fr = active_.parts[q];
      std::swap(fr.cur_bits, fr.next_bits);
      std::swap(fr.cur, fr.next);
      if (!fr.cur.empty()) {
        active_.spart_list.push_back(q);
        stats.frontier_after += fr.cur.size();
      }
      active_.gather_flag[q].store(0, std::memory_order_relaxed);
    }
    active_.gather_n.store(0, std::memory_order_relaxed);
  }

  static void jitter(std::mt19937_64& rng) {
    switch (rng() & 3) {
      case 0: std::this_thread::yield(); break;
      case 1: std::this_thread::sleep_for(std::chrono::microseconds(rng() % 40)); break;
      default: break;
    }
  }

  const Graph* graph_;
  const PartitionLayout* layout_;
  const Png* png_;
  P* program_;
  EngineConfig config_;
  BinCapacities caps_;
  BinMatrix<value_type> bins_;
  ActiveState active_;

  std::vector<std::int8_t> part_mode_;
  std::vector<std::uint64_t> part_va_, part_ea_, part_msgs_;

  // Scatter work list; grows during the phase when ISG enlists message
  // receivers. Entries are atomic so claimers can spin past a reserved slot
  // whose store is still in flight.
  std::vector<std::atomic<std::uint32_t>> scatter_entries_;
  std::vector<std::atomic<std::uint8_t>> scatter_listed_;
  std::atomic<std::uint32_t> scatter_n_{0};

  std::atomic<std::uint32_t> scatter_claim_{0};
  std::atomic<std::uint32_t> gather_claim_{0};
  std::chrono::steady_clock::time_point phase_boundary_{};
  std::uint32_t iteration_ = 0;
};

}  // namespace gpop
