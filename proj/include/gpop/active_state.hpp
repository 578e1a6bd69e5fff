#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "gpop/partition.hpp"
#include "gpop/types.hpp"

namespace gpop {

// Frontier of one partition: a bitmap over its local ids for O(1) dedup plus
// an unordered list of global ids for O(|frontier|) iteration. `cur` is
// scattered this iteration, `next` is built by init retention and gather
// activation. `ever` accumulates every vertex touched since the last
// load_frontier, backing amortized state resets.
struct PartitionFrontier {
  std::vector<std::uint64_t> cur_bits, next_bits, ever_bits;
  std::vector<vertex_t> cur, next, ever;

  void init(vertex_t local_size) {
    const std::size_t words = (static_cast<std::size_t>(local_size) + 63) / 64;
    cur_bits.assign(words, 0);
    next_bits.assign(words, 0);
    ever_bits.assign(words, 0);
  }

  static bool test(const std::vector<std::uint64_t>& bits, vertex_t local) {
    return (bits[local >> 6] >> (local & 63)) & 1;
  }
  static void set(std::vector<std::uint64_t>& bits, vertex_t local) {
    bits[local >> 6] |= std::uint64_t{1} << (local & 63);
  }
  static void clear(std::vector<std::uint64_t>& bits, vertex_t local) {
    bits[local >> 6] &= ~(std::uint64_t{1} << (local & 63));
  }
};

// Iteration-scoped work lists. Flag-guarded slot allocation keeps every
// insert idempotent: one synchronized update per (p, q) pair per iteration,
// never per message.
//
//   gpart      destination partitions that received >= 1 message (gPartList)
//   gather     gpart plus partitions that retained vertices through initFunc;
//              the gather phase claims from this merged list
//   binpart    per destination q, the source partitions that wrote into
//              column q; entries are atomics because the interleaved
//              pre-gather reads them while scatter threads still append
//   spart      partitions to scatter next iteration; rebuilt serially
struct ActiveState {
  part_t k = 0;
  std::vector<PartitionFrontier> parts;

  std::vector<std::atomic<std::uint8_t>> gpart_flag;
  std::vector<part_t> gpart_list;
  std::atomic<std::uint32_t> gpart_n{0};

  std::vector<std::atomic<std::uint8_t>> gather_flag;
  std::vector<part_t> gather_list;
  std::atomic<std::uint32_t> gather_n{0};

  std::vector<std::atomic<std::uint8_t>> binpart_flag;       // [q*k + p]
  std::vector<std::atomic<std::uint32_t>> binpart_entries;   // [q*k + slot]
  std::vector<std::atomic<std::uint32_t>> binpart_n;         // per q

  std::vector<part_t> spart_list;

  static constexpr std::uint32_t kEmptySlot = 0xFFFFFFFFu;

  explicit ActiveState(const PartitionLayout& layout)
      : k(layout.k),
        parts(layout.k),
        gpart_flag(layout.k),
        gpart_list(layout.k),
        gather_flag(layout.k),
        gather_list(layout.k),
        binpart_flag(std::size_t{layout.k} * layout.k),
        binpart_entries(std::size_t{layout.k} * layout.k),
        binpart_n(layout.k) {
    for (part_t p = 0; p < k; ++p) parts[p].init(layout.part_size(p));
    for (auto& e : binpart_entries) e.store(kEmptySlot, std::memory_order_relaxed);
  }

  // First message from p into column q registers (p, q); first message into q
  // from anywhere also lists q for gather. Record publication happens before
  // this call, so a listed bin always has something visible.
  void register_message(part_t p, part_t q) {
    if (binpart_flag[std::size_t{q} * k + p].exchange(1, std::memory_order_relaxed) == 0) {
      const std::uint32_t slot = binpart_n[q].fetch_add(1, std::memory_order_relaxed);
      binpart_entries[std::size_t{q} * k + slot].store(p, std::memory_order_release);
      if (gpart_flag[q].exchange(1, std::memory_order_relaxed) == 0) {
        gpart_list[gpart_n.fetch_add(1, std::memory_order_relaxed)] = q;
      }
      register_gather(q);
    }
  }

  // initFunc retained a vertex of p: p needs a gather-phase visit for
  // filterFunc even if no messages arrive.
  void register_gather(part_t p) {
    if (gather_flag[p].exchange(1, std::memory_order_relaxed) == 0) {
      gather_list[gather_n.fetch_add(1, std::memory_order_relaxed)] = p;
    }
  }
};

}  // namespace gpop
