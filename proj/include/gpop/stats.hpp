#pragma once

#include <cstdint>
#include <vector>

#include "gpop/mode.hpp"

namespace gpop {

// Per-partition mode tag in IterationStats::part_mode.
inline constexpr std::int8_t kPartIdle = -1;
inline constexpr std::int8_t kPartSc = 0;
inline constexpr std::int8_t kPartPc = 1;

struct IterationStats {
  std::uint32_t index = 0;  // 1-based
  std::uint64_t frontier_before = 0;
  std::uint64_t frontier_after = 0;

  std::uint64_t messages_written = 0;  // value records appended to bins
  std::uint64_t ids_written = 0;       // SC id-stream slots: headers + destination ids
  std::uint64_t records_gathered = 0;
  std::uint64_t records_pregathered = 0;  // drained by interleaved scatter-gather
  std::uint64_t bin_opens = 0;            // bins a gather read at least one record from
  std::uint64_t empty_bin_opens = 0;      // listed bins found already drained

  std::uint32_t sc_parts = 0;
  std::uint32_t pc_parts = 0;

  double scatter_ms = 0.0;
  double gather_ms = 0.0;

  // Per-partition detail (size k when collected): mode, active vertex/edge
  // counts at scatter time, value records written.
  std::vector<std::int8_t> part_mode;
  std::vector<std::uint64_t> part_active_vertices;
  std::vector<std::uint64_t> part_active_edges;
  std::vector<std::uint64_t> part_messages;

  // Destination partitions that received messages this iteration (sorted).
  std::vector<part_t> gather_parts;
};

}  // namespace gpop
