#pragma once

#include <cstdint>

#include "gpop/types.hpp"

namespace gpop {

enum class Mode : std::uint8_t { sc = 0, pc = 1 };

enum class ModePolicy : std::uint8_t { force_sc, force_pc, dual };

// Per-partition, per-iteration inputs to the communication model.
struct ModeInputs {
  std::uint64_t active_vertices = 0;  // V_a of the partition
  std::uint64_t active_edges = 0;     // E_a, out-edges of active vertices
  std::uint64_t part_edges = 0;       // E, all out-edges of the partition
  std::uint64_t active_messages = 0;  // exact SC message count (sum of out-partition-degrees)
  double aggregation = 0.0;           // r, messages per edge for the whole partition
  part_t k = 1;
  std::uint32_t id_bytes = 4;
  std::uint32_t value_bytes = 4;
  double bw_ratio = 2.0;      // sequential-over-random bandwidth advantage of PC
  bool exact_count = false;   // use active_messages instead of r * E_a
};

// Modeled DRAM volume of scattering + gathering the partition in each mode.
double sc_model_cost(const ModeInputs& m);
double pc_model_cost(const ModeInputs& m);

// PC wins only when its volume, discounted by the bandwidth ratio, does not
// exceed the SC volume; ties go to PC.
Mode select_mode(const ModeInputs& m);

}  // namespace gpop
