#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace gpop {

using vertex_t = std::uint32_t;
using edge_off_t = std::uint64_t;
using part_t = std::uint32_t;

// Sentinel for "no vertex" (BFS parent, unfilled list slots).
inline constexpr vertex_t kInvalidVertex = std::numeric_limits<vertex_t>::max();

// Unreached distance. Half the range so adding an edge weight to it can
// never wrap; stale values scattered in partition-centric mode therefore
// stay comparable instead of overflowing.
inline constexpr std::uint32_t kInfDistance = std::numeric_limits<std::uint32_t>::max() / 2;

struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant violations (bin overflow, stream framing corruption).
struct engine_error : std::logic_error {
  explicit engine_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace gpop
