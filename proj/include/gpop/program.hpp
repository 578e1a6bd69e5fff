#pragma once

#include <concepts>
#include <cstdint>

#include "gpop/types.hpp"

namespace gpop {

// The five-callback user-program contract. Callbacks may touch only the
// addressed vertex's state plus the passed value; the engine guarantees no
// two threads invoke a callback on the same vertex concurrently.
//
// Required static capabilities:
//   idempotent_gather  gather tolerates replay/reorder (min-style); gates ISG
//   all_active         frontier is the whole vertex set every iteration
//   weighted           apply_weight(value, weight) transforms each message
//   pc_safe            stale values scattered from inactive vertices are
//                      harmless, so partition-centric mode is allowed
//   value_bytes        message element size fed to the communication model
//   state_bytes        per-vertex array footprint for partition sizing
template <typename P>
concept VertexProgram = requires(P p, const P cp, vertex_t v,
                                 typename P::value_type val) {
  typename P::value_type;
  { cp.scatter_value(v) } -> std::same_as<typename P::value_type>;
  { p.init(v) } -> std::same_as<bool>;
  { p.gather(val, v) } -> std::same_as<bool>;
  { p.filter(v) } -> std::same_as<bool>;
  { P::idempotent_gather } -> std::convertible_to<bool>;
  { P::all_active } -> std::convertible_to<bool>;
  { P::weighted } -> std::convertible_to<bool>;
  { P::pc_safe } -> std::convertible_to<bool>;
  { P::value_bytes } -> std::convertible_to<std::uint32_t>;
  { P::state_bytes } -> std::convertible_to<std::size_t>;
};

// Engine-side frontier footprint added to a program's declared state bytes
// when auto-sizing partitions: two list slots plus bitmap bits.
inline constexpr std::size_t kFrontierBytesPerVertex = 5;

}  // namespace gpop
