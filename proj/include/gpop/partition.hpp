#pragma once

#include <vector>

#include "gpop/graph.hpp"
#include "gpop/types.hpp"

namespace gpop {

// Contiguous index ranges of ceil(V/k) vertices; partition p owns
// [p*per_part, min((p+1)*per_part, V)). The last partition may be short.
struct PartitionLayout {
  part_t k = 1;
  vertex_t per_part = 1;
  vertex_t num_vertices = 0;
  std::size_t state_bytes = 0;  // informational when k was given explicitly
  std::size_t cache_bytes = 0;

  part_t partition_of(vertex_t v) const { return v / per_part; }

  vertex_t part_begin(part_t p) const {
    return static_cast<vertex_t>(std::min<std::uint64_t>(
        std::uint64_t{p} * per_part, num_vertices));
  }
  vertex_t part_end(part_t p) const {
    return static_cast<vertex_t>(std::min<std::uint64_t>(
        (std::uint64_t{p} + 1) * per_part, num_vertices));
  }
  vertex_t part_size(part_t p) const { return part_end(p) - part_begin(p); }
};

// Smallest k such that a partition's per-vertex state fits the cache budget
// and k >= 4*threads for load balance.
part_t choose_partition_count(std::uint64_t num_vertices, std::uint64_t state_bytes,
                              std::uint64_t cache_bytes, std::uint32_t threads);

PartitionLayout make_layout(vertex_t num_vertices, part_t k);
PartitionLayout make_layout_auto(vertex_t num_vertices, std::size_t state_bytes,
                                 std::size_t cache_bytes, std::uint32_t threads);

// One cell per (source partition, destination partition) pair with traffic.
// srcs/src_counts list the vertices of p with out-neighbors in q (ascending)
// and how many they have there; dst_* hold the flattened destinations.
struct PngCell {
  part_t dst_part = 0;
  std::uint64_t src_begin = 0, src_end = 0;
  std::uint64_t dst_begin = 0, dst_end = 0;

  std::uint64_t src_count() const { return src_end - src_begin; }
  std::uint64_t dst_count() const { return dst_end - dst_begin; }
};

// Partition-node bipartite layout driving partition-centric scatter. Static:
// built once, reused every iteration.
struct Png {
  part_t k = 0;
  std::vector<PngCell> cells;              // grouped by source partition, dst ascending
  std::vector<std::uint64_t> part_cells;   // k+1 offsets into cells
  std::vector<std::int32_t> cell_lookup;   // k*k -> cell index or -1

  std::vector<vertex_t> srcs;
  std::vector<std::uint32_t> src_counts;   // parallel to srcs
  std::vector<vertex_t> dst_global;
  std::vector<vertex_t> dst_local;         // dst_global minus the owning partition base
  std::vector<std::uint32_t> dst_weights;  // parallel to dst_global, weighted graphs only

  std::vector<std::uint64_t> part_out_edges;  // E_p
  std::vector<std::uint64_t> part_messages;   // sum of out-partition-degrees over p
  std::vector<double> aggregation;            // r_p = part_messages / E_p (0 if E_p = 0)
  std::vector<std::uint32_t> out_part_degree; // per vertex

  const PngCell* cell(part_t p, part_t q) const {
    const std::int32_t idx = cell_lookup[std::size_t{p} * k + q];
    return idx < 0 ? nullptr : &cells[static_cast<std::size_t>(idx)];
  }
};

Png build_png(const Graph& g, const PartitionLayout& layout);

// Preallocation sizes for the message bins. Value capacity is one slot per
// listed source; the id stream takes one header slot per record plus the
// destination ids (and interleaved weights when the graph is weighted).
struct BinCapacities {
  std::vector<std::uint32_t> value_cap;  // aligned with png.cells
  std::vector<std::uint32_t> id_cap;
};

BinCapacities bin_capacities(const Png& png, bool weighted = false);

}  // namespace gpop
