#include "gpop/partition.hpp"

#include <algorithm>

namespace gpop {

part_t choose_partition_count(std::uint64_t num_vertices, std::uint64_t state_bytes,
                              std::uint64_t cache_bytes, std::uint32_t threads) {
  // Cache constraint on the *rounded-up* partition size: ceil(V/k) vertices
  // must fit, so k must be at least V / floor(cache/state).
  const std::uint64_t per_part_cap = state_bytes == 0 ? num_vertices
                                    : cache_bytes / state_bytes;
  std::uint64_t k_cache;
  if (per_part_cap == 0) {
    k_cache = num_vertices;  // a single vertex overflows the budget; best effort
  } else {
    k_cache = (num_vertices + per_part_cap - 1) / per_part_cap;
  }
  k_cache = std::max<std::uint64_t>(k_cache, 1);
  const std::uint64_t k = std::max<std::uint64_t>(k_cache, 4ull * threads);
  return static_cast<part_t>(k);
}

PartitionLayout make_layout(vertex_t num_vertices, part_t k) {
  if (k == 0) throw config_error("partition count must be positive");
  PartitionLayout layout;
  layout.k = k;
  layout.num_vertices = num_vertices;
  layout.per_part = num_vertices == 0
                        ? 1
                        : static_cast<vertex_t>((std::uint64_t{num_vertices} + k - 1) / k);
  if (layout.per_part == 0) layout.per_part = 1;
  return layout;
}

PartitionLayout make_layout_auto(vertex_t num_vertices, std::size_t state_bytes,
                                 std::size_t cache_bytes, std::uint32_t threads) {
  const part_t k = choose_partition_count(num_vertices, state_bytes, cache_bytes, threads);
  PartitionLayout layout = make_layout(num_vertices, k);
  layout.state_bytes = state_bytes;
  layout.cache_bytes = cache_bytes;
  return layout;
}

Png build_png(const Graph& g, const PartitionLayout& layout) {
  const part_t k = layout.k;
  Png png;
  png.k = k;
  png.part_cells.assign(std::size_t{k} + 1, 0);
  png.cell_lookup.assign(std::size_t{k} * k, -1);
  png.part_out_edges.assign(k, 0);
  png.part_messages.assign(k, 0);
  png.aggregation.assign(k, 0.0);
  png.out_part_degree.assign(g.num_vertices, 0);

  const bool weighted = g.weighted();
  std::vector<std::uint64_t> cell_srcs(k), cell_dsts(k);
  std::vector<part_t> touched;
  touched.reserve(k);

  for (part_t p = 0; p < k; ++p) {
    const vertex_t begin = layout.part_begin(p), end = layout.part_end(p);

    // Pass 1: per-destination-partition counts. Neighbors are sorted, so the
    // destination partitions of one vertex form ascending runs.
    std::fill(cell_srcs.begin(), cell_srcs.end(), 0);
    std::fill(cell_dsts.begin(), cell_dsts.end(), 0);
    touched.clear();
    for (vertex_t v = begin; v < end; ++v) {
      auto nbrs = g.neighbors_of(v);
      png.part_out_edges[p] += nbrs.size();
      std::size_t i = 0;
      std::uint32_t pdeg = 0;
      while (i < nbrs.size()) {
        const part_t q = layout.partition_of(nbrs[i]);
        std::size_t j = i + 1;
        while (j < nbrs.size() && layout.partition_of(nbrs[j]) == q) ++j;
        if (cell_srcs[q] == 0 && cell_dsts[q] == 0) touched.push_back(q);
        ++cell_srcs[q];
        cell_dsts[q] += j - i;
        ++pdeg;
        i = j;
      }
      png.out_part_degree[v] = pdeg;
      png.part_messages[p] += pdeg;
    }
    if (png.part_out_edges[p] > 0) {
      png.aggregation[p] = static_cast<double>(png.part_messages[p]) /
                           static_cast<double>(png.part_out_edges[p]);
    }

    // Pass 2: lay out this partition's cells, destinations ascending.
    std::sort(touched.begin(), touched.end());
    for (part_t q : touched) {
      PngCell cell;
      cell.dst_part = q;
      cell.src_begin = png.srcs.size();
      cell.src_end = cell.src_begin + cell_srcs[q];
      cell.dst_begin = png.dst_global.size();
      cell.dst_end = cell.dst_begin + cell_dsts[q];
      png.cell_lookup[std::size_t{p} * k + q] =
          static_cast<std::int32_t>(png.cells.size());
      png.cells.push_back(cell);
      png.srcs.resize(cell.src_end);
      png.src_counts.resize(cell.src_end);
      png.dst_global.resize(cell.dst_end);
      png.dst_local.resize(cell.dst_end);
      if (weighted) png.dst_weights.resize(cell.dst_end);
    }
    png.part_cells[p + 1] = png.cells.size();

    // Pass 3: fill, sources ascending within each cell.
    std::vector<std::uint64_t> src_cursor(touched.size()), dst_cursor(touched.size());
    for (std::size_t t = 0; t < touched.size(); ++t) {
      const PngCell& cell =
          png.cells[static_cast<std::size_t>(png.cell_lookup[std::size_t{p} * k + touched[t]])];
      src_cursor[t] = cell.src_begin;
      dst_cursor[t] = cell.dst_begin;
    }
    std::vector<std::int32_t> touch_index(k, -1);
    for (std::size_t t = 0; t < touched.size(); ++t) {
      touch_index[touched[t]] = static_cast<std::int32_t>(t);
    }
    for (vertex_t v = begin; v < end; ++v) {
      auto nbrs = g.neighbors_of(v);
      std::size_t i = 0;
      while (i < nbrs.size()) {
        const part_t q = layout.partition_of(nbrs[i]);
        std::size_t j = i + 1;
        while (j < nbrs.size() && layout.partition_of(nbrs[j]) == q) ++j;
        const std::size_t t = static_cast<std::size_t>(touch_index[q]);
        png.srcs[src_cursor[t]] = v;
        png.src_counts[src_cursor[t]] = static_cast<std::uint32_t>(j - i);
        ++src_cursor[t];
        const vertex_t base = layout.part_begin(q);
        for (std::size_t n = i; n < j; ++n) {
          png.dst_global[dst_cursor[t]] = nbrs[n];
          png.dst_local[dst_cursor[t]] = nbrs[n] - base;
          if (weighted) png.dst_weights[dst_cursor[t]] = g.weights[g.offsets[v] + n];
          ++dst_cursor[t];
        }
        i = j;
      }
    }
  }
  return png;
}

BinCapacities bin_capacities(const Png& png, bool weighted) {
  BinCapacities caps;
  caps.value_cap.reserve(png.cells.size());
  caps.id_cap.reserve(png.cells.size());
  for (const PngCell& cell : png.cells) {
    caps.value_cap.push_back(static_cast<std::uint32_t>(cell.src_count()));
    const std::uint64_t per_dst = weighted ? 2 : 1;
    caps.id_cap.push_back(
        static_cast<std::uint32_t>(cell.dst_count() * per_dst + cell.src_count()));
  }
  return caps;
}

}  // namespace gpop
