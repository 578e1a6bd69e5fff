#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "gpop/edge_list.hpp"
#include "gpop/types.hpp"

namespace gpop {

// Immutable CSR over out-edges. Neighbors of each vertex are sorted ascending
// (canonical order), duplicates and self-loops preserved.
struct Graph {
  vertex_t num_vertices = 0;
  edge_off_t num_edges = 0;
  std::vector<edge_off_t> offsets;    // num_vertices + 1
  std::vector<vertex_t> neighbors;    // num_edges
  std::vector<std::uint32_t> weights;  // num_edges when weighted
  bool has_weights = false;  // explicit so an edgeless graph can be weighted

  bool weighted() const { return has_weights; }

  edge_off_t out_degree(vertex_t v) const { return offsets[v + 1] - offsets[v]; }

  std::span<const vertex_t> neighbors_of(vertex_t v) const {
    return {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1]};
  }

  std::span<const std::uint32_t> weights_of(vertex_t v) const {
    return {weights.data() + offsets[v], weights.data() + offsets[v + 1]};
  }

  bool has_edge(vertex_t u, vertex_t v) const;
};

Graph build_csr(const EdgeList& el);

// Expands to an edge list, adds reverses, rebuilds. Keeps any weights.
Graph symmetrize_csr(const Graph& g);

// Weight range [1, max(1, ceil(log2 V))] used for synthetic weighted inputs.
std::uint32_t max_synthetic_weight(vertex_t num_vertices);

// Uniform integer weights in [1, max_synthetic_weight(V)], deterministic per
// seed. The graph must be unweighted and have at least two vertices.
void assign_weights(Graph& g, std::uint64_t seed);

// Binary cache: magic "GPOPCSR1", V and E as 8-byte LE, offsets (V+1 x 8B),
// neighbors (E x 4B), weight flag byte, weights (E x 4B) if flagged.
void write_binary(const Graph& g, std::ostream& out);
Graph read_binary(std::istream& in);

}  // namespace gpop
