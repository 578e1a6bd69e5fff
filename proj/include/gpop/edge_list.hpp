#pragma once

#include <istream>
#include <vector>

#include "gpop/types.hpp"

namespace gpop {

struct Edge {
  vertex_t src = 0;
  vertex_t dst = 0;
  std::uint32_t weight = 0;  // meaningful only when the list is weighted
};

struct EdgeList {
  vertex_t num_vertices = 0;
  bool weighted = false;
  std::vector<Edge> edges;
};

// Parses whitespace-separated "src dst" (or "src dst w") lines. Lines starting
// with '#' or '%' are comments; a "# vertices N" header fixes the vertex count,
// otherwise it is 1 + max id seen. Duplicate edges and self-loops are kept.
EdgeList load_edge_list(std::istream& in, bool weighted);

// Appends the reverse of every edge (used to run label propagation over
// directed inputs). Weights are mirrored.
EdgeList symmetrize(const EdgeList& el);

struct RmatParams {
  std::uint32_t scale = 10;
  std::uint32_t avg_degree = 16;
  double a = 0.57, b = 0.19, c = 0.19, d = 0.05;  // Graph500 defaults
  std::uint64_t seed = 42;
};

// 2^scale vertices, avg_degree * 2^scale edges by recursive quadrant
// selection. Deterministic for a fixed seed.
EdgeList generate_rmat(const RmatParams& params);

}  // namespace gpop
