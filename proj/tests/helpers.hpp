#pragma once

#include <initializer_list>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "gpop/edge_list.hpp"
#include "gpop/engine.hpp"
#include "gpop/graph.hpp"

namespace gpop::test {

inline Graph make_graph(vertex_t num_vertices,
                        std::initializer_list<std::pair<vertex_t, vertex_t>> edges) {
  EdgeList el;
  el.num_vertices = num_vertices;
  for (auto [s, d] : edges) el.edges.push_back({s, d, 0});
  return build_csr(el);
}

inline Graph make_weighted_graph(
    vertex_t num_vertices,
    std::initializer_list<std::tuple<vertex_t, vertex_t, std::uint32_t>> edges) {
  EdgeList el;
  el.num_vertices = num_vertices;
  el.weighted = true;
  for (auto [s, d, w] : edges) el.edges.push_back({s, d, w});
  return build_csr(el);
}

// Directed chain 0 -> 1 -> ... -> n-1.
inline Graph make_chain(vertex_t n) {
  EdgeList el;
  el.num_vertices = n;
  for (vertex_t v = 0; v + 1 < n; ++v) el.edges.push_back({v, v + 1, 0});
  return build_csr(el);
}

inline Graph make_random_graph(vertex_t n, std::uint64_t num_edges, std::uint64_t seed) {
  EdgeList el;
  el.num_vertices = n;
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < num_edges; ++i) {
    el.edges.push_back({static_cast<vertex_t>(rng() % n), static_cast<vertex_t>(rng() % n), 0});
  }
  return build_csr(el);
}

inline Graph make_rmat_graph(std::uint32_t scale, std::uint64_t seed,
                             std::uint32_t degree = 16) {
  RmatParams params;
  params.scale = scale;
  params.avg_degree = degree;
  params.seed = seed;
  return build_csr(generate_rmat(params));
}

// Owns the layout and PNG an Engine borrows.
template <VertexProgram P>
class TestRun {
 public:
  TestRun(const Graph& g, P& program, EngineConfig ec, part_t k_override = 0)
      : layout_(k_override > 0
                    ? make_layout(g.num_vertices, k_override)
                    : make_layout_auto(g.num_vertices,
                                       P::state_bytes + kFrontierBytesPerVertex, 262144,
                                       ec.threads)),
        png_(build_png(g, layout_)),
        engine_(g, layout_, png_, program, ec) {}

  Engine<P>& engine() { return engine_; }
  const PartitionLayout& layout() const { return layout_; }
  const Png& png() const { return png_; }

 private:
  PartitionLayout layout_;
  Png png_;
  Engine<P> engine_;
};

}  // namespace gpop::test
