#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpop/graph.hpp"
#include "gpop/partition.hpp"
#include "gpop/types.hpp"

// Serial reference implementations used as ground truth. They share no
// execution machinery with the engine: plain queues, heaps, union-find and
// dense arrays over the same canonical CSR.
namespace gpop::oracle {

// Level per vertex, -1 if unreachable.
std::vector<std::int64_t> bfs_levels(const Graph& g, vertex_t root);

// A parent array is a valid BFS tree iff the root points to itself, parents
// are set exactly for reachable vertices, every tree edge exists, and each
// parent sits one level above its child.
bool bfs_tree_valid(const Graph& g, vertex_t root, const std::vector<vertex_t>& parent,
                    const std::vector<std::int64_t>& levels, std::string* why = nullptr);

// Dijkstra with a binary heap; kInfDistance marks unreachable vertices.
std::vector<std::uint32_t> dijkstra(const Graph& g, vertex_t root);

// Min vertex id per (undirected) component via union-find. Expects the same
// symmetrized graph the engine runs on.
std::vector<vertex_t> connected_components(const Graph& g);

// Dense synchronous power iteration of the engine's recurrence, including
// the dropped mass of zero-out-degree vertices.
std::vector<double> pagerank(const Graph& g, double damping, std::uint32_t iterations);

struct NibbleResult {
  std::vector<double> pr;
  // Active set entering each iteration, sorted; frontiers.size() is the
  // number of iterations executed.
  std::vector<std::vector<vertex_t>> frontiers;
};

// Synchronous simulation of the seeded diffusion: scatter halves from the
// active set, threshold re-init, message accumulation, threshold filter.
NibbleResult nibble(const Graph& g, vertex_t seed, double epsilon, std::uint32_t max_iter);

struct MessageCount {
  std::uint64_t messages = 0;  // sum of out-partition-degrees over the frontier
  std::uint64_t ids = 0;       // sum of out-degrees over the frontier
};

MessageCount message_count(const Graph& g, const PartitionLayout& layout,
                           const std::vector<vertex_t>& frontier);

}  // namespace gpop::oracle
