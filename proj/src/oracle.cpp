#include "gpop/oracle.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace gpop::oracle {

std::vector<std::int64_t> bfs_levels(const Graph& g, vertex_t root) {
  std::vector<std::int64_t> level(g.num_vertices, -1);
  std::deque<vertex_t> queue;
  level[root] = 0;
  queue.push_back(root);
  while (!queue.empty()) {
    const vertex_t v = queue.front();
    queue.pop_front();
    for (vertex_t u : g.neighbors_of(v)) {
      if (level[u] < 0) {
        level[u] = level[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return level;
}

bool bfs_tree_valid(const Graph& g, vertex_t root, const std::vector<vertex_t>& parent,
                    const std::vector<std::int64_t>& levels, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (parent.size() != g.num_vertices) return fail("parent array size mismatch");
  if (parent[root] != root) return fail("root does not point to itself");
  for (vertex_t v = 0; v < g.num_vertices; ++v) {
    const bool reached = parent[v] != kInvalidVertex;
    if (reached != (levels[v] >= 0)) {
      return fail("reachability mismatch at vertex " + std::to_string(v));
    }
    if (!reached || v == root) continue;
    const vertex_t u = parent[v];
    if (u >= g.num_vertices) return fail("parent out of range at " + std::to_string(v));
    if (!g.has_edge(u, v)) {
      return fail("parent edge " + std::to_string(u) + "->" + std::to_string(v) +
                  " not in graph");
    }
    if (levels[u] + 1 != levels[v]) {
      return fail("parent of " + std::to_string(v) + " not one level up");
    }
  }
  return true;
}

std::vector<std::uint32_t> dijkstra(const Graph& g, vertex_t root) {
  std::vector<std::uint32_t> dist(g.num_vertices, kInfDistance);
  using Entry = std::pair<std::uint32_t, vertex_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[root] = 0;
  heap.emplace(0, root);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d != dist[v]) continue;
    const auto nbrs = g.neighbors_of(v);
    const auto wts = g.weights_of(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const std::uint32_t nd = d + wts[i];
      if (nd < dist[nbrs[i]]) {
        dist[nbrs[i]] = nd;
        heap.emplace(nd, nbrs[i]);
      }
    }
  }
  return dist;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<vertex_t>(i);
  }
  vertex_t find(vertex_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void unite(vertex_t a, vertex_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<vertex_t> parent_;
};

}  // namespace

std::vector<vertex_t> connected_components(const Graph& g) {
  UnionFind uf(g.num_vertices);
  for (vertex_t v = 0; v < g.num_vertices; ++v) {
    for (vertex_t u : g.neighbors_of(v)) uf.unite(v, u);
  }
  // Union by min keeps roots at component minima; compress to labels.
  std::vector<vertex_t> label(g.num_vertices);
  for (vertex_t v = 0; v < g.num_vertices; ++v) label[v] = uf.find(v);
  return label;
}

std::vector<double> pagerank(const Graph& g, double damping, std::uint32_t iterations) {
  const double n = static_cast<double>(g.num_vertices);
  std::vector<double> rank(g.num_vertices, 1.0 / n);
  std::vector<double> incoming(g.num_vertices, 0.0);
  for (std::uint32_t it = 0; it < iterations; ++it) {
    std::fill(incoming.begin(), incoming.end(), 0.0);
    for (vertex_t v = 0; v < g.num_vertices; ++v) {
      const auto nbrs = g.neighbors_of(v);
      if (nbrs.empty()) continue;  // dangling mass is dropped, not spread
      const double share = rank[v] / static_cast<double>(nbrs.size());
      for (vertex_t u : nbrs) incoming[u] += share;
    }
    for (vertex_t v = 0; v < g.num_vertices; ++v) {
      rank[v] = (1.0 - damping) / n + damping * incoming[v];
    }
  }
  return rank;
}

NibbleResult nibble(const Graph& g, vertex_t seed, double epsilon, std::uint32_t max_iter) {
  NibbleResult result;
  result.pr.assign(g.num_vertices, 0.0);
  result.pr[seed] = 1.0;

  std::vector<vertex_t> active{seed};
  std::vector<std::uint8_t> in_set(g.num_vertices, 0);
  std::vector<double> incoming(g.num_vertices, 0.0);
  std::vector<vertex_t> touched;

  auto threshold = [&](vertex_t v) {
    return result.pr[v] >= epsilon * static_cast<double>(g.out_degree(v));
  };

  while (!active.empty() && result.frontiers.size() < max_iter) {
    std::sort(active.begin(), active.end());
    result.frontiers.push_back(active);

    // Scatter: half the mass of each active vertex spread over its out-edges.
    touched.clear();
    for (vertex_t v : active) {
      const auto nbrs = g.neighbors_of(v);
      if (nbrs.empty()) continue;
      const double share = result.pr[v] / (2.0 * static_cast<double>(nbrs.size()));
      for (vertex_t u : nbrs) {
        if (incoming[u] == 0.0) touched.push_back(u);
        incoming[u] += share;
      }
    }

    // Re-init: keep half, continue whoever still clears the threshold.
    std::vector<vertex_t> next;
    for (vertex_t v : active) {
      result.pr[v] *= 0.5;
      if (threshold(v) && !in_set[v]) {
        in_set[v] = 1;
        next.push_back(v);
      }
    }

    // Gather: deliver sums, every recipient joins the preliminary frontier.
    for (vertex_t u : touched) {
      result.pr[u] += incoming[u];
      incoming[u] = 0.0;
      if (!in_set[u]) {
        in_set[u] = 1;
        next.push_back(u);
      }
    }

    // Filter: threshold over the union.
    active.clear();
    for (vertex_t v : next) {
      in_set[v] = 0;
      if (threshold(v)) active.push_back(v);
    }
  }
  return result;
}

MessageCount message_count(const Graph& g, const PartitionLayout& layout,
                           const std::vector<vertex_t>& frontier) {
  MessageCount mc;
  for (vertex_t v : frontier) {
    const auto nbrs = g.neighbors_of(v);
    mc.ids += nbrs.size();
    std::uint64_t prev = ~std::uint64_t{0};
    for (vertex_t u : nbrs) {
      const std::uint64_t q = u / layout.per_part;
      if (q != prev) {
        ++mc.messages;  // neighbors are sorted, so partitions form runs
        prev = q;
      }
    }
  }
  return mc;
}

}  // namespace gpop::oracle
