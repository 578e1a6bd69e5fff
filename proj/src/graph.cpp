#include "gpop/graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>

namespace gpop {

static_assert(std::endian::native == std::endian::little,
              "binary cache serialization assumes a little-endian host");

bool Graph::has_edge(vertex_t u, vertex_t v) const {
  auto nbrs = neighbors_of(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

Graph build_csr(const EdgeList& el) {
  Graph g;
  g.num_vertices = el.num_vertices;
  g.num_edges = el.edges.size();
  g.offsets.assign(static_cast<std::size_t>(g.num_vertices) + 1, 0);

  for (const Edge& e : el.edges) {
    if (e.src >= g.num_vertices || e.dst >= g.num_vertices) {
      throw parse_error("edge endpoint out of range");
    }
    ++g.offsets[e.src + 1];
  }
  std::partial_sum(g.offsets.begin(), g.offsets.end(), g.offsets.begin());

  g.neighbors.resize(g.num_edges);
  g.has_weights = el.weighted;
  if (el.weighted) g.weights.resize(g.num_edges);

  std::vector<edge_off_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const Edge& e : el.edges) {
    const edge_off_t pos = cursor[e.src]++;
    g.neighbors[pos] = e.dst;
    if (el.weighted) g.weights[pos] = e.weight;
  }

  // Canonical order: neighbors ascending within each source, ties broken by
  // weight so duplicate edges land deterministically.
  for (vertex_t v = 0; v < g.num_vertices; ++v) {
    const edge_off_t lo = g.offsets[v], hi = g.offsets[v + 1];
    if (el.weighted) {
      std::vector<std::pair<vertex_t, std::uint32_t>> adj;
      adj.reserve(hi - lo);
      for (edge_off_t i = lo; i < hi; ++i) adj.emplace_back(g.neighbors[i], g.weights[i]);
      std::sort(adj.begin(), adj.end());
      for (edge_off_t i = lo; i < hi; ++i) {
        g.neighbors[i] = adj[i - lo].first;
        g.weights[i] = adj[i - lo].second;
      }
    } else {
      std::sort(g.neighbors.begin() + static_cast<std::ptrdiff_t>(lo),
                g.neighbors.begin() + static_cast<std::ptrdiff_t>(hi));
    }
  }
  return g;
}

Graph symmetrize_csr(const Graph& g) {
  EdgeList el;
  el.num_vertices = g.num_vertices;
  el.weighted = g.weighted();
  el.edges.reserve(g.num_edges * 2);
  for (vertex_t v = 0; v < g.num_vertices; ++v) {
    auto nbrs = g.neighbors_of(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const std::uint32_t w = el.weighted ? g.weights_of(v)[i] : 0;
      el.edges.push_back({v, nbrs[i], w});
      el.edges.push_back({nbrs[i], v, w});
    }
  }
  return build_csr(el);
}

std::uint32_t max_synthetic_weight(vertex_t num_vertices) {
  std::uint32_t bits = 0;
  vertex_t n = num_vertices;
  while ((vertex_t{1} << bits) < n) ++bits;  // ceil(log2 n)
  return std::max<std::uint32_t>(1, bits);
}

void assign_weights(Graph& g, std::uint64_t seed) {
  if (g.weighted()) throw config_error("assign_weights: graph already weighted");
  if (g.num_vertices < 2) throw config_error("assign_weights: need at least 2 vertices");

  const std::uint32_t wmax = max_synthetic_weight(g.num_vertices);
  std::mt19937_64 rng(seed);
  g.has_weights = true;
  g.weights.resize(g.num_edges);
  for (edge_off_t i = 0; i < g.num_edges; ++i) {
    g.weights[i] = 1 + static_cast<std::uint32_t>(rng() % wmax);
  }
}

namespace {

constexpr std::array<char, 8> kMagic = {'G', 'P', 'O', 'P', 'C', 'S', 'R', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 8);
  if (!in) throw io_error("binary graph: truncated header");
  return v;
}

}  // namespace

void write_binary(const Graph& g, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, g.num_vertices);
  put_u64(out, g.num_edges);
  out.write(reinterpret_cast<const char*>(g.offsets.data()),
            static_cast<std::streamsize>(g.offsets.size() * sizeof(edge_off_t)));
  out.write(reinterpret_cast<const char*>(g.neighbors.data()),
            static_cast<std::streamsize>(g.neighbors.size() * sizeof(vertex_t)));
  const char flag = g.weighted() ? 1 : 0;
  out.write(&flag, 1);
  if (g.weighted()) {
    out.write(reinterpret_cast<const char*>(g.weights.data()),
              static_cast<std::streamsize>(g.weights.size() * sizeof(std::uint32_t)));
  }
  if (!out) throw io_error("binary graph: write failed");
}

Graph read_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw io_error("binary graph: bad magic");

  Graph g;
  const std::uint64_t v = get_u64(in);
  const std::uint64_t e = get_u64(in);
  if (v > 0xFFFFFFFFull) throw io_error("binary graph: vertex count out of range");
  g.num_vertices = static_cast<vertex_t>(v);
  g.num_edges = e;

  g.offsets.resize(v + 1);
  in.read(reinterpret_cast<char*>(g.offsets.data()),
          static_cast<std::streamsize>(g.offsets.size() * sizeof(edge_off_t)));
  g.neighbors.resize(e);
  in.read(reinterpret_cast<char*>(g.neighbors.data()),
          static_cast<std::streamsize>(g.neighbors.size() * sizeof(vertex_t)));
  char flag = 0;
  in.read(&flag, 1);
  if (!in) throw io_error("binary graph: truncated");
  if (flag) {
    g.has_weights = true;
    g.weights.resize(e);
    in.read(reinterpret_cast<char*>(g.weights.data()),
            static_cast<std::streamsize>(g.weights.size() * sizeof(std::uint32_t)));
    if (!in) throw io_error("binary graph: truncated weights");
  }

  if (g.offsets.empty() || g.offsets.front() != 0 || g.offsets.back() != e) {
    throw io_error("binary graph: inconsistent offsets");
  }
  for (std::size_t i = 1; i < g.offsets.size(); ++i) {
    if (g.offsets[i] < g.offsets[i - 1]) throw io_error("binary graph: offsets not sorted");
  }
  for (vertex_t u : g.neighbors) {
    if (u >= g.num_vertices) throw io_error("binary graph: neighbor id out of range");
  }
  return g;
}

}  // namespace gpop
