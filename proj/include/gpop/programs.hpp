#pragma once

#include <cstdint>
#include <vector>

#include "gpop/graph.hpp"
#include "gpop/program.hpp"
#include "gpop/types.hpp"

namespace gpop {

// Topological PageRank: every vertex stays active, value reset between
// scatter and gather, damping applied in filter. Zero-out-degree vertices
// emit nothing (their mass is dropped, not redistributed).
class PageRankProgram {
 public:
  using value_type = double;
  static constexpr bool idempotent_gather = false;
  static constexpr bool all_active = true;
  static constexpr bool weighted = false;
  static constexpr bool pc_safe = true;  // frontier is always the whole set
  static constexpr std::uint32_t value_bytes = 8;
  static constexpr std::size_t state_bytes = 16;  // rank + degree lookup

  PageRankProgram(const Graph& g, double damping)
      : graph_(&g),
        damping_(damping),
        base_((1.0 - damping) / static_cast<double>(g.num_vertices)),
        rank_(g.num_vertices, 1.0 / static_cast<double>(g.num_vertices)) {
    if (damping <= 0.0 || damping >= 1.0) throw config_error("damping must be in (0, 1)");
  }

  // Only called for vertices that emit messages, i.e. out_degree > 0.
  value_type scatter_value(vertex_t v) const {
    return rank_[v] / static_cast<double>(graph_->out_degree(v));
  }
  bool init(vertex_t v) {
    rank_[v] = 0.0;
    return true;
  }
  bool gather(value_type val, vertex_t v) {
    rank_[v] += val;
    return true;
  }
  bool filter(vertex_t v) {
    rank_[v] = base_ + damping_ * rank_[v];
    return true;
  }

  const std::vector<double>& ranks() const { return rank_; }

  void reset() {
    rank_.assign(graph_->num_vertices, 1.0 / static_cast<double>(graph_->num_vertices));
  }

 private:
  const Graph* graph_;
  double damping_;
  double base_;
  std::vector<double> rank_;
};

// BFS parents. Unvisited vertices scatter kInvalidVertex so that stale
// partition-centric messages cannot claim parenthood; active vertices are
// always visited, so source-centric behavior is unchanged.
class BfsProgram {
 public:
  using value_type = vertex_t;
  static constexpr bool idempotent_gather = false;
  static constexpr bool all_active = false;
  static constexpr bool weighted = false;
  static constexpr bool pc_safe = true;
  static constexpr std::uint32_t value_bytes = 4;
  static constexpr std::size_t state_bytes = 4;

  BfsProgram(const Graph& g, vertex_t root)
      : root_(root), parent_(g.num_vertices, kInvalidVertex) {
    if (root >= g.num_vertices) throw config_error("bfs root out of range");
    parent_[root] = root;
  }

  value_type scatter_value(vertex_t v) const {
    return parent_[v] == kInvalidVertex ? kInvalidVertex : v;
  }
  bool init(vertex_t) { return false; }
  bool gather(value_type val, vertex_t v) {
    if (val != kInvalidVertex && parent_[v] == kInvalidVertex) {
      parent_[v] = val;
      return true;
    }
    return false;
  }
  bool filter(vertex_t) { return true; }

  const std::vector<vertex_t>& parents() const { return parent_; }
  vertex_t root() const { return root_; }

  void reset(vertex_t root) {
    parent_.assign(parent_.size(), kInvalidVertex);
    root_ = root;
    parent_[root] = root;
  }

 private:
  vertex_t root_;
  std::vector<vertex_t> parent_;
};

// Bellman-Ford distances over positive integer weights.
class SsspProgram {
 public:
  using value_type = std::uint32_t;
  static constexpr bool idempotent_gather = true;  // min is replay-safe
  static constexpr bool all_active = false;
  static constexpr bool weighted = true;
  static constexpr bool pc_safe = true;
  static constexpr std::uint32_t value_bytes = 4;
  static constexpr std::size_t state_bytes = 4;

  SsspProgram(const Graph& g, vertex_t root)
      : root_(root), distance_(g.num_vertices, kInfDistance) {
    if (!g.weighted()) throw config_error("sssp requires a weighted graph");
    if (root >= g.num_vertices) throw config_error("sssp root out of range");
    distance_[root] = 0;
  }

  value_type scatter_value(vertex_t v) const { return distance_[v]; }
  // kInfDistance leaves headroom, so the sentinel scattered from unreached
  // vertices in PC mode stays above every real distance instead of wrapping.
  value_type apply_weight(value_type val, std::uint32_t w) const { return val + w; }
  bool init(vertex_t) { return false; }
  bool gather(value_type val, vertex_t v) {
    if (val < distance_[v]) {
      distance_[v] = val;
      return true;
    }
    return false;
  }
  bool filter(vertex_t) { return true; }

  const std::vector<std::uint32_t>& distances() const { return distance_; }
  vertex_t root() const { return root_; }

  void reset(vertex_t root) {
    distance_.assign(distance_.size(), kInfDistance);
    root_ = root;
    distance_[root] = 0;
  }

 private:
  vertex_t root_;
  std::vector<std::uint32_t> distance_;
};

// Connected components by min-label propagation. Run over a symmetrized
// graph; every vertex starts active with its own id.
class CcProgram {
 public:
  using value_type = vertex_t;
  static constexpr bool idempotent_gather = true;
  static constexpr bool all_active = false;
  static constexpr bool weighted = false;
  static constexpr bool pc_safe = true;
  static constexpr std::uint32_t value_bytes = 4;
  static constexpr std::size_t state_bytes = 4;

  explicit CcProgram(const Graph& g) : label_(g.num_vertices) {
    for (vertex_t v = 0; v < g.num_vertices; ++v) label_[v] = v;
  }

  value_type scatter_value(vertex_t v) const { return label_[v]; }
  bool init(vertex_t) { return false; }
  bool gather(value_type val, vertex_t v) {
    if (val < label_[v]) {
      label_[v] = val;
      return true;
    }
    return false;
  }
  bool filter(vertex_t) { return true; }

  const std::vector<vertex_t>& labels() const { return label_; }

  void reset() {
    for (vertex_t v = 0; v < label_.size(); ++v) label_[v] = v;
  }

 private:
  std::vector<vertex_t> label_;
};

// Seeded random-walk probability diffusion. A vertex keeps half its mass and
// scatters the rest; the frontier is whoever still clears the degree-scaled
// threshold, whether or not any message arrived. SC-only: inactive vertices
// hold mass they have not released, so partition-centric replay would
// inflate the distribution.
class NibbleProgram {
 public:
  using value_type = double;
  static constexpr bool idempotent_gather = false;
  static constexpr bool all_active = false;
  static constexpr bool weighted = false;
  static constexpr bool pc_safe = false;
  static constexpr std::uint32_t value_bytes = 8;
  static constexpr std::size_t state_bytes = 16;  // probability + degree lookup

  NibbleProgram(const Graph& g, vertex_t seed, double epsilon)
      : graph_(&g), epsilon_(epsilon), seed_(seed), pr_(g.num_vertices, 0.0) {
    if (seed >= g.num_vertices) throw config_error("nibble seed out of range");
    if (epsilon <= 0.0) throw config_error("nibble epsilon must be positive");
    pr_[seed] = 1.0;
  }

  value_type scatter_value(vertex_t v) const {
    return pr_[v] / (2.0 * static_cast<double>(graph_->out_degree(v)));
  }
  bool init(vertex_t v) {
    pr_[v] *= 0.5;
    return above_threshold(v);
  }
  bool gather(value_type val, vertex_t v) {
    pr_[v] += val;
    return true;
  }
  bool filter(vertex_t v) { return above_threshold(v); }

  const std::vector<double>& probabilities() const { return pr_; }
  vertex_t seed() const { return seed_; }

  void reset_full(vertex_t seed) {
    pr_.assign(pr_.size(), 0.0);
    seed_ = seed;
    pr_[seed] = 1.0;
  }

  // Amortized reset across repeated runs: clear only the entries a previous
  // run touched (the engine tracks them), then reseed.
  void clear_probability(vertex_t v) { pr_[v] = 0.0; }
  void seed_probability(vertex_t seed) {
    seed_ = seed;
    pr_[seed] = 1.0;
  }

 private:
  bool above_threshold(vertex_t v) const {
    return pr_[v] >= epsilon_ * static_cast<double>(graph_->out_degree(v));
  }

  const Graph* graph_;
  double epsilon_;
  vertex_t seed_;
  std::vector<double> pr_;
};

static_assert(VertexProgram<PageRankProgram>);
static_assert(VertexProgram<BfsProgram>);
static_assert(VertexProgram<SsspProgram>);
static_assert(VertexProgram<CcProgram>);
static_assert(VertexProgram<NibbleProgram>);

}  // namespace gpop
