#include "gpop/edge_list.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace gpop {

namespace {

bool parse_u32(const std::string& tok, std::uint64_t& out) {
  if (tok.empty()) return false;
  std::uint64_t val = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9') return false;
    val = val * 10 + static_cast<std::uint64_t>(ch - '0');
    if (val > 0xFFFFFFFFull) return false;
  }
  out = val;
  return true;
}

}  // namespace

EdgeList load_edge_list(std::istream& in, bool weighted) {
  EdgeList el;
  el.weighted = weighted;

  bool have_header = false;
  std::uint64_t max_id = 0;
  bool saw_edge = false;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#' || line[0] == '%') {
      if (line[0] == '#') {
        // "# vertices N" fixes the count.
        std::istringstream hs(line.substr(1));
        std::string word;
        if (hs >> word && word == "vertices") {
          std::uint64_t n = 0;
          std::string tok;
          if (hs >> tok && parse_u32(tok, n)) {
            el.num_vertices = static_cast<vertex_t>(n);
            have_header = true;
          }
        }
      }
      continue;
    }

    std::istringstream ls(line);
    std::string stok, dtok, wtok;
    if (!(ls >> stok >> dtok)) {
      throw parse_error("edge list line " + std::to_string(lineno) + ": expected 'src dst'");
    }
    std::uint64_t src = 0, dst = 0;
    if (!parse_u32(stok, src) || !parse_u32(dtok, dst)) {
      throw parse_error("edge list line " + std::to_string(lineno) + ": malformed vertex id");
    }

    Edge e;
    e.src = static_cast<vertex_t>(src);
    e.dst = static_cast<vertex_t>(dst);
    if (weighted) {
      if (!(ls >> wtok)) {
        throw parse_error("edge list line " + std::to_string(lineno) + ": missing weight");
      }
      std::uint64_t w = 0;
      if (!parse_u32(wtok, w) || w == 0) {
        throw parse_error("edge list line " + std::to_string(lineno) +
                          ": weight must be a positive integer");
      }
      e.weight = static_cast<std::uint32_t>(w);
    }
    std::string extra;
    if (ls >> extra) {
      throw parse_error("edge list line " + std::to_string(lineno) + ": trailing token '" +
                        extra + "'");
    }

    max_id = std::max(max_id, std::max(src, dst));
    saw_edge = true;
    el.edges.push_back(e);
  }

  if (!have_header) {
    el.num_vertices = saw_edge ? static_cast<vertex_t>(max_id + 1) : 0;
  } else if (saw_edge && max_id >= el.num_vertices) {
    throw parse_error("edge list: vertex id " + std::to_string(max_id) +
                      " exceeds declared vertex count " + std::to_string(el.num_vertices));
  }
  return el;
}

EdgeList symmetrize(const EdgeList& el) {
  EdgeList out = el;
  out.edges.reserve(el.edges.size() * 2);
  for (const Edge& e : el.edges) {
    out.edges.push_back({e.dst, e.src, e.weight});
  }
  return out;
}

EdgeList generate_rmat(const RmatParams& params) {
  const double sum = params.a + params.b + params.c + params.d;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw config_error("rmat quadrant probabilities must sum to 1");
  }
  if (params.scale < 1 || params.scale > 31) {
    throw config_error("rmat scale must be in [1, 31]");
  }

  EdgeList el;
  el.num_vertices = vertex_t{1} << params.scale;
  const std::uint64_t num_edges =
      static_cast<std::uint64_t>(params.avg_degree) << params.scale;
  el.edges.reserve(num_edges);

  std::mt19937_64 rng(params.seed);
  auto uniform = [&rng]() {
    // 53 random bits into [0, 1); avoids distribution objects so the stream
    // is pinned by the standardized engine alone.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  const double ab = params.a + params.b;
  const double abc = ab + params.c;
  for (std::uint64_t i = 0; i < num_edges; ++i) {
    vertex_t row = 0, col = 0;
    for (std::uint32_t level = 0; level < params.scale; ++level) {
      const double r = uniform();
      row <<= 1;
      col <<= 1;
      if (r < params.a) {
        // top-left
      } else if (r < ab) {
        col |= 1;
      } else if (r < abc) {
        row |= 1;
      } else {
        row |= 1;
        col |= 1;
      }
    }
    el.edges.push_back({row, col, 0});
  }
  return el;
}

}  // namespace gpop
