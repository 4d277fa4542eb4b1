#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "lntopo/graph.hpp"

namespace lntopo {

enum class LinkIndex { resource_allocation, jaccard, preferential_attachment };

struct PairSource {
  enum class Kind { edges, sampled_non_edges };
  Kind kind = Kind::edges;
  std::size_t count = 100000;
  std::uint64_t seed = 1;

  static PairSource edges() { return {}; }
  static PairSource sampled_non_edges(std::size_t count, std::uint64_t seed) {
    return {Kind::sampled_non_edges, count, seed};
  }
};

/// Unordered pairs (u < v) from the source. Non-edges are drawn uniformly
/// with replacement; throws NoPairs when none exist.
std::vector<Edge> link_pairs(const TopologyGraph& g, const PairSource& source);

double link_score(const TopologyGraph& g, LinkIndex index, NodeIndex u, NodeIndex v);
double avg_link_prediction(const TopologyGraph& g, LinkIndex index, const PairSource& source);

/// Mean of alpha * |common neighbours| + (1 - alpha) * n / d(u, v) over the
/// pair set (the distance term is 0 for unreachable pairs).
double avg_common_neighbor_centrality(const TopologyGraph& g, const PairSource& source, double alpha = 0.8);

}  // namespace lntopo
