#pragma once

#include <cstdint>
#include <vector>

#include "lntopo/graph.hpp"

namespace lntopo {

std::vector<Edge> bridges(const TopologyGraph& g);
std::size_t bridge_count(const TopologyGraph& g);

/// Maximum cardinality matching (Edmonds' blossom algorithm). mate[v] is the
/// matched partner or kUnreachable.
std::vector<NodeIndex> maximum_matching(const TopologyGraph& g);
std::size_t maximum_matching_size(const TopologyGraph& g);

/// |V| - |maximum matching|. Throws UndefinedMetric if any node is isolated,
/// since no edge cover exists then.
std::size_t min_edge_cover_size(const TopologyGraph& g);

/// Reusable unit-capacity flow network for vertex-disjoint path counts.
class NodeConnectivity {
 public:
  explicit NodeConnectivity(const TopologyGraph& g);
  /// Maximum number of internally vertex-disjoint s-t paths (a direct edge
  /// counts as one path).
  std::size_t local(NodeIndex s, NodeIndex t);

 private:
  struct Arc {
    std::uint32_t to;
    std::uint32_t rev;
    std::int8_t cap;
  };
  void add_arc(std::uint32_t from, std::uint32_t to);
  std::vector<std::vector<Arc>> arcs_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> parent_;
  std::vector<std::uint32_t> queue_;
  std::vector<std::uint32_t> seen_;
  std::uint32_t epoch_ = 0;
};

double average_node_connectivity(const TopologyGraph& g);
double average_node_connectivity_sampled(const TopologyGraph& g, std::size_t pairs, std::uint64_t seed);

/// Triangles through each node.
std::vector<std::uint64_t> triangles_per_node(const TopologyGraph& g);
std::uint64_t triangle_count(const TopologyGraph& g);
/// 3 * triangles / connected triples; 0 when there are no triples.
double transitivity(const TopologyGraph& g);
std::vector<double> local_clustering(const TopologyGraph& g);
/// Mean local clustering over all nodes (degree < 2 counts as 0).
double average_clustering(const TopologyGraph& g);

}  // namespace lntopo
