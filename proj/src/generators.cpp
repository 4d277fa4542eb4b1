#include <set>

#include "lntopo/error.hpp"
#include "lntopo/graph.hpp"
#include "lntopo/random.hpp"

namespace lntopo {

TopologyGraph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw Error(ErrorCode::GraphTooSmall, "barabasi_albert needs 1 <= m < n");
  Rng rng(seed);
  std::vector<Edge> edges;
  std::vector<NodeIndex> repeated;  // each node once per incident edge
  for (NodeIndex leaf = 1; leaf <= m; ++leaf) {
    edges.emplace_back(0, leaf);
    repeated.push_back(0);
    repeated.push_back(leaf);
  }
  for (auto source = static_cast<NodeIndex>(m + 1); source < n; ++source) {
    std::set<NodeIndex> targets;
    while (targets.size() < m) targets.insert(repeated[rng.uniform_index(repeated.size())]);
    for (NodeIndex t : targets) {
      edges.emplace_back(source, t);
      repeated.push_back(t);
      repeated.push_back(source);
    }
  }
  return TopologyGraph::from_edges(n, edges);
}

TopologyGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeIndex u = 0; u < n; ++u) {
    for (NodeIndex v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  return TopologyGraph::from_edges(n, edges);
}

}  // namespace lntopo
