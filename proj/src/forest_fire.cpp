#include <algorithm>

#include "lntopo/error.hpp"
#include "lntopo/graph.hpp"
#include "lntopo/random.hpp"

namespace lntopo {

std::vector<std::vector<NodeIndex>> forestfire_node_sets(const TopologyGraph& g, const ForestFireConfig& config) {
  const auto component = largest_component_nodes(g);
  if (component.size() < config.target_size || component.empty()) {
    throw Error(ErrorCode::ComponentTooSmall, "largest component has " + std::to_string(component.size()) +
                                                  " nodes, need " + std::to_string(config.target_size));
  }
  Rng rng(config.seed);
  std::vector<std::vector<NodeIndex>> samples;
  samples.reserve(config.count);
  std::vector<char> burned(g.node_count(), 0);
  std::vector<NodeIndex> queue;
  for (std::size_t s = 0; s < config.count; ++s) {
    std::vector<NodeIndex> sample;
    sample.reserve(config.target_size);
    auto burn = [&](NodeIndex v) {
      burned[v] = 1;
      sample.push_back(v);
      queue.push_back(v);
    };
    queue.clear();
    std::size_t head = 0;
    if (config.target_size > 0) burn(component[rng.uniform_index(component.size())]);
    while (sample.size() < config.target_size) {
      if (head == queue.size()) {
        // Fire died out: re-ignite from a random burned node.
        queue.push_back(sample[rng.uniform_index(sample.size())]);
      }
      const NodeIndex v = queue[head++];
      for (NodeIndex u : g.neighbors(v)) {
        if (burned[u] || !rng.bernoulli(config.p_forward)) continue;
        burn(u);
        if (sample.size() == config.target_size) break;
      }
    }
    for (NodeIndex v : sample) burned[v] = 0;
    std::sort(sample.begin(), sample.end());
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::vector<TopologyGraph> sample_forestfire(const TopologyGraph& g, const ForestFireConfig& config) {
  std::vector<TopologyGraph> out;
  for (const auto& nodes : forestfire_node_sets(g, config)) out.push_back(induced_subgraph(g, nodes));
  return out;
}

}  // namespace lntopo
