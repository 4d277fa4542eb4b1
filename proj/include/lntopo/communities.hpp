#pragma once

#include <cstdint>
#include <vector>

#include "lntopo/graph.hpp"

namespace lntopo {

enum class LabelPropagation { fast, async };

struct Communities {
  std::size_t count = 0;
  std::vector<std::uint32_t> labels;  // renumbered 0..count-1 by first node
};

Communities label_propagation_communities(const TopologyGraph& g, LabelPropagation variant, std::uint64_t seed);

}  // namespace lntopo
