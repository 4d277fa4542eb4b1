#include "lntopo/link_prediction.hpp"

#include <algorithm>
#include <map>

#include "lntopo/error.hpp"
#include "lntopo/random.hpp"

namespace lntopo {
namespace {

template <class F>
void for_common_neighbors(const TopologyGraph& g, NodeIndex u, NodeIndex v, F&& f) {
  const auto nu = g.neighbors(u);
  const auto nv = g.neighbors(v);
  auto i = nu.begin();
  auto j = nv.begin();
  while (i != nu.end() && j != nv.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      f(*i);
      ++i;
      ++j;
    }
  }
}

}  // namespace

std::vector<Edge> link_pairs(const TopologyGraph& g, const PairSource& source) {
  if (source.kind == PairSource::Kind::edges) {
    auto e = g.edges();
    if (e.empty()) throw Error(ErrorCode::NoPairs, "graph has no edges");
    return e;
  }
  const std::size_t n = g.node_count();
  const double possible = n < 2 ? 0.0 : static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  if (possible - static_cast<double>(g.edge_count()) < 1.0 || source.count == 0) {
    throw Error(ErrorCode::NoPairs, "graph has no non-edges");
  }
  Rng rng(source.seed);
  std::vector<Edge> out;
  out.reserve(source.count);
  while (out.size() < source.count) {
    auto u = static_cast<NodeIndex>(rng.uniform_index(n));
    auto v = static_cast<NodeIndex>(rng.uniform_index(n - 1));
    if (v >= u) ++v;
    if (u > v) std::swap(u, v);
    if (!g.has_edge(u, v)) out.emplace_back(u, v);
  }
  return out;
}

double link_score(const TopologyGraph& g, LinkIndex index, NodeIndex u, NodeIndex v) {
  switch (index) {
    case LinkIndex::resource_allocation: {
      double s = 0.0;
      for_common_neighbors(g, u, v, [&](NodeIndex w) { s += 1.0 / static_cast<double>(g.degree(w)); });
      return s;
    }
    case LinkIndex::jaccard: {
      std::size_t common = 0;
      for_common_neighbors(g, u, v, [&](NodeIndex) { ++common; });
      const std::size_t uni = g.degree(u) + g.degree(v) - common;
      return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
    }
    case LinkIndex::preferential_attachment:
      return static_cast<double>(g.degree(u)) * static_cast<double>(g.degree(v));
  }
  return 0.0;
}

double avg_link_prediction(const TopologyGraph& g, LinkIndex index, const PairSource& source) {
  const auto pairs = link_pairs(g, source);
  double sum = 0.0;
  for (auto [u, v] : pairs) sum += link_score(g, index, u, v);
  return sum / static_cast<double>(pairs.size());
}

double avg_common_neighbor_centrality(const TopologyGraph& g, const PairSource& source, double alpha) {
  auto pairs = link_pairs(g, source);
  const auto n = static_cast<double>(g.node_count());
  // Group by first endpoint so each BFS is shared; sums stay in pair order.
  std::map<NodeIndex, std::vector<std::uint32_t>> rows;
  double sum = 0.0;
  for (auto [u, v] : pairs) {
    std::size_t common = 0;
    for_common_neighbors(g, u, v, [&](NodeIndex) { ++common; });
    std::uint32_t d = 1;
    if (!g.has_edge(u, v)) {
      auto it = rows.find(u);
      if (it == rows.end()) it = rows.emplace(u, bfs_distances(g, u)).first;
      d = it->second[v];
    }
    const double reach = d == kUnreachable ? 0.0 : n / static_cast<double>(d);
    sum += alpha * static_cast<double>(common) + (1.0 - alpha) * reach;
  }
  return sum / static_cast<double>(pairs.size());
}

}  // namespace lntopo
