#include "lntopo/communities.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "lntopo/random.hpp"

namespace lntopo {
namespace {

class LabelCounter {
 public:
  explicit LabelCounter(std::size_t n) : count_(n, 0) {}

  // Dominant neighbour labels of v, ascending.
  const std::vector<std::uint32_t>& best(const TopologyGraph& g, const std::vector<std::uint32_t>& labels,
                                         NodeIndex v) {
    seen_.clear();
    for (NodeIndex w : g.neighbors(v)) {
      if (count_[labels[w]]++ == 0) seen_.push_back(labels[w]);
    }
    std::uint32_t top = 0;
    for (auto l : seen_) top = std::max(top, count_[l]);
    best_.clear();
    for (auto l : seen_) {
      if (count_[l] == top) best_.push_back(l);
      count_[l] = 0;
    }
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  std::vector<std::uint32_t> count_;
  std::vector<std::uint32_t> seen_;
  std::vector<std::uint32_t> best_;
};

bool contains(const std::vector<std::uint32_t>& sorted, std::uint32_t x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

void run_fast(const TopologyGraph& g, std::vector<std::uint32_t>& labels, Rng& rng) {
  const std::size_t n = g.node_count();
  std::vector<NodeIndex> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::deque<NodeIndex> queue(order.begin(), order.end());
  std::vector<char> queued(n, 1);
  LabelCounter counter(n);
  while (!queue.empty()) {
    const NodeIndex v = queue.front();
    queue.pop_front();
    queued[v] = 0;
    if (g.degree(v) == 0) continue;
    const auto& best = counter.best(g, labels, v);
    if (contains(best, labels[v])) continue;
    labels[v] = best[rng.uniform_index(best.size())];
    for (NodeIndex w : g.neighbors(v)) {
      if (!queued[w] && labels[w] != labels[v]) {
        queued[w] = 1;
        queue.push_back(w);
      }
    }
  }
}

void run_async(const TopologyGraph& g, std::vector<std::uint32_t>& labels, Rng& rng) {
  const std::size_t n = g.node_count();
  std::vector<NodeIndex> order(n);
  std::iota(order.begin(), order.end(), 0);
  LabelCounter counter(n);
  bool changed = true;
  while (changed) {
    changed = false;
    rng.shuffle(order);
    for (NodeIndex v : order) {
      if (g.degree(v) == 0) continue;
      const auto& best = counter.best(g, labels, v);
      if (contains(best, labels[v])) continue;
      labels[v] = best[rng.uniform_index(best.size())];
      changed = true;
    }
  }
}

}  // namespace

Communities label_propagation_communities(const TopologyGraph& g, LabelPropagation variant, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  Rng rng(seed);
  if (variant == LabelPropagation::fast) {
    run_fast(g, labels, rng);
  } else {
    run_async(g, labels, rng);
  }
  Communities c;
  std::vector<std::uint32_t> renumber(n, kUnreachable);
  c.labels.resize(n);
  for (NodeIndex v = 0; v < n; ++v) {
    auto& r = renumber[labels[v]];
    if (r == kUnreachable) r = static_cast<std::uint32_t>(c.count++);
    c.labels[v] = r;
  }
  return c;
}

}  // namespace lntopo
