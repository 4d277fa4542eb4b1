#include "lntopo/connectivity.hpp"

#include <algorithm>

#include "lntopo/error.hpp"
#include "lntopo/random.hpp"

namespace lntopo {

std::vector<Edge> bridges(const TopologyGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> disc(n, kUnreachable);
  std::vector<std::uint32_t> low(n, 0);
  std::vector<Edge> out;
  struct Frame {
    NodeIndex v;
    NodeIndex parent;
    std::size_t next;
  };
  std::vector<Frame> stack;
  std::uint32_t timer = 0;
  for (NodeIndex root = 0; root < n; ++root) {
    if (disc[root] != kUnreachable) continue;
    disc[root] = low[root] = timer++;
    stack.push_back({root, kUnreachable, 0});
    while (!stack.empty()) {
      auto& f = stack.back();
      const auto nb = g.neighbors(f.v);
      if (f.next < nb.size()) {
        const NodeIndex w = nb[f.next++];
        if (w == f.parent) continue;
        if (disc[w] == kUnreachable) {
          disc[w] = low[w] = timer++;
          stack.push_back({w, f.v, 0});
        } else {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (done.parent != kUnreachable) {
        low[done.parent] = std::min(low[done.parent], low[done.v]);
        if (low[done.v] > disc[done.parent]) {
          out.emplace_back(std::min(done.v, done.parent), std::max(done.v, done.parent));
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t bridge_count(const TopologyGraph& g) { return bridges(g).size(); }

namespace {

class Blossom {
 public:
  explicit Blossom(const TopologyGraph& g)
      : g_(g), n_(g.node_count()), mate_(n_, kUnreachable), parent_(n_), base_(n_), used_(n_), in_blossom_(n_),
        lca_mark_(n_, 0) {}

  std::vector<NodeIndex> run() {
    // Greedy start keeps the number of augmenting searches small.
    for (NodeIndex v = 0; v < n_; ++v) {
      if (mate_[v] != kUnreachable) continue;
      for (NodeIndex w : g_.neighbors(v)) {
        if (mate_[w] == kUnreachable) {
          mate_[v] = w;
          mate_[w] = v;
          break;
        }
      }
    }
    for (NodeIndex root = 0; root < n_; ++root) {
      if (mate_[root] != kUnreachable || g_.degree(root) == 0) continue;
      NodeIndex v = find_augmenting_path(root);
      while (v != kUnreachable) {
        const NodeIndex pv = parent_[v];
        const NodeIndex ppv = mate_[pv];
        mate_[v] = pv;
        mate_[pv] = v;
        v = ppv;
      }
    }
    return mate_;
  }

 private:
  NodeIndex lca(NodeIndex a, NodeIndex b) {
    ++lca_epoch_;
    while (true) {
      a = base_[a];
      lca_mark_[a] = lca_epoch_;
      if (mate_[a] == kUnreachable) break;
      a = parent_[mate_[a]];
    }
    while (true) {
      b = base_[b];
      if (lca_mark_[b] == lca_epoch_) return b;
      b = parent_[mate_[b]];
    }
  }

  void mark_path(NodeIndex v, NodeIndex b, NodeIndex child) {
    while (base_[v] != b) {
      in_blossom_[base_[v]] = 1;
      in_blossom_[base_[mate_[v]]] = 1;
      parent_[v] = child;
      child = mate_[v];
      v = parent_[mate_[v]];
    }
  }

  NodeIndex find_augmenting_path(NodeIndex root) {
    std::fill(used_.begin(), used_.end(), 0);
    std::fill(parent_.begin(), parent_.end(), kUnreachable);
    for (NodeIndex i = 0; i < n_; ++i) base_[i] = i;
    used_[root] = 1;
    queue_.clear();
    queue_.push_back(root);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const NodeIndex v = queue_[head];
      for (NodeIndex to : g_.neighbors(v)) {
        if (base_[v] == base_[to] || mate_[v] == to) continue;
        if (to == root || (mate_[to] != kUnreachable && parent_[mate_[to]] != kUnreachable)) {
          const NodeIndex cur = lca(v, to);
          std::fill(in_blossom_.begin(), in_blossom_.end(), 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (NodeIndex i = 0; i < n_; ++i) {
            if (in_blossom_[base_[i]]) {
              base_[i] = cur;
              if (!used_[i]) {
                used_[i] = 1;
                queue_.push_back(i);
              }
            }
          }
        } else if (parent_[to] == kUnreachable) {
          parent_[to] = v;
          if (mate_[to] == kUnreachable) return to;
          const NodeIndex next = mate_[to];
          used_[next] = 1;
          queue_.push_back(next);
        }
      }
    }
    return kUnreachable;
  }

  const TopologyGraph& g_;
  std::size_t n_;
  std::vector<NodeIndex> mate_;
  std::vector<NodeIndex> parent_;
  std::vector<NodeIndex> base_;
  std::vector<char> used_;
  std::vector<char> in_blossom_;
  std::vector<std::uint32_t> lca_mark_;
  std::uint32_t lca_epoch_ = 0;
  std::vector<NodeIndex> queue_;
};

}  // namespace

std::vector<NodeIndex> maximum_matching(const TopologyGraph& g) { return Blossom(g).run(); }

std::size_t maximum_matching_size(const TopologyGraph& g) {
  const auto mate = maximum_matching(g);
  return static_cast<std::size_t>(std::count_if(mate.begin(), mate.end(), [](NodeIndex m) { return m != kUnreachable; })) /
         2;
}

std::size_t min_edge_cover_size(const TopologyGraph& g) {
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) == 0) throw Error(ErrorCode::UndefinedMetric, "edge cover undefined with isolated nodes");
  }
  return g.node_count() - maximum_matching_size(g);
}

NodeConnectivity::NodeConnectivity(const TopologyGraph& g)
    : arcs_(2 * g.node_count()), parent_(2 * g.node_count()), seen_(2 * g.node_count(), 0) {
  // v_in = 2v, v_out = 2v + 1.
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    add_arc(2 * v, 2 * v + 1);
    for (NodeIndex w : g.neighbors(v)) add_arc(2 * v + 1, 2 * w);
  }
}

void NodeConnectivity::add_arc(std::uint32_t from, std::uint32_t to) {
  arcs_[from].push_back({to, static_cast<std::uint32_t>(arcs_[to].size()), 1});
  arcs_[to].push_back({from, static_cast<std::uint32_t>(arcs_[from].size() - 1), 0});
}

std::size_t NodeConnectivity::local(NodeIndex s, NodeIndex t) {
  if (s == t) return 0;
  const std::uint32_t source = 2 * s + 1;
  const std::uint32_t sink = 2 * t;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> touched;  // arcs to restore
  std::size_t flow = 0;
  while (true) {
    ++epoch_;
    queue_.clear();
    queue_.push_back(source);
    seen_[source] = epoch_;
    bool found = false;
    for (std::size_t head = 0; head < queue_.size() && !found; ++head) {
      const auto u = queue_[head];
      for (std::uint32_t i = 0; i < arcs_[u].size(); ++i) {
        const auto& a = arcs_[u][i];
        if (a.cap <= 0 || seen_[a.to] == epoch_) continue;
        seen_[a.to] = epoch_;
        parent_[a.to] = {u, i};
        if (a.to == sink) {
          found = true;
          break;
        }
        queue_.push_back(a.to);
      }
    }
    if (!found) break;
    for (std::uint32_t v = sink; v != source;) {
      const auto [u, i] = parent_[v];
      auto& a = arcs_[u][i];
      a.cap -= 1;
      arcs_[a.to][a.rev].cap += 1;
      touched.emplace_back(u, i);
      v = u;
    }
    ++flow;
  }
  // Undo in reverse so repeated pushes over one arc restore exactly.
  for (auto it = touched.rbegin(); it != touched.rend(); ++it) {
    auto& a = arcs_[it->first][it->second];
    a.cap += 1;
    arcs_[a.to][a.rev].cap -= 1;
  }
  return flow;
}

double average_node_connectivity(const TopologyGraph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) throw Error(ErrorCode::GraphTooSmall, "node connectivity needs two nodes");
  NodeConnectivity nc(g);
  double total = 0.0;
  for (NodeIndex u = 0; u < n; ++u) {
    for (NodeIndex v = u + 1; v < n; ++v) total += static_cast<double>(nc.local(u, v));
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double average_node_connectivity_sampled(const TopologyGraph& g, std::size_t pairs, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (n < 2) throw Error(ErrorCode::GraphTooSmall, "node connectivity needs two nodes");
  if (pairs == 0) throw Error(ErrorCode::NoPairs, "zero sample pairs");
  NodeConnectivity nc(g);
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto u = static_cast<NodeIndex>(rng.uniform_index(n));
    auto v = static_cast<NodeIndex>(rng.uniform_index(n - 1));
    if (v >= u) ++v;
    total += static_cast<double>(nc.local(u, v));
  }
  return total / static_cast<double>(pairs);
}

std::vector<std::uint64_t> triangles_per_node(const TopologyGraph& g) {
  std::vector<std::uint64_t> t(g.node_count(), 0);
  for (NodeIndex u = 0; u < g.node_count(); ++u) {
    const auto nu = g.neighbors(u);
    for (NodeIndex v : nu) {
      if (v <= u) continue;
      const auto nv = g.neighbors(v);
      // Count common neighbours w > v so each triangle is seen once.
      auto i = std::upper_bound(nu.begin(), nu.end(), v);
      auto j = std::upper_bound(nv.begin(), nv.end(), v);
      while (i != nu.end() && j != nv.end()) {
        if (*i < *j) {
          ++i;
        } else if (*j < *i) {
          ++j;
        } else {
          ++t[u];
          ++t[v];
          ++t[*i];
          ++i;
          ++j;
        }
      }
    }
  }
  return t;
}

std::uint64_t triangle_count(const TopologyGraph& g) {
  std::uint64_t sum = 0;
  for (auto t : triangles_per_node(g)) sum += t;
  return sum / 3;
}

double transitivity(const TopologyGraph& g) {
  double triples = 0.0;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const double d = static_cast<double>(g.degree(v));
    triples += d * (d - 1.0) / 2.0;
  }
  if (triples == 0.0) return 0.0;
  return 3.0 * static_cast<double>(triangle_count(g)) / triples;
}

std::vector<double> local_clustering(const TopologyGraph& g) {
  const auto t = triangles_per_node(g);
  std::vector<double> c(g.node_count(), 0.0);
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const double d = static_cast<double>(g.degree(v));
    if (d >= 2) c[v] = 2.0 * static_cast<double>(t[v]) / (d * (d - 1.0));
  }
  return c;
}

double average_clustering(const TopologyGraph& g) {
  if (g.empty()) throw Error(ErrorCode::EmptyGraph, "average clustering of empty graph");
  double sum = 0.0;
  for (double c : local_clustering(g)) sum += c;
  return sum / static_cast<double>(g.node_count());
}

}  // namespace lntopo
