#pragma once
// Brute-force reference implementations. Deliberately naive and independent of
// the library algorithms they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "lntopo/graph.hpp"
#include "lntopo/random.hpp"
#include "lntopo/routing.hpp"

namespace oracle {

using namespace lntopo;

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline std::vector<std::vector<int>> adjacency_matrix(const TopologyGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (auto [u, v] : g.edges()) a[u][v] = a[v][u] = 1;
  return a;
}

inline std::vector<std::vector<int>> floyd_warshall(const TopologyGraph& g) {
  const std::size_t n = g.node_count();
  auto a = adjacency_matrix(g);
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j]) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

/// Component label per node via union-find.
inline std::vector<std::size_t> union_find_labels(const TopologyGraph& g) {
  std::vector<std::size_t> parent(g.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [u, v] : g.edges()) parent[find(u)] = find(v);
  std::vector<std::size_t> out(g.node_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = find(i);
  return out;
}

/// Enumerates every shortest path by depth-first search and counts, for each
/// node, the fraction of s-t shortest paths through it (ordered pairs),
/// normalised by (n-1)(n-2).
inline std::vector<double> betweenness(const TopologyGraph& g) {
  const std::size_t n = g.node_count();
  const auto d = floyd_warshall(g);
  const auto a = adjacency_matrix(g);
  std::vector<double> bc(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t || d[s][t] >= kInf) continue;
      std::vector<std::size_t> through(n, 0);
      std::size_t total = 0;
      std::vector<std::size_t> path{s};
      auto dfs = [&](auto&& self, std::size_t u) -> void {
        if (u == t) {
          ++total;
          for (std::size_t i = 1; i + 1 < path.size(); ++i) ++through[path[i]];
          return;
        }
        for (std::size_t w = 0; w < n; ++w) {
          if (a[u][w] && d[s][w] == d[s][u] + 1 && d[w][t] == d[u][t] - 1) {
            path.push_back(w);
            self(self, w);
            path.pop_back();
          }
        }
      };
      dfs(dfs, s);
      for (std::size_t v = 0; v < n; ++v) bc[v] += static_cast<double>(through[v]) / static_cast<double>(total);
    }
  }
  if (n > 2) {
    for (double& x : bc) x /= static_cast<double>((n - 1) * (n - 2));
  } else {
    std::fill(bc.begin(), bc.end(), 0.0);
  }
  return bc;
}

inline double transitivity(const TopologyGraph& g) {
  const auto a = adjacency_matrix(g);
  const std::size_t n = g.node_count();
  double closed = 0.0;
  double triads = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (i == v || j == v || !a[v][i] || !a[v][j]) continue;
        triads += 1.0;
        if (a[i][j]) closed += 1.0;
      }
    }
  }
  return triads == 0.0 ? 0.0 : closed / triads;
}

inline double wiener_reachable(const TopologyGraph& g) {
  const auto d = floyd_warshall(g);
  double w = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d[i][j] < kInf) w += d[i][j];
    }
  }
  return w;
}

inline double global_efficiency(const TopologyGraph& g) {
  const auto d = floyd_warshall(g);
  const std::size_t n = d.size();
  if (n < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && d[i][j] < kInf) s += 1.0 / d[i][j];
    }
  }
  return s / static_cast<double>(n * (n - 1));
}

inline int diameter(const TopologyGraph& g) {
  int best = 0;
  for (const auto& row : floyd_warshall(g)) {
    for (int x : row) {
      if (x < kInf) best = std::max(best, x);
    }
  }
  return best;
}

/// Edge count of a maximum matching by exhaustive search over edge subsets
/// (branch on the lowest unmatched node).
inline std::size_t max_matching(const TopologyGraph& g) {
  const std::size_t n = g.node_count();
  const auto a = adjacency_matrix(g);
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, std::size_t from) -> std::size_t {
    std::size_t u = from;
    while (u < n && used[u]) ++u;
    if (u >= n) return 0;
    used[u] = 1;
    std::size_t best = self(self, u + 1);  // leave u unmatched
    for (std::size_t w = u + 1; w < n; ++w) {
      if (!used[w] && a[u][w]) {
        used[w] = 1;
        best = std::max(best, 1 + self(self, u + 1));
        used[w] = 0;
      }
    }
    used[u] = 0;
    return best;
  };
  return rec(rec, 0);
}

inline std::size_t count_components(const TopologyGraph& g, std::size_t skip_u = SIZE_MAX, std::size_t skip_v = SIZE_MAX) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [u, v] : g.edges()) {
    if (u == skip_u && v == skip_v) continue;
    parent[find(u)] = find(v);
  }
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += find(i) == i;
  return c;
}

/// Local node connectivity by Menger: the smallest vertex set separating s
/// from t, found by enumerating subsets in increasing size (n <= 10).
inline std::size_t local_node_connectivity(const TopologyGraph& g, NodeIndex s, NodeIndex t) {
  const std::size_t n = g.node_count();
  const auto a = adjacency_matrix(g);
  auto connected_without = [&](std::uint32_t removed) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        if (!a[u][w] || seen[w] || ((removed >> w) & 1U)) continue;
        if (w == t && u == s) continue;  // the direct edge is handled separately
        seen[w] = 1;
        stack.push_back(w);
      }
    }
    return seen[t] != 0;
  };
  // A direct edge is a path no vertex cut can break.
  const std::size_t direct = a[s][t] ? 1 : 0;
  std::size_t best = n;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    if ((mask >> s) & 1U || (mask >> t) & 1U) continue;
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size >= best) continue;
    if (!connected_without(mask)) best = size;
  }
  return best + direct;
}

/// Discrete power-law MLE (continuous approximation with the 1/2 shift).
inline double power_law_mle(const std::vector<std::uint32_t>& xs, std::uint32_t xmin) {
  double s = 0.0;
  std::size_t n = 0;
  for (auto x : xs) {
    if (x < xmin) continue;
    s += std::log(static_cast<double>(x) / (static_cast<double>(xmin) - 0.5));
    ++n;
  }
  return 1.0 + static_cast<double>(n) / s;
}

/// Sum |xi - xj| / (2 n^2 mean).
inline double gini_pairwise(const std::vector<double>& x) {
  const auto n = static_cast<double>(x.size());
  double sum = 0.0;
  double diff = 0.0;
  for (double a : x) {
    sum += a;
    for (double b : x) diff += std::abs(a - b);
  }
  if (sum == 0.0) return 0.0;
  return diff / (2.0 * n * n * (sum / n));
}

inline double ks_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pts(a);
  pts.insert(pts.end(), b.begin(), b.end());
  double best = 0.0;
  for (double x : pts) {
    const double fa = static_cast<double>(std::count_if(a.begin(), a.end(), [&](double v) { return v <= x; })) /
                      static_cast<double>(a.size());
    const double fb = static_cast<double>(std::count_if(b.begin(), b.end(), [&](double v) { return v <= x; })) /
                      static_cast<double>(b.size());
    best = std::max(best, std::abs(fa - fb));
  }
  return best;
}

/// Share of label permutations whose KS statistic reaches the observed one.
inline double ks_permutation_p(const std::vector<double>& a, const std::vector<double>& b, std::size_t rounds,
                               std::uint64_t seed) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  auto stat = [&](const std::vector<double>& v) {
    std::vector<double> x(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(a.size()));
    std::vector<double> y(v.begin() + static_cast<std::ptrdiff_t>(a.size()), v.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    // merge-walk ECDF difference
    std::size_t i = 0, j = 0;
    double best = 0.0;
    while (i < x.size() && j < y.size()) {
      const double t = std::min(x[i], y[j]);
      while (i < x.size() && x[i] <= t) ++i;
      while (j < y.size() && y[j] <= t) ++j;
      best = std::max(best, std::abs(static_cast<double>(i) / x.size() - static_cast<double>(j) / y.size()));
    }
    return best;
  };
  const double observed = stat(pooled);
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < rounds; ++r) {
    rng.shuffle(pooled);
    if (stat(pooled) >= observed - 1e-12) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rounds);
}

/// Mean absolute difference of order statistics (equal sizes only).
inline double wasserstein_order_stats(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

/// Bellman-Ford minimum route cost over usable arcs; infinity when unreachable.
inline double bellman_ford(const RoutingNetwork& net, NodeIndex s, NodeIndex t, std::uint64_t amount,
                           const CostModel& model) {
  const std::size_t n = net.node_count();
  std::vector<double> d(n, std::numeric_limits<double>::infinity());
  d[s] = 0.0;
  for (std::size_t round = 0; round + 1 < n; ++round) {
    bool changed = false;
    for (NodeIndex u = 0; u < n; ++u) {
      if (std::isinf(d[u])) continue;
      for (const auto& arc : net.arcs(u)) {
        if (!policy_usable(arc.policy, amount)) continue;
        const double c = d[u] + edge_cost(model, arc.policy, amount);
        if (c < d[arc.to]) {
          d[arc.to] = c;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return d[t];
}

}  // namespace oracle
