#include "lntopo/centrality.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "lntopo/connectivity.hpp"
#include "lntopo/error.hpp"
#include "lntopo/random.hpp"

namespace lntopo {
namespace {

void require_connected(const TopologyGraph& g, const char* metric) {
  if (g.node_count() < 2) throw Error(ErrorCode::UndefinedMetric, std::string(metric) + " needs >= 2 nodes");
  if (!is_connected(g)) throw Error(ErrorCode::UndefinedMetric, std::string(metric) + " needs a connected graph");
}

class BrandesAccumulator {
 public:
  explicit BrandesAccumulator(const TopologyGraph& g)
      : g_(g), sigma_(g.node_count()), dist_(g.node_count()), delta_(g.node_count()), bc_(g.node_count(), 0.0) {
    order_.reserve(g.node_count());
  }

  void add_source(NodeIndex s) {
    std::fill(sigma_.begin(), sigma_.end(), 0.0);
    std::fill(dist_.begin(), dist_.end(), kUnreachable);
    std::fill(delta_.begin(), delta_.end(), 0.0);
    order_.clear();
    sigma_[s] = 1.0;
    dist_[s] = 0;
    order_.push_back(s);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const NodeIndex u = order_[head];
      for (NodeIndex w : g_.neighbors(u)) {
        if (dist_[w] == kUnreachable) {
          dist_[w] = dist_[u] + 1;
          order_.push_back(w);
        }
        if (dist_[w] == dist_[u] + 1) sigma_[w] += sigma_[u];
      }
    }
    for (std::size_t i = order_.size(); i-- > 1;) {
      const NodeIndex w = order_[i];
      for (NodeIndex u : g_.neighbors(w)) {
        if (dist_[u] + 1 == dist_[w]) delta_[u] += sigma_[u] / sigma_[w] * (1.0 + delta_[w]);
      }
      bc_[w] += delta_[w];
    }
  }

  std::vector<double> take() { return std::move(bc_); }

 private:
  const TopologyGraph& g_;
  std::vector<double> sigma_;
  std::vector<std::uint32_t> dist_;
  std::vector<double> delta_;
  std::vector<double> bc_;
  std::vector<NodeIndex> order_;
};

std::vector<double> rescale_betweenness(std::vector<double> bc, std::size_t n, std::size_t sources) {
  if (n <= 2) return std::vector<double>(n, 0.0);
  double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
  if (sources != n) scale *= static_cast<double>(n) / static_cast<double>(sources);
  for (double& b : bc) b *= scale;
  return bc;
}

// Sum of distances from s over nodes reachable without passing `blocked`.
double bfs_distance_sum(const TopologyGraph& g, NodeIndex s, NodeIndex blocked, std::vector<std::uint32_t>& dist,
                        std::vector<NodeIndex>& queue) {
  dist.assign(g.node_count(), kUnreachable);
  queue.clear();
  dist[s] = 0;
  queue.push_back(s);
  double sum = 0.0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeIndex u = queue[head];
    sum += dist[u];
    for (NodeIndex w : g.neighbors(u)) {
      if (w == blocked || dist[w] != kUnreachable) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  return sum;
}

Eigen::MatrixXd dense_adjacency(const TopologyGraph& g, NodeIndex skip = kUnreachable) {
  // Rows/cols of `skip` are dropped, so the result is (n-1)x(n-1) then.
  const std::size_t n = g.node_count();
  std::vector<NodeIndex> remap(n);
  std::size_t k = 0;
  for (NodeIndex v = 0; v < n; ++v) remap[v] = (v == skip) ? kUnreachable : static_cast<NodeIndex>(k++);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (NodeIndex u = 0; u < n; ++u) {
    if (u == skip) continue;
    for (NodeIndex w : g.neighbors(u)) {
      if (w != skip) a(remap[u], remap[w]) = 1.0;
    }
  }
  return a;
}

Eigen::MatrixXd symmetric_expm(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const Eigen::VectorXd e = eig.eigenvalues().array().exp();
  return eig.eigenvectors() * e.asDiagonal() * eig.eigenvectors().transpose();
}

// exp(A - shift I) e_q by the Lanczos three-term recurrence, where A is the
// adjacency of g with every edge at `blocked` removed. Without a given shift
// the largest Ritz value is used and reported back.
class LanczosExp {
 public:
  LanczosExp(const TopologyGraph& g, std::size_t max_steps) : g_(g), max_steps_(std::min(max_steps, g.node_count())) {}

  std::vector<double> apply(NodeIndex q, NodeIndex blocked, std::optional<double> shift, double* used_shift) {
    const std::size_t n = g_.node_count();
    basis_.clear();
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> v(n, 0.0);
    std::vector<double> prev(n, 0.0);
    v[q] = 1.0;
    std::vector<double> w(n);
    Eigen::VectorXd coeff;
    double shift_value = 0.0;
    for (std::size_t k = 0; k < max_steps_; ++k) {
      basis_.push_back(v);
      multiply(v, blocked, w);
      const double a = std::inner_product(w.begin(), w.end(), v.begin(), 0.0);
      alpha.push_back(a);
      const double b_prev = beta.empty() ? 0.0 : beta.back();
      for (std::size_t i = 0; i < n; ++i) w[i] -= a * v[i] + b_prev * prev[i];
      const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
      const bool last = norm < 1e-12 || k + 1 == max_steps_;
      if (last || (k + 1) % 8 == 0) {
        coeff = expm_first_column(alpha, beta, shift, shift_value);
        const double tail = std::abs(coeff(coeff.size() - 1));
        if (last || tail <= 1e-15 * coeff.cwiseAbs().maxCoeff()) break;
      }
      beta.push_back(norm);
      prev.swap(v);
      for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    }
    if (used_shift != nullptr) *used_shift = shift_value;
    std::vector<double> out(n, 0.0);
    for (Eigen::Index k = 0; k < coeff.size(); ++k) {
      const auto& b = basis_[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < n; ++i) out[i] += coeff(k) * b[i];
    }
    return out;
  }

 private:
  static Eigen::VectorXd expm_first_column(const std::vector<double>& alpha, const std::vector<double>& beta,
                                           std::optional<double> shift, double& shift_value) {
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    shift_value = shift ? *shift : eig.eigenvalues().maxCoeff();
    const Eigen::VectorXd e = (eig.eigenvalues().array() - shift_value).exp();
    return eig.eigenvectors() * e.asDiagonal() * eig.eigenvectors().row(0).transpose();
  }

  void multiply(const std::vector<double>& x, NodeIndex blocked, std::vector<double>& y) const {
    for (NodeIndex u = 0; u < g_.node_count(); ++u) {
      double s = 0.0;
      if (u != blocked) {
        for (NodeIndex w : g_.neighbors(u)) {
          if (w != blocked) s += x[w];
        }
      }
      y[u] = s;
    }
  }

  const TopologyGraph& g_;
  std::size_t max_steps_;
  std::vector<std::vector<double>> basis_;
};

}  // namespace

std::vector<NodeIndex> sample_nodes(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<NodeIndex> all(n);
  std::iota(all.begin(), all.end(), 0);
  k = std::min(k, n);
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.uniform_index(n - i)]);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<double> betweenness_centrality(const TopologyGraph& g) {
  BrandesAccumulator acc(g);
  for (NodeIndex s = 0; s < g.node_count(); ++s) acc.add_source(s);
  return rescale_betweenness(acc.take(), g.node_count(), g.node_count());
}

std::vector<double> betweenness_centrality(const TopologyGraph& g, std::span<const NodeIndex> sources) {
  if (sources.empty()) throw Error(ErrorCode::NoPairs, "betweenness needs at least one source");
  BrandesAccumulator acc(g);
  for (NodeIndex s : sources) acc.add_source(s);
  return rescale_betweenness(acc.take(), g.node_count(), sources.size());
}

std::vector<double> information_centrality(const TopologyGraph& g) {
  require_connected(g, "information centrality");
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (NodeIndex u = 1; u < g.node_count(); ++u) {
    lap(u - 1, u - 1) = static_cast<double>(g.degree(u));
    for (NodeIndex w : g.neighbors(u)) {
      if (w != 0) lap(u - 1, w - 1) = -1.0;
    }
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  c.bottomRightCorner(n - 1, n - 1) = lap.ldlt().solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
  const double trace = c.trace();
  const Eigen::VectorXd rowsum = c.rowwise().sum();
  std::vector<double> out(g.node_count());
  for (Eigen::Index v = 0; v < n; ++v) {
    const double total = static_cast<double>(n) * c(v, v) - 2.0 * rowsum(v) + trace;
    out[static_cast<std::size_t>(v)] = 1.0 / total;
  }
  return out;
}

double mean_information_centrality_sampled(const TopologyGraph& g, std::size_t samples, std::uint64_t seed) {
  require_connected(g, "information centrality");
  const std::size_t n = g.node_count();
  if (samples < 2) throw Error(ErrorCode::NoPairs, "need at least two sampled nodes");
  const auto nodes = sample_nodes(n, samples, seed);
  const auto dim = static_cast<Eigen::Index>(n - 1);
  std::vector<Eigen::Triplet<double>> entries;
  for (NodeIndex u = 1; u < n; ++u) {
    entries.emplace_back(u - 1, u - 1, static_cast<double>(g.degree(u)));
    for (NodeIndex w : g.neighbors(u)) {
      if (w != 0) entries.emplace_back(u - 1, w - 1, -1.0);
    }
  }
  Eigen::SparseMatrix<double> lap(dim, dim);
  lap.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lap);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::UndefinedMetric, "Laplacian factorisation failed");

  // Columns of the grounded inverse for the sampled nodes (ground column is 0).
  const std::size_t k = nodes.size();
  std::vector<Eigen::VectorXd> cols(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (nodes[i] == 0) {
      cols[i] = Eigen::VectorXd::Zero(dim);
      continue;
    }
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e(nodes[i] - 1) = 1.0;
    cols[i] = solver.solve(e);
  }
  auto entry = [&](std::size_t i, NodeIndex w) { return w == 0 ? 0.0 : cols[i](w - 1); };
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double resistance = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      resistance += entry(i, nodes[i]) + entry(j, nodes[j]) - 2.0 * entry(i, nodes[j]);
    }
    const double estimate = resistance * static_cast<double>(n - 1) / static_cast<double>(k - 1);
    total += 1.0 / estimate;
  }
  return total / static_cast<double>(k);
}

std::vector<double> communicability_betweenness(const TopologyGraph& g) {
  require_connected(g, "communicability betweenness");
  const std::size_t n = g.node_count();
  const Eigen::MatrixXd expa = symmetric_expm(dense_adjacency(g));
  std::vector<double> out(n, 0.0);
  for (NodeIndex v = 0; v < n; ++v) {
    const Eigen::MatrixXd expv = symmetric_expm(dense_adjacency(g, v));
    double sum = 0.0;
    // expv is indexed without v; map p -> p - (p > v).
    for (NodeIndex p = 0; p < n; ++p) {
      if (p == v) continue;
      const Eigen::Index pi = p - (p > v ? 1 : 0);
      for (NodeIndex q = 0; q < n; ++q) {
        if (q == v || q == p) continue;
        const Eigen::Index qi = q - (q > v ? 1 : 0);
        sum += (expa(p, q) - expv(pi, qi)) / expa(p, q);
      }
    }
    out[v] = sum;
  }
  if (n > 2) {
    const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
    for (double& x : out) x *= scale;
  }
  return out;
}

double mean_communicability_betweenness_sampled(const TopologyGraph& g, std::size_t samples, std::uint64_t seed) {
  require_connected(g, "communicability betweenness");
  const std::size_t n = g.node_count();
  if (n <= 2) return 0.0;
  if (samples == 0) throw Error(ErrorCode::NoPairs, "zero samples");
  LanczosExp lanczos(g, 100);
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto v = static_cast<NodeIndex>(rng.uniform_index(n));
    auto q = static_cast<NodeIndex>(rng.uniform_index(n - 1));
    if (q >= v) ++q;
    double shift = 0.0;
    const auto full = lanczos.apply(q, kUnreachable, std::nullopt, &shift);
    const auto reduced = lanczos.apply(q, v, shift, nullptr);
    double sum = 0.0;
    for (NodeIndex p = 0; p < n; ++p) {
      if (p == v || p == q || full[p] <= 0.0) continue;
      sum += (full[p] - reduced[p]) / full[p];
    }
    total += sum;
  }
  const double mean_s = total / static_cast<double>(samples);
  return mean_s * static_cast<double>(n - 1) / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
}

std::vector<double> burt_constraint(const TopologyGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> out(n, std::nan(""));
  std::vector<char> is_neighbor(n, 0);
  for (NodeIndex u = 0; u < n; ++u) {
    const auto nu = g.neighbors(u);
    if (nu.empty()) continue;
    const double du = static_cast<double>(nu.size());
    for (NodeIndex w : nu) is_neighbor[w] = 1;
    double c = 0.0;
    for (NodeIndex v : nu) {
      double indirect = 0.0;
      for (NodeIndex w : g.neighbors(v)) {
        if (is_neighbor[w]) indirect += 1.0 / (du * static_cast<double>(g.degree(w)));
      }
      const double local = 1.0 / du + indirect;
      c += local * local;
    }
    for (NodeIndex w : nu) is_neighbor[w] = 0;
    out[u] = c;
  }
  return out;
}

std::vector<double> effective_size(const TopologyGraph& g) {
  const auto t = triangles_per_node(g);
  std::vector<double> out(g.node_count(), std::nan(""));
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const double d = static_cast<double>(g.degree(v));
    if (d > 0) out[v] = d - 2.0 * static_cast<double>(t[v]) / d;
  }
  return out;
}

double wiener_index_reachable(const TopologyGraph& g) {
  std::vector<std::uint32_t> dist;
  std::vector<NodeIndex> queue;
  double sum = 0.0;
  for (NodeIndex s = 0; s < g.node_count(); ++s) sum += bfs_distance_sum(g, s, kUnreachable, dist, queue);
  return sum / 2.0;
}

std::vector<double> closeness_vitality(const TopologyGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> dist;
  std::vector<NodeIndex> queue;
  const double whole = wiener_index_reachable(g);
  std::vector<double> out(n);
  for (NodeIndex v = 0; v < n; ++v) {
    double without = 0.0;
    for (NodeIndex s = 0; s < n; ++s) {
      if (s != v) without += bfs_distance_sum(g, s, v, dist, queue);
    }
    out[v] = whole - without / 2.0;
  }
  return out;
}

double mean_closeness_vitality_sampled(const TopologyGraph& g, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (n < 2) throw Error(ErrorCode::UndefinedMetric, "closeness vitality needs >= 2 nodes");
  if (samples == 0) throw Error(ErrorCode::NoPairs, "zero samples");
  std::vector<std::uint32_t> dist;
  std::vector<NodeIndex> queue;
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto v = static_cast<NodeIndex>(rng.uniform_index(n));
    auto s = static_cast<NodeIndex>(rng.uniform_index(n - 1));
    if (s >= v) ++s;
    const double with = bfs_distance_sum(g, s, kUnreachable, dist, queue);
    const double d_sv = dist[v] == kUnreachable ? 0.0 : static_cast<double>(dist[v]);
    const double without = bfs_distance_sum(g, s, v, dist, queue);
    total += d_sv + with - without;
  }
  return 0.5 * static_cast<double>(n - 1) * total / static_cast<double>(samples);
}

}  // namespace lntopo
