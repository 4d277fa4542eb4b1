#include "lntopo/stability.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "lntopo/csv.hpp"
#include "lntopo/error.hpp"
#include "lntopo/parallel.hpp"
#include "lntopo/random.hpp"

namespace lntopo {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::string_view kHeader = "t,t_next,i_node,i_channel,hop_slack,ks_D,ks_p,wasserstein,wasserstein_norm,scope";

// next-graph index for every node of t, or kUnreachable.
std::vector<NodeIndex> match_nodes(const TopologyGraph& t, const TopologyGraph& next) {
  std::vector<NodeIndex> out(t.node_count(), kUnreachable);
  for (NodeIndex v = 0; v < t.node_count(); ++v) {
    if (auto w = next.index_of(t.id(v))) out[v] = *w;
  }
  return out;
}

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  std::sort(out.begin(), out.end());
  return out;
}

double mean_degree(const TopologyGraph& g) {
  return g.empty() ? 0.0 : 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

template <class F>
double or_nan(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return kNaN;
  }
}

SnapshotPairStats nan_row(UnixTime t, UnixTime t_next, unsigned slack, std::string scope) {
  SnapshotPairStats s;
  s.t = t;
  s.t_next = t_next;
  s.hop_slack = slack;
  s.i_node = s.i_channel = s.ks_statistic = s.ks_p_value = s.wasserstein = s.wasserstein_norm = kNaN;
  s.scope = std::move(scope);
  return s;
}

// Like compare_graphs, but a statistic that is undefined for this pair is NaN.
SnapshotPairStats compare_lenient(const TopologyGraph& a, const TopologyGraph& b, unsigned slack) {
  SnapshotPairStats s;
  s.hop_slack = slack;
  s.i_node = or_nan([&] { return node_intersection_rate(a, b); });
  s.i_channel = or_nan([&] { return channel_intersection_rate(a, b, slack); });
  const auto da = as_doubles(degree_distribution(a));
  const auto db = as_doubles(degree_distribution(b));
  if (!da.empty() && !db.empty()) {
    const auto ks = ks_two_sample(da, db);
    s.ks_statistic = ks.statistic;
    s.ks_p_value = ks.p_value;
    s.wasserstein = wasserstein1(da, db);
    const double md = mean_degree(a);
    s.wasserstein_norm = md > 0.0 ? s.wasserstein / md : kNaN;
  } else {
    s.ks_statistic = s.ks_p_value = s.wasserstein = s.wasserstein_norm = kNaN;
  }
  return s;
}

SnapshotPairStats mean_of(const std::vector<SnapshotPairStats>& rows) {
  SnapshotPairStats m;
  auto avg = [&](double SnapshotPairStats::*field) {
    double sum = 0.0;
    std::size_t k = 0;
    for (const auto& r : rows) {
      if (std::isnan(r.*field)) continue;
      sum += r.*field;
      ++k;
    }
    return k == 0 ? kNaN : sum / static_cast<double>(k);
  };
  m.i_node = avg(&SnapshotPairStats::i_node);
  m.i_channel = avg(&SnapshotPairStats::i_channel);
  m.ks_statistic = avg(&SnapshotPairStats::ks_statistic);
  m.ks_p_value = avg(&SnapshotPairStats::ks_p_value);
  m.wasserstein = avg(&SnapshotPairStats::wasserstein);
  m.wasserstein_norm = avg(&SnapshotPairStats::wasserstein_norm);
  return m;
}

// Sampled rows for one transition: ForestFire subgraphs of `a` against their
// node-induced image in `b`. The mean row comes first.
std::vector<SnapshotPairStats> sampled_rows(const TopologyGraph& a, const TopologyGraph& b, UnixTime t,
                                            UnixTime t_next, const StabilityOptions& options, std::uint64_t seed,
                                            const std::string& prefix) {
  ForestFireConfig cfg = options.sampler;
  cfg.seed = seed;
  std::vector<std::vector<NodeIndex>> sets;
  try {
    sets = forestfire_node_sets(a, cfg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ComponentTooSmall) throw;
    return {nan_row(t, t_next, options.hop_slack, prefix + "sample_mean")};
  }
  const auto match = match_nodes(a, b);
  std::vector<SnapshotPairStats> per_sample;
  per_sample.reserve(sets.size());
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto sub = induced_subgraph(a, sets[k]);
    std::vector<NodeIndex> image;
    for (NodeIndex v : sets[k]) {
      if (match[v] != kUnreachable) image.push_back(match[v]);
    }
    const auto img = induced_subgraph(b, image);
    auto row = compare_lenient(sub, img, options.hop_slack);
    row.t = t;
    row.t_next = t_next;
    row.scope = prefix + "sample_" + std::to_string(k);
    per_sample.push_back(std::move(row));
  }
  std::vector<SnapshotPairStats> out;
  auto mean = mean_of(per_sample);
  mean.t = t;
  mean.t_next = t_next;
  mean.hop_slack = options.hop_slack;
  mean.scope = prefix + "sample_mean";
  out.push_back(std::move(mean));
  if (options.per_sample_rows) out.insert(out.end(), per_sample.begin(), per_sample.end());
  return out;
}

std::vector<SnapshotPairStats> transition_rows(const TopologyGraph& a, const TopologyGraph& b, UnixTime t,
                                               UnixTime t_next, const StabilityOptions& options, std::uint64_t seed,
                                               const std::string& prefix) {
  std::vector<SnapshotPairStats> out;
  auto full = compare_lenient(a, b, options.hop_slack);
  full.t = t;
  full.t_next = t_next;
  full.scope = prefix.empty() ? "full" : "longrange";
  out.push_back(std::move(full));
  if (options.sampled) {
    auto s = sampled_rows(a, b, t, t_next, options, seed, prefix);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

}  // namespace

double node_intersection_rate(const TopologyGraph& t, const TopologyGraph& next) {
  if (t.empty()) throw Error(ErrorCode::EmptyBase, "base snapshot has no nodes");
  const auto match = match_nodes(t, next);
  const auto shared = std::count_if(match.begin(), match.end(), [](NodeIndex w) { return w != kUnreachable; });
  return static_cast<double>(shared) / static_cast<double>(t.node_count());
}

double channel_intersection_rate(const TopologyGraph& t, const TopologyGraph& next, unsigned hop_slack) {
  const auto match = match_nodes(t, next);
  const std::uint32_t limit = 1 + hop_slack;
  std::size_t base = 0;
  std::size_t kept = 0;
  // Bounded BFS in `next` from each shared node, epoch-marked to avoid resets.
  std::vector<std::uint32_t> seen(next.node_count(), 0);
  std::vector<std::uint32_t> dist(next.node_count(), 0);
  std::vector<NodeIndex> queue;
  std::uint32_t epoch = 0;
  for (NodeIndex u = 0; u < t.node_count(); ++u) {
    if (match[u] == kUnreachable) continue;
    bool any = false;
    for (NodeIndex v : t.neighbors(u)) {
      if (v > u && match[v] != kUnreachable) any = true;
    }
    if (!any) continue;
    if (hop_slack > 0) {
      ++epoch;
      queue.clear();
      queue.push_back(match[u]);
      seen[match[u]] = epoch;
      dist[match[u]] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeIndex x = queue[head];
        if (dist[x] == limit) continue;
        for (NodeIndex y : next.neighbors(x)) {
          if (seen[y] == epoch) continue;
          seen[y] = epoch;
          dist[y] = dist[x] + 1;
          queue.push_back(y);
        }
      }
    }
    for (NodeIndex v : t.neighbors(u)) {
      if (v <= u || match[v] == kUnreachable) continue;
      ++base;
      const bool ok = hop_slack == 0 ? next.has_edge(match[u], match[v]) : seen[match[v]] == epoch;
      if (ok) ++kept;
    }
  }
  if (base == 0) throw Error(ErrorCode::EmptyBase, "no channels among shared nodes");
  return static_cast<double>(kept) / static_cast<double>(base);
}

double node_intersection_rate(const Snapshot& t, const Snapshot& next) {
  return node_intersection_rate(to_undirected(t), to_undirected(next));
}

double channel_intersection_rate(const Snapshot& t, const Snapshot& next, unsigned hop_slack) {
  return channel_intersection_rate(to_undirected(t), to_undirected(next), hop_slack);
}

double kolmogorov_survival(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1;; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "KS test needs two nonempty samples");
  const auto x = sorted_copy(a);
  const auto y = sorted_copy(b);
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t best = 0;  // |i*m - j*n| scaled by n*m
  while (i < n || j < m) {
    const double v = (j == m || (i < n && x[i] <= y[j])) ? x[i] : y[j];
    while (i < n && x[i] == v) ++i;
    while (j < m && y[j] == v) ++j;
    const auto diff = static_cast<std::int64_t>(i * m) - static_cast<std::int64_t>(j * n);
    best = std::max(best, diff < 0 ? -diff : diff);
  }
  KsResult r;
  const double nm = static_cast<double>(n) * static_cast<double>(m);
  r.statistic = static_cast<double>(best) / nm;
  const double lambda = r.statistic * std::sqrt(nm / static_cast<double>(n + m));
  r.p_value = kolmogorov_survival(lambda);
  return r;
}

KsResult ks_two_sample(const DegreeDistribution& a, const DegreeDistribution& b) {
  return ks_two_sample(as_doubles(a), as_doubles(b));
}

double wasserstein1(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "Wasserstein needs two nonempty samples");
  const auto x = sorted_copy(a);
  const auto y = sorted_copy(b);
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  std::size_t i = 0;
  std::size_t j = 0;
  double total = 0.0;
  double prev = std::min(x[0], y[0]);
  while (i < n || j < m) {
    const double v = (j == m || (i < n && x[i] <= y[j])) ? x[i] : y[j];
    const auto diff = static_cast<std::int64_t>(i * m) - static_cast<std::int64_t>(j * n);
    total += static_cast<double>(diff < 0 ? -diff : diff) * (v - prev);
    prev = v;
    while (i < n && x[i] == v) ++i;
    while (j < m && y[j] == v) ++j;
  }
  return total / (static_cast<double>(n) * static_cast<double>(m));
}

double wasserstein1(const DegreeDistribution& a, const DegreeDistribution& b) {
  return wasserstein1(as_doubles(a), as_doubles(b));
}

SnapshotPairStats compare_graphs(const TopologyGraph& t, const TopologyGraph& next, unsigned hop_slack) {
  SnapshotPairStats s;
  s.hop_slack = hop_slack;
  s.i_node = node_intersection_rate(t, next);
  s.i_channel = channel_intersection_rate(t, next, hop_slack);
  const auto da = degree_distribution(t);
  const auto db = degree_distribution(next);
  const auto ks = ks_two_sample(da, db);
  s.ks_statistic = ks.statistic;
  s.ks_p_value = ks.p_value;
  s.wasserstein = wasserstein1(da, db);
  const double md = mean_degree(t);
  s.wasserstein_norm = md > 0.0 ? s.wasserstein / md : kNaN;
  return s;
}

std::vector<SnapshotPairStats> stability_series(std::span<const TopologyGraph> graphs, std::span<const UnixTime> times,
                                                const StabilityOptions& options) {
  if (graphs.size() < 2) throw Error(ErrorCode::TooFewSnapshots, "stability needs at least two snapshots");
  if (times.size() != graphs.size()) throw Error(ErrorCode::SchemaMismatch, "one timestamp per graph expected");
  const std::size_t pairs = graphs.size() - 1;
  const std::size_t jobs = pairs + (options.long_range ? 1 : 0);
  std::vector<std::vector<SnapshotPairStats>> parts(jobs);
  parallel_for(jobs, options.threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(options.sampler.seed, i);
    if (i < pairs) {
      parts[i] = transition_rows(graphs[i], graphs[i + 1], times[i], times[i + 1], options, seed, "");
    } else {
      parts[i] = transition_rows(graphs.front(), graphs.back(), times.front(), times.back(), options, seed,
                                 "longrange_");
    }
  });
  std::vector<SnapshotPairStats> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<SnapshotPairStats> stability_series(std::span<const Snapshot> snapshots, const StabilityOptions& options) {
  if (snapshots.size() < 2) throw Error(ErrorCode::TooFewSnapshots, "stability needs at least two snapshots");
  std::vector<TopologyGraph> graphs;
  std::vector<UnixTime> times;
  for (const auto& s : snapshots) {
    graphs.push_back(to_undirected(s));
    times.push_back(s.at);
  }
  return stability_series(graphs, times, options);
}

void write_stability_csv(std::ostream& out, std::span<const SnapshotPairStats> rows) {
  out << kHeader << '\n';
  for (const auto& r : rows) {
    out << r.t << ',' << r.t_next << ',' << format_double(r.i_node) << ',' << format_double(r.i_channel) << ','
        << r.hop_slack << ',' << format_double(r.ks_statistic) << ',' << format_double(r.ks_p_value) << ','
        << format_double(r.wasserstein) << ',' << format_double(r.wasserstein_norm) << ',' << r.scope << '\n';
  }
}

std::vector<SnapshotPairStats> read_stability_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kHeader) throw Error(ErrorCode::SchemaMismatch, 1, "bad stability header");
  std::vector<SnapshotPairStats> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) throw Error(ErrorCode::Malformed, line_no, "expected 10 fields");
    SnapshotPairStats r;
    auto num = [&](std::string_view s) {
      auto v = parse_double(s);
      if (!v) throw Error(ErrorCode::Malformed, line_no, "bad number");
      return *v;
    };
    const auto t = parse_number<UnixTime>(f[0]);
    const auto tn = parse_number<UnixTime>(f[1]);
    const auto slack = parse_number<unsigned>(f[4]);
    if (!t || !tn || !slack) throw Error(ErrorCode::Malformed, line_no, "bad integer field");
    r.t = *t;
    r.t_next = *tn;
    r.i_node = num(f[2]);
    r.i_channel = num(f[3]);
    r.hop_slack = *slack;
    r.ks_statistic = num(f[5]);
    r.ks_p_value = num(f[6]);
    r.wasserstein = num(f[7]);
    r.wasserstein_norm = num(f[8]);
    r.scope = std::string(trim(f[9]));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace lntopo
