#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lntopo/graph.hpp"
#include "lntopo/snapshot.hpp"

namespace lntopo {

/// |V_t ∩ V_next| / |V_t|, matching nodes by id. Throws EmptyBase.
double node_intersection_rate(const TopologyGraph& t, const TopologyGraph& next);
double node_intersection_rate(const Snapshot& t, const Snapshot& next);

/// Share of s_t channels between shared nodes whose endpoints are within
/// 1 + hop_slack hops in s_next. Throws EmptyBase when no such channel exists.
double channel_intersection_rate(const TopologyGraph& t, const TopologyGraph& next, unsigned hop_slack = 0);
double channel_intersection_rate(const Snapshot& t, const Snapshot& next, unsigned hop_slack = 0);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), clamped to [0, 1].
double kolmogorov_survival(double lambda);

/// Two-sample KS test with the asymptotic p-value. Throws EmptySample.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);
KsResult ks_two_sample(const DegreeDistribution& a, const DegreeDistribution& b);

/// Integral of |ECDF_a - ECDF_b|. Throws EmptySample.
double wasserstein1(std::span<const double> a, std::span<const double> b);
double wasserstein1(const DegreeDistribution& a, const DegreeDistribution& b);

struct StabilityOptions {
  unsigned hop_slack = 0;
  bool sampled = true;
  bool per_sample_rows = false;
  bool long_range = true;
  ForestFireConfig sampler;
  std::size_t threads = 1;
};

struct SnapshotPairStats {
  UnixTime t = 0;
  UnixTime t_next = 0;
  double i_node = 0.0;
  double i_channel = 0.0;
  unsigned hop_slack = 0;
  double ks_statistic = 0.0;
  double ks_p_value = 1.0;
  double wasserstein = 0.0;
  double wasserstein_norm = 0.0;
  // full | sample_mean | sample_<k> | longrange | longrange_sample_mean
  std::string scope = "full";
};

/// Full-network statistics for one transition (scope "full").
SnapshotPairStats compare_graphs(const TopologyGraph& t, const TopologyGraph& next, unsigned hop_slack);

/// Rows per consecutive pair in schedule order (full, then sampled rows), then
/// the first-to-last rows. Throws TooFewSnapshots with fewer than 2 snapshots.
std::vector<SnapshotPairStats> stability_series(std::span<const Snapshot> snapshots, const StabilityOptions& options);
std::vector<SnapshotPairStats> stability_series(std::span<const TopologyGraph> graphs, std::span<const UnixTime> times,
                                                const StabilityOptions& options);

// t,t_next,i_node,i_channel,hop_slack,ks_D,ks_p,wasserstein,wasserstein_norm,scope
void write_stability_csv(std::ostream& out, std::span<const SnapshotPairStats> rows);
std::vector<SnapshotPairStats> read_stability_csv(std::istream& in);

}  // namespace lntopo
