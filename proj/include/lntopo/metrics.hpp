#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lntopo/error.hpp"
#include "lntopo/graph.hpp"
#include "lntopo/link_prediction.hpp"

namespace lntopo {

enum class MetricId {
  node_count,
  edge_count,
  component_count,
  density,
  diameter,
  avg_shortest_path,
  mean_degree,
  degree_assortativity,
  bridge_count,
  avg_node_connectivity,
  min_edge_cover_size,
  transitivity,
  avg_clustering,
  global_efficiency,
  information_centrality,
  mean_betweenness,
  communicability_betweenness,
  common_neighbor_centrality,
  constraint,
  effective_size,
  burts_effective_size,
  closeness_vitality,
  avg_resource_allocation,
  avg_jaccard,
  avg_preferential_attachment,
  avg_preferential_attachment_normalized,
  flp_community_count,
  alp_community_count,
  gini_betweenness,
  wiener_index,
  degree_entropy,
  power_law,
};

std::span<const MetricId> all_metrics();
std::string_view to_string(MetricId id) noexcept;
std::optional<MetricId> parse_metric_id(std::string_view name);
/// Number of entries in MetricValue::values (power_law: alpha, r2).
std::size_t metric_arity(MetricId id) noexcept;

enum class ComputeMode { exact, sampled };
enum class ModePreference { automatic, exact, sampled };

struct MetricValue {
  MetricId metric = MetricId::node_count;
  std::vector<double> values;
  ComputeMode mode = ComputeMode::exact;
  std::size_t n_samples = 0;           // sampled only
  std::optional<std::uint64_t> seed;   // any seeded computation
  std::vector<std::pair<double, double>> curve;  // Lorenz points for gini_betweenness

  double value() const { return values.at(0); }
};

struct MetricParams {
  std::size_t linear_cap = 2000;  // O(n m) metrics run exactly up to this size
  std::size_t cubic_cap = 500;
  std::size_t n_samples = 500;
  std::uint64_t seed = 1;
  double ccpa_alpha = 0.8;
  PairSource pair_source;
  ModePreference mode = ModePreference::automatic;
};

/// Computes metrics on one graph, sharing the largest component, distance
/// sums and betweenness between metrics.
class MetricEngine {
 public:
  MetricEngine(const TopologyGraph& g, MetricParams params);
  ~MetricEngine();
  MetricEngine(const MetricEngine&) = delete;
  MetricEngine& operator=(const MetricEngine&) = delete;

  /// Throws EmptyGraph, MetricUnsupportedInMode, or the metric's own error.
  MetricValue compute(MetricId id);

 private:
  struct Cache;
  const TopologyGraph& g_;
  MetricParams params_;
  std::unique_ptr<Cache> cache_;
};

MetricValue compute(const TopologyGraph& g, MetricId id, const MetricParams& params = {});

struct MetricRow {
  UnixTime timestamp = 0;
  MetricId metric = MetricId::node_count;
  std::optional<MetricValue> value;  // empty for an error row
  std::optional<ErrorCode> error;
};

/// At most one row per (timestamp, metric), kept in (timestamp, metric) order.
class MetricSeries {
 public:
  /// Throws SchemaMismatch on a duplicate key.
  void add(MetricRow row);
  std::span<const MetricRow> rows() const { return rows_; }
  const MetricRow* find(UnixTime ts, MetricId id) const;
  std::vector<UnixTime> timestamps() const;
  std::size_t error_count() const;

 private:
  std::vector<MetricRow> rows_;
};

// timestamp,metric_id,value,mode,n_samples,seed
void write_metrics_csv(std::ostream& out, const MetricSeries& series);
MetricSeries read_metrics_csv(std::istream& in);

}  // namespace lntopo
