#include "lntopo/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "lntopo/centrality.hpp"
#include "lntopo/communities.hpp"
#include "lntopo/connectivity.hpp"
#include "lntopo/inequality.hpp"
#include "lntopo/powerlaw.hpp"

namespace lntopo {
namespace {

constexpr std::array kMetrics = {
    MetricId::node_count,
    MetricId::edge_count,
    MetricId::component_count,
    MetricId::density,
    MetricId::diameter,
    MetricId::avg_shortest_path,
    MetricId::mean_degree,
    MetricId::degree_assortativity,
    MetricId::bridge_count,
    MetricId::avg_node_connectivity,
    MetricId::min_edge_cover_size,
    MetricId::transitivity,
    MetricId::avg_clustering,
    MetricId::global_efficiency,
    MetricId::information_centrality,
    MetricId::mean_betweenness,
    MetricId::communicability_betweenness,
    MetricId::common_neighbor_centrality,
    MetricId::constraint,
    MetricId::effective_size,
    MetricId::burts_effective_size,
    MetricId::closeness_vitality,
    MetricId::avg_resource_allocation,
    MetricId::avg_jaccard,
    MetricId::avg_preferential_attachment,
    MetricId::avg_preferential_attachment_normalized,
    MetricId::flp_community_count,
    MetricId::alp_community_count,
    MetricId::gini_betweenness,
    MetricId::wiener_index,
    MetricId::degree_entropy,
    MetricId::power_law,
};

constexpr std::array<std::string_view, kMetrics.size()> kNames = {
    "node_count",
    "edge_count",
    "component_count",
    "density",
    "diameter",
    "avg_shortest_path",
    "mean_degree",
    "degree_assortativity",
    "bridge_count",
    "avg_node_connectivity",
    "min_edge_cover_size",
    "transitivity",
    "avg_clustering",
    "global_efficiency",
    "information_centrality",
    "mean_betweenness",
    "communicability_betweenness",
    "common_neighbor_centrality",
    "constraint",
    "effective_size",
    "burts_effective_size",
    "closeness_vitality",
    "avg_resource_allocation",
    "avg_jaccard",
    "avg_preferential_attachment",
    "avg_preferential_attachment_normalized",
    "flp_community_count",
    "alp_community_count",
    "gini_betweenness",
    "wiener_index",
    "degree_entropy",
    "power_law",
};

enum class Cost { cheap, linear, cubic };

Cost cost_of(MetricId id) {
  switch (id) {
    case MetricId::diameter:
    case MetricId::avg_shortest_path:
    case MetricId::global_efficiency:
    case MetricId::wiener_index:
    case MetricId::mean_betweenness:
    case MetricId::gini_betweenness:
      return Cost::linear;
    case MetricId::information_centrality:
    case MetricId::communicability_betweenness:
    case MetricId::closeness_vitality:
    case MetricId::avg_node_connectivity:
      return Cost::cubic;
    default:
      return Cost::cheap;
  }
}

bool is_link_metric(MetricId id) {
  return id == MetricId::avg_resource_allocation || id == MetricId::avg_jaccard ||
         id == MetricId::avg_preferential_attachment || id == MetricId::avg_preferential_attachment_normalized ||
         id == MetricId::common_neighbor_centrality;
}

double nan_skipping_mean(const std::vector<double>& xs, const char* what) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double x : xs) {
    if (std::isnan(x)) continue;
    sum += x;
    ++n;
  }
  if (n == 0) throw Error(ErrorCode::UndefinedMetric, std::string(what) + " undefined on every node");
  return sum / static_cast<double>(n);
}

double plain_mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

struct DistanceSummary {
  double diameter = 0.0;
  double sum = 0.0;          // over ordered pairs visited
  double inverse_sum = 0.0;  // over ordered pairs visited
  double pairs = 0.0;        // ordered pairs visited
};

}  // namespace

std::span<const MetricId> all_metrics() { return kMetrics; }

std::string_view to_string(MetricId id) noexcept { return kNames[static_cast<std::size_t>(id)]; }

std::optional<MetricId> parse_metric_id(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return kMetrics[i];
  }
  return std::nullopt;
}

std::size_t metric_arity(MetricId id) noexcept { return id == MetricId::power_law ? 2 : 1; }

struct MetricEngine::Cache {
  std::optional<TopologyGraph> lcc;
  std::optional<DistanceSummary> distances;
  bool distances_sampled = false;
  std::optional<std::vector<double>> betweenness;
  bool betweenness_sampled = false;
};

MetricEngine::MetricEngine(const TopologyGraph& g, MetricParams params)
    : g_(g), params_(std::move(params)), cache_(std::make_unique<Cache>()) {}

MetricEngine::~MetricEngine() = default;

MetricValue MetricEngine::compute(MetricId id) {
  if (g_.empty()) throw Error(ErrorCode::EmptyGraph, std::string(to_string(id)) + " on empty graph");
  const std::size_t n = g_.node_count();
  const auto nd = static_cast<double>(n);

  MetricValue out;
  out.metric = id;
  const Cost cost = cost_of(id);

  auto want_sampled = [&](std::size_t size, std::size_t cap) {
    switch (params_.mode) {
      case ModePreference::exact:
        return false;
      case ModePreference::sampled:
        return true;
      case ModePreference::automatic:
        break;
    }
    return size > cap;
  };
  auto mark_sampled = [&](std::size_t samples) {
    out.mode = ComputeMode::sampled;
    out.n_samples = samples;
    out.seed = params_.seed;
  };

  if (cost == Cost::cheap && params_.mode == ModePreference::sampled && !is_link_metric(id)) {
    throw Error(ErrorCode::MetricUnsupportedInMode, std::string(to_string(id)) + " has no sampled form");
  }
  if (is_link_metric(id)) {
    const bool sampled_pairs = params_.pair_source.kind == PairSource::Kind::sampled_non_edges;
    if (params_.mode == ModePreference::sampled && !sampled_pairs) {
      throw Error(ErrorCode::MetricUnsupportedInMode, "link metrics sample only via sampled_non_edges");
    }
    if (params_.mode == ModePreference::exact && sampled_pairs) {
      throw Error(ErrorCode::MetricUnsupportedInMode, "sampled_non_edges is a sampled pair source");
    }
    if (sampled_pairs) {
      out.mode = ComputeMode::sampled;
      out.n_samples = params_.pair_source.count;
      out.seed = params_.pair_source.seed;
    }
  }

  auto lcc = [&]() -> const TopologyGraph& {
    if (!cache_->lcc) cache_->lcc = largest_component(g_);
    return *cache_->lcc;
  };

  auto distances = [&]() -> const DistanceSummary& {
    const auto& h = lcc();
    const bool sampled = want_sampled(h.node_count(), params_.linear_cap);
    if (!cache_->distances || cache_->distances_sampled != sampled) {
      DistanceSummary s;
      std::vector<NodeIndex> sources;
      if (sampled) {
        sources = sample_nodes(h.node_count(), params_.n_samples, params_.seed);
      } else {
        sources.resize(h.node_count());
        for (NodeIndex v = 0; v < h.node_count(); ++v) sources[v] = v;
      }
      std::vector<std::uint32_t> dist;
      std::vector<NodeIndex> queue;
      for (NodeIndex src : sources) {
        bfs_distances(h, src, dist, queue);
        for (NodeIndex v = 0; v < h.node_count(); ++v) {
          if (v == src || dist[v] == kUnreachable) continue;
          const auto d = static_cast<double>(dist[v]);
          s.diameter = std::max(s.diameter, d);
          s.sum += d;
          s.inverse_sum += 1.0 / d;
          s.pairs += 1.0;
        }
      }
      cache_->distances = s;
      cache_->distances_sampled = sampled;
    }
    if (sampled) mark_sampled(std::min(params_.n_samples, h.node_count()));
    return *cache_->distances;
  };

  auto betweenness = [&]() -> const std::vector<double>& {
    const auto& h = lcc();
    const bool sampled = want_sampled(h.node_count(), params_.linear_cap);
    if (!cache_->betweenness || cache_->betweenness_sampled != sampled) {
      if (sampled) {
        const auto sources = sample_nodes(h.node_count(), params_.n_samples, params_.seed);
        cache_->betweenness = betweenness_centrality(h, sources);
      } else {
        cache_->betweenness = betweenness_centrality(h);
      }
      cache_->betweenness_sampled = sampled;
    }
    if (sampled) mark_sampled(std::min(params_.n_samples, h.node_count()));
    return *cache_->betweenness;
  };

  auto need_pairs = [&](const TopologyGraph& h) {
    if (h.node_count() < 2) throw Error(ErrorCode::UndefinedMetric, std::string(to_string(id)) + " needs >= 2 nodes");
  };

  auto mean_degree = [&] { return 2.0 * static_cast<double>(g_.edge_count()) / nd; };

  double v = 0.0;
  switch (id) {
    case MetricId::node_count:
      v = nd;
      break;
    case MetricId::edge_count:
      v = static_cast<double>(g_.edge_count());
      break;
    case MetricId::component_count:
      v = static_cast<double>(connected_components(g_).count());
      break;
    case MetricId::density:
      need_pairs(g_);
      v = 2.0 * static_cast<double>(g_.edge_count()) / (nd * (nd - 1.0));
      break;
    case MetricId::diameter:
      v = distances().diameter;
      break;
    case MetricId::avg_shortest_path: {
      need_pairs(lcc());
      const auto& s = distances();
      v = s.sum / s.pairs;
      break;
    }
    case MetricId::global_efficiency: {
      need_pairs(lcc());
      const auto& s = distances();
      v = s.inverse_sum / s.pairs;
      break;
    }
    case MetricId::wiener_index: {
      const auto& h = lcc();
      const auto& s = distances();
      if (out.mode == ComputeMode::sampled) {
        const double hn = static_cast<double>(h.node_count());
        v = s.pairs == 0.0 ? 0.0 : s.sum / s.pairs * hn * (hn - 1.0) / 2.0;
      } else {
        v = s.sum / 2.0;
      }
      break;
    }
    case MetricId::mean_degree:
      v = mean_degree();
      break;
    case MetricId::degree_assortativity: {
      double sx = 0.0;
      double sxx = 0.0;
      double sxy = 0.0;
      double count = 0.0;
      for (auto [a, b] : g_.edges()) {
        const auto da = static_cast<double>(g_.degree(a));
        const auto db = static_cast<double>(g_.degree(b));
        sx += da + db;
        sxx += da * da + db * db;
        sxy += 2.0 * da * db;
        count += 2.0;
      }
      if (count == 0.0) throw Error(ErrorCode::UndefinedMetric, "assortativity needs edges");
      const double mean = sx / count;
      const double var = sxx / count - mean * mean;
      if (var <= 1e-15 * std::max(1.0, mean * mean)) {
        throw Error(ErrorCode::UndefinedMetric, "assortativity undefined when all endpoint degrees are equal");
      }
      v = (sxy / count - mean * mean) / var;
      break;
    }
    case MetricId::bridge_count:
      v = static_cast<double>(bridge_count(g_));
      break;
    case MetricId::avg_node_connectivity:
      need_pairs(g_);
      if (want_sampled(n, params_.cubic_cap)) {
        v = average_node_connectivity_sampled(g_, params_.n_samples, params_.seed);
        mark_sampled(params_.n_samples);
      } else {
        v = average_node_connectivity(g_);
      }
      break;
    case MetricId::min_edge_cover_size:
      v = static_cast<double>(min_edge_cover_size(g_));
      break;
    case MetricId::transitivity:
      v = transitivity(g_);
      break;
    case MetricId::avg_clustering:
      v = average_clustering(g_);
      break;
    case MetricId::information_centrality: {
      const auto& h = lcc();
      if (want_sampled(h.node_count(), params_.cubic_cap)) {
        const std::size_t k = std::min(params_.n_samples, h.node_count());
        v = mean_information_centrality_sampled(h, k, params_.seed);
        mark_sampled(k);
      } else {
        v = plain_mean(information_centrality(h));
      }
      break;
    }
    case MetricId::mean_betweenness:
      v = plain_mean(betweenness());
      break;
    case MetricId::communicability_betweenness: {
      const auto& h = lcc();
      if (want_sampled(h.node_count(), params_.cubic_cap)) {
        v = mean_communicability_betweenness_sampled(h, params_.n_samples, params_.seed);
        mark_sampled(params_.n_samples);
      } else {
        v = plain_mean(communicability_betweenness(h));
      }
      break;
    }
    case MetricId::common_neighbor_centrality:
      v = avg_common_neighbor_centrality(g_, params_.pair_source, params_.ccpa_alpha);
      break;
    case MetricId::constraint:
      v = nan_skipping_mean(burt_constraint(g_), "constraint");
      break;
    case MetricId::effective_size:
      v = nan_skipping_mean(effective_size(g_), "effective size");
      break;
    case MetricId::burts_effective_size: {
      auto es = effective_size(g_);
      for (NodeIndex u = 0; u < n; ++u) {
        if (!std::isnan(es[u])) es[u] /= static_cast<double>(g_.degree(u));
      }
      v = nan_skipping_mean(es, "Burt's effective size");
      break;
    }
    case MetricId::closeness_vitality: {
      const auto& h = lcc();
      need_pairs(h);
      if (want_sampled(h.node_count(), params_.cubic_cap)) {
        v = mean_closeness_vitality_sampled(h, params_.n_samples, params_.seed);
        mark_sampled(params_.n_samples);
      } else {
        v = plain_mean(closeness_vitality(h));
      }
      break;
    }
    case MetricId::avg_resource_allocation:
      v = avg_link_prediction(g_, LinkIndex::resource_allocation, params_.pair_source);
      break;
    case MetricId::avg_jaccard:
      v = avg_link_prediction(g_, LinkIndex::jaccard, params_.pair_source);
      break;
    case MetricId::avg_preferential_attachment:
      v = avg_link_prediction(g_, LinkIndex::preferential_attachment, params_.pair_source);
      break;
    case MetricId::avg_preferential_attachment_normalized: {
      const double md = mean_degree();
      if (md == 0.0) throw Error(ErrorCode::UndefinedMetric, "mean degree is zero");
      v = avg_link_prediction(g_, LinkIndex::preferential_attachment, params_.pair_source) / md;
      break;
    }
    case MetricId::flp_community_count:
      v = static_cast<double>(label_propagation_communities(g_, LabelPropagation::fast, params_.seed).count);
      out.seed = params_.seed;
      break;
    case MetricId::alp_community_count:
      v = static_cast<double>(label_propagation_communities(g_, LabelPropagation::async, params_.seed).count);
      out.seed = params_.seed;
      break;
    case MetricId::gini_betweenness: {
      const auto& bc = betweenness();
      v = gini(bc);
      out.curve = lorenz_curve(bc);
      break;
    }
    case MetricId::degree_entropy: {
      std::map<std::size_t, std::size_t> counts;
      for (NodeIndex u = 0; u < n; ++u) ++counts[g_.degree(u)];
      for (auto [k, c] : counts) {
        const double p = static_cast<double>(c) / nd;
        v -= p * std::log2(p);
      }
      if (v <= 0.0) v = 0.0;
      break;
    }
    case MetricId::power_law: {
      const auto fit = fit_power_law(degree_distribution(g_));
      out.values = {fit.alpha, fit.r_squared};
      return out;
    }
  }
  out.values = {v};
  return out;
}

MetricValue compute(const TopologyGraph& g, MetricId id, const MetricParams& params) {
  MetricEngine engine(g, params);
  return engine.compute(id);
}

}  // namespace lntopo
