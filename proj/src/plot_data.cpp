#include <array>
#include <fstream>
#include <limits>
#include <sstream>

#include "lntopo/csv.hpp"
#include "lntopo/error.hpp"
#include "lntopo/pipeline.hpp"

namespace lntopo {
namespace {

constexpr std::array kFigures = {PlotFigure::density_degree, PlotFigure::powerlaw,     PlotFigure::pa_score,
                                 PlotFigure::connectivity,   PlotFigure::function,     PlotFigure::patterns,
                                 PlotFigure::stability,      PlotFigure::hops,         PlotFigure::lorenz};

struct Column {
  std::string name;
  MetricId metric;
  std::size_t component = 0;
};

std::vector<Column> metric_columns(PlotFigure f) {
  using M = MetricId;
  switch (f) {
    case PlotFigure::density_degree:
      return {{"mean_degree", M::mean_degree}, {"density", M::density}};
    case PlotFigure::powerlaw:
      return {{"alpha", M::power_law, 0}, {"r2", M::power_law, 1}};
    case PlotFigure::pa_score:
      return {{"avg_preferential_attachment", M::avg_preferential_attachment},
              {"avg_preferential_attachment_normalized", M::avg_preferential_attachment_normalized}};
    case PlotFigure::connectivity:
      return {{"bridge_count", M::bridge_count},
              {"avg_node_connectivity", M::avg_node_connectivity},
              {"min_edge_cover_size", M::min_edge_cover_size},
              {"transitivity", M::transitivity},
              {"avg_clustering", M::avg_clustering}};
    case PlotFigure::function:
      return {{"global_efficiency", M::global_efficiency},
              {"information_centrality", M::information_centrality},
              {"mean_betweenness", M::mean_betweenness},
              {"communicability_betweenness", M::communicability_betweenness},
              {"common_neighbor_centrality", M::common_neighbor_centrality},
              {"constraint", M::constraint},
              {"effective_size", M::effective_size},
              {"burts_effective_size", M::burts_effective_size},
              {"closeness_vitality", M::closeness_vitality}};
    case PlotFigure::patterns:
      return {{"avg_resource_allocation", M::avg_resource_allocation},
              {"avg_jaccard", M::avg_jaccard},
              {"flp_community_count", M::flp_community_count},
              {"alp_community_count", M::alp_community_count}};
    default:
      return {};
  }
}

[[noreturn]] void missing(PlotFigure f, const std::string& what) {
  throw Error(ErrorCode::MissingColumns, std::string(to_string(f)) + ": no " + what);
}

void write_metric_figure(const ReportData& data, PlotFigure f, std::ostream& out) {
  const auto cols = metric_columns(f);
  for (const auto& c : cols) {
    bool any = false;
    for (const auto& r : data.metrics.rows()) {
      if (r.metric == c.metric) any = true;
    }
    if (!any) missing(f, c.name + " column");
  }
  out << "# ts";
  for (const auto& c : cols) out << ' ' << c.name;
  out << '\n';
  for (UnixTime ts : data.metrics.timestamps()) {
    out << ts;
    for (const auto& c : cols) {
      const auto* row = data.metrics.find(ts, c.metric);
      double v = std::numeric_limits<double>::quiet_NaN();
      if (row != nullptr && row->value && c.component < row->value->values.size()) v = row->value->values[c.component];
      out << ' ' << format_double(v);
    }
    out << '\n';
  }
}

}  // namespace

std::span<const PlotFigure> all_figures() { return kFigures; }

std::string_view to_string(PlotFigure figure) noexcept {
  switch (figure) {
    case PlotFigure::density_degree:
      return "density_degree";
    case PlotFigure::powerlaw:
      return "powerlaw";
    case PlotFigure::pa_score:
      return "pa_score";
    case PlotFigure::connectivity:
      return "connectivity";
    case PlotFigure::function:
      return "function";
    case PlotFigure::patterns:
      return "patterns";
    case PlotFigure::stability:
      return "stability";
    case PlotFigure::hops:
      return "hops";
    case PlotFigure::lorenz:
      return "lorenz";
  }
  return "?";
}

std::optional<PlotFigure> parse_plot_figure(std::string_view name) {
  for (auto f : kFigures) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::filesystem::path emit_plot_data(const ReportData& data, PlotFigure figure, const std::filesystem::path& dir) {
  std::ostringstream out;
  switch (figure) {
    case PlotFigure::stability: {
      if (data.stability.empty()) missing(figure, "stability rows");
      out << "# t t_next i_node i_channel hop_slack ks_D ks_p wasserstein wasserstein_norm\n";
      for (const auto& r : data.stability) {
        if (r.scope != "full") continue;
        out << r.t << ' ' << r.t_next << ' ' << format_double(r.i_node) << ' ' << format_double(r.i_channel) << ' '
            << r.hop_slack << ' ' << format_double(r.ks_statistic) << ' ' << format_double(r.ks_p_value) << ' '
            << format_double(r.wasserstein) << ' ' << format_double(r.wasserstein_norm) << '\n';
      }
      break;
    }
    case PlotFigure::hops:
      if (data.hops.empty()) missing(figure, "simulation results");
      out << "# model ts rank_fraction cum_hop_share\n";
      for (const auto& [key, stats] : data.hops) {
        for (auto [x, y] : stats.curve) {
          out << to_string(key.first) << ' ' << key.second << ' ' << format_double(x) << ' ' << format_double(y) << '\n';
        }
      }
      break;
    case PlotFigure::lorenz:
      if (data.lorenz.empty()) missing(figure, "Lorenz curves");
      out << "# ts population_share value_share\n";
      for (const auto& [ts, curve] : data.lorenz) {
        for (auto [x, y] : curve) out << ts << ' ' << format_double(x) << ' ' << format_double(y) << '\n';
      }
      break;
    default:
      write_metric_figure(data, figure, out);
      break;
  }
  std::filesystem::create_directories(dir);
  const auto path = dir / (std::string(to_string(figure)) + ".dat");
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot write " + path.string());
  file << out.str();
  return path;
}

}  // namespace lntopo
