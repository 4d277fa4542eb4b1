#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lntopo/config.hpp"
#include "lntopo/metrics.hpp"
#include "lntopo/routing.hpp"
#include "lntopo/stability.hpp"

namespace lntopo {

enum class ExitStatus { success = 0, config_error = 1, partial_failure = 2 };

struct PipelineResult {
  ExitStatus status = ExitStatus::success;
  std::size_t snapshots = 0;
  std::size_t metric_errors = 0;
  std::vector<std::string> failures;  // human-readable, also in the manifest
};

/// Everything the plot emitter needs, in memory.
struct ReportData {
  MetricSeries metrics;
  std::vector<SnapshotPairStats> stability;
  std::map<std::pair<CostModelKind, UnixTime>, HopStatistics> hops;
  std::map<UnixTime, std::vector<std::pair<double, double>>> lorenz;
};

/// Metric rows for every (snapshot, metric); failures become error rows.
/// Lorenz curves of betweenness are collected into `lorenz` when given.
MetricSeries compute_metric_series(std::span<const TopologyGraph> graphs, std::span<const UnixTime> times,
                                   std::span<const MetricId> metrics, const MetricParams& params, std::size_t threads,
                                   std::map<UnixTime, std::vector<std::pair<double, double>>>* lorenz = nullptr);

/// Validates the config (throws ConfigInvalid before any work), then writes
/// metrics.csv, stability.csv, hops_<model>_<ts>.csv, hopstats_<model>_<ts>.csv,
/// lorenz_<ts>.csv, plots/<figure>.dat and finally run_manifest. Output is a
/// pure function of the config; `threads` only changes speed.
PipelineResult run_pipeline(const PipelineConfig& config, std::size_t threads);

enum class PlotFigure { density_degree, powerlaw, pa_score, connectivity, function, patterns, stability, hops, lorenz };

std::span<const PlotFigure> all_figures();
std::string_view to_string(PlotFigure figure) noexcept;
std::optional<PlotFigure> parse_plot_figure(std::string_view name);

/// Writes <dir>/<figure>.dat (whitespace-separated, '#' header line) and
/// returns its path. Throws MissingColumns when the data lacks the figure's inputs.
std::filesystem::path emit_plot_data(const ReportData& data, PlotFigure figure, const std::filesystem::path& dir);

/// Reads back the tables run_pipeline wrote into `dir`.
ReportData load_report_data(const std::filesystem::path& dir);

void write_lorenz_csv(std::ostream& out, std::span<const std::pair<double, double>> curve);
std::vector<std::pair<double, double>> read_lorenz_csv(std::istream& in);

}  // namespace lntopo
