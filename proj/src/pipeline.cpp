#include "lntopo/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lntopo/csv.hpp"
#include "lntopo/error.hpp"
#include "lntopo/parallel.hpp"
#include "lntopo/version.hpp"

namespace lntopo {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

std::string hex64(std::uint64_t x) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) s[static_cast<std::size_t>(i)] = kDigits[x & 0xF];
  return s;
}

}  // namespace

MetricSeries compute_metric_series(std::span<const TopologyGraph> graphs, std::span<const UnixTime> times,
                                   std::span<const MetricId> metrics, const MetricParams& params, std::size_t threads,
                                   std::map<UnixTime, std::vector<std::pair<double, double>>>* lorenz) {
  if (graphs.size() != times.size()) throw Error(ErrorCode::SchemaMismatch, "one timestamp per graph expected");
  std::vector<std::vector<MetricRow>> rows(graphs.size());
  std::vector<std::vector<std::pair<double, double>>> curves(graphs.size());
  parallel_for(graphs.size(), threads, [&](std::size_t i) {
    MetricEngine engine(graphs[i], params);
    for (MetricId id : metrics) {
      MetricRow row;
      row.timestamp = times[i];
      row.metric = id;
      try {
        row.value = engine.compute(id);
      } catch (const Error& e) {
        row.error = e.code();
      }
      rows[i].push_back(std::move(row));
    }
    if (lorenz != nullptr) {
      try {
        curves[i] = engine.compute(MetricId::gini_betweenness).curve;
      } catch (const Error&) {
        curves[i].clear();
      }
    }
  });
  MetricSeries series;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    for (auto& r : rows[i]) series.add(std::move(r));
    if (lorenz != nullptr && !curves[i].empty()) (*lorenz)[times[i]] = std::move(curves[i]);
  }
  return series;
}

PipelineResult run_pipeline(const PipelineConfig& config, std::size_t threads) {
  validate_config(config);
  if (threads == 0) throw Error(ErrorCode::ConfigInvalid, "threads must be positive");
  const auto schedule = resolve_schedule(config);
  PipelineResult result;

  const auto batch = read_records(config.records, config.format, config.parse_mode);
  const auto records = order_records(batch.records);
  const auto snapshots = build_series(records, schedule, config.liveness_window);
  result.snapshots = snapshots.size();

  std::vector<TopologyGraph> graphs;
  std::vector<UnixTime> times;
  for (const auto& s : snapshots) {
    graphs.push_back(to_undirected(s));
    times.push_back(s.at);
  }

  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir / "plots");

  ReportData report;
  report.metrics = compute_metric_series(graphs, times, config.metrics, config.metric_params, threads, &report.lorenz);
  result.metric_errors = report.metrics.error_count();
  if (result.metric_errors > 0) result.failures.push_back(std::to_string(result.metric_errors) + " metric error rows");
  {
    auto out = open_out(dir / "metrics.csv");
    write_metrics_csv(out, report.metrics);
  }
  for (const auto& [ts, curve] : report.lorenz) {
    auto out = open_out(dir / ("lorenz_" + std::to_string(ts) + ".csv"));
    write_lorenz_csv(out, curve);
  }

  if (config.stability) {
    if (graphs.size() >= 2) {
      auto opts = config.stability_options;
      opts.threads = threads;
      report.stability = stability_series(graphs, times, opts);
    } else {
      result.failures.push_back("stability skipped: fewer than two snapshots");
    }
    auto out = open_out(dir / "stability.csv");
    write_stability_csv(out, report.stability);
  }

  if (config.simulation) {
    struct Job {
      CostModelKind model;
      std::size_t snapshot;
    };
    std::vector<Job> jobs;
    for (auto m : config.models) {
      for (std::size_t i = 0; i < snapshots.size(); ++i) jobs.push_back({m, i});
    }
    std::vector<std::optional<HopTally>> tallies(jobs.size());
    std::vector<std::string> errors(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t j) {
      CostModel model = config.cost_constants;
      model.kind = jobs[j].model;
      try {
        tallies[j] = simulate(snapshots[jobs[j].snapshot], model, config.sim);
      } catch (const Error& e) {
        errors[j] = std::string(to_string(e.code()));
      }
    });
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      const auto ts = times[jobs[j].snapshot];
      const std::string suffix = std::string(to_string(jobs[j].model)) + "_" + std::to_string(ts);
      if (!tallies[j]) {
        result.failures.push_back("simulation " + suffix + ": " + errors[j]);
        continue;
      }
      {
        auto out = open_out(dir / ("hops_" + suffix + ".csv"));
        write_tally_csv(out, *tallies[j]);
      }
      auto stats = hop_statistics(*tallies[j]);
      {
        auto out = open_out(dir / ("hopstats_" + suffix + ".csv"));
        write_hop_statistics_csv(out, stats);
      }
      report.hops[{jobs[j].model, ts}] = std::move(stats);
    }
  }

  std::vector<std::string> figures_written;
  for (auto f : all_figures()) {
    try {
      emit_plot_data(report, f, dir / "plots");
      figures_written.emplace_back(to_string(f));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingColumns) throw;
    }
  }

  if (!result.failures.empty()) result.status = ExitStatus::partial_failure;

  const std::string canonical = canonical_config(config);
  auto out = open_out(dir / "run_manifest");
  out << "version = " << kVersion << '\n'
      << "config_hash = fnv1a64:" << hex64(fnv1a64(canonical)) << '\n'
      << "metrics_seed = " << config.metric_params.seed << '\n'
      << "pair_seed = " << config.metric_params.pair_source.seed << '\n'
      << "stability_seed = " << config.stability_options.sampler.seed << '\n'
      << "simulation_seed = " << config.sim.seed << '\n'
      << "simulation_amount_msat = " << config.sim.amount_msat << '\n'
      << "records_read = " << batch.records.size() << '\n'
      << "records_skipped = " << batch.skipped << '\n'
      << "snapshots = " << snapshots.size() << '\n'
      << "distance_metrics_scope = largest_component\n"
      << "degree_entropy_base = 2\n"
      << "channel_intersection = hop distance in later snapshot <= 1 + hop_slack\n"
      << "failed_routes = counted, not resampled\n"
      << "figures = ";
  for (std::size_t i = 0; i < figures_written.size(); ++i) out << (i ? ", " : "") << figures_written[i];
  out << '\n' << "status = " << static_cast<int>(result.status) << '\n';
  for (const auto& f : result.failures) out << "failure = " << f << '\n';
  out << "\n[config]\n" << canonical;
  return result;
}

void write_lorenz_csv(std::ostream& out, std::span<const std::pair<double, double>> curve) {
  out << "population_share,value_share\n";
  for (auto [x, y] : curve) out << format_double(x) << ',' << format_double(y) << '\n';
}

std::vector<std::pair<double, double>> read_lorenz_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "population_share,value_share") {
    throw Error(ErrorCode::SchemaMismatch, 1, "bad lorenz header");
  }
  std::vector<std::pair<double, double>> curve;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    const auto x = f.size() == 2 ? parse_double(f[0]) : std::nullopt;
    const auto y = f.size() == 2 ? parse_double(f[1]) : std::nullopt;
    if (!x || !y) throw Error(ErrorCode::Malformed, line_no, "bad lorenz point");
    curve.emplace_back(*x, *y);
  }
  return curve;
}

ReportData load_report_data(const std::filesystem::path& dir) {
  ReportData data;
  auto open_in = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
    return in;
  };
  if (std::filesystem::exists(dir / "metrics.csv")) {
    auto in = open_in(dir / "metrics.csv");
    data.metrics = read_metrics_csv(in);
  }
  if (std::filesystem::exists(dir / "stability.csv")) {
    auto in = open_in(dir / "stability.csv");
    data.stability = read_stability_csv(in);
  }
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    const std::string name = p.filename().string();
    if (p.extension() != ".csv") continue;
    const std::string stem = p.stem().string();
    if (name.rfind("hopstats_", 0) == 0) {
      const auto rest = stem.substr(9);
      const auto us = rest.find('_');
      if (us == std::string::npos) continue;
      const auto model = parse_cost_model(rest.substr(0, us));
      const auto ts = parse_number<UnixTime>(rest.substr(us + 1));
      if (!model || !ts) continue;
      auto in = open_in(p);
      data.hops[{*model, *ts}] = read_hop_statistics_csv(in);
    } else if (name.rfind("lorenz_", 0) == 0) {
      const auto ts = parse_number<UnixTime>(stem.substr(7));
      if (!ts) continue;
      auto in = open_in(p);
      data.lorenz[*ts] = read_lorenz_csv(in);
    }
  }
  return data;
}

}  // namespace lntopo
