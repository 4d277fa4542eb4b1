#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lntopo/config.hpp"
#include "lntopo/csv.hpp"
#include "lntopo/error.hpp"
#include "lntopo/pipeline.hpp"
#include "lntopo/snapshot.hpp"
#include "lntopo/version.hpp"

using namespace lntopo;

namespace {

struct Common {
  std::string config;
  std::size_t threads = 1;
  CLI::Option* threads_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key = value config file")->check(CLI::ExistingFile);
  c.threads_opt = sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

PipelineConfig base_config(const Common& c) {
  PipelineConfig cfg;
  cfg.metrics.assign(all_metrics().begin(), all_metrics().end());
  if (!c.config.empty()) cfg = load_config(c.config);
  return cfg;
}

std::size_t threads_for(const Common& c, const PipelineConfig& cfg) {
  return c.threads_opt->count() > 0 ? c.threads : cfg.threads;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  return out;
}

std::vector<GossipRecord> load_records(const PipelineConfig& cfg) {
  if (cfg.records.empty()) throw Error(ErrorCode::ConfigInvalid, "no records file given");
  auto batch = read_records(cfg.records, cfg.format, cfg.parse_mode);
  if (batch.skipped > 0) std::cerr << "skipped " << batch.skipped << " unparseable records\n";
  return order_records(batch.records);
}

void apply_format(PipelineConfig& cfg, const std::string& format, bool strict) {
  if (!format.empty()) {
    auto f = parse_record_format(format);
    if (!f) throw Error(ErrorCode::ConfigInvalid, "unknown format " + format);
    cfg.format = *f;
  }
  if (strict) cfg.parse_mode = ParseMode::strict;
}

std::vector<MetricId> parse_metric_list(const std::vector<std::string>& names) {
  std::vector<MetricId> out;
  for (const auto& n : names) {
    if (n == "all") return {all_metrics().begin(), all_metrics().end()};
    auto id = parse_metric_id(n);
    if (!id) throw Error(ErrorCode::ConfigInvalid, "unknown metric " + n);
    out.push_back(*id);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lightning Network topology toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // ingest
  Common ingest_c;
  std::string ingest_in, ingest_out, ingest_format;
  bool ingest_strict = false;
  auto* ingest = app.add_subcommand("ingest", "parse, order and normalise gossip records");
  add_common(ingest, ingest_c);
  ingest->add_option("--input", ingest_in, "records file");
  ingest->add_option("--format", ingest_format, "lines | hex | binary");
  ingest->add_flag("--strict", ingest_strict, "reject records that violate BOLT#7 constraints");
  ingest->add_option("--out", ingest_out, "normalised record lines")->required();

  // snapshot
  Common snap_c;
  std::string snap_records, snap_out, snap_format;
  std::int64_t snap_at = 0;
  std::optional<std::int64_t> snap_window;
  auto* snap = app.add_subcommand("snapshot", "reconstruct one snapshot");
  add_common(snap, snap_c);
  snap->add_option("--records", snap_records);
  snap->add_option("--format", snap_format);
  snap->add_option("--at", snap_at, "unix time")->required();
  snap->add_option("--window", snap_window, "liveness window in seconds");
  snap->add_option("--out", snap_out, "output directory")->required();

  // series
  Common series_c;
  std::string series_records, series_schedule, series_cadence, series_out, series_format;
  std::optional<std::int64_t> series_window;
  auto* series = app.add_subcommand("series", "reconstruct a snapshot series");
  add_common(series, series_c);
  series->add_option("--records", series_records);
  series->add_option("--format", series_format);
  series->add_option("--schedule", series_schedule, "file with one timestamp per line");
  series->add_option("--cadence", series_cadence, "start,end,step");
  series->add_option("--window", series_window);
  series->add_option("--out", series_out, "output directory")->required();

  // metrics
  Common metrics_c;
  std::string metrics_series, metrics_out, metrics_mode;
  std::vector<std::string> metrics_list;
  std::optional<std::size_t> metrics_samples;
  std::optional<std::uint64_t> metrics_seed;
  auto* metrics = app.add_subcommand("metrics", "compute the metric catalog over a series");
  add_common(metrics, metrics_c);
  metrics->add_option("--series", metrics_series, "series directory")->required()->check(CLI::ExistingDirectory);
  metrics->add_option("--metrics", metrics_list, "metric ids or 'all'")->delimiter(',');
  metrics->add_option("--mode", metrics_mode, "automatic | exact | sampled");
  metrics->add_option("--samples", metrics_samples);
  metrics->add_option("--seed", metrics_seed);
  metrics->add_option("--out", metrics_out, "metrics CSV")->required();

  // stability
  Common stab_c;
  std::string stab_series, stab_out;
  std::optional<unsigned> stab_slack;
  std::optional<std::uint64_t> stab_seed;
  bool stab_no_samples = false;
  auto* stab = app.add_subcommand("stability", "intersection rates, KS and Wasserstein between snapshots");
  add_common(stab, stab_c);
  stab->add_option("--series", stab_series)->required()->check(CLI::ExistingDirectory);
  stab->add_option("--hop-slack", stab_slack);
  stab->add_option("--seed", stab_seed);
  stab->add_flag("--no-samples", stab_no_samples, "skip ForestFire-sampled rows");
  stab->add_option("--out", stab_out, "stability CSV")->required();

  // simulate
  Common sim_c;
  std::string sim_snapshot, sim_model = "lnd", sim_out, sim_stats;
  std::optional<std::size_t> sim_ntx;
  std::optional<std::uint64_t> sim_amount, sim_seed;
  auto* sim = app.add_subcommand("simulate", "route uniform payments and tally hops");
  add_common(sim, sim_c);
  sim->add_option("--snapshot", sim_snapshot)->required()->check(CLI::ExistingDirectory);
  sim->add_option("--model", sim_model, "lnd | ecl | cln");
  sim->add_option("--ntx", sim_ntx);
  sim->add_option("--amount", sim_amount, "msat");
  sim->add_option("--seed", sim_seed);
  sim->add_option("--out", sim_out, "tally CSV")->required();
  sim->add_option("--stats", sim_stats, "hop statistics CSV");

  // report
  Common report_c;
  std::string report_dir;
  std::vector<std::string> report_figures;
  auto* report = app.add_subcommand("report", "emit plot data from a pipeline output directory");
  add_common(report, report_c);
  report->add_option("--dir", report_dir)->required()->check(CLI::ExistingDirectory);
  report->add_option("--figure", report_figures)->delimiter(',');

  // all
  Common all_c;
  std::string all_out;
  auto* all = app.add_subcommand("all", "run the whole pipeline from a config");
  add_common(all, all_c);
  all->add_option("--out", all_out, "override output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (ingest->parsed()) {
      auto cfg = base_config(ingest_c);
      if (!ingest_in.empty()) cfg.records = ingest_in;
      apply_format(cfg, ingest_format, ingest_strict);
      const auto records = load_records(cfg);
      auto out = open_out(ingest_out);
      write_records(out, records);
      std::cout << records.size() << " records\n";
    } else if (snap->parsed()) {
      auto cfg = base_config(snap_c);
      if (!snap_records.empty()) cfg.records = snap_records;
      apply_format(cfg, snap_format, false);
      if (snap_window) cfg.liveness_window = *snap_window;
      const auto records = load_records(cfg);
      const auto s = build_snapshot(records, snap_at, cfg.liveness_window);
      write_snapshot(s, snap_out);
      std::cout << s.nodes.size() << " nodes, " << s.channels.size() << " channels\n";
    } else if (series->parsed()) {
      auto cfg = base_config(series_c);
      if (!series_records.empty()) cfg.records = series_records;
      apply_format(cfg, series_format, false);
      if (series_window) cfg.liveness_window = *series_window;
      if (!series_schedule.empty()) {
        cfg.schedule = series_schedule;
        cfg.cadence.reset();
      } else if (!series_cadence.empty()) {
        const auto parts = split(series_cadence, ',');
        if (parts.size() != 3) throw Error(ErrorCode::ConfigInvalid, "--cadence is start,end,step");
        auto a = parse_number<UnixTime>(trim(parts[0]));
        auto b = parse_number<UnixTime>(trim(parts[1]));
        auto c = parse_number<std::int64_t>(trim(parts[2]));
        if (!a || !b || !c) throw Error(ErrorCode::ConfigInvalid, "--cadence is start,end,step");
        cfg.cadence = Cadence{*a, *b, *c};
        cfg.schedule.reset();
      }
      const auto schedule = resolve_schedule(cfg);
      const auto records = load_records(cfg);
      const auto snaps = build_series(records, schedule, cfg.liveness_window);
      write_series(snaps, series_out);
      std::cout << snaps.size() << " snapshots\n";
    } else if (metrics->parsed()) {
      auto cfg = base_config(metrics_c);
      if (!metrics_list.empty()) cfg.metrics = parse_metric_list(metrics_list);
      auto& mp = cfg.metric_params;
      if (metrics_mode == "exact") {
        mp.mode = ModePreference::exact;
      } else if (metrics_mode == "sampled") {
        mp.mode = ModePreference::sampled;
      } else if (metrics_mode == "automatic") {
        mp.mode = ModePreference::automatic;
      } else if (!metrics_mode.empty()) {
        throw Error(ErrorCode::ConfigInvalid, "unknown mode " + metrics_mode);
      }
      if (metrics_samples) mp.n_samples = *metrics_samples;
      if (metrics_seed) mp.seed = *metrics_seed;
      const auto snaps = read_series(metrics_series);
      std::vector<TopologyGraph> graphs;
      std::vector<UnixTime> times;
      for (const auto& s : snaps) {
        graphs.push_back(to_undirected(s));
        times.push_back(s.at);
      }
      const auto table = compute_metric_series(graphs, times, cfg.metrics, mp, threads_for(metrics_c, cfg));
      auto out = open_out(metrics_out);
      write_metrics_csv(out, table);
      if (table.error_count() > 0) {
        std::cerr << table.error_count() << " metric error rows\n";
        return 2;
      }
    } else if (stab->parsed()) {
      auto cfg = base_config(stab_c);
      auto opts = cfg.stability_options;
      if (stab_slack) opts.hop_slack = *stab_slack;
      if (stab_seed) opts.sampler.seed = *stab_seed;
      if (stab_no_samples) opts.sampled = false;
      opts.threads = threads_for(stab_c, cfg);
      const auto snaps = read_series(stab_series);
      const auto rows = stability_series(snaps, opts);
      auto out = open_out(stab_out);
      write_stability_csv(out, rows);
    } else if (sim->parsed()) {
      auto cfg = base_config(sim_c);
      auto kind = parse_cost_model(sim_model);
      if (!kind) throw Error(ErrorCode::ConfigInvalid, "unknown model " + sim_model);
      CostModel model = cfg.cost_constants;
      model.kind = *kind;
      auto sc = cfg.sim;
      if (sim_ntx) sc.n_tx = *sim_ntx;
      if (sim_amount) sc.amount_msat = *sim_amount;
      if (sim_seed) sc.seed = *sim_seed;
      sc.threads = threads_for(sim_c, cfg);
      const auto snapshot = read_snapshot(sim_snapshot);
      const auto tally = simulate(snapshot, model, sc);
      auto out = open_out(sim_out);
      write_tally_csv(out, tally);
      if (!sim_stats.empty()) {
        auto so = open_out(sim_stats);
        write_hop_statistics_csv(so, hop_statistics(tally));
      }
      std::cout << tally.n_routed << " of " << tally.n_requests << " payments routed\n";
    } else if (report->parsed()) {
      const auto data = load_report_data(report_dir);
      std::vector<PlotFigure> figures;
      for (const auto& name : report_figures) {
        auto f = parse_plot_figure(name);
        if (!f) throw Error(ErrorCode::ConfigInvalid, "unknown figure " + name);
        figures.push_back(*f);
      }
      const bool explicit_list = !figures.empty();
      if (!explicit_list) figures.assign(all_figures().begin(), all_figures().end());
      int status = 0;
      for (auto f : figures) {
        try {
          std::cout << emit_plot_data(data, f, std::filesystem::path(report_dir) / "plots").string() << '\n';
        } catch (const Error& e) {
          if (e.code() != ErrorCode::MissingColumns) throw;
          std::cerr << e.what() << '\n';
          if (explicit_list) status = 2;
        }
      }
      return status;
    } else if (all->parsed()) {
      if (all_c.config.empty()) throw Error(ErrorCode::ConfigInvalid, "all requires --config");
      auto cfg = load_config(all_c.config);
      if (!all_out.empty()) cfg.output_dir = all_out;
      const auto result = run_pipeline(cfg, threads_for(all_c, cfg));
      for (const auto& f : result.failures) std::cerr << f << '\n';
      return static_cast<int>(result.status);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
