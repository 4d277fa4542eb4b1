#include "lntopo/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lntopo/csv.hpp"
#include "lntopo/error.hpp"

namespace lntopo {
namespace {

[[noreturn]] void invalid(std::size_t line, const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, line, msg); }

bool parse_bool(std::string_view v, std::size_t line) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  invalid(line, "expected a boolean, got '" + std::string(v) + "'");
}

template <class T>
T parse_num(std::string_view v, std::size_t line) {
  if constexpr (std::is_floating_point_v<T>) {
    auto x = parse_double(v);
    if (!x) invalid(line, "expected a number, got '" + std::string(v) + "'");
    return *x;
  } else {
    auto x = parse_number<T>(v);
    if (!x) invalid(line, "expected an integer, got '" + std::string(v) + "'");
    return *x;
  }
}

std::vector<std::string> parse_list(std::string_view v) {
  std::vector<std::string> out;
  for (auto part : split(v, ',')) {
    auto t = trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::string join_metrics(const std::vector<MetricId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) s += ", ";
    s += to_string(ids[i]);
  }
  return s;
}

std::string_view mode_name(ModePreference m) {
  switch (m) {
    case ModePreference::automatic:
      return "automatic";
    case ModePreference::exact:
      return "exact";
    case ModePreference::sampled:
      return "sampled";
  }
  return "?";
}

std::string_view format_name(RecordFormat f) {
  switch (f) {
    case RecordFormat::lines:
      return "lines";
    case RecordFormat::hex:
      return "hex";
    case RecordFormat::binary:
      return "binary";
  }
  return "?";
}

}  // namespace

std::vector<UnixTime> expand_cadence(const Cadence& c) {
  if (c.step <= 0 || c.end < c.start) throw Error(ErrorCode::ConfigInvalid, "cadence needs step > 0 and end >= start");
  std::vector<UnixTime> out;
  for (UnixTime t = c.start; t <= c.end; t += c.step) out.push_back(t);
  return out;
}

PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  PipelineConfig cfg;
  cfg.metrics.assign(all_metrics().begin(), all_metrics().end());
  auto resolve = [&](std::string_view v) {
    std::filesystem::path p{std::string(v)};
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  using Setter = std::function<void(std::string_view, std::size_t)>;
  std::map<std::string, Setter> setters;
  auto& mp = cfg.metric_params;
  auto& st = cfg.stability_options;

  setters["input.records"] = [&](auto v, auto) { cfg.records = resolve(v); };
  setters["input.format"] = [&](auto v, auto line) {
    auto f = parse_record_format(v);
    if (!f) invalid(line, "unknown record format '" + std::string(v) + "'");
    cfg.format = *f;
  };
  setters["input.parse_mode"] = [&](auto v, auto line) {
    if (v == "lenient") {
      cfg.parse_mode = ParseMode::lenient;
    } else if (v == "strict") {
      cfg.parse_mode = ParseMode::strict;
    } else {
      invalid(line, "parse_mode is lenient or strict");
    }
  };
  setters["input.schedule"] = [&](auto v, auto) { cfg.schedule = resolve(v); };
  setters["input.cadence"] = [&](auto v, auto line) {
    const auto parts = parse_list(v);
    if (parts.size() != 3) invalid(line, "cadence is 'start, end, step'");
    cfg.cadence = Cadence{parse_num<UnixTime>(parts[0], line), parse_num<UnixTime>(parts[1], line),
                          parse_num<std::int64_t>(parts[2], line)};
  };
  setters["input.window"] = [&](auto v, auto line) { cfg.liveness_window = parse_num<std::int64_t>(v, line); };

  setters["metrics.list"] = [&](auto v, auto line) {
    cfg.metrics.clear();
    if (v == "all") {
      cfg.metrics.assign(all_metrics().begin(), all_metrics().end());
      return;
    }
    for (const auto& name : parse_list(v)) {
      auto id = parse_metric_id(name);
      if (!id) invalid(line, "unknown metric '" + name + "'");
      if (std::find(cfg.metrics.begin(), cfg.metrics.end(), *id) == cfg.metrics.end()) cfg.metrics.push_back(*id);
    }
  };
  setters["metrics.linear_cap"] = [&](auto v, auto line) { mp.linear_cap = parse_num<std::size_t>(v, line); };
  setters["metrics.cubic_cap"] = [&](auto v, auto line) { mp.cubic_cap = parse_num<std::size_t>(v, line); };
  setters["metrics.n_samples"] = [&](auto v, auto line) { mp.n_samples = parse_num<std::size_t>(v, line); };
  setters["metrics.seed"] = [&](auto v, auto line) { mp.seed = parse_num<std::uint64_t>(v, line); };
  setters["metrics.ccpa_alpha"] = [&](auto v, auto line) { mp.ccpa_alpha = parse_num<double>(v, line); };
  setters["metrics.mode"] = [&](auto v, auto line) {
    if (v == "automatic") {
      mp.mode = ModePreference::automatic;
    } else if (v == "exact") {
      mp.mode = ModePreference::exact;
    } else if (v == "sampled") {
      mp.mode = ModePreference::sampled;
    } else {
      invalid(line, "mode is automatic, exact or sampled");
    }
  };
  setters["metrics.pair_source"] = [&](auto v, auto line) {
    if (v == "edges") {
      mp.pair_source.kind = PairSource::Kind::edges;
    } else if (v == "non_edges") {
      mp.pair_source.kind = PairSource::Kind::sampled_non_edges;
    } else {
      invalid(line, "pair_source is edges or non_edges");
    }
  };
  setters["metrics.pair_count"] = [&](auto v, auto line) { mp.pair_source.count = parse_num<std::size_t>(v, line); };
  setters["metrics.pair_seed"] = [&](auto v, auto line) { mp.pair_source.seed = parse_num<std::uint64_t>(v, line); };

  setters["stability.enabled"] = [&](auto v, auto line) { cfg.stability = parse_bool(v, line); };
  setters["stability.hop_slack"] = [&](auto v, auto line) { st.hop_slack = parse_num<unsigned>(v, line); };
  setters["stability.sampled"] = [&](auto v, auto line) { st.sampled = parse_bool(v, line); };
  setters["stability.per_sample_rows"] = [&](auto v, auto line) { st.per_sample_rows = parse_bool(v, line); };
  setters["stability.long_range"] = [&](auto v, auto line) { st.long_range = parse_bool(v, line); };
  setters["stability.sample_size"] = [&](auto v, auto line) { st.sampler.target_size = parse_num<std::size_t>(v, line); };
  setters["stability.sample_count"] = [&](auto v, auto line) { st.sampler.count = parse_num<std::size_t>(v, line); };
  setters["stability.p_forward"] = [&](auto v, auto line) { st.sampler.p_forward = parse_num<double>(v, line); };
  setters["stability.seed"] = [&](auto v, auto line) { st.sampler.seed = parse_num<std::uint64_t>(v, line); };

  auto& cc = cfg.cost_constants;
  setters["simulation.enabled"] = [&](auto v, auto line) { cfg.simulation = parse_bool(v, line); };
  setters["simulation.models"] = [&](auto v, auto line) {
    cfg.models.clear();
    for (const auto& name : parse_list(v)) {
      auto k = parse_cost_model(name);
      if (!k) invalid(line, "unknown cost model '" + name + "'");
      if (std::find(cfg.models.begin(), cfg.models.end(), *k) == cfg.models.end()) cfg.models.push_back(*k);
    }
  };
  setters["simulation.n_tx"] = [&](auto v, auto line) { cfg.sim.n_tx = parse_num<std::size_t>(v, line); };
  setters["simulation.amount"] = [&](auto v, auto line) { cfg.sim.amount_msat = parse_num<std::uint64_t>(v, line); };
  setters["simulation.seed"] = [&](auto v, auto line) { cfg.sim.seed = parse_num<std::uint64_t>(v, line); };
  setters["simulation.lnd_risk_factor"] = [&](auto v, auto line) { cc.lnd_risk_factor = parse_num<double>(v, line); };
  setters["simulation.cln_risk_factor"] = [&](auto v, auto line) { cc.cln_risk_factor = parse_num<double>(v, line); };
  setters["simulation.cln_blocks_per_year"] = [&](auto v, auto line) {
    cc.cln_blocks_per_year = parse_num<double>(v, line);
  };
  setters["simulation.ecl_hop_base"] = [&](auto v, auto line) { cc.ecl_hop_base = parse_num<double>(v, line); };
  setters["simulation.ecl_weight_base"] = [&](auto v, auto line) { cc.ecl_weight_base = parse_num<double>(v, line); };
  setters["simulation.ecl_weight_cltv"] = [&](auto v, auto line) { cc.ecl_weight_cltv = parse_num<double>(v, line); };
  setters["simulation.ecl_cltv_scale"] = [&](auto v, auto line) { cc.ecl_cltv_scale = parse_num<double>(v, line); };
  setters["simulation.epsilon"] = [&](auto v, auto line) { cc.epsilon = parse_num<double>(v, line); };

  setters["output.dir"] = [&](auto v, auto) { cfg.output_dir = resolve(v); };
  setters["run.threads"] = [&](auto v, auto line) { cfg.threads = parse_num<std::size_t>(v, line); };

  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto text = trim(line);
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = trim(text.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') invalid(line_no, "unterminated section header");
      section = std::string(trim(text.substr(1, text.size() - 2)));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) invalid(line_no, "expected 'key = value'");
    const auto name = trim(text.substr(0, eq));
    // dotted keys outside a section, as in the canonical form
    const std::string key =
        section.empty() && name.find('.') != std::string_view::npos ? std::string(name) : section + "." + std::string(name);
    const auto value = trim(text.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) invalid(line_no, "unknown setting '" + key + "'");
    it->second(value, line_no);
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open config " + path.string());
  return parse_config(in, path.parent_path());
}

void validate_config(const PipelineConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); };
  if (c.records.empty()) fail("input.records is required");
  if (!std::filesystem::is_regular_file(c.records)) fail("records file not found: " + c.records.string());
  if (c.schedule && c.cadence) fail("set either input.schedule or input.cadence, not both");
  if (!c.schedule && !c.cadence) fail("input.schedule or input.cadence is required");
  if (c.schedule && !std::filesystem::is_regular_file(*c.schedule)) {
    fail("schedule file not found: " + c.schedule->string());
  }
  if (c.cadence && (c.cadence->step <= 0 || c.cadence->end < c.cadence->start)) {
    fail("cadence needs step > 0 and end >= start");
  }
  if (c.liveness_window <= 0) fail("input.window must be positive");
  if (c.metric_params.n_samples == 0) fail("metrics.n_samples must be positive");
  if (c.metric_params.ccpa_alpha < 0.0 || c.metric_params.ccpa_alpha > 1.0) fail("metrics.ccpa_alpha must be in [0,1]");
  const auto& s = c.stability_options.sampler;
  if (s.p_forward <= 0.0 || s.p_forward >= 1.0) fail("stability.p_forward must be in (0,1)");
  if (s.target_size == 0 || s.count == 0) fail("stability sample size and count must be positive");
  if (c.simulation && c.models.empty()) fail("simulation.models is empty");
  if (c.sim.amount_msat == 0) fail("simulation.amount must be positive");
  const auto& k = c.cost_constants;
  for (double x : {k.lnd_risk_factor, k.cln_risk_factor, k.ecl_hop_base, k.ecl_weight_base, k.ecl_weight_cltv}) {
    if (!(x >= 0.0)) fail("cost-model constants must be non-negative");
  }
  if (!(k.epsilon > 0.0)) fail("simulation.epsilon must be positive");
  if (!(k.cln_blocks_per_year > 0.0) || !(k.ecl_cltv_scale > 0.0)) fail("cost-model scales must be positive");
  if (c.threads == 0) fail("run.threads must be positive");
  std::vector<UnixTime> schedule;
  try {
    schedule = resolve_schedule(c);
  } catch (const Error& e) {
    fail(std::string("schedule unreadable: ") + e.what());
  }
  if (schedule.empty()) fail("schedule is empty");
  if (!std::is_sorted(schedule.begin(), schedule.end())) fail("schedule timestamps must be ascending");
}

std::vector<UnixTime> resolve_schedule(const PipelineConfig& config) {
  if (config.schedule) return read_schedule(*config.schedule);
  if (config.cadence) return expand_cadence(*config.cadence);
  throw Error(ErrorCode::ConfigInvalid, "no schedule configured");
}

std::string canonical_config(const PipelineConfig& c) {
  std::ostringstream o;
  const auto& mp = c.metric_params;
  const auto& st = c.stability_options;
  const auto& k = c.cost_constants;
  o << "input.records = " << c.records.generic_string() << '\n'
    << "input.format = " << format_name(c.format) << '\n'
    << "input.parse_mode = " << (c.parse_mode == ParseMode::strict ? "strict" : "lenient") << '\n';
  if (c.schedule) o << "input.schedule = " << c.schedule->generic_string() << '\n';
  if (c.cadence) o << "input.cadence = " << c.cadence->start << ", " << c.cadence->end << ", " << c.cadence->step << '\n';
  o << "input.window = " << c.liveness_window << '\n'
    << "metrics.list = " << join_metrics(c.metrics) << '\n'
    << "metrics.linear_cap = " << mp.linear_cap << '\n'
    << "metrics.cubic_cap = " << mp.cubic_cap << '\n'
    << "metrics.n_samples = " << mp.n_samples << '\n'
    << "metrics.seed = " << mp.seed << '\n'
    << "metrics.ccpa_alpha = " << format_double(mp.ccpa_alpha) << '\n'
    << "metrics.mode = " << mode_name(mp.mode) << '\n'
    << "metrics.pair_source = " << (mp.pair_source.kind == PairSource::Kind::edges ? "edges" : "non_edges") << '\n'
    << "metrics.pair_count = " << mp.pair_source.count << '\n'
    << "metrics.pair_seed = " << mp.pair_source.seed << '\n'
    << "stability.enabled = " << c.stability << '\n'
    << "stability.hop_slack = " << st.hop_slack << '\n'
    << "stability.sampled = " << st.sampled << '\n'
    << "stability.per_sample_rows = " << st.per_sample_rows << '\n'
    << "stability.long_range = " << st.long_range << '\n'
    << "stability.sample_size = " << st.sampler.target_size << '\n'
    << "stability.sample_count = " << st.sampler.count << '\n'
    << "stability.p_forward = " << format_double(st.sampler.p_forward) << '\n'
    << "stability.seed = " << st.sampler.seed << '\n'
    << "simulation.enabled = " << c.simulation << '\n'
    << "simulation.models = ";
  for (std::size_t i = 0; i < c.models.size(); ++i) o << (i ? ", " : "") << to_string(c.models[i]);
  o << '\n'
    << "simulation.n_tx = " << c.sim.n_tx << '\n'
    << "simulation.amount = " << c.sim.amount_msat << '\n'
    << "simulation.seed = " << c.sim.seed << '\n'
    << "simulation.lnd_risk_factor = " << format_double(k.lnd_risk_factor) << '\n'
    << "simulation.cln_risk_factor = " << format_double(k.cln_risk_factor) << '\n'
    << "simulation.cln_blocks_per_year = " << format_double(k.cln_blocks_per_year) << '\n'
    << "simulation.ecl_hop_base = " << format_double(k.ecl_hop_base) << '\n'
    << "simulation.ecl_weight_base = " << format_double(k.ecl_weight_base) << '\n'
    << "simulation.ecl_weight_cltv = " << format_double(k.ecl_weight_cltv) << '\n'
    << "simulation.ecl_cltv_scale = " << format_double(k.ecl_cltv_scale) << '\n'
    << "simulation.epsilon = " << format_double(k.epsilon) << '\n';
  return o.str();
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace lntopo
