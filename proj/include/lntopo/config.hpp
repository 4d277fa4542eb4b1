#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lntopo/gossip.hpp"
#include "lntopo/metrics.hpp"
#include "lntopo/routing.hpp"
#include "lntopo/stability.hpp"

namespace lntopo {

struct Cadence {
  UnixTime start = 0;
  UnixTime end = 0;
  std::int64_t step = 0;
};

std::vector<UnixTime> expand_cadence(const Cadence& cadence);

struct PipelineConfig {
  // [input]
  std::filesystem::path records;
  RecordFormat format = RecordFormat::lines;
  ParseMode parse_mode = ParseMode::lenient;
  std::optional<std::filesystem::path> schedule;
  std::optional<Cadence> cadence;
  std::int64_t liveness_window = kDefaultLivenessWindow;
  // [metrics]
  std::vector<MetricId> metrics;
  MetricParams metric_params;
  // [stability]
  bool stability = true;
  StabilityOptions stability_options;
  // [simulation]
  bool simulation = true;
  std::vector<CostModelKind> models{CostModelKind::lnd, CostModelKind::ecl, CostModelKind::cln};
  SimulationConfig sim;
  CostModel cost_constants;  // kind is ignored
  // [output]
  std::filesystem::path output_dir = "out";
  // [run]
  std::size_t threads = 1;
};

/// Parses `key = value` lines grouped under [section] headers; '#' starts a
/// comment. Outside any section, `section.key = value` is accepted too.
/// Relative paths resolve against base_dir. Throws ConfigInvalid.
PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Checks referenced inputs exist and values are consistent. Throws ConfigInvalid.
void validate_config(const PipelineConfig& config);

std::vector<UnixTime> resolve_schedule(const PipelineConfig& config);

/// Canonical `section.key = value` text of every setting that affects results
/// (thread count and output directory excluded), and its 64-bit FNV-1a hash.
std::string canonical_config(const PipelineConfig& config);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace lntopo
