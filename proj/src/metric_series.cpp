#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "lntopo/csv.hpp"
#include "lntopo/metrics.hpp"

namespace lntopo {
namespace {

constexpr std::string_view kHeader = "timestamp,metric_id,value,mode,n_samples,seed";

bool key_less(const MetricRow& a, const MetricRow& b) {
  return std::pair(a.timestamp, a.metric) < std::pair(b.timestamp, b.metric);
}

std::optional<ErrorCode> parse_error_code(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::MissingColumns); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (to_string(code) == name) return code;
  }
  return std::nullopt;
}

}  // namespace

void MetricSeries::add(MetricRow row) {
  auto it = std::lower_bound(rows_.begin(), rows_.end(), row, key_less);
  if (it != rows_.end() && !key_less(row, *it)) {
    throw Error(ErrorCode::SchemaMismatch,
                "duplicate metric row " + std::string(to_string(row.metric)) + " at " + std::to_string(row.timestamp));
  }
  rows_.insert(it, std::move(row));
}

const MetricRow* MetricSeries::find(UnixTime ts, MetricId id) const {
  MetricRow key;
  key.timestamp = ts;
  key.metric = id;
  auto it = std::lower_bound(rows_.begin(), rows_.end(), key, key_less);
  if (it == rows_.end() || key_less(key, *it)) return nullptr;
  return &*it;
}

std::vector<UnixTime> MetricSeries::timestamps() const {
  std::vector<UnixTime> out;
  for (const auto& r : rows_) {
    if (out.empty() || out.back() != r.timestamp) out.push_back(r.timestamp);
  }
  return out;
}

std::size_t MetricSeries::error_count() const {
  return static_cast<std::size_t>(std::count_if(rows_.begin(), rows_.end(), [](const MetricRow& r) { return r.error.has_value(); }));
}

void write_metrics_csv(std::ostream& out, const MetricSeries& series) {
  out << kHeader << '\n';
  for (const auto& r : series.rows()) {
    out << r.timestamp << ',' << to_string(r.metric) << ',';
    if (r.error) {
      out << to_string(*r.error) << ",error,,\n";
      continue;
    }
    const auto& v = *r.value;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      if (i > 0) out << ';';
      out << format_double(v.values[i]);
    }
    out << ',' << (v.mode == ComputeMode::exact ? "exact" : "sampled") << ',';
    if (v.mode == ComputeMode::sampled) out << v.n_samples;
    out << ',';
    if (v.seed) out << *v.seed;
    out << '\n';
  }
}

MetricSeries read_metrics_csv(std::istream& in) {
  MetricSeries series;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || trim(line) != kHeader) throw Error(ErrorCode::SchemaMismatch, 1, "bad metrics header");
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw Error(ErrorCode::Malformed, line_no, "expected 6 fields");
    MetricRow row;
    const auto ts = parse_number<UnixTime>(f[0]);
    const auto id = parse_metric_id(f[1]);
    if (!ts || !id) throw Error(ErrorCode::Malformed, line_no, "bad timestamp or metric id");
    row.timestamp = *ts;
    row.metric = *id;
    if (f[3] == "error") {
      row.error = parse_error_code(f[2]);
      if (!row.error) throw Error(ErrorCode::Malformed, line_no, "unknown error code");
    } else {
      MetricValue v;
      v.metric = *id;
      for (auto part : split(f[2], ';')) {
        const auto x = parse_double(part);
        if (!x) throw Error(ErrorCode::Malformed, line_no, "bad value");
        v.values.push_back(*x);
      }
      if (f[3] == "sampled") {
        v.mode = ComputeMode::sampled;
        const auto k = parse_number<std::size_t>(f[4]);
        if (!k) throw Error(ErrorCode::Malformed, line_no, "sampled row without n_samples");
        v.n_samples = *k;
      } else if (f[3] != "exact") {
        throw Error(ErrorCode::Malformed, line_no, "bad mode");
      }
      if (!f[5].empty()) {
        const auto s = parse_number<std::uint64_t>(f[5]);
        if (!s) throw Error(ErrorCode::Malformed, line_no, "bad seed");
        v.seed = *s;
      }
      row.value = std::move(v);
    }
    series.add(std::move(row));
  }
  return series;
}

}  // namespace lntopo
