#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lntopo {

enum class ErrorCode {
  UnknownType,
  Truncated,
  MalformedField,
  Io,
  Malformed,
  UnsortedInput,
  UnsortedSchedule,
  SchemaMismatch,
  NodeNotFound,
  ComponentTooSmall,
  EmptyGraph,
  MetricUnsupportedInMode,
  UndefinedMetric,
  DegenerateDistribution,
  NoPairs,
  EmptyBase,
  EmptySample,
  TooFewSnapshots,
  PolicyUnusable,
  GraphTooSmall,
  EmptyTally,
  ConfigInvalid,
  MissingColumns,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the toolkit; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  /// Line-addressed error (Malformed in strict record reading).
  Error(ErrorCode code, std::size_t line, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// 1-based line number, 0 when not line-addressed.
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_ = 0;
};

}  // namespace lntopo
