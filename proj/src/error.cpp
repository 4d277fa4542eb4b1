#include "lntopo/error.hpp"

namespace lntopo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::MalformedField: return "MalformedField";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::UnsortedInput: return "UnsortedInput";
    case ErrorCode::UnsortedSchedule: return "UnsortedSchedule";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::NodeNotFound: return "NodeNotFound";
    case ErrorCode::ComponentTooSmall: return "ComponentTooSmall";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::MetricUnsupportedInMode: return "MetricUnsupportedInMode";
    case ErrorCode::UndefinedMetric: return "UndefinedMetric";
    case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::NoPairs: return "NoPairs";
    case ErrorCode::EmptyBase: return "EmptyBase";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::TooFewSnapshots: return "TooFewSnapshots";
    case ErrorCode::PolicyUnusable: return "PolicyUnusable";
    case ErrorCode::GraphTooSmall: return "GraphTooSmall";
    case ErrorCode::EmptyTally: return "EmptyTally";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::MissingColumns: return "MissingColumns";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Error::Error(ErrorCode code, std::size_t line, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + " at line " + std::to_string(line) + ": " +
                         message),
      code_(code),
      line_(line) {}

}  // namespace lntopo
