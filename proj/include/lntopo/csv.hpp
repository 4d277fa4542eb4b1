#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lntopo {

/// Shortest round-trip representation; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double value);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view text);

template <class T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view s);

}  // namespace lntopo
