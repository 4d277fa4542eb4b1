#include "lntopo/inequality.hpp"

#include <algorithm>

#include "lntopo/error.hpp"

namespace lntopo {

double gini(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptySample, "gini of empty vector");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0) throw Error(ErrorCode::DegenerateDistribution, "gini needs non-negative values");
    total += x[i];
    weighted += static_cast<double>(i + 1) * x[i];
  }
  if (total == 0.0) return 0.0;
  const auto n = static_cast<double>(x.size());
  return 2.0 * weighted / (n * total) - (n + 1.0) / n;
}

std::vector<std::pair<double, double>> lorenz_curve(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptySample, "lorenz curve of empty vector");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  double total = 0.0;
  for (double v : x) total += v;
  const auto n = static_cast<double>(x.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(x.size() + 1);
  out.emplace_back(0.0, 0.0);
  double running = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    running += x[i];
    const double share = total == 0.0 ? static_cast<double>(i + 1) / n : running / total;
    out.emplace_back(static_cast<double>(i + 1) / n, share);
  }
  out.back() = {1.0, 1.0};
  return out;
}

}  // namespace lntopo
