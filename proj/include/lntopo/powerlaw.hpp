#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lntopo/graph.hpp"

namespace lntopo {

struct FrequencyPoint {
  double degree = 0.0;
  double frequency = 0.0;
};

struct PowerLawFit {
  double alpha = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Empirical P(k) for every observed k >= 1 (count / total sample size).
std::vector<FrequencyPoint> degree_frequencies(std::span<const std::uint32_t> values);

/// Least squares on (ln k, ln P(k)) over points with k >= 1 and P(k) > 0.
/// Throws DegenerateDistribution with fewer than 3 usable points.
PowerLawFit fit_power_law(std::span<const FrequencyPoint> points);
PowerLawFit fit_power_law(const DegreeDistribution& dd);

}  // namespace lntopo
