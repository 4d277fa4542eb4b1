#pragma once

#include <span>
#include <utility>
#include <vector>

namespace lntopo {

/// Gini coefficient of non-negative values; 0 for an all-zero vector.
double gini(std::span<const double> values);

/// Lorenz curve over ascending values: n+1 points from (0,0) to (1,1).
std::vector<std::pair<double, double>> lorenz_curve(std::span<const double> values);

}  // namespace lntopo
