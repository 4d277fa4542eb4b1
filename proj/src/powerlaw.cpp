#include "lntopo/powerlaw.hpp"

#include <cmath>
#include <map>

#include "lntopo/error.hpp"

namespace lntopo {

std::vector<FrequencyPoint> degree_frequencies(std::span<const std::uint32_t> values) {
  std::map<std::uint32_t, std::size_t> counts;
  for (auto v : values) ++counts[v];
  std::vector<FrequencyPoint> out;
  const auto n = static_cast<double>(values.size());
  for (auto [k, c] : counts) {
    if (k >= 1) out.push_back({static_cast<double>(k), static_cast<double>(c) / n});
  }
  return out;
}

PowerLawFit fit_power_law(std::span<const FrequencyPoint> points) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    if (p.degree >= 1.0 && p.frequency > 0.0) {
      xs.push_back(std::log(p.degree));
      ys.push_back(std::log(p.frequency));
    }
  }
  if (xs.size() < 3) throw Error(ErrorCode::DegenerateDistribution, "power-law fit needs 3 distinct values");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::DegenerateDistribution, "all degrees equal");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss_res += r * r;
  }
  PowerLawFit fit;
  fit.alpha = -slope;
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  fit.points = xs.size();
  return fit;
}

PowerLawFit fit_power_law(const DegreeDistribution& dd) {
  const auto pts = degree_frequencies(dd.degrees);
  return fit_power_law(pts);
}

}  // namespace lntopo
