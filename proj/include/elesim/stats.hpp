#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "elesim/rng.hpp"
#include "elesim/sampling.hpp"

namespace elesim {

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean_of: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1 denominator).
inline double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("sd_of: need at least two values");
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

struct CircularSummary {
  double mean_direction = 0.0;
  double resultant_length = 0.0; // mean resultant length in [0, 1]
};

inline CircularSummary circular_summary(const std::vector<double>& angles) {
  if (angles.empty()) throw std::invalid_argument("circular_summary: empty sample");
  double c = 0.0, s = 0.0;
  for (double a : angles) {
    c += std::cos(a);
    s += std::sin(a);
  }
  c /= static_cast<double>(angles.size());
  s /= static_cast<double>(angles.size());
  return {std::atan2(s, c), std::sqrt(c * c + s * s)};
}

struct BootstrapCi {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Percentile bootstrap for a scalar statistic of a sample.
inline BootstrapCi bootstrap_ci(const std::vector<double>& sample,
                                const std::function<double(const std::vector<double>&)>& stat,
                                int resamples, double level, Rng& rng) {
  if (sample.empty()) throw std::invalid_argument("bootstrap_ci: empty sample");
  if (resamples < 1) throw std::invalid_argument("bootstrap_ci: resamples must be positive");
  std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(resamples));
  std::vector<double> draw(sample.size());
  for (int b = 0; b < resamples; ++b) {
    for (auto& d : draw) d = sample[pick(rng)];
    stats.push_back(stat(draw));
  }
  std::sort(stats.begin(), stats.end());
  const double alpha = (1.0 - level) / 2.0;
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(stats.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= stats.size()) return stats.back();
    return stats[i] * (1.0 - frac) + stats[i + 1] * frac;
  };
  return {stat(sample), quantile(alpha), quantile(1.0 - alpha)};
}

} // namespace elesim
