// Copyright 2026 The Lambda-Field Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LAMBDA_FIELD_INTENSITY_HPP
#define LAMBDA_FIELD_INTENSITY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

/**
 * \file
 * \brief Closed-form per-cell intensity estimates and their 95% confidence bounds.
 *
 * A cell is summarized by how often it fell inside the error region of a
 * return (hits) and how often a beam crossed it without a return (misses).
 * Under the assumption that the intensity is locally constant inside the
 * error region, the log-likelihood of all beams is maximized by
 *
 *     lambda = ln(1 + hits / misses) / e
 *
 * where e is the area of the error region.
 */

namespace lambda_field {

/// Default clamp for divergent estimates, 1/m^2.
inline constexpr double kDefaultLambdaMax = 100.0;

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.96;

/// Hit/miss tallies of one cell. Counts saturate instead of wrapping.
struct CellStats {
  std::uint32_t hits = 0;
  std::uint32_t misses = 0;

  [[nodiscard]] std::uint64_t total() const { return std::uint64_t{hits} + misses; }
  [[nodiscard]] bool observed() const { return total() > 0; }

  friend constexpr bool operator==(const CellStats&, const CellStats&) = default;
};

/// Lidar noise model: reliability of hit/miss readings and the error disk.
class SensorModel {
 public:
  /// \throws std::invalid_argument when a parameter is outside its domain.
  SensorModel(double p_hit, double p_miss, double error_radius, double max_range)
      : p_hit_{p_hit}, p_miss_{p_miss}, error_radius_{error_radius}, max_range_{max_range} {
    if (!(p_hit > 0.0 && p_hit <= 1.0)) {
      throw std::invalid_argument("p_hit must lie in (0, 1]");
    }
    if (!(p_miss > 0.0 && p_miss <= 1.0)) {
      throw std::invalid_argument("p_miss must lie in (0, 1]");
    }
    if (!(error_radius > 0.0) || !std::isfinite(error_radius)) {
      throw std::invalid_argument("error region radius must be positive");
    }
    if (!(max_range > 0.0) || !std::isfinite(max_range)) {
      throw std::invalid_argument("max range must be positive");
    }
  }

  /// Builds a disk-shaped error region from its area instead of its radius.
  [[nodiscard]] static SensorModel with_error_area(double p_hit, double p_miss, double error_area,
                                                   double max_range) {
    if (!(error_area > 0.0)) {
      throw std::invalid_argument("error region area must be positive");
    }
    return SensorModel{p_hit, p_miss, std::sqrt(error_area / std::numbers::pi), max_range};
  }

  [[nodiscard]] double p_hit() const { return p_hit_; }
  [[nodiscard]] double p_miss() const { return p_miss_; }
  [[nodiscard]] double error_radius() const { return error_radius_; }
  [[nodiscard]] double error_area() const { return std::numbers::pi * error_radius_ * error_radius_; }
  [[nodiscard]] double max_range() const { return max_range_; }

  friend bool operator==(const SensorModel&, const SensorModel&) = default;

 private:
  double p_hit_;
  double p_miss_;
  double error_radius_;
  double max_range_;
};

/// Which estimate of a cell intensity to use.
enum class Bound { kMle, kLower, kUpper };

struct IntensityEstimate {
  double lambda = 0.0;
  bool observed = false;
};

struct ConfidenceInterval {
  double lambda_low = 0.0;
  double lambda_high = 0.0;
  double level = 0.95;

  [[nodiscard]] double width() const { return lambda_high - lambda_low; }
};

/// Maximum-likelihood intensity of a cell.
///
/// Never-observed cells report 0 and are flagged; cells with hits but no
/// misses saturate at `lambda_max`. Every result is clamped to `lambda_max`.
[[nodiscard]] inline IntensityEstimate lambda_mle(CellStats stats, double error_area,
                                                  double lambda_max = kDefaultLambdaMax) {
  if (!stats.observed()) {
    return {0.0, false};
  }
  if (stats.hits == 0) {
    return {0.0, true};
  }
  if (stats.misses == 0) {
    return {lambda_max, true};
  }
  const double ratio = static_cast<double>(stats.hits) / static_cast<double>(stats.misses);
  return {std::min(std::log1p(ratio) / error_area, lambda_max), true};
}

[[nodiscard]] inline IntensityEstimate lambda_mle(CellStats stats, const SensorModel& sensor,
                                                  double lambda_max = kDefaultLambdaMax) {
  return lambda_mle(stats, sensor.error_area(), lambda_max);
}

/// Intensity implied by `count` hits out of `total` readings, for real-valued counts.
/// \throws std::invalid_argument unless 0 <= count <= total and total > 0.
[[nodiscard]] inline double lambda_from_count(double count, double total, double error_area,
                                              double lambda_max = kDefaultLambdaMax) {
  if (!(total > 0.0)) {
    throw std::invalid_argument("total count must be positive");
  }
  if (!(count >= 0.0) || count > total) {
    throw std::invalid_argument("count must lie in [0, total]");
  }
  if (count == total) {
    return lambda_max;
  }
  return std::min(std::log1p(count / (total - count)) / error_area, lambda_max);
}

/// 95% bounds on the intensity from a Gaussian approximation of the
/// Poisson-binomial hit count.
[[nodiscard]] inline ConfidenceInterval confidence_bounds(CellStats stats, const SensorModel& sensor,
                                                          double lambda_max = kDefaultLambdaMax) {
  if (!stats.observed()) {
    return {0.0, lambda_max, 0.95};
  }
  const double h = stats.hits;
  const double m = stats.misses;
  const double total = h + m;
  const double p_h = sensor.p_hit();
  const double p_m = sensor.p_miss();

  const double mean = h * p_h + m * (1.0 - p_m);
  const double sigma = std::sqrt(h * (1.0 - p_h) * p_h + m * (1.0 - p_m) * p_m);
  const double k_low = std::max(mean - kZ95 * sigma, 0.0);
  const double k_high = std::min(mean + kZ95 * sigma, total);

  const double e = sensor.error_area();
  return {lambda_from_count(k_low, total, e, lambda_max),
          lambda_from_count(k_high, total, e, lambda_max), 0.95};
}

/// Intensity of a cell under the selected estimator.
[[nodiscard]] inline double select_lambda(CellStats stats, const SensorModel& sensor, Bound bound,
                                          double lambda_max = kDefaultLambdaMax) {
  switch (bound) {
    case Bound::kMle:
      return lambda_mle(stats, sensor, lambda_max).lambda;
    case Bound::kLower:
      return confidence_bounds(stats, sensor, lambda_max).lambda_low;
    case Bound::kUpper:
      return confidence_bounds(stats, sensor, lambda_max).lambda_high;
  }
  return 0.0;
}

/// Probability of at least one collision given an integrated intensity.
/// \throws std::invalid_argument for negative or NaN input.
[[nodiscard]] inline double collision_probability(double integrated_lambda) {
  if (!(integrated_lambda >= 0.0)) {
    throw std::invalid_argument("integrated intensity must be nonnegative");
  }
  return -std::expm1(-integrated_lambda);
}

}  // namespace lambda_field

#endif  // LAMBDA_FIELD_INTENSITY_HPP
