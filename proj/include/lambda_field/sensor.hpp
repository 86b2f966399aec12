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

#ifndef LAMBDA_FIELD_SENSOR_HPP
#define LAMBDA_FIELD_SENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "lambda_field/geometry.hpp"
#include "lambda_field/intensity.hpp"
#include "lambda_field/lambda_grid.hpp"
#include "lambda_field/ray_trace.hpp"

/**
 * \file
 * \brief Turning lidar beams into hit/miss counts, and a synthetic lidar.
 */

namespace lambda_field {

/// One lidar reading in the world frame.
struct Beam {
  Point2 origin;
  /// Unit direction.
  Point2 direction{1.0, 0.0};
  /// Measured range; equals the sensor max range for no-return beams.
  double range = 0.0;
  bool hit = false;

  [[nodiscard]] double angle() const { return std::atan2(direction.y, direction.x); }
  [[nodiscard]] Point2 endpoint() const { return origin + range * direction; }
  friend constexpr bool operator==(const Beam&, const Beam&) = default;
};

/// Disjoint partition of the cells one beam touched.
struct BeamFootprint {
  /// Cells crossed without return, ordered from the sensor outward.
  std::vector<CellIndex> missed;
  /// Cells of the error region around the return, plus the endpoint cell.
  std::vector<CellIndex> hit;
};

/// Splits a beam into crossed-free cells and error-region cells.
///
/// For a return, the ray walk stops at the first cell belonging to the error
/// region; cells in both sets count as hit only. A no-return beam marks every
/// crossed cell up to the sensor max range as missed.
///
/// \throws std::out_of_range if the beam origin is outside the grid.
[[nodiscard]] inline BeamFootprint beam_footprint(const GridGeometry& geometry, const Beam& beam,
                                                  const SensorModel& sensor) {
  BeamFootprint fp;
  if (!beam.hit) {
    for (const auto& chord : trace_beam(geometry, beam.origin, beam.origin + sensor.max_range() * beam.direction)) {
      fp.missed.push_back(chord.index);
    }
    return fp;
  }
  fp.hit = error_region_cells(geometry, beam.endpoint(), sensor.error_radius());
  // The endpoint cell always takes the hit, however small the disk.
  if (const auto end = geometry.index_of(beam.endpoint());
      end && std::find(fp.hit.begin(), fp.hit.end(), *end) == fp.hit.end()) {
    fp.hit.push_back(*end);
  }
  const std::unordered_set<CellIndex> region(fp.hit.begin(), fp.hit.end());
  for (const auto& chord : trace_beam(geometry, beam.origin, beam.endpoint())) {
    if (region.contains(chord.index)) {
      break;
    }
    fp.missed.push_back(chord.index);
  }
  return fp;
}

/// Integrates one beam into the field.
inline void apply_beam(LambdaGrid& grid, const Beam& beam, const SensorModel& sensor) {
  const auto fp = beam_footprint(grid.geometry(), beam, sensor);
  for (auto i : fp.missed) {
    grid.add_miss(i);
  }
  for (auto i : fp.hit) {
    grid.add_hit(i);
  }
}

/// True intensity per cell, used to synthesize scans.
class GroundTruthMap {
 public:
  explicit GroundTruthMap(GridGeometry geometry) : geometry_{geometry}, intensity_(geometry.size(), 0.0) {}

  GroundTruthMap(GridGeometry geometry, std::vector<double> intensity)
      : geometry_{geometry}, intensity_{std::move(intensity)} {
    if (intensity_.size() != geometry_.size()) {
      throw std::invalid_argument("ground truth size does not match geometry");
    }
    for (double v : intensity_) {
      if (!(v >= 0.0)) {
        throw std::invalid_argument("ground truth intensity must be nonnegative");
      }
    }
  }

  [[nodiscard]] const GridGeometry& geometry() const { return geometry_; }
  [[nodiscard]] double intensity(CellIndex i) const { return intensity_.at(i); }
  [[nodiscard]] const std::vector<double>& intensities() const { return intensity_; }

  void set_intensity(CellIndex i, double value) {
    if (!(value >= 0.0)) {
      throw std::invalid_argument("ground truth intensity must be nonnegative");
    }
    intensity_.at(i) = value;
  }

  /// Sets every cell whose center lies in the axis-aligned box [lo, hi].
  void fill_box(Point2 lo, Point2 hi, double value) {
    for (CellIndex i = 0; i < geometry_.size(); ++i) {
      const auto c = geometry_.center(i);
      if (c.x >= lo.x && c.x <= hi.x && c.y >= lo.y && c.y <= hi.y) {
        set_intensity(i, value);
      }
    }
  }

 private:
  GridGeometry geometry_;
  std::vector<double> intensity_;
};

struct ScanOptions {
  /// Angular span of the scan, centered on the pose heading.
  double field_of_view = 2.0 * std::numbers::pi;
  /// Width of the strip a beam sweeps when drawing physical collisions;
  /// zero selects the map resolution.
  double beam_width = 0.0;
};

/// Synthesizes one scan over a ground-truth intensity map.
///
/// Each beam draws its first physical collision from the truth intensity
/// integrated over a strip of width `beam_width`. Sensor noise is then
/// applied: with probability 1 - p_hit a spurious return appears uniformly
/// along the ray, with probability 1 - p_miss a true return is dropped, and
/// surviving returns are displaced along the ray by a point drawn uniformly
/// in the error disk. Deterministic for a given seed.
///
/// \throws std::out_of_range if the pose is outside the map.
[[nodiscard]] inline std::vector<Beam> simulate_scan(const GroundTruthMap& truth, const Pose2& pose,
                                                     const SensorModel& sensor, std::size_t beam_count,
                                                     std::uint64_t seed, const ScanOptions& options = {}) {
  const auto& geometry = truth.geometry();
  if (!geometry.contains(pose.position())) {
    throw std::out_of_range("scan pose outside ground-truth map");
  }
  const double width = options.beam_width > 0.0 ? options.beam_width : geometry.resolution();
  const double max_range = sensor.max_range();

  std::mt19937_64 rng{seed};
  std::uniform_real_distribution<double> uniform{0.0, 1.0};
  std::exponential_distribution<double> exponential{1.0};

  std::vector<Beam> beams;
  beams.reserve(beam_count);
  for (std::size_t k = 0; k < beam_count; ++k) {
    const double angle = pose.theta - 0.5 * options.field_of_view +
                         (static_cast<double>(k) + 0.5) * options.field_of_view / static_cast<double>(beam_count);
    const Point2 dir{std::cos(angle), std::sin(angle)};
    const Point2 origin = pose.position();

    // First physical collision along the ray.
    const double budget = exponential(rng);
    double hazard = 0.0;
    double travelled = 0.0;
    double true_range = -1.0;
    for (const auto& chord : trace_beam(geometry, origin, origin + max_range * dir)) {
      const double rate = width * truth.intensity(chord.index);
      if (rate > 0.0) {
        const double cell_hazard = std::isinf(rate) ? rate : rate * chord.length;
        if (hazard + cell_hazard >= budget) {
          true_range = travelled + (std::isinf(rate) ? 0.0 : (budget - hazard) / rate);
          break;
        }
        hazard += cell_hazard;
      }
      travelled += chord.length;
    }

    const double u_spurious = uniform(rng);
    const double u_drop = uniform(rng);
    const double u_position = uniform(rng);
    const double u_radius = uniform(rng);
    const double u_phase = uniform(rng);

    Beam beam{origin, dir, max_range, false};
    if (u_spurious < 1.0 - sensor.p_hit()) {
      const double upper = true_range > 0.0 ? true_range : max_range;
      beam.range = std::max(u_position * upper, std::numeric_limits<double>::min());
      beam.hit = true;
    } else if (true_range >= 0.0 && u_drop >= 1.0 - sensor.p_miss()) {
      const double offset = sensor.error_radius() * std::sqrt(u_radius) * std::cos(2.0 * std::numbers::pi * u_phase);
      beam.range = std::clamp(true_range + offset, std::numeric_limits<double>::min(), max_range);
      beam.hit = true;
    }
    beams.push_back(beam);
  }
  return beams;
}

}  // namespace lambda_field

#endif  // LAMBDA_FIELD_SENSOR_HPP
