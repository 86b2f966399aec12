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

#ifndef LAMBDA_FIELD_LAMBDA_GRID_HPP
#define LAMBDA_FIELD_LAMBDA_GRID_HPP

#include <atomic>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "lambda_field/geometry.hpp"
#include "lambda_field/intensity.hpp"

namespace lambda_field {

/// A cell together with the area of it that a path or footprint covers.
struct CellArea {
  CellIndex index = 0;
  double area = 0.0;
};

/// Dense 2-D field of hit/miss counts.
///
/// Concurrent readers are safe. Count updates go through per-cell atomic
/// saturating increments, so concurrent beam integration is also safe; the
/// estimates depend only on the final counts.
class LambdaGrid {
 public:
  explicit LambdaGrid(GridGeometry geometry, double lambda_max = kDefaultLambdaMax)
      : geometry_{geometry}, cells_(geometry.size()), lambda_max_{lambda_max} {
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
      throw std::invalid_argument("lambda_max must be positive and finite");
    }
  }

  [[nodiscard]] const GridGeometry& geometry() const { return geometry_; }
  [[nodiscard]] double lambda_max() const { return lambda_max_; }
  [[nodiscard]] std::size_t size() const { return cells_.size(); }

  [[nodiscard]] CellStats stats(CellIndex i) const { return cells_.at(i); }
  [[nodiscard]] CellStats stats(CellCoord c) const { return stats(checked_index(c)); }
  [[nodiscard]] std::span<const CellStats> cells() const { return cells_; }

  void add_hit(CellIndex i) { saturating_increment(cells_.at(i).hits); }
  void add_miss(CellIndex i) { saturating_increment(cells_.at(i).misses); }

  /// Overwrites a cell; intended for loading dumps and building fixtures.
  void set_stats(CellIndex i, CellStats s) { cells_.at(i) = s; }

  [[nodiscard]] IntensityEstimate mle(CellIndex i, const SensorModel& sensor) const {
    return lambda_mle(stats(i), sensor, lambda_max_);
  }

  [[nodiscard]] ConfidenceInterval interval(CellIndex i, const SensorModel& sensor) const {
    return confidence_bounds(stats(i), sensor, lambda_max_);
  }

  [[nodiscard]] double lambda(CellIndex i, const SensorModel& sensor, Bound bound) const {
    return select_lambda(stats(i), sensor, bound, lambda_max_);
  }

  [[nodiscard]] std::uint64_t total_count() const {
    std::uint64_t sum = 0;
    for (const auto& c : cells_) {
      sum += c.total();
    }
    return sum;
  }

  friend bool operator==(const LambdaGrid&, const LambdaGrid&) = default;

 private:
  CellIndex checked_index(CellCoord c) const {
    if (!geometry_.in_bounds(c)) {
      throw std::out_of_range("cell coordinate outside grid");
    }
    return geometry_.index(c);
  }

  static void saturating_increment(std::uint32_t& counter) {
    std::atomic_ref<std::uint32_t> ref{counter};
    auto current = ref.load(std::memory_order_relaxed);
    while (current != std::numeric_limits<std::uint32_t>::max() &&
           !ref.compare_exchange_weak(current, current + 1, std::memory_order_relaxed)) {
    }
  }

  GridGeometry geometry_;
  std::vector<CellStats> cells_;
  double lambda_max_;
};

/// Area-weighted sum of intensities over a set of cells.
/// \throws std::out_of_range if a cell index is outside the grid.
[[nodiscard]] inline double integrated_lambda(const LambdaGrid& grid, const SensorModel& sensor,
                                              std::span<const CellArea> cells, Bound bound = Bound::kMle) {
  double sum = 0.0;
  for (const auto& c : cells) {
    if (c.index >= grid.size()) {
      throw std::out_of_range("cell index outside grid");
    }
    sum += c.area * grid.lambda(c.index, sensor, bound);
  }
  return sum;
}

}  // namespace lambda_field

#endif  // LAMBDA_FIELD_LAMBDA_GRID_HPP
