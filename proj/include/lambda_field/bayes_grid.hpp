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

#ifndef LAMBDA_FIELD_BAYES_GRID_HPP
#define LAMBDA_FIELD_BAYES_GRID_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "lambda_field/geometry.hpp"
#include "lambda_field/intensity.hpp"
#include "lambda_field/path_risk.hpp"
#include "lambda_field/ray_trace.hpp"
#include "lambda_field/sensor.hpp"

namespace lambda_field {

/// Inverse sensor model of the log-odds baseline.
struct BayesParams {
  double p_occ_given_hit = 0.7;
  double p_free_given_miss = 0.7;
  double log_odds_max = 10.0;
  double threshold = 0.5;

  void validate() const {
    if (!(p_occ_given_hit > 0.5 && p_occ_given_hit < 1.0)) {
      throw std::invalid_argument("p_occ_given_hit must lie in (0.5, 1)");
    }
    if (!(p_free_given_miss > 0.5 && p_free_given_miss < 1.0)) {
      throw std::invalid_argument("p_free_given_miss must lie in (0.5, 1)");
    }
    if (!(log_odds_max > 0.0) || !std::isfinite(log_odds_max)) {
      throw std::invalid_argument("log-odds clamp must be positive");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
      throw std::invalid_argument("occupancy threshold must lie in (0, 1)");
    }
  }
  friend bool operator==(const BayesParams&, const BayesParams&) = default;
};

[[nodiscard]] inline double logit(double p) { return std::log(p / (1.0 - p)); }

/// Classical occupancy grid with log-odds cells, prior 0.5.
class BayesGrid {
 public:
  explicit BayesGrid(GridGeometry geometry, BayesParams params = {})
      : geometry_{geometry}, params_{params}, log_odds_(geometry.size(), 0.0) {
    params_.validate();
  }

  [[nodiscard]] const GridGeometry& geometry() const { return geometry_; }
  [[nodiscard]] const BayesParams& params() const { return params_; }
  [[nodiscard]] std::size_t size() const { return log_odds_.size(); }

  [[nodiscard]] double log_odds(CellIndex i) const { return log_odds_.at(i); }
  [[nodiscard]] double occupancy(CellIndex i) const { return 1.0 / (1.0 + std::exp(-log_odds(i))); }
  [[nodiscard]] bool occupied(CellIndex i) const { return occupancy(i) >= params_.threshold; }

  void set_log_odds(CellIndex i, double l) { log_odds_.at(i) = clamp(l); }
  void set_occupancy(CellIndex i, double p) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("occupancy must lie in (0, 1)");
    }
    set_log_odds(i, logit(p));
  }

  void add_hit(CellIndex i) { set_log_odds(i, log_odds(i) + logit(params_.p_occ_given_hit)); }
  void add_miss(CellIndex i) { set_log_odds(i, log_odds(i) - logit(params_.p_free_given_miss)); }

  friend bool operator==(const BayesGrid&, const BayesGrid&) = default;

 private:
  double clamp(double l) const { return std::clamp(l, -params_.log_odds_max, params_.log_odds_max); }

  GridGeometry geometry_;
  BayesParams params_;
  std::vector<double> log_odds_;
};

/// Beam-endpoint inverse sensor model: the endpoint cell turns toward
/// occupied, every other crossed cell toward free.
inline void bayes_update(BayesGrid& grid, const Beam& beam, const SensorModel& sensor) {
  const auto& g = grid.geometry();
  const Point2 end = beam.hit ? beam.endpoint() : beam.origin + sensor.max_range() * beam.direction;
  const auto end_cell = beam.hit ? g.index_of(end) : std::nullopt;
  for (const auto& chord : trace_beam(g, beam.origin, end)) {
    if (end_cell && chord.index == *end_cell) {
      continue;
    }
    grid.add_miss(chord.index);
  }
  if (end_cell) {
    grid.add_hit(*end_cell);
  }
}

/// Probability of colliding with at least one of independent cells.
[[nodiscard]] inline double naive_path_probability(std::span<const double> occupancies) {
  double free = 1.0;
  for (double p : occupancies) {
    free *= 1.0 - p;
  }
  return 1.0 - free;
}

[[nodiscard]] inline double naive_path_probability(const BayesGrid& grid, const PathCrossing& crossing) {
  std::vector<double> p;
  p.reserve(crossing.size());
  for (const auto& c : crossing.cells()) {
    p.push_back(grid.occupancy(c.index));
  }
  return naive_path_probability(p);
}

}  // namespace lambda_field

#endif  // LAMBDA_FIELD_BAYES_GRID_HPP
