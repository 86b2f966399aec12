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

#ifndef LAMBDA_FIELD_PLANNER_HPP
#define LAMBDA_FIELD_PLANNER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lambda_field/geometry.hpp"
#include "lambda_field/intensity.hpp"
#include "lambda_field/lambda_grid.hpp"
#include "lambda_field/path_risk.hpp"
#include "lambda_field/sensor.hpp"

/**
 * \file
 * \brief Trajectory-sampling local planner gated by upper-bound expected risk.
 *
 * Candidates are constant (v, omega) arcs over a fixed horizon. Each one is
 * swept over the field and its expected momentum risk is evaluated with the
 * upper confidence bound of every cell. Arcs above the risk budget are
 * dropped; the survivor that stays closest to a reference path wins. When no
 * arc survives the robot stops.
 */

namespace lambda_field {

struct PlannerConfig {
  double v_max = 1.0;
  double omega_max = 1.0;
  std::size_t v_samples = 5;
  std::size_t omega_samples = 5;
  double horizon = 1.0;
  /// Upper-bound expected momentum allowed, kg m/s.
  double max_risk = 1.0;
  /// Arc-length spacing of candidate poses, m.
  double step = 0.05;

  void validate() const {
    if (!(v_max > 0.0)) {
      throw std::invalid_argument("v_max must be positive");
    }
    if (!(omega_max >= 0.0)) {
      throw std::invalid_argument("omega_max must be nonnegative");
    }
    if (v_samples < 1 || omega_samples < 1) {
      throw std::invalid_argument("at least one sample per axis is required");
    }
    if (!(horizon > 0.0)) {
      throw std::invalid_argument("horizon must be positive");
    }
    if (!(max_risk > 0.0)) {
      throw std::invalid_argument("max_risk must be positive");
    }
    if (!(step > 0.0)) {
      throw std::invalid_argument("densification step must be positive");
    }
  }
};

struct TrajectoryCandidate {
  double v = 0.0;
  double omega = 0.0;
  double horizon = 1.0;
  std::vector<Pose2> poses;
  double risk_upper = 0.0;
  double closeness = 0.0;
};

/// Unicycle motion at constant (v, omega), sampled every `step` meters of arc length.
[[nodiscard]] inline std::vector<Pose2> integrate_arc(const Pose2& start, double v, double omega, double horizon,
                                                      double step) {
  const double arc = std::abs(v) * horizon;
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(arc / step)));
  std::vector<Pose2> poses;
  poses.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = horizon * static_cast<double>(k) / static_cast<double>(n);
    const double theta = start.theta + omega * t;
    if (std::abs(omega) < 1e-12) {
      poses.push_back({start.x + v * t * std::cos(start.theta), start.y + v * t * std::sin(start.theta), theta});
    } else {
      const double r = v / omega;
      poses.push_back({start.x + r * (std::sin(theta) - std::sin(start.theta)),
                       start.y - r * (std::cos(theta) - std::cos(start.theta)), theta});
    }
  }
  return poses;
}

/// Uniform (v, omega) grid over (0, v_max] x [-omega_max, omega_max].
///
/// v = 0 is excluded: standing still is the stop decision, not a candidate.
[[nodiscard]] inline std::vector<TrajectoryCandidate> sample_arcs(const Pose2& pose, const PlannerConfig& config) {
  config.validate();
  std::vector<TrajectoryCandidate> out;
  out.reserve(config.v_samples * config.omega_samples);
  for (std::size_t i = 0; i < config.v_samples; ++i) {
    const double v = config.v_max * static_cast<double>(i + 1) / static_cast<double>(config.v_samples);
    for (std::size_t j = 0; j < config.omega_samples; ++j) {
      const double omega =
          config.omega_samples == 1
              ? 0.0
              : -config.omega_max + 2.0 * config.omega_max * static_cast<double>(j) /
                                        static_cast<double>(config.omega_samples - 1);
      out.push_back({v, omega, config.horizon, integrate_arc(pose, v, omega, config.horizon, config.step), 0.0, 0.0});
    }
  }
  return out;
}

/// Distance from a point to a polyline (or to a single point).
[[nodiscard]] inline double distance_to_path(Point2 p, std::span<const Pose2> path) {
  if (path.empty()) {
    throw std::invalid_argument("reference path is empty");
  }
  double best = distance(p, path.front().position());
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Point2 a = path[k].position();
    const Point2 ab = path[k + 1].position() - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, distance(p, a + t * ab));
  }
  return best;
}

/// Mean distance of the arc samples to the reference path, m.
[[nodiscard]] inline double path_closeness(std::span<const Pose2> poses, std::span<const Pose2> reference) {
  double sum = 0.0;
  for (const auto& p : poses) {
    sum += distance_to_path(p.position(), reference);
  }
  return sum / static_cast<double>(poses.size());
}

struct PlanDecision {
  std::optional<TrajectoryCandidate> choice;
  std::size_t n_admissible = 0;
  std::size_t n_candidates = 0;

  [[nodiscard]] bool stopped() const { return !choice.has_value(); }
};

/// Upper-bound expected momentum risk of one candidate; infinite if it leaves the grid.
[[nodiscard]] inline double candidate_risk(const LambdaGrid& field, const SensorModel& sensor,
                                           const TrajectoryCandidate& candidate, const RobotShape& shape) {
  try {
    const auto crossing = crossing_over(field, sensor, candidate.poses, shape.width);
    return expected_risk(crossing, momentum_risk(shape, VelocityProfile::constant(candidate.v)), Bound::kUpper);
  } catch (const std::out_of_range&) {
    return std::numeric_limits<double>::infinity();
  }
}

/// One planning cycle. Ties on closeness (within 1e-9 m) break on lower
/// risk, then lower |omega|, then lower v.
///
/// \throws std::out_of_range if the pose is outside the field.
[[nodiscard]] inline PlanDecision plan_step(const LambdaGrid& field, const SensorModel& sensor, const Pose2& pose,
                                            std::span<const Pose2> reference, const RobotShape& shape,
                                            const PlannerConfig& config) {
  shape.validate();
  if (!field.geometry().contains(pose.position())) {
    throw std::out_of_range("planning pose outside field");
  }
  auto candidates = sample_arcs(pose, config);
  PlanDecision decision;
  decision.n_candidates = candidates.size();

  constexpr double kTieTolerance = 1e-9;
  for (auto& c : candidates) {
    c.risk_upper = candidate_risk(field, sensor, c, shape);
    if (!(c.risk_upper <= config.max_risk)) {
      continue;
    }
    ++decision.n_admissible;
    c.closeness = path_closeness(c.poses, reference);
    if (!decision.choice) {
      decision.choice = c;
      continue;
    }
    const auto& best = *decision.choice;
    bool better = false;
    if (c.closeness < best.closeness - kTieTolerance) {
      better = true;
    } else if (c.closeness <= best.closeness + kTieTolerance) {
      if (c.risk_upper != best.risk_upper) {
        better = c.risk_upper < best.risk_upper;
      } else if (std::abs(c.omega) != std::abs(best.omega)) {
        better = std::abs(c.omega) < std::abs(best.omega);
      } else {
        better = c.v < best.v;
      }
    }
    if (better) {
      decision.choice = c;
    }
  }
  return decision;
}

struct EpisodeOptions {
  std::size_t max_steps = 60;
  std::size_t scans_per_step = 10;
  std::size_t beams_per_scan = 360;
  double goal_tolerance = 0.5;
  std::uint64_t seed = 1;
  ScanOptions scan;
};

struct StepLog {
  double t = 0.0;
  double v = 0.0;
  double omega = 0.0;
  double risk_upper = 0.0;
  std::size_t n_admissible = 0;
  bool stopped = false;
};

struct EpisodeResult {
  std::vector<StepLog> steps;
  /// Robot pose at the start of each step, plus the final pose.
  std::vector<Pose2> trace;
  bool reached_goal = false;
};

/// Closed-loop run: scan, integrate, plan, execute the chosen arc.
///
/// The episode ends at the goal, at the first stop decision, or after
/// `max_steps`. Scans are drawn from `truth` when given; otherwise the field
/// is used as-is.
[[nodiscard]] inline EpisodeResult run_episode(LambdaGrid field, const GroundTruthMap* truth,
                                               const SensorModel& sensor, Pose2 start, Point2 goal,
                                               std::span<const Pose2> reference, const RobotShape& shape,
                                               const PlannerConfig& config, const EpisodeOptions& options) {
  if (truth != nullptr && !(truth->geometry() == field.geometry())) {
    throw std::invalid_argument("ground truth and field geometries differ");
  }
  EpisodeResult result;
  Pose2 pose = start;
  std::uint64_t scan_counter = 0;
  for (std::size_t step = 0; step < options.max_steps; ++step) {
    result.trace.push_back(pose);
    if (distance(pose.position(), goal) <= options.goal_tolerance) {
      result.reached_goal = true;
      return result;
    }
    if (truth != nullptr) {
      for (std::size_t s = 0; s < options.scans_per_step; ++s) {
        for (const auto& beam :
             simulate_scan(*truth, pose, sensor, options.beams_per_scan, options.seed + scan_counter++, options.scan)) {
          apply_beam(field, beam, sensor);
        }
      }
    }
    const auto decision = plan_step(field, sensor, pose, reference, shape, config);
    StepLog log{static_cast<double>(step) * config.horizon, 0.0, 0.0, 0.0, decision.n_admissible, decision.stopped()};
    if (decision.stopped()) {
      result.steps.push_back(log);
      return result;
    }
    log.v = decision.choice->v;
    log.omega = decision.choice->omega;
    log.risk_upper = decision.choice->risk_upper;
    result.steps.push_back(log);
    pose = decision.choice->poses.back();
  }
  result.trace.push_back(pose);
  result.reached_goal = distance(pose.position(), goal) <= options.goal_tolerance;
  return result;
}

}  // namespace lambda_field

#endif  // LAMBDA_FIELD_PLANNER_HPP
