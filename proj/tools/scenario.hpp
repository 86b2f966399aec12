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

#ifndef LAMBDA_FIELD_TOOLS_SCENARIO_HPP
#define LAMBDA_FIELD_TOOLS_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lambda_field/bayes_grid.hpp"
#include "lambda_field/geometry.hpp"
#include "lambda_field/intensity.hpp"
#include "lambda_field/io.hpp"
#include "lambda_field/path_risk.hpp"
#include "lambda_field/planner.hpp"
#include "lambda_field/sensor.hpp"

/**
 * \file
 * \brief JSON scenario files for the command-line tool.
 *
 * Every section and key is optional except `truth`; unknown keys are
 * rejected. Defaults: 0.1 m cells, p_hit 0.99, p_miss 0.9999, a 0.04 m^2
 * error disk, and a 1 kg m/s risk budget. Relative file paths resolve
 * against the directory of the scenario file.
 *
 *     {
 *       "truth": {"file": "map.pgm"}                      // or "map.csv"
 *              | {"size": [cols, rows],
 *                 "boxes": [{"min": [x, y], "max": [x, y], "lambda": 2.0}]},
 *       "grid": {"resolution": 0.1, "origin": [0, 0], "lambda_max": 100},
 *       "sensor": {"p_hit": 0.99, "p_miss": 0.9999, "error_area": 0.04, "max_range": 10},
 *       "scan": {"beams": 360, "field_of_view": 6.2832, "beam_width": 0},
 *       "bayes": {"p_occ_given_hit": 0.7, "p_free_given_miss": 0.7, "log_odds_max": 10, "threshold": 0.5},
 *       "poses": [[x, y, theta], ...],
 *       "scans_per_pose": 1,
 *       "robot": {"width": 0.5, "length": 0.6, "mass": 20},
 *       "planner": {"v_max": 1, "omega_max": 1, "v_samples": 5, "omega_samples": 5,
 *                   "horizon": 1, "max_risk": 1, "step": 0.05},
 *       "episode": {"start": [x, y, theta], "goal": [x, y], "reference_path": "ref.csv",
 *                   "max_steps": 60, "scans_per_step": 10, "goal_tolerance": 0.5,
 *                   "initial_field": "field.lfd"},
 *       "seed": 1,
 *       "output_dir": "out",
 *       "render_scale": 100
 *     }
 */

namespace lambda_field::tools {

/// The scenario file is missing, malformed or out of domain.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TruthBox {
  Point2 min;
  Point2 max;
  double lambda = 0.0;
};

struct TruthSpec {
  std::optional<std::filesystem::path> file;
  std::size_t n_cols = 0;
  std::size_t n_rows = 0;
  std::vector<TruthBox> boxes;
};

struct EpisodeSpec {
  Pose2 start;
  Point2 goal;
  std::optional<std::filesystem::path> reference_path;
  std::optional<std::filesystem::path> initial_field;
  std::size_t max_steps = 60;
  std::size_t scans_per_step = 10;
  double goal_tolerance = 0.5;
};

struct ScenarioConfig {
  TruthSpec truth;
  double resolution = 0.1;
  Point2 origin;
  double lambda_max = kDefaultLambdaMax;
  SensorModel sensor = SensorModel::with_error_area(0.99, 0.9999, 0.04, 10.0);
  std::size_t beams = 360;
  ScanOptions scan;
  BayesParams bayes;
  std::vector<Pose2> poses;
  std::size_t scans_per_pose = 1;
  RobotShape robot;
  PlannerConfig planner;
  EpisodeSpec episode;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> output_dir;
  double render_scale = 100.0;
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw ConfigError(where + " must be an object");
  }
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) {
    throw ConfigError(where + " must be a number");
  }
  return j.get<double>();
}

inline std::size_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ConfigError(where + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

inline std::vector<double> numbers(const json& j, const std::string& where, std::size_t min_n, std::size_t max_n) {
  if (!j.is_array() || j.size() < min_n || j.size() > max_n) {
    const auto n = min_n == max_n ? std::to_string(min_n) : std::to_string(min_n) + " to " + std::to_string(max_n);
    throw ConfigError(where + " must be an array of " + n + " numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Pose2 pose(const json& j, const std::string& where) {
  const auto v = numbers(j, where, 2, 3);
  return {v[0], v[1], v.size() > 2 ? v[2] : 0.0};
}

inline std::filesystem::path file(const json& j, const std::string& where, const std::filesystem::path& base) {
  if (!j.is_string() || j.get<std::string>().empty()) {
    throw ConfigError(where + " must be a non-empty string");
  }
  std::filesystem::path p = j.get<std::string>();
  return p.is_absolute() ? p : base / p;
}

template <class F>
void optional_field(const json& j, const char* key, F&& apply) {
  if (j.contains(key)) {
    apply(j.at(key));
  }
}

}  // namespace detail

/// Validates a parsed scenario document and fills in defaults.
/// \throws ConfigError on any schema or domain violation.
[[nodiscard]] inline ScenarioConfig parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  using namespace detail;
  ScenarioConfig cfg;
  check_keys(doc, "scenario",
             {"truth", "grid", "sensor", "scan", "bayes", "poses", "scans_per_pose", "robot", "planner", "episode",
              "seed", "output_dir", "render_scale"});
  if (!doc.contains("truth")) {
    throw ConfigError("scenario requires a 'truth' section");
  }

  const auto& truth = doc.at("truth");
  check_keys(truth, "truth", {"file", "size", "boxes"});
  if (truth.contains("file")) {
    if (truth.contains("size") || truth.contains("boxes")) {
      throw ConfigError("truth takes either 'file' or 'size'/'boxes', not both");
    }
    cfg.truth.file = file(truth.at("file"), "truth.file", base_dir);
  } else {
    const auto size = numbers(truth.value("size", json{}), "truth.size", 2, 2);
    if (size[0] < 1 || size[1] < 1 || size[0] != std::floor(size[0]) || size[1] != std::floor(size[1])) {
      throw ConfigError("truth.size must hold two positive integers");
    }
    cfg.truth.n_cols = static_cast<std::size_t>(size[0]);
    cfg.truth.n_rows = static_cast<std::size_t>(size[1]);
    optional_field(truth, "boxes", [&](const json& boxes) {
      if (!boxes.is_array()) {
        throw ConfigError("truth.boxes must be an array");
      }
      for (std::size_t i = 0; i < boxes.size(); ++i) {
        const std::string where = "truth.boxes[" + std::to_string(i) + "]";
        check_keys(boxes[i], where, {"min", "max", "lambda"});
        const auto lo = numbers(boxes[i].value("min", json{}), where + ".min", 2, 2);
        const auto hi = numbers(boxes[i].value("max", json{}), where + ".max", 2, 2);
        const double lambda = number(boxes[i].value("lambda", json{}), where + ".lambda");
        if (!(lambda >= 0.0)) {
          throw ConfigError(where + ".lambda must be nonnegative");
        }
        cfg.truth.boxes.push_back({{lo[0], lo[1]}, {hi[0], hi[1]}, lambda});
      }
    });
  }

  optional_field(doc, "grid", [&](const json& g) {
    check_keys(g, "grid", {"resolution", "origin", "lambda_max"});
    optional_field(g, "resolution", [&](const json& v) { cfg.resolution = number(v, "grid.resolution"); });
    optional_field(g, "origin", [&](const json& v) {
      const auto o = numbers(v, "grid.origin", 2, 2);
      cfg.origin = {o[0], o[1]};
    });
    optional_field(g, "lambda_max", [&](const json& v) { cfg.lambda_max = number(v, "grid.lambda_max"); });
  });
  if (!(cfg.resolution > 0.0)) {
    throw ConfigError("grid.resolution must be positive");
  }
  if (!(cfg.lambda_max > 0.0)) {
    throw ConfigError("grid.lambda_max must be positive");
  }

  optional_field(doc, "sensor", [&](const json& s) {
    check_keys(s, "sensor", {"p_hit", "p_miss", "error_area", "max_range"});
    const double p_hit = s.contains("p_hit") ? number(s.at("p_hit"), "sensor.p_hit") : cfg.sensor.p_hit();
    const double p_miss = s.contains("p_miss") ? number(s.at("p_miss"), "sensor.p_miss") : cfg.sensor.p_miss();
    const double area =
        s.contains("error_area") ? number(s.at("error_area"), "sensor.error_area") : cfg.sensor.error_area();
    const double range = s.contains("max_range") ? number(s.at("max_range"), "sensor.max_range") : cfg.sensor.max_range();
    try {
      cfg.sensor = SensorModel::with_error_area(p_hit, p_miss, area, range);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("sensor: ") + e.what());
    }
  });

  optional_field(doc, "scan", [&](const json& s) {
    check_keys(s, "scan", {"beams", "field_of_view", "beam_width"});
    optional_field(s, "beams", [&](const json& v) { cfg.beams = count(v, "scan.beams"); });
    optional_field(s, "field_of_view", [&](const json& v) { cfg.scan.field_of_view = number(v, "scan.field_of_view"); });
    optional_field(s, "beam_width", [&](const json& v) { cfg.scan.beam_width = number(v, "scan.beam_width"); });
  });
  if (cfg.beams == 0 || !(cfg.scan.field_of_view > 0.0) || !(cfg.scan.beam_width >= 0.0)) {
    throw ConfigError("scan: beams must be positive, field_of_view positive, beam_width nonnegative");
  }

  optional_field(doc, "bayes", [&](const json& b) {
    check_keys(b, "bayes", {"p_occ_given_hit", "p_free_given_miss", "log_odds_max", "threshold"});
    optional_field(b, "p_occ_given_hit", [&](const json& v) { cfg.bayes.p_occ_given_hit = number(v, "bayes.p_occ_given_hit"); });
    optional_field(b, "p_free_given_miss",
                   [&](const json& v) { cfg.bayes.p_free_given_miss = number(v, "bayes.p_free_given_miss"); });
    optional_field(b, "log_odds_max", [&](const json& v) { cfg.bayes.log_odds_max = number(v, "bayes.log_odds_max"); });
    optional_field(b, "threshold", [&](const json& v) { cfg.bayes.threshold = number(v, "bayes.threshold"); });
  });

  optional_field(doc, "poses", [&](const json& p) {
    if (!p.is_array()) {
      throw ConfigError("poses must be an array");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      cfg.poses.push_back(pose(p[i], "poses[" + std::to_string(i) + "]"));
    }
  });
  optional_field(doc, "scans_per_pose", [&](const json& v) { cfg.scans_per_pose = count(v, "scans_per_pose"); });

  optional_field(doc, "robot", [&](const json& r) {
    check_keys(r, "robot", {"width", "length", "mass"});
    optional_field(r, "width", [&](const json& v) { cfg.robot.width = number(v, "robot.width"); });
    optional_field(r, "length", [&](const json& v) { cfg.robot.length = number(v, "robot.length"); });
    optional_field(r, "mass", [&](const json& v) { cfg.robot.mass = number(v, "robot.mass"); });
  });

  optional_field(doc, "planner", [&](const json& p) {
    check_keys(p, "planner", {"v_max", "omega_max", "v_samples", "omega_samples", "horizon", "max_risk", "step"});
    optional_field(p, "v_max", [&](const json& v) { cfg.planner.v_max = number(v, "planner.v_max"); });
    optional_field(p, "omega_max", [&](const json& v) { cfg.planner.omega_max = number(v, "planner.omega_max"); });
    optional_field(p, "v_samples", [&](const json& v) { cfg.planner.v_samples = count(v, "planner.v_samples"); });
    optional_field(p, "omega_samples",
                   [&](const json& v) { cfg.planner.omega_samples = count(v, "planner.omega_samples"); });
    optional_field(p, "horizon", [&](const json& v) { cfg.planner.horizon = number(v, "planner.horizon"); });
    optional_field(p, "max_risk", [&](const json& v) { cfg.planner.max_risk = number(v, "planner.max_risk"); });
    optional_field(p, "step", [&](const json& v) { cfg.planner.step = number(v, "planner.step"); });
  });

  optional_field(doc, "episode", [&](const json& e) {
    check_keys(e, "episode",
               {"start", "goal", "reference_path", "max_steps", "scans_per_step", "goal_tolerance", "initial_field"});
    optional_field(e, "start", [&](const json& v) { cfg.episode.start = pose(v, "episode.start"); });
    optional_field(e, "goal", [&](const json& v) {
      const auto g = numbers(v, "episode.goal", 2, 2);
      cfg.episode.goal = {g[0], g[1]};
    });
    optional_field(e, "reference_path",
                   [&](const json& v) { cfg.episode.reference_path = file(v, "episode.reference_path", base_dir); });
    optional_field(e, "initial_field",
                   [&](const json& v) { cfg.episode.initial_field = file(v, "episode.initial_field", base_dir); });
    optional_field(e, "max_steps", [&](const json& v) { cfg.episode.max_steps = count(v, "episode.max_steps"); });
    optional_field(e, "scans_per_step",
                   [&](const json& v) { cfg.episode.scans_per_step = count(v, "episode.scans_per_step"); });
    optional_field(e, "goal_tolerance",
                   [&](const json& v) { cfg.episode.goal_tolerance = number(v, "episode.goal_tolerance"); });
  });
  if (!(cfg.episode.goal_tolerance > 0.0)) {
    throw ConfigError("episode.goal_tolerance must be positive");
  }

  optional_field(doc, "seed", [&](const json& v) {
    if (!v.is_number_unsigned()) {
      throw ConfigError("seed must be a nonnegative integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  });
  optional_field(doc, "output_dir", [&](const json& v) { cfg.output_dir = file(v, "output_dir", base_dir); });
  optional_field(doc, "render_scale", [&](const json& v) { cfg.render_scale = number(v, "render_scale"); });
  if (!(cfg.render_scale > 0.0)) {
    throw ConfigError("render_scale must be positive");
  }

  try {
    cfg.bayes.validate();
    cfg.robot.validate();
    cfg.planner.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

/// Reads and validates a scenario file.
[[nodiscard]] inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open scenario: " + path.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

/// Builds the ground-truth map a scenario describes.
[[nodiscard]] inline GroundTruthMap build_truth(const ScenarioConfig& cfg) {
  if (cfg.truth.file) {
    const auto ext = cfg.truth.file->extension().string();
    if (ext == ".csv") {
      return load_truth_csv(*cfg.truth.file, cfg.resolution, cfg.origin);
    }
    return load_truth_pgm(*cfg.truth.file, cfg.resolution, cfg.origin);
  }
  GroundTruthMap truth{GridGeometry{cfg.origin, cfg.resolution, cfg.truth.n_cols, cfg.truth.n_rows}};
  for (const auto& b : cfg.truth.boxes) {
    truth.fill_box(b.min, b.max, b.lambda);
  }
  return truth;
}

}  // namespace lambda_field::tools

#endif  // LAMBDA_FIELD_TOOLS_SCENARIO_HPP
