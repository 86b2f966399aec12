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

#ifndef LAMBDA_FIELD_TOOLS_COMMANDS_HPP
#define LAMBDA_FIELD_TOOLS_COMMANDS_HPP

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lambda_field/bayes_grid.hpp"
#include "lambda_field/io.hpp"
#include "lambda_field/lambda_grid.hpp"
#include "lambda_field/path_risk.hpp"
#include "lambda_field/planner.hpp"
#include "lambda_field/sensor.hpp"
#include "scenario.hpp"

namespace lambda_field::tools {

inline constexpr const char* kOutputDirEnv = "LAMBDA_FIELD_OUTPUT_DIR";

/// Flag, then scenario, then environment, then ./out.
[[nodiscard]] inline std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                                              const ScenarioConfig* cfg = nullptr) {
  if (flag) {
    return *flag;
  }
  if (cfg != nullptr && cfg->output_dir) {
    return *cfg->output_dir;
  }
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    return env;
  }
  return "out";
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

/// Scans along the scripted poses; scan k uses seed `cfg.seed + k`.
[[nodiscard]] inline std::vector<ScanRecord> simulate_records(const ScenarioConfig& cfg, const GroundTruthMap& truth) {
  std::vector<ScanRecord> records;
  std::uint64_t k = 0;
  for (const auto& pose : cfg.poses) {
    for (std::size_t s = 0; s < cfg.scans_per_pose; ++s, ++k) {
      for (const auto& beam : simulate_scan(truth, pose, cfg.sensor, cfg.beams, cfg.seed + k, cfg.scan)) {
        records.push_back({static_cast<double>(k), pose, beam});
      }
    }
  }
  return records;
}

inline void cmd_simulate_scans(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  const auto truth = build_truth(cfg);
  const auto records = simulate_records(cfg, truth);
  auto out = lambda_field::detail::open_out(out_dir / "scans.csv");
  write_scan_log(out, records);
  lambda_field::detail::finish(out, out_dir / "scans.csv");
}

struct MapResult {
  LambdaGrid field;
  BayesGrid bayes;
  std::size_t beams = 0;
};

/// Integrates simulated (or logged) scans into both grids and writes
/// field.lfd, bayes.bgd, their CSV and PGM renders, and scans.csv.
inline MapResult cmd_map(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                         const std::optional<std::filesystem::path>& scan_log = std::nullopt) {
  ensure_dir(out_dir);
  const auto truth = build_truth(cfg);
  std::vector<ScanRecord> records;
  if (scan_log) {
    auto in = lambda_field::detail::open_in(*scan_log);
    records = read_scan_log(in);
  } else {
    records = simulate_records(cfg, truth);
  }

  MapResult result{LambdaGrid{truth.geometry(), cfg.lambda_max}, BayesGrid{truth.geometry(), cfg.bayes}, records.size()};
  for (const auto& r : records) {
    if (!truth.geometry().contains(r.beam.origin)) {
      throw std::out_of_range("scan pose outside map");
    }
    apply_beam(result.field, r.beam, cfg.sensor);
    bayes_update(result.bayes, r.beam, cfg.sensor);
  }

  save_field(out_dir / "field.lfd", result.field, cfg.sensor);
  save_bayes(out_dir / "bayes.bgd", result.bayes);
  save_field_csv(out_dir / "field.csv", result.field, cfg.sensor);
  save_bayes_csv(out_dir / "bayes.csv", result.bayes);
  save_field_pgm(out_dir / "field.pgm", result.field, cfg.sensor, cfg.render_scale);
  save_bayes_pgm(out_dir / "bayes.pgm", result.bayes);
  if (!scan_log) {
    auto out = lambda_field::detail::open_out(out_dir / "scans.csv");
    write_scan_log(out, records);
    lambda_field::detail::finish(out, out_dir / "scans.csv");
  }
  return result;
}

struct EvalPathOptions {
  std::filesystem::path field;
  std::filesystem::path path;
  RobotShape shape;
  double speed = 1.0;
  std::optional<std::filesystem::path> profile;
  Bound bound = Bound::kMle;
  /// Risk of one per collision, so the expected risk is the collision probability.
  bool unit_risk = false;
  std::optional<std::filesystem::path> report;
};

struct EvalPathSummary {
  std::string engine;
  double collision_probability = 0.0;
  std::optional<double> expected_risk;
  std::size_t cells = 0;
  double area = 0.0;
};

/// Collision probability and expected risk of a path over a dump. Bayes
/// dumps only yield the naive independent-cell probability.
inline EvalPathSummary cmd_eval_path(const EvalPathOptions& opt) {
  opt.shape.validate();
  const auto poses = load_path(opt.path);
  EvalPathSummary summary;
  switch (sniff_dump(opt.field)) {
    case DumpKind::kLambdaField: {
      const auto dump = load_field(opt.field);
      const auto crossing = crossing_over(dump.grid, dump.sensor, poses, opt.shape.width);
      const RiskFunction risk =
          opt.unit_risk ? RiskFunction{[](double) { return 1.0; }}
                        : momentum_risk(opt.shape, opt.profile ? load_velocity_profile(*opt.profile)
                                                               : VelocityProfile::constant(opt.speed));
      summary.engine = "lambda";
      summary.collision_probability = path_collision_probability(crossing, opt.bound);
      summary.expected_risk = expected_risk(crossing, risk, opt.bound);
      summary.cells = crossing.size();
      summary.area = crossing.total_area();
      if (opt.report) {
        auto out = lambda_field::detail::open_out(*opt.report);
        write_risk_report(out, risk_report(crossing, risk, opt.bound));
        lambda_field::detail::finish(out, *opt.report);
      }
      break;
    }
    case DumpKind::kBayes: {
      const auto grid = load_bayes(opt.field);
      const auto crossing = swept_cells(grid.geometry(), poses, opt.shape.width);
      summary.engine = "bayes";
      summary.collision_probability = naive_path_probability(grid, crossing);
      summary.cells = crossing.size();
      summary.area = crossing.total_area();
      break;
    }
    case DumpKind::kUnknown:
      throw FormatError("not a field or bayes dump: " + opt.field.string());
  }
  return summary;
}

/// Runs a closed-loop episode and writes planner_log.csv and trace.csv.
inline EpisodeResult cmd_plan(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                              const std::optional<std::filesystem::path>& reference_override = std::nullopt) {
  ensure_dir(out_dir);
  const auto truth = build_truth(cfg);
  LambdaGrid field{truth.geometry(), cfg.lambda_max};
  SensorModel sensor = cfg.sensor;
  if (cfg.episode.initial_field) {
    auto dump = load_field(*cfg.episode.initial_field);
    if (!(dump.grid.geometry() == truth.geometry())) {
      throw ConfigError("episode.initial_field geometry differs from the ground truth");
    }
    field = std::move(dump.grid);
    sensor = dump.sensor;
  }

  std::vector<Pose2> reference;
  if (reference_override) {
    reference = load_path(*reference_override);
  } else if (cfg.episode.reference_path) {
    reference = load_path(*cfg.episode.reference_path);
  } else {
    reference = {cfg.episode.start, {cfg.episode.goal.x, cfg.episode.goal.y, 0.0}};
  }
  if (reference.empty()) {
    throw ConfigError("reference path is empty");
  }

  EpisodeOptions options;
  options.max_steps = cfg.episode.max_steps;
  options.scans_per_step = cfg.episode.scans_per_step;
  options.beams_per_scan = cfg.beams;
  options.goal_tolerance = cfg.episode.goal_tolerance;
  options.seed = cfg.seed;
  options.scan = cfg.scan;

  auto result = run_episode(std::move(field), &truth, sensor, cfg.episode.start, cfg.episode.goal, reference,
                            cfg.robot, cfg.planner, options);

  {
    auto out = lambda_field::detail::open_out(out_dir / "planner_log.csv");
    write_planner_log(out, result.steps);
    lambda_field::detail::finish(out, out_dir / "planner_log.csv");
  }
  save_path(out_dir / "trace.csv", result.trace);
  return result;
}

struct CompareOptions {
  /// Collision probability of one fully crossed cell at the reference resolution.
  double cell_probability = 0.1;
  double reference_resolution = 0.1;
  std::vector<double> resolutions{0.1, 0.2};
  std::optional<std::filesystem::path> path;
  /// Straight path length used when no path file is given.
  double length = 0.4;
  double width = 0.1;
};

struct CompareRow {
  double resolution = 0.0;
  double p_lambda = 0.0;
  double p_bayes_naive = 0.0;
};

/// Same uniform environment at several tessellations: Lambda-Field versus
/// the naive product over Bayesian cells, each holding the reference
/// per-cell probability.
inline std::vector<CompareRow> cmd_compare(const CompareOptions& opt) {
  if (!(opt.cell_probability > 0.0 && opt.cell_probability < 1.0)) {
    throw std::invalid_argument("cell probability must lie in (0, 1)");
  }
  if (!(opt.reference_resolution > 0.0) || !(opt.width > 0.0)) {
    throw std::invalid_argument("reference resolution and width must be positive");
  }
  std::vector<Pose2> path;
  if (opt.path) {
    path = load_path(*opt.path);
  } else {
    if (!(opt.length > 0.0)) {
      throw std::invalid_argument("path length must be positive");
    }
    path = {{0.0, 0.5 * opt.width, 0.0}, {opt.length, 0.5 * opt.width, 0.0}};
  }
  double max_x = 0.0;
  double max_y = 0.0;
  for (const auto& p : path) {
    if (p.x < 0.0 || p.y < 0.0) {
      throw std::invalid_argument("compare paths must lie in the positive quadrant");
    }
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double lambda = -std::log1p(-opt.cell_probability) / (opt.reference_resolution * opt.reference_resolution);
  const double extent_x = max_x + opt.width + opt.reference_resolution;
  const double extent_y = max_y + opt.width + opt.reference_resolution;

  std::vector<CompareRow> rows;
  for (double res : opt.resolutions) {
    if (!(res > 0.0)) {
      throw std::invalid_argument("resolutions must be positive");
    }
    const GridGeometry g{{0.0, 0.0}, res, static_cast<std::size_t>(std::ceil(extent_x / res)) + 1,
                         static_cast<std::size_t>(std::ceil(extent_y / res)) + 1};
    auto crossing = swept_cells(g, path, opt.width);
    for (std::size_t i = 0; i < crossing.size(); ++i) {
      crossing[i].lambda_mle = crossing[i].lambda_low = crossing[i].lambda_high = lambda;
    }
    BayesGrid bayes{g};
    for (CellIndex i = 0; i < g.size(); ++i) {
      bayes.set_occupancy(i, opt.cell_probability);
    }
    rows.push_back({res, path_collision_probability(crossing), naive_path_probability(bayes, crossing)});
  }
  return rows;
}

inline void write_compare(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "resolution,P_lambda,P_bayes_naive\n";
  for (const auto& r : rows) {
    out << lambda_field::detail::fmt10(r.resolution) << ',' << lambda_field::detail::fmt10(r.p_lambda) << ','
        << lambda_field::detail::fmt10(r.p_bayes_naive) << '\n';
  }
}

}  // namespace lambda_field::tools

#endif  // LAMBDA_FIELD_TOOLS_COMMANDS_HPP
