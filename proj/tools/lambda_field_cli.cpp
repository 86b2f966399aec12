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

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

namespace lf = lambda_field;
namespace tools = lambda_field::tools;

enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,
  kConfigError = 2,
  kIoError = 3,
  kFormatError = 4,
  kDomainError = 5,
};

std::optional<std::filesystem::path> opt_path(const std::string& s) {
  return s.empty() ? std::nullopt : std::optional<std::filesystem::path>{s};
}

lf::Bound parse_bound(const std::string& s) {
  if (s == "upper") {
    return lf::Bound::kUpper;
  }
  if (s == "lower") {
    return lf::Bound::kLower;
  }
  return lf::Bound::kMle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lambda-Field occupancy mapping, path risk and risk-gated planning"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  auto scenario = [&]() {
    auto cfg = tools::load_scenario(config);
    if (seed) {
      cfg.seed = *seed;
    }
    return cfg;
  };

  // map
  auto* map = app.add_subcommand("map", "Simulate scans along scripted poses and build both grids");
  std::string scan_log;
  map->add_option("-c,--config", config, "Scenario JSON file")->required();
  map->add_option("-o,--output-dir", out_dir, "Output directory");
  map->add_option("--seed", seed, "Override the scenario seed");
  map->add_option("--scans", scan_log, "Integrate this scan log instead of simulating");

  // simulate-scans
  auto* sim = app.add_subcommand("simulate-scans", "Write a simulated scan log");
  sim->add_option("-c,--config", config, "Scenario JSON file")->required();
  sim->add_option("-o,--output-dir", out_dir, "Output directory");
  sim->add_option("--seed", seed, "Override the scenario seed");

  // eval-path
  auto* eval = app.add_subcommand("eval-path", "Collision probability and expected risk of a path");
  tools::EvalPathOptions eval_opt;
  std::string field_file;
  std::string path_file;
  std::string profile_file;
  std::string report_file;
  std::string bound = "mle";
  eval->add_option("-f,--field", field_file, "Field or bayes dump")->required();
  eval->add_option("-p,--path", path_file, "Path CSV (x,y,theta)")->required();
  eval->add_option("--width", eval_opt.shape.width, "Robot width, m")->capture_default_str();
  eval->add_option("--length", eval_opt.shape.length, "Robot length, m")->capture_default_str();
  eval->add_option("--mass", eval_opt.shape.mass, "Robot mass, kg")->capture_default_str();
  eval->add_option("--speed", eval_opt.speed, "Constant speed, m/s")->capture_default_str();
  eval->add_option("--profile", profile_file, "Velocity profile CSV (s,v)");
  eval->add_option("--bound", bound, "Intensity estimate")
      ->check(CLI::IsMember({"mle", "lower", "upper"}))
      ->capture_default_str();
  eval->add_flag("--unit-risk", eval_opt.unit_risk, "Use r(a) = 1, so the expected risk is P(collision)");
  eval->add_option("--report", report_file, "Per-cell risk report CSV");

  // plan
  auto* plan = app.add_subcommand("plan", "Run a closed-loop risk-gated planning episode");
  std::string reference_file;
  plan->add_option("-c,--config", config, "Scenario JSON file")->required();
  plan->add_option("-o,--output-dir", out_dir, "Output directory");
  plan->add_option("--seed", seed, "Override the scenario seed");
  plan->add_option("-r,--reference", reference_file, "Reference path CSV");

  // compare
  auto* compare = app.add_subcommand("compare", "Path probability across tessellations, Lambda-Field vs Bayesian");
  tools::CompareOptions cmp;
  std::string cmp_path;
  std::string cmp_out;
  compare->add_option("--probability", cmp.cell_probability, "Per-cell collision probability at the reference size")
      ->capture_default_str();
  compare->add_option("--reference-resolution", cmp.reference_resolution, "Reference cell size, m")
      ->capture_default_str();
  compare->add_option("--resolutions", cmp.resolutions, "Cell sizes to compare, m")->delimiter(',');
  compare->add_option("-p,--path", cmp_path, "Path CSV; default is a straight segment");
  compare->add_option("--length", cmp.length, "Length of the default straight path, m")->capture_default_str();
  compare->add_option("--width", cmp.width, "Footprint width, m")->capture_default_str();
  compare->add_option("-o,--output", cmp_out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsageError;
  }

  try {
    if (map->parsed()) {
      const auto cfg = scenario();
      const auto dir = tools::resolve_output_dir(opt_path(out_dir), &cfg);
      const auto result = tools::cmd_map(cfg, dir, opt_path(scan_log));
      std::cout << "beams=" << result.beams << "\noutput_dir=" << dir.string() << '\n';
    } else if (sim->parsed()) {
      const auto cfg = scenario();
      const auto dir = tools::resolve_output_dir(opt_path(out_dir), &cfg);
      tools::cmd_simulate_scans(cfg, dir);
      std::cout << "output_dir=" << dir.string() << '\n';
    } else if (eval->parsed()) {
      eval_opt.field = field_file;
      eval_opt.path = path_file;
      eval_opt.profile = opt_path(profile_file);
      eval_opt.report = opt_path(report_file);
      eval_opt.bound = parse_bound(bound);
      const auto s = tools::cmd_eval_path(eval_opt);
      std::printf("engine=%s\ncells=%zu\narea=%.10g\nP_coll=%.10g\n", s.engine.c_str(), s.cells, s.area,
                  s.collision_probability);
      if (s.expected_risk) {
        std::printf("E_risk=%.10g\n", *s.expected_risk);
      }
    } else if (plan->parsed()) {
      const auto cfg = scenario();
      const auto dir = tools::resolve_output_dir(opt_path(out_dir), &cfg);
      const auto result = tools::cmd_plan(cfg, dir, opt_path(reference_file));
      const bool stopped = !result.steps.empty() && result.steps.back().stopped;
      std::cout << "steps=" << result.steps.size() << "\nreached_goal=" << (result.reached_goal ? 1 : 0)
                << "\nstopped=" << (stopped ? 1 : 0) << "\noutput_dir=" << dir.string() << '\n';
    } else if (compare->parsed()) {
      cmp.path = opt_path(cmp_path);
      const auto rows = tools::cmd_compare(cmp);
      if (cmp_out.empty()) {
        tools::write_compare(std::cout, rows);
      } else {
        if (const auto parent = std::filesystem::path(cmp_out).parent_path(); !parent.empty()) {
          tools::ensure_dir(parent);
        }
        auto out = lf::detail::open_out(cmp_out);
        tools::write_compare(out, rows);
        lf::detail::finish(out, cmp_out);
      }
    }
  } catch (const tools::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const lf::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const lf::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kFormatError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kOk;
}
