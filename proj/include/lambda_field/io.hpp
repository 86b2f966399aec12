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

#ifndef LAMBDA_FIELD_IO_HPP
#define LAMBDA_FIELD_IO_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambda_field/bayes_grid.hpp"
#include "lambda_field/geometry.hpp"
#include "lambda_field/intensity.hpp"
#include "lambda_field/lambda_grid.hpp"
#include "lambda_field/path_risk.hpp"
#include "lambda_field/planner.hpp"
#include "lambda_field/sensor.hpp"

/**
 * \file
 * \brief Dumps, CSV exports, PGM renders and the small CSV inputs (paths, scans, truth maps).
 *
 * Field dump, version 1 (text, one record per line, doubles at 17 significant digits):
 *
 *     LAMBDA_FIELD 1
 *     origin <x> <y>
 *     resolution <r>
 *     size <n_cols> <n_rows>
 *     lambda_max <value>
 *     sensor <p_hit> <p_miss> <error_radius> <max_range>
 *     cells
 *     <hits> <misses>            (n_cols * n_rows lines, row-major)
 *
 * Bayes dump, version 1, has the same geometry header, then
 * `params <p_occ_given_hit> <p_free_given_miss> <log_odds_max> <threshold>`,
 * `cells`, and one log-odds value per line.
 */

namespace lambda_field {

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file was readable but malformed.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Lambda-Field together with the sensor model its counts were built with.
struct FieldDump {
  LambdaGrid grid;
  SensorModel sensor;
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  return in;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

inline void expect_key(std::istream& in, const std::string& key) {
  std::string token;
  if (!(in >> token) || token != key) {
    throw FormatError("expected '" + key + "' in dump, found '" + token + "'");
  }
}

template <class T>
T read_value(std::istream& in, const char* what) {
  T value{};
  if (!(in >> value)) {
    throw FormatError(std::string("cannot parse ") + what);
  }
  return value;
}

inline void write_geometry(std::ostream& out, const GridGeometry& g) {
  out << "origin " << fmt17(g.origin().x) << ' ' << fmt17(g.origin().y) << '\n'
      << "resolution " << fmt17(g.resolution()) << '\n'
      << "size " << g.n_cols() << ' ' << g.n_rows() << '\n';
}

inline GridGeometry read_geometry(std::istream& in) {
  expect_key(in, "origin");
  const auto ox = read_value<double>(in, "origin x");
  const auto oy = read_value<double>(in, "origin y");
  expect_key(in, "resolution");
  const auto res = read_value<double>(in, "resolution");
  expect_key(in, "size");
  const auto cols = read_value<std::size_t>(in, "column count");
  const auto rows = read_value<std::size_t>(in, "row count");
  try {
    return GridGeometry{{ox, oy}, res, cols, rows};
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

/// Splits a CSV line on commas, trimming blanks.
inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
  }
  return out;
}

inline std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) {
    return std::nullopt;
  }
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      return std::nullopt;
    }
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// Numeric rows of a CSV file with at least `min_columns` fields; a
/// non-numeric first line is treated as a header.
inline std::vector<std::vector<double>> read_numeric_csv(std::istream& in, std::size_t min_columns,
                                                         const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') {
      continue;
    }
    const auto fields = split_csv(line);
    std::vector<double> row;
    bool numeric = fields.size() >= min_columns;
    for (std::size_t i = 0; numeric && i < fields.size(); ++i) {
      const auto v = parse_double(fields[i]);
      numeric = v.has_value();
      if (numeric) {
        row.push_back(*v);
      }
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) {
        continue;
      }
      throw FormatError(what + ": malformed line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Header tokens of a PNM file, skipping comments; comments are returned separately.
struct PnmHeader {
  std::string magic;
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned max_value = 0;
  std::vector<std::string> comments;
};

inline PnmHeader read_pnm_header(std::istream& in) {
  PnmHeader h;
  std::vector<std::string> tokens;
  while (tokens.size() < 4) {
    int c = in.peek();
    if (c == EOF) {
      throw FormatError("truncated PGM header");
    }
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
      h.comments.push_back(comment.substr(1));
    } else if (std::isspace(c)) {
      in.get();
    } else {
      std::string token;
      while (in.peek() != EOF && !std::isspace(in.peek()) && in.peek() != '#') {
        token.push_back(static_cast<char>(in.get()));
      }
      tokens.push_back(token);
    }
  }
  in.get();  // the single whitespace byte before the raster
  h.magic = tokens[0];
  try {
    h.width = std::stoul(tokens[1]);
    h.height = std::stoul(tokens[2]);
    h.max_value = static_cast<unsigned>(std::stoul(tokens[3]));
  } catch (const std::exception&) {
    throw FormatError("malformed PGM header");
  }
  return h;
}

inline std::optional<std::vector<double>> comment_values(const std::vector<std::string>& comments,
                                                         const std::string& key) {
  for (const auto& c : comments) {
    std::istringstream ss(c);
    std::string k;
    ss >> k;
    if (k != key) {
      continue;
    }
    std::vector<double> values;
    double v = 0.0;
    while (ss >> v) {
      values.push_back(v);
    }
    return values;
  }
  return std::nullopt;
}

/// 16-bit binary PGM; image row 0 is the highest grid row.
template <class ValueAt>
void write_pgm16(const std::filesystem::path& path, const GridGeometry& g, double scale, const std::string& label,
                 ValueAt value_at) {
  auto out = open_out(path, true);
  out << "P5\n# " << label << "\n# scale " << fmt17(scale) << "\n# resolution " << fmt17(g.resolution())
      << "\n# origin " << fmt17(g.origin().x) << ' ' << fmt17(g.origin().y) << '\n'
      << g.n_cols() << ' ' << g.n_rows() << "\n65535\n";
  for (std::size_t r = g.n_rows(); r-- > 0;) {
    for (std::size_t c = 0; c < g.n_cols(); ++c) {
      const double scaled = std::clamp(value_at(g.index(CellCoord{static_cast<long>(c), static_cast<long>(r)})) * scale,
                                       0.0, 65535.0);
      const auto px = static_cast<std::uint16_t>(std::lround(scaled));
      out.put(static_cast<char>(px >> 8));
      out.put(static_cast<char>(px & 0xff));
    }
  }
  finish(out, path);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lambda-Field dump

inline void write_field(std::ostream& out, const LambdaGrid& grid, const SensorModel& sensor) {
  out << "LAMBDA_FIELD 1\n";
  detail::write_geometry(out, grid.geometry());
  out << "lambda_max " << detail::fmt17(grid.lambda_max()) << '\n'
      << "sensor " << detail::fmt17(sensor.p_hit()) << ' ' << detail::fmt17(sensor.p_miss()) << ' '
      << detail::fmt17(sensor.error_radius()) << ' ' << detail::fmt17(sensor.max_range()) << '\n'
      << "cells\n";
  for (const auto& c : grid.cells()) {
    out << c.hits << ' ' << c.misses << '\n';
  }
}

[[nodiscard]] inline FieldDump read_field(std::istream& in) {
  detail::expect_key(in, "LAMBDA_FIELD");
  if (const auto version = detail::read_value<int>(in, "version"); version != 1) {
    throw FormatError("unsupported field dump version " + std::to_string(version));
  }
  const auto geometry = detail::read_geometry(in);
  detail::expect_key(in, "lambda_max");
  const auto lambda_max = detail::read_value<double>(in, "lambda_max");
  detail::expect_key(in, "sensor");
  const auto p_hit = detail::read_value<double>(in, "p_hit");
  const auto p_miss = detail::read_value<double>(in, "p_miss");
  const auto radius = detail::read_value<double>(in, "error radius");
  const auto max_range = detail::read_value<double>(in, "max range");
  detail::expect_key(in, "cells");
  try {
    FieldDump dump{LambdaGrid{geometry, lambda_max}, SensorModel{p_hit, p_miss, radius, max_range}};
    for (CellIndex i = 0; i < geometry.size(); ++i) {
      const auto h = detail::read_value<std::uint32_t>(in, "hit count");
      const auto m = detail::read_value<std::uint32_t>(in, "miss count");
      dump.grid.set_stats(i, {h, m});
    }
    return dump;
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline void save_field(const std::filesystem::path& path, const LambdaGrid& grid, const SensorModel& sensor) {
  auto out = detail::open_out(path);
  write_field(out, grid, sensor);
  detail::finish(out, path);
}

[[nodiscard]] inline FieldDump load_field(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_field(in);
}

/// col,row,h,m,lambda,lambda_low,lambda_high
inline void write_field_csv(std::ostream& out, const LambdaGrid& grid, const SensorModel& sensor) {
  const auto& g = grid.geometry();
  out << "col,row,h,m,lambda,lambda_low,lambda_high\n";
  for (CellIndex i = 0; i < grid.size(); ++i) {
    const auto c = g.coord(i);
    const auto s = grid.stats(i);
    const auto ci = grid.interval(i, sensor);
    out << c.col << ',' << c.row << ',' << s.hits << ',' << s.misses << ',' << detail::fmt10(grid.mle(i, sensor).lambda)
        << ',' << detail::fmt10(ci.lambda_low) << ',' << detail::fmt10(ci.lambda_high) << '\n';
  }
}

inline void save_field_csv(const std::filesystem::path& path, const LambdaGrid& grid, const SensorModel& sensor) {
  auto out = detail::open_out(path);
  write_field_csv(out, grid, sensor);
  detail::finish(out, path);
}

/// 16-bit PGM of the estimate, pixel = round(lambda * scale).
inline void save_field_pgm(const std::filesystem::path& path, const LambdaGrid& grid, const SensorModel& sensor,
                           double scale, Bound bound = Bound::kMle) {
  detail::write_pgm16(path, grid.geometry(), scale, "lambda-field intensity",
                      [&](CellIndex i) { return grid.lambda(i, sensor, bound); });
}

// ---------------------------------------------------------------------------
// Bayesian grid dump

inline void write_bayes(std::ostream& out, const BayesGrid& grid) {
  out << "BAYES_GRID 1\n";
  detail::write_geometry(out, grid.geometry());
  const auto& p = grid.params();
  out << "params " << detail::fmt17(p.p_occ_given_hit) << ' ' << detail::fmt17(p.p_free_given_miss) << ' '
      << detail::fmt17(p.log_odds_max) << ' ' << detail::fmt17(p.threshold) << '\n'
      << "cells\n";
  for (CellIndex i = 0; i < grid.size(); ++i) {
    out << detail::fmt17(grid.log_odds(i)) << '\n';
  }
}

[[nodiscard]] inline BayesGrid read_bayes(std::istream& in) {
  detail::expect_key(in, "BAYES_GRID");
  if (const auto version = detail::read_value<int>(in, "version"); version != 1) {
    throw FormatError("unsupported bayes dump version " + std::to_string(version));
  }
  const auto geometry = detail::read_geometry(in);
  detail::expect_key(in, "params");
  BayesParams params;
  params.p_occ_given_hit = detail::read_value<double>(in, "p_occ_given_hit");
  params.p_free_given_miss = detail::read_value<double>(in, "p_free_given_miss");
  params.log_odds_max = detail::read_value<double>(in, "log_odds_max");
  params.threshold = detail::read_value<double>(in, "threshold");
  detail::expect_key(in, "cells");
  try {
    BayesGrid grid{geometry, params};
    for (CellIndex i = 0; i < geometry.size(); ++i) {
      grid.set_log_odds(i, detail::read_value<double>(in, "log-odds"));
    }
    return grid;
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline void save_bayes(const std::filesystem::path& path, const BayesGrid& grid) {
  auto out = detail::open_out(path);
  write_bayes(out, grid);
  detail::finish(out, path);
}

[[nodiscard]] inline BayesGrid load_bayes(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_bayes(in);
}

/// col,row,log_odds,occupancy
inline void save_bayes_csv(const std::filesystem::path& path, const BayesGrid& grid) {
  auto out = detail::open_out(path);
  out << "col,row,log_odds,occupancy\n";
  for (CellIndex i = 0; i < grid.size(); ++i) {
    const auto c = grid.geometry().coord(i);
    out << c.col << ',' << c.row << ',' << detail::fmt10(grid.log_odds(i)) << ','
        << detail::fmt10(grid.occupancy(i)) << '\n';
  }
  detail::finish(out, path);
}

/// 16-bit PGM of the occupancy probability, pixel = round(p * scale).
inline void save_bayes_pgm(const std::filesystem::path& path, const BayesGrid& grid, double scale = 65535.0) {
  detail::write_pgm16(path, grid.geometry(), scale, "bayes occupancy", [&](CellIndex i) { return grid.occupancy(i); });
}

/// Which kind of dump a file holds, from its first token.
enum class DumpKind { kLambdaField, kBayes, kUnknown };

[[nodiscard]] inline DumpKind sniff_dump(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  std::string magic;
  in >> magic;
  if (magic == "LAMBDA_FIELD") {
    return DumpKind::kLambdaField;
  }
  if (magic == "BAYES_GRID") {
    return DumpKind::kBayes;
  }
  return DumpKind::kUnknown;
}

// ---------------------------------------------------------------------------
// Ground-truth maps

/// 8-bit PGM; intensity = pixel * scale, with the scale taken from a
/// `# lambda_scale <s>` comment. `# resolution <r>` and `# origin <x> <y>`
/// comments override the fallbacks. Image row 0 is the highest grid row.
[[nodiscard]] inline GroundTruthMap load_truth_pgm(const std::filesystem::path& path, double fallback_resolution,
                                                   Point2 fallback_origin = {}) {
  auto in = detail::open_in(path, true);
  const auto h = detail::read_pnm_header(in);
  if (h.magic != "P5" || h.max_value == 0 || h.max_value > 255) {
    throw FormatError("ground truth must be an 8-bit binary PGM: " + path.string());
  }
  const auto scale = detail::comment_values(h.comments, "lambda_scale");
  if (!scale || scale->size() != 1 || !((*scale)[0] >= 0.0)) {
    throw FormatError("ground truth PGM lacks a '# lambda_scale <s>' comment: " + path.string());
  }
  double resolution = fallback_resolution;
  if (const auto r = detail::comment_values(h.comments, "resolution"); r && r->size() == 1) {
    resolution = (*r)[0];
  }
  Point2 origin = fallback_origin;
  if (const auto o = detail::comment_values(h.comments, "origin"); o && o->size() == 2) {
    origin = {(*o)[0], (*o)[1]};
  }
  try {
    GridGeometry g{origin, resolution, h.width, h.height};
    std::vector<double> intensity(g.size(), 0.0);
    for (std::size_t r = g.n_rows(); r-- > 0;) {
      for (std::size_t c = 0; c < g.n_cols(); ++c) {
        const int px = in.get();
        if (px == EOF) {
          throw FormatError("truncated PGM raster: " + path.string());
        }
        intensity[g.index(CellCoord{static_cast<long>(c), static_cast<long>(r)})] = px * (*scale)[0];
      }
    }
    return GroundTruthMap{g, std::move(intensity)};
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline void save_truth_pgm(const std::filesystem::path& path, const GroundTruthMap& truth, double lambda_scale) {
  const auto& g = truth.geometry();
  auto out = detail::open_out(path, true);
  out << "P5\n# lambda_scale " << detail::fmt17(lambda_scale) << "\n# resolution " << detail::fmt17(g.resolution())
      << "\n# origin " << detail::fmt17(g.origin().x) << ' ' << detail::fmt17(g.origin().y) << '\n'
      << g.n_cols() << ' ' << g.n_rows() << "\n255\n";
  for (std::size_t r = g.n_rows(); r-- > 0;) {
    for (std::size_t c = 0; c < g.n_cols(); ++c) {
      const double v = truth.intensity(g.index(CellCoord{static_cast<long>(c), static_cast<long>(r)}));
      out.put(static_cast<char>(std::clamp(std::lround(v / lambda_scale), 0L, 255L)));
    }
  }
  detail::finish(out, path);
}

/// CSV col,row,lambda; the grid spans the largest indices present.
[[nodiscard]] inline GroundTruthMap load_truth_csv(const std::filesystem::path& path, double resolution,
                                                   Point2 origin = {}) {
  auto in = detail::open_in(path);
  const auto rows = detail::read_numeric_csv(in, 3, path.string());
  if (rows.empty()) {
    throw FormatError("ground truth CSV has no cells: " + path.string());
  }
  double max_col = 0.0;
  double max_row = 0.0;
  for (const auto& r : rows) {
    if (r[0] < 0.0 || r[1] < 0.0 || r[0] != std::floor(r[0]) || r[1] != std::floor(r[1])) {
      throw FormatError("ground truth CSV has a non-integer or negative cell index");
    }
    max_col = std::max(max_col, r[0]);
    max_row = std::max(max_row, r[1]);
  }
  try {
    GroundTruthMap truth{GridGeometry{origin, resolution, static_cast<std::size_t>(max_col) + 1,
                                      static_cast<std::size_t>(max_row) + 1}};
    for (const auto& r : rows) {
      truth.set_intensity(truth.geometry().index(CellCoord{static_cast<long>(r[0]), static_cast<long>(r[1])}), r[2]);
    }
    return truth;
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Paths, profiles, scan logs and reports

/// CSV of x,y,theta poses (theta optional, defaults to 0).
[[nodiscard]] inline std::vector<Pose2> read_path(std::istream& in, const std::string& what = "path") {
  std::vector<Pose2> poses;
  for (const auto& r : detail::read_numeric_csv(in, 2, what)) {
    poses.push_back({r[0], r[1], r.size() > 2 ? r[2] : 0.0});
  }
  return poses;
}

[[nodiscard]] inline std::vector<Pose2> load_path(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_path(in, path.string());
}

inline void save_path(const std::filesystem::path& path, std::span<const Pose2> poses) {
  auto out = detail::open_out(path);
  out << "x,y,theta\n";
  for (const auto& p : poses) {
    out << detail::fmt17(p.x) << ',' << detail::fmt17(p.y) << ',' << detail::fmt17(p.theta) << '\n';
  }
  detail::finish(out, path);
}

/// CSV of s,v knots.
[[nodiscard]] inline VelocityProfile load_velocity_profile(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  std::vector<VelocityProfile::Knot> knots;
  for (const auto& r : detail::read_numeric_csv(in, 2, path.string())) {
    knots.push_back({r[0], r[1]});
  }
  try {
    return VelocityProfile{std::move(knots)};
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

struct ScanRecord {
  double t = 0.0;
  Pose2 pose;
  Beam beam;
};

/// t,pose_x,pose_y,pose_theta,angle,range,hit
inline void write_scan_log(std::ostream& out, std::span<const ScanRecord> records) {
  out << "t,pose_x,pose_y,pose_theta,angle,range,hit\n";
  for (const auto& r : records) {
    out << detail::fmt17(r.t) << ',' << detail::fmt17(r.pose.x) << ',' << detail::fmt17(r.pose.y) << ','
        << detail::fmt17(r.pose.theta) << ',' << detail::fmt17(r.beam.angle()) << ',' << detail::fmt17(r.beam.range)
        << ',' << (r.beam.hit ? 1 : 0) << '\n';
  }
}

[[nodiscard]] inline std::vector<ScanRecord> read_scan_log(std::istream& in) {
  std::vector<ScanRecord> out;
  for (const auto& r : detail::read_numeric_csv(in, 7, "scan log")) {
    const Pose2 pose{r[1], r[2], r[3]};
    out.push_back({r[0], pose, Beam{pose.position(), {std::cos(r[4]), std::sin(r[4])}, r[5], r[6] != 0.0}});
  }
  return out;
}

/// cell_index,cum_area,lambda,f,cdf,partial_risk
inline void write_risk_report(std::ostream& out, std::span<const RiskReportRow> rows) {
  out << "cell_index,cum_area,lambda,f,cdf,partial_risk\n";
  for (const auto& r : rows) {
    out << r.index << ',' << detail::fmt10(r.cumulative_area) << ',' << detail::fmt10(r.lambda) << ','
        << detail::fmt10(r.pdf) << ',' << detail::fmt10(r.cdf) << ',' << detail::fmt10(r.partial_risk) << '\n';
  }
}

/// t,v,omega,risk_upper,n_admissible,stopped
inline void write_planner_log(std::ostream& out, std::span<const StepLog> steps) {
  out << "t,v,omega,risk_upper,n_admissible,stopped\n";
  for (const auto& s : steps) {
    out << detail::fmt10(s.t) << ',' << detail::fmt10(s.v) << ',' << detail::fmt10(s.omega) << ','
        << detail::fmt10(s.risk_upper) << ',' << s.n_admissible << ',' << (s.stopped ? 1 : 0) << '\n';
  }
}

}  // namespace lambda_field

#endif  // LAMBDA_FIELD_IO_HPP
