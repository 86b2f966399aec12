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

#ifndef LAMBDA_FIELD_PATH_RISK_HPP
#define LAMBDA_FIELD_PATH_RISK_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lambda_field/geometry.hpp"
#include "lambda_field/intensity.hpp"
#include "lambda_field/lambda_grid.hpp"

/**
 * \file
 * \brief Collision density, collision probability and expected risk along a swept path.
 *
 * A path is reduced to the ordered list of cells its footprint crosses, each
 * with the area crossed inside it. With X the crossed area at which the first
 * collision happens, the density of X inside cell n (entered after area A(n))
 * is
 *
 *     f(a) = exp(-sum_{j<n} a_j lambda_j) * lambda_n * exp(-(a - A(n)) lambda_n)
 *
 * and the expectation of a risk function constant per cell is
 *
 *     E[r(X)] = sum_i r(A(i)) exp(-sum_{j<i} a_j lambda_j) (1 - exp(-a_i lambda_i)).
 */

namespace lambda_field {

struct RobotShape {
  double width = 0.5;
  double length = 0.6;
  double mass = 20.0;

  void validate() const {
    if (!(width > 0.0)) {
      throw std::invalid_argument("robot width must be positive");
    }
    if (!(length >= 0.0)) {
      throw std::invalid_argument("robot length must be nonnegative");
    }
    if (!(mass > 0.0)) {
      throw std::invalid_argument("robot mass must be positive");
    }
  }
};

/// Speed as a function of arc length: piecewise linear between knots,
/// constant beyond the first and last knot.
class VelocityProfile {
 public:
  struct Knot {
    double s = 0.0;
    double v = 0.0;
  };

  explicit VelocityProfile(std::vector<Knot> knots) : knots_{std::move(knots)} {
    if (knots_.empty()) {
      throw std::invalid_argument("velocity profile needs at least one knot");
    }
    for (std::size_t i = 0; i < knots_.size(); ++i) {
      if (!(knots_[i].v >= 0.0)) {
        throw std::invalid_argument("velocity must be nonnegative");
      }
      if (i > 0 && !(knots_[i].s > knots_[i - 1].s)) {
        throw std::invalid_argument("velocity knots must be strictly increasing in s");
      }
    }
  }

  [[nodiscard]] static VelocityProfile constant(double v) { return VelocityProfile{{{0.0, v}}}; }

  [[nodiscard]] double operator()(double s) const {
    if (s <= knots_.front().s) {
      return knots_.front().v;
    }
    if (s >= knots_.back().s) {
      return knots_.back().v;
    }
    const auto hi = std::upper_bound(knots_.begin(), knots_.end(), s,
                                     [](double value, const Knot& k) { return value < k.s; });
    const auto lo = hi - 1;
    const double t = (s - lo->s) / (hi->s - lo->s);
    return lo->v + t * (hi->v - lo->v);
  }

  [[nodiscard]] const std::vector<Knot>& knots() const { return knots_; }

 private:
  std::vector<Knot> knots_;
};

/// One cell of a crossing with a snapshot of its intensity estimates.
struct CrossedCell {
  CellIndex index = 0;
  double area = 0.0;
  double lambda_mle = 0.0;
  double lambda_low = 0.0;
  double lambda_high = 0.0;

  [[nodiscard]] double lambda(Bound bound) const {
    switch (bound) {
      case Bound::kLower:
        return lambda_low;
      case Bound::kUpper:
        return lambda_high;
      case Bound::kMle:
        break;
    }
    return lambda_mle;
  }
};

/// Ordered cells crossed by a footprint. Areas are strictly positive, so
/// the cumulative area strictly increases.
class PathCrossing {
 public:
  PathCrossing() = default;

  void push_back(const CrossedCell& cell) {
    if (!(cell.area > 0.0) || !std::isfinite(cell.area)) {
      throw std::invalid_argument("crossed area must be positive");
    }
    if (cell.lambda_mle < 0.0 || cell.lambda_low < 0.0 || cell.lambda_high < 0.0) {
      throw std::invalid_argument("intensities must be nonnegative");
    }
    cumulative_.push_back(total_area());
    cells_.push_back(cell);
  }

  /// Crossing with uniform area per cell, from a list of intensities.
  [[nodiscard]] static PathCrossing uniform(std::span<const double> lambdas, double area) {
    PathCrossing out;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      out.push_back({i, area, lambdas[i], lambdas[i], lambdas[i]});
    }
    return out;
  }

  [[nodiscard]] std::size_t size() const { return cells_.size(); }
  [[nodiscard]] bool empty() const { return cells_.empty(); }
  [[nodiscard]] const CrossedCell& operator[](std::size_t i) const { return cells_[i]; }
  [[nodiscard]] CrossedCell& operator[](std::size_t i) { return cells_[i]; }
  [[nodiscard]] std::span<const CrossedCell> cells() const { return cells_; }

  /// Area crossed before entering cell i.
  [[nodiscard]] double cumulative_area(std::size_t i) const { return cumulative_.at(i); }

  [[nodiscard]] double total_area() const {
    return cells_.empty() ? 0.0 : cumulative_.back() + cells_.back().area;
  }

  [[nodiscard]] std::vector<CellArea> cell_areas() const {
    std::vector<CellArea> out;
    out.reserve(cells_.size());
    for (const auto& c : cells_) {
      out.push_back({c.index, c.area});
    }
    return out;
  }

 private:
  std::vector<CrossedCell> cells_;
  std::vector<double> cumulative_;
};

namespace detail {

using Polygon = std::vector<Point2>;

/// Keeps the part of `poly` where `coord(p) * sign >= bound * sign`.
template <class Coord>
Polygon clip_half_plane(const Polygon& poly, Coord coord, double bound, double sign) {
  Polygon out;
  if (poly.empty()) {
    return out;
  }
  auto inside = [&](Point2 p) { return sign * (coord(p) - bound) >= 0.0; };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % poly.size()];
    const bool in_a = inside(a);
    const bool in_b = inside(b);
    if (in_a) {
      out.push_back(a);
    }
    if (in_a != in_b) {
      const double t = (bound - coord(a)) / (coord(b) - coord(a));
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

inline double polygon_area(const Polygon& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * std::abs(twice);
}

inline Point2 polygon_mean(const Polygon& poly) {
  Point2 sum;
  for (const auto& p : poly) {
    sum = sum + p;
  }
  return (1.0 / static_cast<double>(poly.size())) * sum;
}

/// Exact area of a convex polygon inside an axis-aligned box, plus a representative point.
inline std::pair<double, Point2> clip_to_box(const Polygon& poly, Point2 lo, Point2 hi) {
  auto x = [](Point2 p) { return p.x; };
  auto y = [](Point2 p) { return p.y; };
  Polygon p = clip_half_plane(poly, x, lo.x, 1.0);
  p = clip_half_plane(p, x, hi.x, -1.0);
  p = clip_half_plane(p, y, lo.y, 1.0);
  p = clip_half_plane(p, y, hi.y, -1.0);
  if (p.size() < 3) {
    return {0.0, {}};
  }
  return {polygon_area(p), polygon_mean(p)};
}

}  // namespace detail

struct SweepOptions {
  /// Longest straight piece the path is cut into before rasterizing;
  /// zero selects half the grid resolution. Only affects cell ordering.
  double max_step = 0.0;
};

/// Rasterizes the strip of width `width` swept along a polyline.
///
/// Each piece of the path is a rectangle clipped exactly against the cells it
/// overlaps. A cell enters the crossing at the piece that first covers it;
/// later coverage, including re-entry by a winding path, adds to its area.
/// Intensities in the result are left at zero; see `sample_intensities`.
///
/// \throws std::invalid_argument for fewer than two poses or a nonpositive width.
/// \throws std::out_of_range if the swept strip leaves the grid.
[[nodiscard]] inline PathCrossing swept_cells(const GridGeometry& geometry, std::span<const Pose2> path,
                                              double width, const SweepOptions& options = {}) {
  if (path.size() < 2) {
    throw std::invalid_argument("a path needs at least two poses");
  }
  if (!(width > 0.0)) {
    throw std::invalid_argument("footprint width must be positive");
  }
  const double res = geometry.resolution();
  const double max_step = options.max_step > 0.0 ? options.max_step : 0.5 * res;
  const double min_area = 1e-12 * geometry.cell_area();
  const double slack = 1e-9 * res;
  const Point2 grid_lo = geometry.origin();
  const Point2 grid_hi = grid_lo + Point2{geometry.width(), geometry.height()};

  std::vector<CrossedCell> cells;
  std::unordered_map<CellIndex, std::size_t> slot;

  struct Piece {
    CellIndex index;
    double area;
    double along;
  };
  std::vector<Piece> fresh;

  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Point2 a = path[k].position();
    const Point2 b = path[k + 1].position();
    const double len = distance(a, b);
    if (len == 0.0) {
      continue;
    }
    const Point2 dir = (1.0 / len) * (b - a);
    const Point2 half_normal = (0.5 * width) * Point2{-dir.y, dir.x};
    const auto n_pieces = static_cast<std::size_t>(std::ceil(len / max_step));
    for (std::size_t p = 0; p < n_pieces; ++p) {
      const Point2 p0 = a + (static_cast<double>(p) / static_cast<double>(n_pieces)) * (b - a);
      const Point2 p1 = a + (static_cast<double>(p + 1) / static_cast<double>(n_pieces)) * (b - a);
      const detail::Polygon rect{p0 - half_normal, p1 - half_normal, p1 + half_normal, p0 + half_normal};

      Point2 lo{rect[0].x, rect[0].y};
      Point2 hi = lo;
      for (const auto& v : rect) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
      }
      if (lo.x < grid_lo.x - slack || lo.y < grid_lo.y - slack || hi.x > grid_hi.x + slack ||
          hi.y > grid_hi.y + slack) {
        throw std::out_of_range("swept path leaves the grid");
      }
      const auto c_lo = geometry.coord_of(lo);
      const auto c_hi = geometry.coord_of(hi);

      fresh.clear();
      for (long row = std::max(c_lo.row, 0L); row <= c_hi.row; ++row) {
        for (long col = std::max(c_lo.col, 0L); col <= c_hi.col; ++col) {
          const CellCoord c{col, row};
          if (!geometry.in_bounds(c)) {
            continue;
          }
          const Point2 cell_lo = geometry.corner(c);
          const auto [area, centroid] = detail::clip_to_box(rect, cell_lo, cell_lo + Point2{res, res});
          if (area <= min_area) {
            continue;
          }
          const auto index = geometry.index(c);
          if (auto it = slot.find(index); it != slot.end()) {
            cells[it->second].area += area;
          } else {
            fresh.push_back({index, area, dot(centroid - p0, dir)});
          }
        }
      }
      std::sort(fresh.begin(), fresh.end(), [](const Piece& l, const Piece& r) {
        return l.along != r.along ? l.along < r.along : l.index < r.index;
      });
      for (const auto& f : fresh) {
        slot.emplace(f.index, cells.size());
        cells.push_back({f.index, f.area, 0.0, 0.0, 0.0});
      }
    }
  }

  PathCrossing crossing;
  for (const auto& c : cells) {
    crossing.push_back(c);
  }
  return crossing;
}

/// Copies the current estimates of the field into a crossing.
inline void sample_intensities(PathCrossing& crossing, const LambdaGrid& grid, const SensorModel& sensor) {
  for (std::size_t i = 0; i < crossing.size(); ++i) {
    auto& c = crossing[i];
    const auto stats = grid.stats(c.index);
    const auto ci = confidence_bounds(stats, sensor, grid.lambda_max());
    c.lambda_mle = lambda_mle(stats, sensor, grid.lambda_max()).lambda;
    c.lambda_low = ci.lambda_low;
    c.lambda_high = ci.lambda_high;
  }
}

/// Swept crossing of a path over a field, with intensities filled in.
[[nodiscard]] inline PathCrossing crossing_over(const LambdaGrid& grid, const SensorModel& sensor,
                                                std::span<const Pose2> path, double width,
                                                const SweepOptions& options = {}) {
  auto crossing = swept_cells(grid.geometry(), path, width, options);
  sample_intensities(crossing, grid, sensor);
  return crossing;
}

[[nodiscard]] inline double integrated_lambda(const PathCrossing& crossing, Bound bound = Bound::kMle) {
  double sum = 0.0;
  for (const auto& c : crossing.cells()) {
    sum += c.area * c.lambda(bound);
  }
  return sum;
}

[[nodiscard]] inline double path_collision_probability(const PathCrossing& crossing, Bound bound = Bound::kMle) {
  return collision_probability(integrated_lambda(crossing, bound));
}

namespace detail {

/// Cell containing crossed area `a`, and the hazard accumulated before it.
inline std::pair<std::size_t, double> locate(const PathCrossing& crossing, double a, Bound bound) {
  const double total = crossing.total_area();
  if (crossing.empty() || !(a >= 0.0) || a > total * (1.0 + 1e-12)) {
    throw std::out_of_range("crossed area outside the path");
  }
  double hazard = 0.0;
  std::size_t n = 0;
  while (n + 1 < crossing.size() && a >= crossing.cumulative_area(n + 1)) {
    hazard += crossing[n].area * crossing[n].lambda(bound);
    ++n;
  }
  return {n, hazard};
}

}  // namespace detail

/// Density of the first-collision area at `a`, 1/m^2.
/// \throws std::out_of_range unless 0 <= a <= total crossed area.
[[nodiscard]] inline double collision_pdf(const PathCrossing& crossing, double a, Bound bound = Bound::kMle) {
  const auto [n, hazard] = detail::locate(crossing, a, bound);
  const double lambda = crossing[n].lambda(bound);
  return std::exp(-hazard) * lambda * std::exp(-(a - crossing.cumulative_area(n)) * lambda);
}

/// Probability that the first collision happens before crossed area `a`.
[[nodiscard]] inline double collision_cdf(const PathCrossing& crossing, double a, Bound bound = Bound::kMle) {
  const auto [n, hazard] = detail::locate(crossing, a, bound);
  const double inside = std::min(a - crossing.cumulative_area(n), crossing[n].area);
  return -std::expm1(-(hazard + inside * crossing[n].lambda(bound)));
}

/// Risk as a function of the crossed area at collision.
using RiskFunction = std::function<double(double)>;

/// Expected risk at the first collision, with the risk held constant inside
/// each cell at its entry value.
[[nodiscard]] inline double expected_risk(const PathCrossing& crossing, const RiskFunction& risk,
                                          Bound bound = Bound::kMle) {
  double hazard = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < crossing.size(); ++i) {
    const double cell_hazard = crossing[i].area * crossing[i].lambda(bound);
    sum += risk(crossing.cumulative_area(i)) * std::exp(-hazard) * -std::expm1(-cell_hazard);
    hazard += cell_hazard;
  }
  return sum;
}

/// Momentum lost when stopped by an obstacle: mass times speed at arc length a / width.
[[nodiscard]] inline RiskFunction momentum_risk(const RobotShape& shape, VelocityProfile profile) {
  shape.validate();
  return [mass = shape.mass, width = shape.width, profile = std::move(profile)](double a) {
    return mass * profile(a / width);
  };
}

struct RiskReportRow {
  CellIndex index = 0;
  double cumulative_area = 0.0;
  double lambda = 0.0;
  /// Density at cell entry.
  double pdf = 0.0;
  /// Cumulative probability at cell exit.
  double cdf = 0.0;
  double partial_risk = 0.0;
};

/// Per-cell breakdown of `expected_risk`, for plotting.
[[nodiscard]] inline std::vector<RiskReportRow> risk_report(const PathCrossing& crossing, const RiskFunction& risk,
                                                            Bound bound = Bound::kMle) {
  std::vector<RiskReportRow> rows;
  rows.reserve(crossing.size());
  double hazard = 0.0;
  for (std::size_t i = 0; i < crossing.size(); ++i) {
    const auto& c = crossing[i];
    const double lambda = c.lambda(bound);
    const double cell_hazard = c.area * lambda;
    const double survive = std::exp(-hazard);
    const double a = crossing.cumulative_area(i);
    rows.push_back({c.index, a, lambda, survive * lambda, -std::expm1(-(hazard + cell_hazard)),
                    risk(a) * survive * -std::expm1(-cell_hazard)});
    hazard += cell_hazard;
  }
  return rows;
}

}  // namespace lambda_field

#endif  // LAMBDA_FIELD_PATH_RISK_HPP
