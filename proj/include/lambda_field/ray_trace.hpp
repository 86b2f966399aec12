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

#ifndef LAMBDA_FIELD_RAY_TRACE_HPP
#define LAMBDA_FIELD_RAY_TRACE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lambda_field/geometry.hpp"

namespace lambda_field {

/// A cell crossed by a segment and the length of segment inside it.
struct CellChord {
  CellIndex index = 0;
  double length = 0.0;
};

namespace detail {

/// Chords shorter than this (meters) come from touching a cell corner or edge.
inline constexpr double kMinChord = 1e-12;

/// Parameter in [0, 1] at which the segment leaves the grid box.
inline double exit_parameter(const GridGeometry& g, Point2 origin, Point2 delta) {
  double t = 1.0;
  const double lo[2] = {g.origin().x, g.origin().y};
  const double hi[2] = {g.origin().x + g.width(), g.origin().y + g.height()};
  const double o[2] = {origin.x, origin.y};
  const double d[2] = {delta.x, delta.y};
  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] > 0.0) {
      t = std::min(t, (hi[axis] - o[axis]) / d[axis]);
    } else if (d[axis] < 0.0) {
      t = std::min(t, (lo[axis] - o[axis]) / d[axis]);
    }
  }
  return std::max(t, 0.0);
}

}  // namespace detail

/// Cells crossed by the segment origin -> endpoint, in order, with chord lengths.
///
/// Incremental grid walk (Amanatides & Woo). The segment is clipped where it
/// leaves the grid. Cells only touched at a corner or along an edge are
/// skipped.
///
/// \throws std::out_of_range if the origin is outside the grid.
[[nodiscard]] inline std::vector<CellChord> trace_beam(const GridGeometry& geometry, Point2 origin,
                                                       Point2 endpoint) {
  if (!geometry.contains(origin)) {
    throw std::out_of_range("beam origin outside grid");
  }
  std::vector<CellChord> out;
  const Point2 delta = endpoint - origin;
  const double length = norm(delta);
  if (length == 0.0) {
    return out;
  }
  const double t_end = detail::exit_parameter(geometry, origin, delta);

  const double res = geometry.resolution();
  CellCoord cell = geometry.coord_of(origin);
  const long step_x = delta.x > 0.0 ? 1 : (delta.x < 0.0 ? -1 : 0);
  const long step_y = delta.y > 0.0 ? 1 : (delta.y < 0.0 ? -1 : 0);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  auto next_boundary = [&](long c, long step, double o0, double o, double d) {
    if (step == 0) {
      return kInf;
    }
    const double edge = o0 + static_cast<double>(c + (step > 0 ? 1 : 0)) * res;
    return (edge - o) / d;
  };
  double t_max_x = next_boundary(cell.col, step_x, geometry.origin().x, origin.x, delta.x);
  double t_max_y = next_boundary(cell.row, step_y, geometry.origin().y, origin.y, delta.y);
  const double t_delta_x = step_x == 0 ? kInf : res / std::abs(delta.x);
  const double t_delta_y = step_y == 0 ? kInf : res / std::abs(delta.y);

  double t = 0.0;
  while (t < t_end && geometry.in_bounds(cell)) {
    const double t_next = std::min({t_max_x, t_max_y, t_end});
    const double chord = (t_next - t) * length;
    if (chord > detail::kMinChord) {
      out.push_back({geometry.index(cell), chord});
    }
    t = t_next;
    if (t >= t_end) {
      break;
    }
    if (t_max_x < t_max_y) {
      cell.col += step_x;
      t_max_x += t_delta_x;
    } else if (t_max_y < t_max_x) {
      cell.row += step_y;
      t_max_y += t_delta_y;
    } else {
      // Exact corner crossing: move diagonally.
      cell.col += step_x;
      cell.row += step_y;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    }
  }
  return out;
}

/// Cells whose center lies within `radius` of `center`. Cells outside the grid are dropped.
/// \throws std::invalid_argument if the radius is negative.
[[nodiscard]] inline std::vector<CellIndex> error_region_cells(const GridGeometry& geometry, Point2 center,
                                                               double radius) {
  if (!(radius >= 0.0)) {
    throw std::invalid_argument("error region radius must be nonnegative");
  }
  std::vector<CellIndex> out;
  const auto lo = geometry.coord_of({center.x - radius, center.y - radius});
  const auto hi = geometry.coord_of({center.x + radius, center.y + radius});
  const double r2 = radius * radius;
  for (long row = std::max(lo.row, 0L); row <= hi.row; ++row) {
    if (static_cast<std::size_t>(row) >= geometry.n_rows()) {
      break;
    }
    for (long col = std::max(lo.col, 0L); col <= hi.col; ++col) {
      if (static_cast<std::size_t>(col) >= geometry.n_cols()) {
        break;
      }
      const Point2 d = geometry.center(CellCoord{col, row}) - center;
      if (d.x * d.x + d.y * d.y <= r2) {
        out.push_back(geometry.index(CellCoord{col, row}));
      }
    }
  }
  return out;
}

}  // namespace lambda_field

#endif  // LAMBDA_FIELD_RAY_TRACE_HPP
