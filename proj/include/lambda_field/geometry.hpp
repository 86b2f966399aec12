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

#ifndef LAMBDA_FIELD_GEOMETRY_HPP
#define LAMBDA_FIELD_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

/**
 * \file
 * \brief Planar primitives and the regular tessellation shared by every grid.
 */

namespace lambda_field {

/// A point or vector in the world frame, meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

[[nodiscard]] inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
[[nodiscard]] inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
[[nodiscard]] inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
[[nodiscard]] inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Planar robot pose: position in meters, heading in radians.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  [[nodiscard]] Point2 position() const { return {x, y}; }
  friend constexpr bool operator==(const Pose2&, const Pose2&) = default;
};

/// Integer cell coordinates; column grows with x, row grows with y.
struct CellCoord {
  long col = 0;
  long row = 0;
  friend constexpr bool operator==(CellCoord, CellCoord) = default;
};

/// Row-major linear cell index.
using CellIndex = std::size_t;

/// Regular square tessellation of an axis-aligned rectangle.
class GridGeometry {
 public:
  /// \throws std::invalid_argument if the resolution is not positive or a dimension is zero.
  GridGeometry(Point2 origin, double resolution, std::size_t n_cols, std::size_t n_rows)
      : origin_{origin}, resolution_{resolution}, n_cols_{n_cols}, n_rows_{n_rows} {
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
      throw std::invalid_argument("grid resolution must be positive and finite");
    }
    if (n_cols == 0 || n_rows == 0) {
      throw std::invalid_argument("grid must have at least one row and one column");
    }
  }

  [[nodiscard]] Point2 origin() const { return origin_; }
  [[nodiscard]] double resolution() const { return resolution_; }
  [[nodiscard]] std::size_t n_cols() const { return n_cols_; }
  [[nodiscard]] std::size_t n_rows() const { return n_rows_; }
  [[nodiscard]] std::size_t size() const { return n_cols_ * n_rows_; }
  [[nodiscard]] double cell_area() const { return resolution_ * resolution_; }
  [[nodiscard]] double width() const { return static_cast<double>(n_cols_) * resolution_; }
  [[nodiscard]] double height() const { return static_cast<double>(n_rows_) * resolution_; }

  /// True for points in the half-open box [origin, origin + extent).
  [[nodiscard]] bool contains(Point2 p) const {
    const auto c = coord_of(p);
    return in_bounds(c);
  }

  [[nodiscard]] bool in_bounds(CellCoord c) const {
    return c.col >= 0 && c.row >= 0 && static_cast<std::size_t>(c.col) < n_cols_ &&
           static_cast<std::size_t>(c.row) < n_rows_;
  }

  /// Cell containing a world point; may be out of bounds.
  [[nodiscard]] CellCoord coord_of(Point2 p) const {
    return {static_cast<long>(std::floor((p.x - origin_.x) / resolution_)),
            static_cast<long>(std::floor((p.y - origin_.y) / resolution_))};
  }

  [[nodiscard]] std::optional<CellIndex> index_of(Point2 p) const {
    const auto c = coord_of(p);
    if (!in_bounds(c)) {
      return std::nullopt;
    }
    return index(c);
  }

  [[nodiscard]] CellIndex index(CellCoord c) const {
    return static_cast<CellIndex>(c.row) * n_cols_ + static_cast<CellIndex>(c.col);
  }

  [[nodiscard]] CellCoord coord(CellIndex i) const {
    return {static_cast<long>(i % n_cols_), static_cast<long>(i / n_cols_)};
  }

  [[nodiscard]] Point2 center(CellCoord c) const {
    return {origin_.x + (static_cast<double>(c.col) + 0.5) * resolution_,
            origin_.y + (static_cast<double>(c.row) + 0.5) * resolution_};
  }

  [[nodiscard]] Point2 center(CellIndex i) const { return center(coord(i)); }

  /// Lower-left corner of a cell.
  [[nodiscard]] Point2 corner(CellCoord c) const {
    return {origin_.x + static_cast<double>(c.col) * resolution_,
            origin_.y + static_cast<double>(c.row) * resolution_};
  }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

 private:
  Point2 origin_;
  double resolution_;
  std::size_t n_cols_;
  std::size_t n_rows_;
};

}  // namespace lambda_field

#endif  // LAMBDA_FIELD_GEOMETRY_HPP
