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

#include <gtest/gtest.h>

#include <random>

#include "lambda_field/geometry.hpp"

namespace {

using namespace lambda_field;

TEST(GridGeometry, RejectsDegenerate) {
  EXPECT_THROW(GridGeometry({0, 0}, 0.0, 4, 4), std::invalid_argument);
  EXPECT_THROW(GridGeometry({0, 0}, -0.1, 4, 4), std::invalid_argument);
  EXPECT_THROW(GridGeometry({0, 0}, 0.1, 0, 4), std::invalid_argument);
  EXPECT_THROW(GridGeometry({0, 0}, 0.1, 4, 0), std::invalid_argument);
}

TEST(GridGeometry, CellAreaIsResolutionSquared) {
  const GridGeometry g{{-1.0, 2.0}, 0.2, 7, 3};
  EXPECT_EQ(g.cell_area(), 0.2 * 0.2);
  EXPECT_EQ(g.size(), 21u);
}

TEST(GridGeometry, IndexCoordRoundTrip) {
  const GridGeometry g{{0, 0}, 0.1, 13, 7};
  for (CellIndex i = 0; i < g.size(); ++i) {
    EXPECT_EQ(g.index(g.coord(i)), i);
    EXPECT_EQ(g.index_of(g.center(i)), i);
  }
}

TEST(GridGeometry, WorldPointRoundTripProperty) {
  const GridGeometry g{{-3.3, 1.7}, 0.05, 200, 120};
  std::mt19937_64 rng{3};
  std::uniform_real_distribution<double> ux(g.origin().x, g.origin().x + g.width());
  std::uniform_real_distribution<double> uy(g.origin().y, g.origin().y + g.height());
  for (int k = 0; k < 10000; ++k) {
    const Point2 p{ux(rng), uy(rng)};
    const auto idx = g.index_of(p);
    ASSERT_TRUE(idx.has_value());
    const Point2 c = g.center(*idx);
    EXPECT_LE(std::abs(c.x - p.x), 0.5 * g.resolution() + 1e-12);
    EXPECT_LE(std::abs(c.y - p.y), 0.5 * g.resolution() + 1e-12);
  }
}

TEST(GridGeometry, OutsidePointsHaveNoIndex) {
  const GridGeometry g{{0, 0}, 0.1, 10, 10};
  EXPECT_FALSE(g.index_of({-0.01, 0.5}));
  EXPECT_FALSE(g.index_of({1.0, 0.5}));
  EXPECT_TRUE(g.index_of({0.0, 0.0}));
  EXPECT_FALSE(g.contains({0.5, 1.0}));
}

}  // namespace
