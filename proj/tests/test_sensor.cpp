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

#include <cmath>
#include <random>
#include <set>

#include "lambda_field/sensor.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

namespace {

using namespace lambda_field;

const SensorModel kSensor = scenes::lidar_sensor();

TEST(ApplyBeam, HitAtTwoMetres) {
  const GridGeometry g{{0, 0}, 0.1, 50, 10};
  LambdaGrid grid{g};
  const Beam beam{{0.05, 0.55}, {1.0, 0.0}, 2.0, true};
  const auto fp = beam_footprint(g, beam, kSensor);

  // Independent enumeration: cells whose center is in the disk, and the cells
  // marched before the first of them.
  std::set<CellIndex> region;
  for (CellIndex i = 0; i < g.size(); ++i) {
    if (distance(g.center(i), beam.endpoint()) <= kSensor.error_radius()) {
      region.insert(i);
    }
  }
  std::vector<CellIndex> before;
  for (auto i : oracle::march_cells(g, beam.origin, beam.endpoint(), 1e-4)) {
    if (region.contains(i)) {
      break;
    }
    before.push_back(i);
  }
  EXPECT_EQ(region.size(), 5u);
  EXPECT_EQ(before.size(), 19u);
  EXPECT_EQ(std::set<CellIndex>(fp.hit.begin(), fp.hit.end()), region);
  EXPECT_EQ(fp.missed, before);

  apply_beam(grid, beam, kSensor);
  EXPECT_EQ(grid.total_count(), 24u);
  for (auto i : region) {
    EXPECT_EQ(grid.stats(i), (CellStats{1, 0}));
  }
  for (auto i : before) {
    EXPECT_EQ(grid.stats(i), (CellStats{0, 1}));
  }
}

TEST(ApplyBeam, TinyErrorRegionStillHitsEndpointCell) {
  const GridGeometry g{{0, 0}, 0.1, 50, 10};
  const SensorModel sharp{0.99, 0.9999, 1e-6, 10.0};
  const auto fp = beam_footprint(g, Beam{{0.05, 0.55}, {1.0, 0.0}, 2.02, true}, sharp);
  ASSERT_EQ(fp.hit.size(), 1u);
  EXPECT_EQ(fp.hit[0], g.index(CellCoord{20, 5}));
  EXPECT_EQ(fp.missed.size(), 20u);
}

TEST(ApplyBeam, NoReturnMissesWholeRay) {
  const GridGeometry g{{0, 0}, 0.1, 200, 10};
  LambdaGrid grid{g};
  const Beam beam{{0.05, 0.55}, {1.0, 0.0}, kSensor.max_range(), false};
  apply_beam(grid, beam, kSensor);
  std::uint64_t hits = 0;
  for (const auto& c : grid.cells()) {
    hits += c.hits;
  }
  EXPECT_EQ(hits, 0u);
  // Ray ends at x = 10.05, halfway into column 100.
  EXPECT_EQ(grid.total_count(), 101u);
}

TEST(ApplyBeam, ReplayMatchesClosedForm) {
  const GridGeometry g{{0, 0}, 0.1, 50, 10};
  LambdaGrid grid{g};
  const std::uint32_t n_free = 40;
  const std::uint32_t n_hit = 3;
  for (std::uint32_t k = 0; k < n_free; ++k) {
    apply_beam(grid, Beam{{0.05, 0.55}, {1.0, 0.0}, kSensor.max_range(), false}, kSensor);
  }
  for (std::uint32_t k = 0; k < n_hit; ++k) {
    apply_beam(grid, Beam{{0.05, 0.55}, {1.0, 0.0}, 2.0, true}, kSensor);
  }
  const double expected = std::log1p(static_cast<double>(n_hit) / n_free) / kSensor.error_area();
  for (long col : {19L, 20L, 21L}) {
    const auto i = g.index(CellCoord{col, 5});
    EXPECT_EQ(grid.stats(i), (CellStats{n_hit, n_free}));
    EXPECT_NEAR(grid.mle(i, kSensor).lambda, expected, 1e-12);
  }
  // Off-ray region cells were never missed.
  EXPECT_EQ(grid.mle(g.index(CellCoord{20, 4}), kSensor).lambda, grid.lambda_max());
}

TEST(ApplyBeam, CountMassPerBeamProperty) {
  const GridGeometry g{{0, 0}, 0.1, 60, 60};
  LambdaGrid grid{g};
  std::mt19937_64 rng{31};
  std::uniform_real_distribution<double> pos(0.0, 6.0);
  std::uniform_real_distribution<double> ang(-3.14159, 3.14159);
  std::uniform_real_distribution<double> range(0.01, 12.0);
  std::bernoulli_distribution hit(0.7);
  for (int k = 0; k < 500; ++k) {
    const double a = ang(rng);
    const Beam beam{{pos(rng), pos(rng)}, {std::cos(a), std::sin(a)}, range(rng), hit(rng)};
    const auto fp = beam_footprint(g, beam, kSensor);
    std::set<CellIndex> missed(fp.missed.begin(), fp.missed.end());
    for (auto h : fp.hit) {
      EXPECT_FALSE(missed.contains(h));
    }
    const auto before = grid.total_count();
    apply_beam(grid, beam, kSensor);
    EXPECT_EQ(grid.total_count() - before, fp.missed.size() + fp.hit.size());
  }
}

TEST(ApplyBeam, OriginOutsideThrows) {
  LambdaGrid grid{GridGeometry{{0, 0}, 0.1, 10, 10}};
  EXPECT_THROW(apply_beam(grid, Beam{{-1, 0}, {1, 0}, 1.0, true}, kSensor), std::out_of_range);
}

TEST(SimulateScan, EmptyWorldNeverReturns) {
  const GroundTruthMap truth{GridGeometry{{0, 0}, 0.1, 40, 40}};
  const SensorModel perfect{1.0, 1.0, 0.1, 3.0};
  const auto beams = simulate_scan(truth, {2.0, 2.0, 0.3}, perfect, 90, 4);
  ASSERT_EQ(beams.size(), 90u);
  for (const auto& b : beams) {
    EXPECT_FALSE(b.hit);
    EXPECT_EQ(b.range, 3.0);
    EXPECT_NEAR(norm(b.direction), 1.0, 1e-12);
  }
}

TEST(SimulateScan, SolidWallAtThreeMetres) {
  GroundTruthMap truth{GridGeometry{{0, 0}, 0.1, 80, 80}};
  truth.fill_box({4.0, 0.0}, {5.0, 8.0}, 1e4);
  const SensorModel perfect{1.0, 1.0, 1e-9, 10.0};
  ScanOptions opt;
  opt.field_of_view = 0.4;
  const auto beams = simulate_scan(truth, {1.0, 4.0, 0.0}, perfect, 11, 8, opt);
  for (const auto& b : beams) {
    ASSERT_TRUE(b.hit);
    EXPECT_NEAR(b.range, 3.0 / std::cos(b.angle()), 0.01);
  }
}

TEST(SimulateScan, DeterministicForSeed) {
  const scenes::SparsePatch scene;
  const auto a = simulate_scan(scene.truth, scene.pose, kSensor, 360, 99);
  const auto b = simulate_scan(scene.truth, scene.pose, kSensor, 360, 99);
  const auto c = simulate_scan(scene.truth, scene.pose, kSensor, 360, 100);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(SimulateScan, RangesWithinSensorLimits) {
  const scenes::DenseWall scene;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (const auto& b : simulate_scan(scene.truth, scene.pose, kSensor, 360, seed)) {
      EXPECT_GT(b.range, 0.0);
      EXPECT_LE(b.range, kSensor.max_range());
      if (!b.hit) {
        EXPECT_EQ(b.range, kSensor.max_range());
      }
    }
  }
}

TEST(SimulateScan, SpuriousReturnRateMatchesPHit) {
  const GroundTruthMap truth{GridGeometry{{0, 0}, 0.1, 40, 40}};
  const SensorModel noisy{0.9, 1.0, 0.1, 1.5};
  std::size_t hits = 0;
  std::size_t total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    for (const auto& b : simulate_scan(truth, {2.0, 2.0, 0.0}, noisy, 100, seed)) {
      hits += b.hit ? 1 : 0;
      ++total;
    }
  }
  const double rate = static_cast<double>(hits) / static_cast<double>(total);
  // Binomial(20000, 0.1): standard deviation 0.0021.
  EXPECT_NEAR(rate, 0.1, 0.01);
}

TEST(SimulateScan, PoseOutsideThrows) {
  const GroundTruthMap truth{GridGeometry{{0, 0}, 0.1, 10, 10}};
  EXPECT_THROW((void)simulate_scan(truth, {5.0, 5.0, 0.0}, kSensor, 10, 1), std::out_of_range);
}

TEST(Convergence, FreeCellsNearZeroDenseCellsCovered) {
  const scenes::DenseWall scene;
  LambdaGrid field{scene.truth.geometry()};
  scenes::scan_into(scene.truth, scene.pose, kSensor, 500, 180, 1000, field);

  std::size_t dense_observed = 0;
  std::size_t dense_covered = 0;
  std::size_t free_observed = 0;
  for (CellIndex i = 0; i < field.size(); ++i) {
    if (!field.stats(i).observed()) {
      continue;
    }
    if (scene.dense(i)) {
      ++dense_observed;
      const double truth = std::min(scene.truth.intensity(i), field.lambda_max());
      const auto ci = field.interval(i, kSensor);
      dense_covered += (ci.lambda_low <= truth && truth <= ci.lambda_high) ? 1 : 0;
    } else if (scene.visible(i, 2)) {
      ++free_observed;
      EXPECT_LT(field.mle(i, kSensor).lambda, 0.05 * field.lambda_max());
    }
  }
  EXPECT_GT(free_observed, 500u);
  ASSERT_GT(dense_observed, 20u);
  EXPECT_GE(static_cast<double>(dense_covered), 0.9 * static_cast<double>(dense_observed));
}

}  // namespace
