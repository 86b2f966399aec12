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
#include <limits>
#include <random>

#include "lambda_field/intensity.hpp"
#include "oracles.hpp"

namespace {

using namespace lambda_field;

constexpr double kE = 0.04;

SensorModel lidar_sensor() { return SensorModel::with_error_area(0.99, 0.9999, kE, 10.0); }

TEST(SensorModel, ErrorAreaFromRadius) {
  const auto s = lidar_sensor();
  EXPECT_NEAR(s.error_area(), 0.04, 1e-15);
  EXPECT_NEAR(s.error_radius(), 0.1128379, 1e-7);
}

TEST(SensorModel, RejectsOutOfDomain) {
  EXPECT_THROW(SensorModel(0.0, 0.5, 0.1, 1.0), std::invalid_argument);
  EXPECT_THROW(SensorModel(0.5, 1.5, 0.1, 1.0), std::invalid_argument);
  EXPECT_THROW(SensorModel(0.5, 0.5, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(SensorModel(0.5, 0.5, 0.1, -1.0), std::invalid_argument);
  EXPECT_NO_THROW(SensorModel(1.0, 1.0, 0.1, 1.0));
}

TEST(LambdaMle, NoHitIsZero) {
  const auto est = lambda_mle({0, 10}, kE);
  EXPECT_EQ(est.lambda, 0.0);
  EXPECT_TRUE(est.observed);
}

TEST(LambdaMle, OneHitInForty) {
  // 25 ln(40/39), evaluated independently.
  EXPECT_NEAR(lambda_mle({1, 39}, kE).lambda, 0.6329451996072446, 1e-12);
}

TEST(LambdaMle, NoMissClampsToMax) {
  EXPECT_EQ(lambda_mle({5, 0}, kE).lambda, kDefaultLambdaMax);
  EXPECT_EQ(lambda_mle({5, 0}, kE, 42.0).lambda, 42.0);
}

TEST(LambdaMle, UnobservedIsFlaggedZero) {
  const auto est = lambda_mle({0, 0}, kE);
  EXPECT_EQ(est.lambda, 0.0);
  EXPECT_FALSE(est.observed);
}

TEST(LambdaMle, DoublingErrorAreaHalvesEstimate) {
  std::mt19937_64 rng{7};
  std::uniform_int_distribution<std::uint32_t> count(1, 200);
  for (int k = 0; k < 500; ++k) {
    const CellStats s{count(rng), count(rng)};
    const double a = lambda_mle(s, 0.04, 1e12).lambda;
    const double b = lambda_mle(s, 0.08, 1e12).lambda;
    EXPECT_DOUBLE_EQ(b, 0.5 * a);
  }
}

TEST(LambdaMle, ZeroGradientAtEstimate) {
  const double area = 0.01;
  for (std::uint32_t h = 1; h <= 60; h += 3) {
    for (std::uint32_t m = 1; m <= 60; m += 5) {
      const double lambda = lambda_mle({h, m}, kE, 1e12).lambda;
      const double grad = -static_cast<double>(m) * area + h * area / std::expm1(kE * lambda);
      EXPECT_LT(std::abs(grad), 1e-9) << "h=" << h << " m=" << m;
    }
  }
}

TEST(LambdaMle, MatchesNumericMaximization) {
  std::mt19937_64 rng{2026};
  std::uniform_int_distribution<std::size_t> n_cells(1, 5);
  std::uniform_int_distribution<std::size_t> n_beams(1, 50);
  const double area = 0.01;
  for (int scenario = 0; scenario < 100; ++scenario) {
    const auto cells = n_cells(rng);
    const auto beams = oracle::random_row_beams(cells, n_beams(rng), rng);
    std::vector<CellStats> stats(cells);
    for (const auto& b : beams) {
      for (auto i : b.missed) ++stats[i].misses;
      for (auto i : b.hit) ++stats[i].hits;
    }
    for (std::size_t i = 0; i < cells; ++i) {
      if (!stats[i].observed()) {
        continue;
      }
      const double expected = oracle::argmax_cell(beams, i, area, kE, kDefaultLambdaMax);
      EXPECT_NEAR(lambda_mle(stats[i], kE).lambda, expected, 1e-6) << "scenario " << scenario << " cell " << i;
    }
  }
}

TEST(LambdaFromCount, Examples) {
  EXPECT_EQ(lambda_from_count(0, 40, kE), 0.0);
  EXPECT_NEAR(lambda_from_count(20, 40, kE), 17.328679513998633, 1e-12);
  EXPECT_LT(lambda_from_count(19, 40, kE), lambda_from_count(20, 40, kE));
  EXPECT_GT(lambda_from_count(21, 40, kE), lambda_from_count(20, 40, kE));
  EXPECT_EQ(lambda_from_count(40, 40, kE), kDefaultLambdaMax);
}

TEST(LambdaFromCount, RejectsOutOfRange) {
  EXPECT_THROW((void)lambda_from_count(-0.5, 40, kE), std::invalid_argument);
  EXPECT_THROW((void)lambda_from_count(41, 40, kE), std::invalid_argument);
  EXPECT_THROW((void)lambda_from_count(0, 0, kE), std::invalid_argument);
  EXPECT_THROW((void)lambda_from_count(std::nan(""), 4, kE), std::invalid_argument);
}

TEST(LambdaFromCount, StrictlyIncreasingBelowSaturation) {
  const double total = 57.0;
  double prev = -1.0;
  for (double k = 0.0; k < total; k += 0.25) {
    const double v = lambda_from_count(k, total, kE, 1e12);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(ConfidenceBounds, SingleMissClampsLowerAtZero) {
  const auto ci = confidence_bounds({0, 1}, lidar_sensor());
  EXPECT_EQ(ci.lambda_low, 0.0);
  // K_U = 1e-4 + 1.96 sqrt(9.999e-5 * 0.9999); lambda_U = 25 ln(1 / (1 - K_U)).
  EXPECT_NEAR(ci.lambda_high, 0.49739079989976015, 1e-12);
  EXPECT_EQ(ci.level, 0.95);
}

TEST(ConfidenceBounds, AllHitsSaturateUpper) {
  for (std::uint32_t h : {1u, 5u, 100u}) {
    EXPECT_EQ(confidence_bounds({h, 0}, lidar_sensor()).lambda_high, kDefaultLambdaMax);
    EXPECT_EQ(confidence_bounds({h, 0}, SensorModel{0.7, 0.6, 0.05, 5.0}).lambda_high, kDefaultLambdaMax);
  }
}

TEST(ConfidenceBounds, UnobservedIsVacuous) {
  const auto ci = confidence_bounds({0, 0}, lidar_sensor(), 55.0);
  EXPECT_EQ(ci.lambda_low, 0.0);
  EXPECT_EQ(ci.lambda_high, 55.0);
}

TEST(ConfidenceBounds, MisreadWidensThenShrinks) {
  // 100 readings of a free cell; reading 40 is a spurious hit.
  const auto sensor = lidar_sensor();
  std::vector<double> width;
  CellStats s;
  for (int n = 1; n <= 100; ++n) {
    (n == 40 ? s.hits : s.misses) += 1;
    width.push_back(confidence_bounds(s, sensor).width());
  }
  // Frozen by direct evaluation of the interval formulas.
  EXPECT_NEAR(width[38], 0.08109024259896909, 1e-12);
  EXPECT_NEAR(width[40], 0.2888064751959945, 1e-12);
  EXPECT_NEAR(width[99], 0.1392878719801244, 1e-12);
  for (int n = 1; n < 39; ++n) {
    EXPECT_LE(width[n], width[n - 1]) << "reading " << n + 1;
  }
  EXPECT_GT(width[39], width[38]);
  for (int n = 41; n < 100; ++n) {
    EXPECT_LT(width[n], width[n - 1]) << "reading " << n + 1;
  }
}

TEST(ConfidenceBounds, OrderedAndBoundedForRandomCounts) {
  std::mt19937_64 rng{11};
  std::uniform_int_distribution<std::uint32_t> count(0, 300);
  std::uniform_real_distribution<double> prob(0.5, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const SensorModel sensor{prob(rng), prob(rng), 0.1, 5.0};
    const CellStats s{count(rng), count(rng)};
    const auto ci = confidence_bounds(s, sensor);
    EXPECT_GE(ci.lambda_low, 0.0);
    EXPECT_LE(ci.lambda_low, ci.lambda_high);
    EXPECT_LE(ci.lambda_high, kDefaultLambdaMax);
  }
}

TEST(CollisionProbability, Examples) {
  EXPECT_EQ(collision_probability(0.0), 0.0);
  EXPECT_NEAR(collision_probability(0.312), 0.26801847177168736, 1e-14);
  EXPECT_NEAR(collision_probability(std::log(2.0)), 0.5, 1e-15);
  EXPECT_THROW((void)collision_probability(-1e-9), std::invalid_argument);
  EXPECT_LT(collision_probability(1e3), 1.0 + 1e-15);
}

TEST(SelectLambda, PicksEstimator) {
  const auto sensor = lidar_sensor();
  const CellStats s{3, 30};
  const auto ci = confidence_bounds(s, sensor);
  EXPECT_EQ(select_lambda(s, sensor, Bound::kLower), ci.lambda_low);
  EXPECT_EQ(select_lambda(s, sensor, Bound::kUpper), ci.lambda_high);
  EXPECT_EQ(select_lambda(s, sensor, Bound::kMle), lambda_mle(s, sensor).lambda);
  EXPECT_LE(ci.lambda_low, lambda_mle(s, sensor).lambda);
  EXPECT_GE(ci.lambda_high, lambda_mle(s, sensor).lambda);
}

}  // namespace
