/*
 * Copyright 2026 The neurosim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "neurosim/scaling_model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "neurosim/errors.hpp"
#include "support/oracles.hpp"

namespace neurosim::model {
namespace {

ScalingParams params(double s, double c = 0.0, double p = 1.0) { return {s, c, p}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kUsage;
}

TEST(SpeedupFirstOrder, IdealWithoutSerialFraction) {
  EXPECT_DOUBLE_EQ(speedup_first_order(params(0.0), 64), 64.0);
}

TEST(SpeedupFirstOrder, SingleCoreIsOne) {
  for (double s : {0.0, 0.01, 0.5, 1.0}) EXPECT_DOUBLE_EQ(speedup_first_order(params(s), 1), 1.0);
}

TEST(SpeedupFirstOrder, SaturatesAtInverseSerialFraction) {
  EXPECT_NEAR(speedup_first_order(params(0.5), 1e6), 2.0, 1e-5);
}

TEST(SpeedupFirstOrder, BoundedByCoresAndInverseFraction) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> s_dist(0.0, 1.0);
  std::uniform_int_distribution<int> n_dist(1, 100000);
  for (int i = 0; i < 500; ++i) {
    const double s = s_dist(rng);
    const double n = n_dist(rng);
    const double sp = speedup_first_order(params(s), n);
    EXPECT_LE(sp, n * (1 + 1e-12));
    if (s > 0) EXPECT_LE(sp, 1.0 / s * (1 + 1e-12));
    EXPECT_LE(speedup_first_order(params(s), n), speedup_first_order(params(s), n + 1) * (1 + 1e-15));
  }
}

TEST(SpeedupFirstOrder, RejectsBadDomain) {
  EXPECT_EQ(code_of([] { speedup_first_order(params(0.1), 0); }), ErrorCode::kParameterDomain);
  EXPECT_EQ(code_of([] { speedup_first_order(params(-0.1), 4); }), ErrorCode::kParameterDomain);
  EXPECT_EQ(code_of([] { speedup_first_order(params(1.5), 4); }), ErrorCode::kParameterDomain);
  EXPECT_EQ(code_of([] { speedup_first_order(params(0.1, -1), 4); }), ErrorCode::kParameterDomain);
  EXPECT_EQ(code_of([] { speedup_first_order(params(0.1, 0, 0), 4); }), ErrorCode::kParameterDomain);
}

TEST(SpeedupSecondOrder, ReducesToIdeal) {
  EXPECT_DOUBLE_EQ(speedup_second_order(params(0, 0), 16), 16.0);
}

TEST(SpeedupSecondOrder, DirectEvaluation) {
  EXPECT_NEAR(speedup_second_order(params(0, 0.01), 10), 1.0 / (0.1 + 0.09), 1e-12);
  EXPECT_NEAR(speedup_second_order(params(0, 0.01), 10), 5.263157894736842, 1e-12);
}

TEST(SpeedupSecondOrder, MatchesFirstOrderWithoutOverhead) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> s_dist(0.0, 1.0);
  std::uniform_real_distribution<double> log_n(0.0, 9.0);
  for (int i = 0; i < 1000; ++i) {
    const double s = s_dist(rng);
    const double n = std::pow(10.0, log_n(rng));
    const double a = speedup_first_order(params(s), n);
    const double b = speedup_second_order(params(s), n);
    EXPECT_LE(std::abs(a - b) / a, 1e-12) << "s=" << s << " n=" << n;
  }
}

TEST(SpeedupSecondOrder, PeaksAtBruteForceArgmax) {
  std::int64_t best = 1;
  for (std::int64_t n = 2; n <= 1000; ++n) {
    if (speedup_second_order(params(0, 0.01), n) > speedup_second_order(params(0, 0.01), best)) best = n;
  }
  EXPECT_EQ(best, 10);
}

TEST(OptimalCores, KnownValues) {
  EXPECT_EQ(optimal_cores(params(0, 0.01)), 10);
  EXPECT_EQ(optimal_cores(params(0, 1)), 1);
  // Brute force over n = 1..100000 gives 100 (frozen from the oracle).
  EXPECT_EQ(optimal_cores(params(0.99, 1e-6)), 100);
  EXPECT_EQ(oracle::brute_force_optimum(0.99, 1e-6, 100000), 100);
}

TEST(OptimalCores, NoInteriorOptimumWithoutOverhead) {
  EXPECT_EQ(code_of([] { optimal_cores(params(0.1, 0.0)); }), ErrorCode::kNoInteriorOptimum);
}

TEST(OptimalCores, MatchesBruteForceOnRandomParams) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> s_dist(0.0, 0.999);
  std::uniform_real_distribution<double> log_c(-10.0, 0.0);
  for (int i = 0; i < 100; ++i) {
    const double s = s_dist(rng);
    const double c = std::pow(10.0, log_c(rng));
    EXPECT_EQ(optimal_cores(params(s, c)), oracle::brute_force_optimum(s, c, 1'000'000))
        << "s=" << s << " c=" << c;
  }
}

TEST(Efficiency, Basics) {
  EXPECT_DOUBLE_EQ(efficiency(params(0.3), 1), 1.0);
  EXPECT_DOUBLE_EQ(efficiency(params(0, 0), 1e6), 1.0);
  EXPECT_NEAR(efficiency(params(0.5), 100), 0.019801980198019802, 1e-15);
}

TEST(Efficiency, MonotoneInCoresAndFraction) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> s_dist(0.0, 1.0);
  std::uniform_real_distribution<double> c_dist(0.0, 0.01);
  for (int i = 0; i < 300; ++i) {
    const double s = s_dist(rng), c = c_dist(rng);
    double prev = 1.0;
    for (double n = 1; n <= 4096; n *= 2) {
      const double e = efficiency(params(s, c), n);
      EXPECT_GT(e, 0.0);
      EXPECT_LE(e, 1.0 + 1e-15);
      EXPECT_LE(e, prev * (1 + 1e-15));
      prev = e;
    }
    const double s2 = std::min(1.0, s + 0.1);
    EXPECT_LE(efficiency(params(s2, c), 100), efficiency(params(s, c), 100) * (1 + 1e-15));
  }
}

TEST(EfficiencySurface, Shapes) {
  const std::vector<double> zero = {0.0};
  const std::vector<double> ns = {1, 2, 4};
  EXPECT_EQ(efficiency_surface(zero, ns), (std::vector<std::vector<double>>{{1, 1, 1}}));
  const std::vector<double> tenth = {0.1};
  const std::vector<double> one = {1};
  EXPECT_EQ(efficiency_surface(tenth, one), (std::vector<std::vector<double>>{{1}}));
}

TEST(EfficiencySurface, HighFractionRowDecaysEarlier) {
  const std::vector<double> ss = {1e-7, 1e-5};
  std::vector<double> ns;
  for (double n = 1e3; n <= 1e7; n *= 10) ns.push_back(n);
  const auto grid = efficiency_surface(ss, ns);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 1; j < ns.size(); ++j) EXPECT_LE(grid[i][j], grid[i][j - 1]);
  }
  for (std::size_t j = 0; j < ns.size(); ++j) EXPECT_LE(grid[1][j], grid[0][j]);
  // At 10^7 cores the s=1e-5 row is two orders of magnitude lower.
  EXPECT_LT(grid[1].back(), 0.011);
  EXPECT_GT(grid[0].back(), 0.5);
}

TEST(EfficiencySurface, EmptyInputIsUsageError) {
  const std::vector<double> empty;
  const std::vector<double> some = {1.0};
  EXPECT_EQ(code_of([&] { efficiency_surface(empty, some); }), ErrorCode::kUsage);
  EXPECT_EQ(code_of([&] { efficiency_surface(some, empty); }), ErrorCode::kUsage);
}

TEST(PayloadPerformance, IdealLine) {
  EXPECT_NEAR(payload_performance(params(0, 0, 1), 1000), 1000.0, 1e-9);
}

TEST(PayloadPerformance, BoundedByLimit) {
  const double limit = 1.0 / 1e-7;
  for (double n = 1; n <= 1e12; n *= 3) EXPECT_LT(payload_performance(params(1e-7), n), limit);
  EXPECT_GE(payload_performance(params(1e-7), 1e9), 0.9 * limit);
}

TEST(PayloadPerformance, OverheadCurvePeaksThenFalls) {
  const auto p = params(0, 0.01);
  for (int n = 1; n < 10; ++n) EXPECT_LT(payload_performance(p, n), payload_performance(p, n + 1));
  for (int n = 10; n < 200; ++n) EXPECT_GT(payload_performance(p, n), payload_performance(p, n + 1));
}

TEST(EnergyProxy, GrowsAsEfficiencyDrops) {
  const auto p = params(0.01, 0.001);
  double prev = 0.0;
  for (double n = 1; n <= 1024; n *= 2) {
    const double e = energy_proxy(p, n);
    EXPECT_NEAR(e, 1.0 / efficiency(p, n), 1e-9 * e);
    EXPECT_GE(e, prev);
    prev = e;
  }
}

TEST(Presets, StrictlyIncreasingFraction) {
  const auto presets = preset_profiles();
  ASSERT_EQ(presets.size(), 4u);
  EXPECT_EQ(presets[0].name, "hpl");
  EXPECT_EQ(presets[3].name, "brain");
  for (std::size_t i = 1; i < presets.size(); ++i) {
    EXPECT_LT(presets[i - 1].params.nonpayload_fraction, presets[i].params.nonpayload_fraction);
  }
  EXPECT_TRUE(find_preset("hpcg").has_value());
  EXPECT_FALSE(find_preset("linpack").has_value());
}

TEST(MixedPrecision, SupercomputerResult) {
  const auto est = mixed_precision_extrapolate(148.6, 64, 445, 16);
  const double expected = oracle::fp0_by_cramer(148.6, 64, 445, 16);
  EXPECT_NEAR(expected, 1327.8514056224, 1e-6);
  EXPECT_NEAR(est.fp0_performance(), expected, 1e-9 * expected);
  EXPECT_NEAR(est.payload / est.housekeeping, 7.93574297188755, 1e-9);
  EXPECT_NEAR(est.housekeeping_share(), 0.11191011235955056, 1e-12);
  EXPECT_GT(est.fp0_performance(), 1000.0);  // above 1 EFlops, in Pflops
}

TEST(MixedPrecision, RoundTripReproducesInputs) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> perf(1.0, 1e6);
  std::uniform_real_distribution<double> frac(0.01, 0.99);
  const std::vector<std::pair<double, double>> widths = {{64, 16}, {64, 32}, {32, 8}, {64, 8}};
  for (int i = 0; i < 200; ++i) {
    const auto [wa, wb] = widths[i % widths.size()];
    const double a = perf(rng);
    const double b = a * (1.0 + frac(rng) * (wa / wb - 1.0));
    const auto est = mixed_precision_extrapolate(a, wa, b, wb);
    EXPECT_NEAR(est.performance_at(wa), a, 1e-9 * a);
    EXPECT_NEAR(est.performance_at(wb), b, 1e-9 * b);
    EXPECT_NEAR(est.performance_at(0), est.fp0_performance(), 1e-9 * est.fp0_performance());
  }
}

TEST(MixedPrecision, Errors) {
  EXPECT_EQ(code_of([] { mixed_precision_extrapolate(100, 64, 100, 16); }), ErrorCode::kNoSpeedup);
  EXPECT_EQ(code_of([] { mixed_precision_extrapolate(100, 64, 400, 16); }), ErrorCode::kZeroHousekeeping);
  EXPECT_EQ(code_of([] { mixed_precision_extrapolate(100, 64, 500, 16); }), ErrorCode::kZeroHousekeeping);
  EXPECT_EQ(code_of([] { mixed_precision_extrapolate(100, 64, 200, 0); }), ErrorCode::kParameterDomain);
  EXPECT_EQ(code_of([] { mixed_precision_extrapolate(100, 16, 200, 64); }), ErrorCode::kParameterDomain);
}

}  // namespace
}  // namespace neurosim::model
