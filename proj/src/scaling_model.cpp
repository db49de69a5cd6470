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

#include <fmt/format.h>

#include "neurosim/errors.hpp"

namespace neurosim::model {
namespace {

[[noreturn]] void domain_error(const std::string& msg) {
  throw Error(ErrorCode::kParameterDomain, msg);
}

void check_cores(double n) {
  if (!std::isfinite(n) || n < 1.0) domain_error(fmt::format("core count must be >= 1, got {}", n));
}

}  // namespace

void ScalingParams::validate() const {
  if (!(nonpayload_fraction >= 0.0 && nonpayload_fraction <= 1.0)) {
    domain_error(fmt::format("non-payload fraction must lie in [0, 1], got {}", nonpayload_fraction));
  }
  if (!(overhead_coeff >= 0.0) || !std::isfinite(overhead_coeff)) {
    domain_error(fmt::format("overhead coefficient must be >= 0, got {}", overhead_coeff));
  }
  if (!(per_core_perf > 0.0) || !std::isfinite(per_core_perf)) {
    domain_error(fmt::format("per-core performance must be > 0, got {}", per_core_perf));
  }
}

std::vector<WorkloadProfile> preset_profiles() {
  return {
      {"hpl", {1e-7, 0.0, 1.0}},
      {"hpcg", {1e-5, 0.0, 1.0}},
      {"ai", {1e-4, 0.0, 1.0}},
      {"brain", {1e-2, 0.0, 1.0}},
  };
}

std::optional<WorkloadProfile> find_preset(std::string_view name) {
  for (auto& profile : preset_profiles()) {
    if (profile.name == name) return profile;
  }
  return std::nullopt;
}

double normalized_time(const ScalingParams& params, double n) {
  params.validate();
  check_cores(n);
  const double s = params.nonpayload_fraction;
  return s + (1.0 - s) / n + params.overhead_coeff * (n - 1.0);
}

double speedup_first_order(const ScalingParams& params, double n) {
  params.validate();
  check_cores(n);
  const double s = params.nonpayload_fraction;
  return 1.0 / (s + (1.0 - s) / n);
}

double speedup_second_order(const ScalingParams& params, double n) {
  return 1.0 / normalized_time(params, n);
}

std::int64_t optimal_cores(const ScalingParams& params) {
  params.validate();
  const double c = params.overhead_coeff;
  if (c == 0.0) {
    throw Error(ErrorCode::kNoInteriorOptimum,
                "overhead coefficient is zero: speedup grows without an interior optimum");
  }
  // T(n+1) - T(n) = c - (1-s)/(n(n+1)); the optimum is the first n where this
  // difference stops being negative.
  const double target = (1.0 - params.nonpayload_fraction) / c;
  auto rising = [&](std::int64_t n) {
    const double nd = static_cast<double>(n);
    return nd * (nd + 1.0) < target;
  };
  const double guess = std::floor(std::sqrt(target));
  if (guess > 9.0e15) domain_error("optimal core count exceeds the representable range");
  auto n = static_cast<std::int64_t>(guess);
  if (n < 1) n = 1;
  while (n > 1 && !rising(n - 1)) --n;
  while (rising(n)) ++n;
  return n;
}

double efficiency(const ScalingParams& params, double n) {
  return speedup_second_order(params, n) / n;
}

std::vector<std::vector<double>> efficiency_surface(std::span<const double> s_values,
                                                    std::span<const double> n_values,
                                                    double overhead_coeff) {
  if (s_values.empty() || n_values.empty()) {
    throw Error(ErrorCode::kUsage, "efficiency surface needs non-empty s and n lists");
  }
  std::vector<std::vector<double>> grid;
  grid.reserve(s_values.size());
  for (double s : s_values) {
    const ScalingParams params{s, overhead_coeff, 1.0};
    auto& row = grid.emplace_back();
    row.reserve(n_values.size());
    for (double n : n_values) row.push_back(efficiency(params, n));
  }
  return grid;
}

double payload_performance(const ScalingParams& params, double n) {
  return params.per_core_perf * n * efficiency(params, n);
}

double energy_proxy(const ScalingParams& params, double n) {
  return n * normalized_time(params, n);
}

double MixedPrecisionEstimate::performance_at(double width) const {
  return perf_a * (housekeeping + payload) / (housekeeping + payload * width / width_a);
}

MixedPrecisionEstimate mixed_precision_extrapolate(double perf_a, double width_a, double perf_b,
                                                   double width_b) {
  for (double v : {perf_a, width_a, perf_b, width_b}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      domain_error("performances and operand widths must be positive and finite");
    }
  }
  if (width_b >= width_a) {
    domain_error(fmt::format("second width ({}) must be narrower than the first ({})", width_b, width_a));
  }
  const double ratio = perf_b / perf_a;
  const double width_ratio = width_a / width_b;
  if (ratio <= 1.0) {
    throw Error(ErrorCode::kNoSpeedup,
                fmt::format("narrower operands gave no speedup (ratio {})", ratio));
  }
  if (ratio >= width_ratio) {
    throw Error(ErrorCode::kZeroHousekeeping,
                fmt::format("speedup ratio {} reaches the width ratio {}: housekeeping would be "
                            "zero or negative",
                            ratio, width_ratio));
  }
  // H + P = 1 and H + P * (width_b / width_a) = 1 / ratio.
  const double payload = (1.0 - 1.0 / ratio) / (1.0 - width_b / width_a);
  return {1.0 - payload, payload, perf_a, width_a};
}

}  // namespace neurosim::model
