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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/// Closed-form performance models of parallelized sequential computing.
///
/// Time is normalized to the single-core execution time. For `n` cores the
/// second-order model is
///
///     T(n) = s + (1 - s) / n + c * (n - 1),   S(n) = 1 / T(n)
///
/// where `s` is the non-payload fraction and `c` the per-core overhead. With
/// `c == 0` this is Amdahl's law (the first-order model), which saturates at
/// `1 / s`; with `c > 0` the speedup peaks and then decays.
///
/// Note on the literature symbol alpha: some authors use it for the
/// non-payload fraction (our `s`), others for the parallel fraction `1 - s`.
/// Nothing here assumes either reading; callers convert explicitly.
namespace neurosim::model {

struct ScalingParams {
  double nonpayload_fraction = 0.0;  ///< s, in [0, 1]
  double overhead_coeff = 0.0;       ///< c, >= 0
  double per_core_perf = 1.0;        ///< p, ops per time unit, > 0

  /// Throws Error(kParameterDomain) when a field is out of range.
  void validate() const;
};

struct WorkloadProfile {
  std::string name;
  ScalingParams params;
};

/// HPL-like, HPCG-like, AI-like and brain-sim-like profiles, in that order
/// (strictly increasing non-payload fraction). These are illustrative
/// defaults, not measured values.
std::vector<WorkloadProfile> preset_profiles();
std::optional<WorkloadProfile> find_preset(std::string_view name);

struct CurvePoint {
  double n_cores = 1.0;
  double value = 0.0;
};

/// Normalized execution time T(n) of the second-order model.
double normalized_time(const ScalingParams& params, double n);

double speedup_first_order(const ScalingParams& params, double n);
double speedup_second_order(const ScalingParams& params, double n);

/// Integer core count maximizing the second-order speedup; ties go to the
/// smaller count. Requires c > 0.
std::int64_t optimal_cores(const ScalingParams& params);

/// speedup_second_order(n) / n.
double efficiency(const ScalingParams& params, double n);

/// grid[i][j] = efficiency({s_values[i], overhead}, n_values[j]).
std::vector<std::vector<double>> efficiency_surface(std::span<const double> s_values,
                                                    std::span<const double> n_values,
                                                    double overhead_coeff = 0.0);

/// p * n * efficiency(n); bounded by p / s when c == 0.
double payload_performance(const ScalingParams& params, double n);

/// n * T(n): core-time spent for one unit of work, a proxy for energy.
double energy_proxy(const ScalingParams& params, double n);

/// Evaluates `fn(params, n)` at every n.
template <typename Fn>
std::vector<CurvePoint> curve(const ScalingParams& params, std::span<const double> ns, Fn&& fn) {
  std::vector<CurvePoint> out;
  out.reserve(ns.size());
  for (double n : ns) out.push_back({n, fn(params, n)});
  return out;
}

/// Result of splitting measured runtime into width-independent housekeeping
/// H and width-proportional payload P, T(w) = H + P * w / width_a, with
/// T(width_a) normalized to 1.
struct MixedPrecisionEstimate {
  double housekeeping = 0.0;  ///< H (also the housekeeping share, since H + P = 1)
  double payload = 0.0;       ///< P
  double perf_a = 0.0;
  double width_a = 0.0;

  double housekeeping_share() const { return housekeeping / (housekeeping + payload); }
  /// Performance extrapolated to zero-width operands.
  double fp0_performance() const { return perf_a * (housekeeping + payload) / housekeeping; }
  /// Forward model: predicted performance at operand width `width`.
  double performance_at(double width) const;
};

/// Solves the two measurements (perf_a at width_a, perf_b at width_b) for the
/// housekeeping/payload split. Feasible only when
/// 1 < perf_b / perf_a < width_a / width_b.
MixedPrecisionEstimate mixed_precision_extrapolate(double perf_a, double width_a, double perf_b,
                                                   double width_b);

}  // namespace neurosim::model
