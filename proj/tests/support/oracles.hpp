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

// Independent reference computations for tests. Nothing here calls into the
// simulator or the model implementation.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace neurosim::oracle {

/// Second-order normalized time, written out directly.
inline double second_order_time(double s, double c, double n) {
  return s + (1.0 - s) / n + c * (n - 1.0);
}

/// First strict maximum of the second-order speedup over n = 1..limit.
inline std::int64_t brute_force_optimum(double s, double c, std::int64_t limit) {
  std::int64_t best = 1;
  double best_time = second_order_time(s, c, 1.0);
  for (std::int64_t n = 2; n <= limit; ++n) {
    const double t = second_order_time(s, c, static_cast<double>(n));
    if (t < best_time) {
      best_time = t;
      best = n;
    }
  }
  return best;
}

/// FP0 performance by Cramer's rule on
///   H + P            = 1 / perf_a
///   H + P * wb / wa  = 1 / perf_b
/// (operation count normalized to 1).
inline double fp0_by_cramer(double perf_a, double width_a, double perf_b, double width_b) {
  const double a11 = 1.0, a12 = 1.0, a21 = 1.0, a22 = width_b / width_a;
  const double b1 = 1.0 / perf_a, b2 = 1.0 / perf_b;
  const double det = a11 * a22 - a12 * a21;
  const double housekeeping = (b1 * a22 - a12 * b2) / det;
  return 1.0 / housekeeping;
}

inline std::int64_t ceil_to(std::int64_t t, std::int64_t period) {
  return (t + period - 1) / period * period;
}

/// Hand schedule of a fully connected layered network whose input layer
/// forwards its stimulus at t=0 and whose other neurons all compute `t_comp`.
/// Every layer finishes in lockstep. On the shared bus each neuron of a layer
/// broadcasts once, back to back; on direct wiring all messages travel in
/// parallel. Deliveries snap up to the next multiple of `period`.
inline std::int64_t layered_bus_schedule(std::span<const int> layers, std::int64_t t_comp,
                                         std::int64_t t_bus, std::int64_t period = 1) {
  std::int64_t finish = 0;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    const std::int64_t last_transfer_done = finish + layers[l] * t_bus;
    finish = ceil_to(last_transfer_done, period) + t_comp;
  }
  return finish;
}

inline std::int64_t layered_direct_schedule(std::span<const int> layers, std::int64_t t_comp,
                                            std::int64_t t_link, std::int64_t period = 1) {
  std::int64_t finish = 0;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    finish = ceil_to(finish + t_link, period) + t_comp;
  }
  return finish;
}

}  // namespace neurosim::oracle
