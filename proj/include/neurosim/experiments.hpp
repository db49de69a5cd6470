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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neurosim/scaling_model.hpp"
#include "neurosim/sim_engine.hpp"
#include "neurosim/topology.hpp"
#include "neurosim/workload.hpp"

namespace neurosim {

struct MessageRecord {
  std::int64_t id = 0;
  NodeId src;
  std::vector<NodeId> dsts;
  Tick requested = 0;
  Tick transport_complete = -1;
  Tick delivered = -1;  ///< -1 while undelivered
  Tick path_latency = 0;
  int bus_segments = 0;
};

/// Run-level accounting. Per entity, every tick of [0, total_time) is either
/// payload (computing), non-payload (sending, waiting for the bus, waiting for
/// a grid boundary) or idle.
struct Metrics {
  int entities = 0;
  Tick total_time = 0;
  Tick payload_time = 0;
  Tick nonpayload_time = 0;
  Tick idle_time = 0;
  Tick bus_busy = 0;  ///< summed over buses
  std::vector<Tick> bus_busy_per_bus;
  std::vector<Tick> idle_per_entity;
  /// payload / (entities * total_time); 0 for an empty run.
  double efficiency = 0.0;
  /// Serialized baseline (all compute on one entity, no transport) over
  /// total_time; 0 for an empty run.
  double speedup = 0.0;
  Tick energy_proxy = 0;  ///< entities * total_time
  std::int64_t messages_sent = 0;       ///< per addressee
  std::int64_t messages_delivered = 0;  ///< per addressee
};

struct RunResult {
  Metrics metrics;
  SimTrace trace;
  std::vector<MessageRecord> messages;
};

/// Simulates one workload on one topology. Throws Error(kCapacity) when a
/// neuron sits on an unmapped virtual core.
RunResult run_experiment(const Workload& workload, const Topology& topology,
                         std::optional<Tick> until = std::nullopt);

/// Accounting from the trace's interval lists.
Metrics compute_metrics(const SimTrace& trace);

struct TopologyConfig {
  TopologyKind kind = TopologyKind::kSharedBus;
  int nodes = 0;  ///< Direct/SharedBus node count; 0 sizes to the workload
  Tick t_link = 1;
  Tick t_bus = 1;
  bool broadcast = true;
  EmpaGeometry geometry;
  EmpaLatencies latencies;
  int virtual_cores = 0;
  std::vector<std::pair<NodeId, int>> remaps;  ///< virtual -> physical
};

struct ExperimentSpec {
  TopologyConfig topology;
  LayeredSpec workload;
};

Topology build_topology(const TopologyConfig& config, int neurons);
RunResult run_experiment(const ExperimentSpec& spec);

enum class SweepParameter { kHiddenWidth, kClusters, kBusTime, kGridPeriod, kCores };

std::string_view to_string(SweepParameter parameter);
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);

/// Applies one swept value. kCores sets the hidden width with the hidden
/// work split across it (requires workload.hidden_work).
ExperimentSpec with_parameter(ExperimentSpec spec, SweepParameter parameter, std::int64_t value);

struct SweepPoint {
  std::int64_t value = 0;
  Metrics metrics;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::kHiddenWidth;
  std::vector<SweepPoint> points;
};

/// One run per value; values must be strictly monotone. With jobs > 1 the
/// runs execute concurrently; the result order follows `values`.
/// `traces`, when given, receives each run's trace in value order.
SweepResult sweep(const ExperimentSpec& spec, SweepParameter parameter,
                  std::span<const std::int64_t> values, int jobs = 1,
                  std::vector<SimTrace>* traces = nullptr);

enum class DatasetFormat { kTabular, kRecords };

inline constexpr std::string_view kDatasetHeader =
    "param,total_time,payload_time,nonpayload_time,idle_time,bus_busy,efficiency,speedup,"
    "energy_proxy";

/// Tabular rows are comma-separated under kDatasetHeader; records are one
/// JSON object per line with the same keys.
void write_dataset(std::ostream& os, std::span<const std::pair<std::string, Metrics>> rows,
                   DatasetFormat format);
void write_dataset(std::ostream& os, const SweepResult& result, DatasetFormat format);

struct DivergenceReport {
  std::vector<double> cores;
  std::vector<double> simulated;  ///< speedup relative to the first point
  std::vector<double> modeled;    ///< second-order model, same normalization
  double max_relative_divergence = 0.0;
  double simulated_plateau = 0.0;  ///< largest simulated speedup in range
  double model_plateau = 0.0;      ///< peak (c > 0) or asymptote 1/s (c == 0)
};

/// Least-squares fit of (s, c) to a core-count sweep, with s in [0, 1] and
/// c >= 0. The swept value is taken as the core count.
model::ScalingParams fit_scaling_params(const SweepResult& sweep);

DivergenceReport compare_with_model(const SweepResult& sweep, const model::ScalingParams& params);

struct RooflineCurve {
  std::string profile;
  std::vector<model::CurvePoint> points;  ///< payload performance vs cores
  double plateau = 0.0;                   ///< largest value on the curve
};

std::vector<RooflineCurve> roofline(std::span<const model::WorkloadProfile> profiles,
                                    std::span<const double> cores);

}  // namespace neurosim
