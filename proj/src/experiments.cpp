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

#include "neurosim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <ostream>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "neurosim/errors.hpp"

namespace neurosim {

Topology build_topology(const TopologyConfig& config, int neurons) {
  Topology topology = [&] {
    switch (config.kind) {
      case TopologyKind::kDirect:
        return Topology::direct(config.nodes > 0 ? config.nodes : std::max(neurons, 1), config.t_link);
      case TopologyKind::kSharedBus:
        return Topology::shared_bus(config.nodes > 0 ? config.nodes : std::max(neurons, 1),
                                    config.t_bus, config.broadcast);
      case TopologyKind::kEmpa:
        break;
    }
    return Topology::empa(config.geometry, config.latencies, config.virtual_cores);
  }();
  for (const auto& [virtual_id, physical] : config.remaps) topology.remap_core(virtual_id, physical);
  return topology;
}

RunResult run_experiment(const ExperimentSpec& spec) {
  const auto& sizes = spec.workload.layer_sizes;
  const int neurons = std::accumulate(sizes.begin(), sizes.end(), 0);
  const Topology topology = build_topology(spec.topology, neurons);
  return run_experiment(build_layered(spec.workload, topology), topology);
}

std::string_view to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kHiddenWidth: return "hidden_width";
    case SweepParameter::kClusters: return "clusters";
    case SweepParameter::kBusTime: return "t_bus";
    case SweepParameter::kGridPeriod: return "grid_period";
    case SweepParameter::kCores: return "cores";
  }
  return "unknown";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
  for (auto p : {SweepParameter::kHiddenWidth, SweepParameter::kClusters, SweepParameter::kBusTime,
                 SweepParameter::kGridPeriod, SweepParameter::kCores}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

ExperimentSpec with_parameter(ExperimentSpec spec, SweepParameter parameter, std::int64_t value) {
  const auto usage = [&](const std::string& msg) {
    throw Error(ErrorCode::kUsage, fmt::format("sweep {}={}: {}", to_string(parameter), value, msg));
  };
  if (value < 1 || value > std::numeric_limits<int>::max()) usage("value must be a positive integer");
  auto& sizes = spec.workload.layer_sizes;
  switch (parameter) {
    case SweepParameter::kCores:
      if (!spec.workload.hidden_work) usage("a core-count sweep needs the workload's total hidden work");
      [[fallthrough]];
    case SweepParameter::kHiddenWidth:
      if (sizes.size() < 3) usage("the workload has no hidden layer");
      for (std::size_t l = 1; l + 1 < sizes.size(); ++l) sizes[l] = static_cast<int>(value);
      break;
    case SweepParameter::kClusters:
      if (spec.topology.kind != TopologyKind::kEmpa) usage("only EMPA topologies have clusters");
      spec.topology.geometry.clusters = static_cast<int>(value);
      break;
    case SweepParameter::kBusTime:
      if (spec.topology.kind == TopologyKind::kDirect) usage("direct wiring has no bus");
      spec.topology.t_bus = value;
      spec.topology.latencies.bus_l1 = value;
      break;
    case SweepParameter::kGridPeriod:
      spec.workload.time_model = TimeGrid{value};
      break;
  }
  return spec;
}

SweepResult sweep(const ExperimentSpec& spec, SweepParameter parameter,
                  std::span<const std::int64_t> values, int jobs, std::vector<SimTrace>* traces) {
  if (values.empty()) throw Error(ErrorCode::kUsage, "sweep needs at least one value");
  const bool rising = values.size() < 2 || values[1] > values[0];
  for (std::size_t i = 1; i < values.size(); ++i) {
    if ((values[i] > values[i - 1]) != rising || values[i] == values[i - 1]) {
      throw Error(ErrorCode::kUsage, "sweep values must be strictly monotone");
    }
  }
  // Validate every point up front so a bad value fails before any run.
  std::vector<ExperimentSpec> specs;
  for (auto v : values) specs.push_back(with_parameter(spec, parameter, v));

  std::vector<RunResult> runs(values.size());
  jobs = std::max(1, jobs);
  for (std::size_t begin = 0; begin < specs.size(); begin += static_cast<std::size_t>(jobs)) {
    const std::size_t end = std::min(specs.size(), begin + static_cast<std::size_t>(jobs));
    std::vector<std::future<RunResult>> batch;
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                 [&specs, i] { return run_experiment(specs[i]); }));
    }
    for (std::size_t i = begin; i < end; ++i) runs[i] = batch[i - begin].get();
  }

  SweepResult result{parameter, {}};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    result.points.push_back({values[i], runs[i].metrics});
    if (traces) traces->push_back(std::move(runs[i].trace));
  }
  return result;
}

void write_dataset(std::ostream& os, std::span<const std::pair<std::string, Metrics>> rows,
                   DatasetFormat format) {
  if (format == DatasetFormat::kTabular) os << kDatasetHeader << '\n';
  for (const auto& [param, m] : rows) {
    if (format == DatasetFormat::kTabular) {
      os << fmt::format("{},{},{},{},{},{},{},{},{}\n", param, m.total_time, m.payload_time,
                        m.nonpayload_time, m.idle_time, m.bus_busy, m.efficiency, m.speedup,
                        m.energy_proxy);
    } else {
      os << fmt::format(
          R"({{"param":"{}","total_time":{},"payload_time":{},"nonpayload_time":{},"idle_time":{},)"
          R"("bus_busy":{},"efficiency":{},"speedup":{},"energy_proxy":{}}})"
          "\n",
          param, m.total_time, m.payload_time, m.nonpayload_time, m.idle_time, m.bus_busy,
          m.efficiency, m.speedup, m.energy_proxy);
    }
  }
}

void write_dataset(std::ostream& os, const SweepResult& result, DatasetFormat format) {
  std::vector<std::pair<std::string, Metrics>> rows;
  for (const auto& p : result.points) rows.emplace_back(std::to_string(p.value), p.metrics);
  write_dataset(os, rows, format);
}

namespace {

void check_core_sweep(const SweepResult& sweep) {
  if (sweep.parameter != SweepParameter::kCores && sweep.parameter != SweepParameter::kHiddenWidth) {
    throw Error(ErrorCode::kUsage,
                fmt::format("model comparison needs a core-count sweep, not {}", to_string(sweep.parameter)));
  }
  if (sweep.points.size() < 3) throw Error(ErrorCode::kUsage, "model comparison needs at least 3 sweep points");
  for (const auto& p : sweep.points) {
    if (p.metrics.total_time <= 0) throw Error(ErrorCode::kUsage, "sweep contains an empty run");
  }
}

}  // namespace

model::ScalingParams fit_scaling_params(const SweepResult& sweep) {
  check_core_sweep(sweep);
  // Simulated time is K * T(n) for an unknown scale K:
  //   K * T(n) = K * (1/n) + K*s * (1 - 1/n) + K*c * (n - 1),
  // linear in (K, K*s, K*c). The non-negativity of s and c is enforced by
  // solving every active set and keeping the best feasible solution.
  const auto rows = static_cast<Eigen::Index>(sweep.points.size());
  Eigen::MatrixXd features(rows, 3);
  Eigen::VectorXd times(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double n = static_cast<double>(sweep.points[i].value);
    features(i, 0) = 1.0 / n;
    features(i, 1) = 1.0 - 1.0 / n;
    features(i, 2) = n - 1.0;
    times(i) = static_cast<double>(sweep.points[i].metrics.total_time);
  }

  double best_residual = std::numeric_limits<double>::infinity();
  model::ScalingParams best{1.0, 0.0, 1.0};
  for (int mask = 0; mask < 4; ++mask) {
    std::vector<int> cols = {0};
    if (mask & 1) cols.push_back(1);
    if (mask & 2) cols.push_back(2);
    Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = features.col(cols[j]);
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(times);
    const double scale = x(0);
    if (!(scale > 0.0)) continue;
    double s = 0.0, c = 0.0;
    for (std::size_t j = 1; j < cols.size(); ++j) {
      (cols[j] == 1 ? s : c) = x(static_cast<Eigen::Index>(j)) / scale;
    }
    if (s < 0.0 || c < 0.0) continue;
    s = std::min(s, 1.0);
    const double residual = (a * x - times).squaredNorm();
    if (residual < best_residual) {
      best_residual = residual;
      best = {s, c, 1.0};
    }
  }
  return best;
}

DivergenceReport compare_with_model(const SweepResult& sweep, const model::ScalingParams& params) {
  check_core_sweep(sweep);
  params.validate();
  DivergenceReport report;
  const auto& first = sweep.points.front();
  const double n0 = static_cast<double>(first.value);
  const double t0 = static_cast<double>(first.metrics.total_time);
  const double model0 = model::speedup_second_order(params, n0);
  for (const auto& p : sweep.points) {
    const double n = static_cast<double>(p.value);
    const double simulated = t0 / static_cast<double>(p.metrics.total_time);
    const double modeled = model::speedup_second_order(params, n) / model0;
    report.cores.push_back(n);
    report.simulated.push_back(simulated);
    report.modeled.push_back(modeled);
    report.max_relative_divergence =
        std::max(report.max_relative_divergence, std::abs(modeled - simulated) / simulated);
    report.simulated_plateau = std::max(report.simulated_plateau, simulated);
  }
  if (params.overhead_coeff > 0.0) {
    const auto best = static_cast<double>(model::optimal_cores(params));
    report.model_plateau = model::speedup_second_order(params, best);
  } else if (params.nonpayload_fraction > 0.0) {
    report.model_plateau = 1.0 / params.nonpayload_fraction;
  } else {
    report.model_plateau = std::numeric_limits<double>::infinity();
  }
  return report;
}

std::vector<RooflineCurve> roofline(std::span<const model::WorkloadProfile> profiles,
                                    std::span<const double> cores) {
  std::vector<RooflineCurve> curves;
  for (const auto& profile : profiles) {
    RooflineCurve curve{profile.name,
                        model::curve(profile.params, cores, model::payload_performance), 0.0};
    for (const auto& pt : curve.points) curve.plateau = std::max(curve.plateau, pt.value);
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace neurosim
