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

#include "neurosim/workload.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "neurosim/errors.hpp"

namespace neurosim {
namespace {

[[noreturn]] void workload_error(const std::string& msg) {
  throw Error(ErrorCode::kWorkloadDefinition, msg);
}

}  // namespace

void Workload::validate() const {
  std::set<NodeId> ids;
  for (const auto& n : neurons) {
    if (!ids.insert(n.id).second) workload_error(fmt::format("duplicate neuron id {}", n.id.value));
    if (n.compute < 0 || n.fan_in < 0) {
      workload_error(fmt::format("neuron {}: compute time and fan-in must be >= 0", n.id.value));
    }
    if (n.offload && (n.offload->analog < 0 || n.offload->context_switch < 0)) {
      workload_error(fmt::format("neuron {}: offload times must be >= 0", n.id.value));
    }
  }
  for (const auto& n : neurons) {
    for (const auto& t : n.targets) {
      if (!ids.contains(t)) {
        workload_error(fmt::format("neuron {} targets unknown neuron {}", n.id.value, t.value));
      }
    }
  }
  for (const auto& s : stimuli) {
    if (!ids.contains(s.target)) workload_error(fmt::format("stimulus targets unknown neuron {}", s.target.value));
    if (s.at < 0) workload_error("stimulus time must be >= 0");
  }
  if (const auto* grid = std::get_if<TimeGrid>(&time_model); grid && grid->period < 1) {
    workload_error(fmt::format("grid period must be >= 1, got {}", grid->period));
  }
}

Tick effective_compute_time(const NeuronSpec& neuron) {
  if (!neuron.offload) return neuron.compute;
  return neuron.offload->analog + 2 * neuron.offload->context_switch;
}

bool offload_beneficial(Tick digital, const AnalogOffload& offload) {
  return digital - offload.analog > 2 * offload.context_switch;
}

Tick grid_delivery_time(Tick transport_complete, Tick period) {
  const Tick rem = transport_complete % period;
  return rem == 0 ? transport_complete : transport_complete + (period - rem);
}

Workload apply_time_grid(Workload workload, Tick period) {
  if (period < 1) workload_error(fmt::format("grid period must be >= 1, got {}", period));
  workload.time_model = TimeGrid{period};
  return workload;
}

Workload build_layered(const LayeredSpec& spec, const Topology& topology, int first_node) {
  const auto& sizes = spec.layer_sizes;
  if (sizes.size() < 2) throw Error(ErrorCode::kUsage, "a layered network needs at least two layers");
  if (std::any_of(sizes.begin(), sizes.end(), [](int s) { return s < 1; })) {
    throw Error(ErrorCode::kUsage, "every layer needs at least one neuron");
  }
  if (spec.compute < 0 || spec.input_compute < 0 || (spec.hidden_work && *spec.hidden_work < 0)) {
    throw Error(ErrorCode::kUsage, "compute times must be >= 0");
  }
  long total = 0;
  for (int s : sizes) total += s;
  if (first_node < 0 || first_node + total > topology.virtual_cores()) {
    throw Error(ErrorCode::kCapacity,
                fmt::format("network of {} neurons does not fit on {} virtual cores", total,
                            topology.virtual_cores()));
  }

  Workload w;
  w.time_model = spec.time_model;
  std::vector<std::vector<NodeId>> layers(sizes.size());
  int next = first_node;
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    for (int i = 0; i < sizes[l]; ++i) layers[l].push_back({next++});
  }
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    const bool input = l == 0;
    const bool hidden = !input && l + 1 < sizes.size();
    Tick compute = input ? spec.input_compute : spec.compute;
    if (hidden && spec.hidden_work) compute = (*spec.hidden_work + sizes[l] - 1) / sizes[l];
    for (const auto& id : layers[l]) {
      NeuronSpec n;
      n.id = id;
      n.compute = compute;
      n.fan_in = input ? 1 : sizes[l - 1];
      if (l + 1 < sizes.size()) n.targets = layers[l + 1];
      if (!input) n.offload = spec.offload;
      w.neurons.push_back(std::move(n));
    }
  }
  for (Tick at : spec.stimulus_times) {
    for (const auto& id : layers.front()) w.stimuli.push_back({id, at});
  }
  w.validate();
  return w;
}

std::optional<Interval> NeuronState::on_argument(Tick now) {
  if (buffered_ >= spec_->fan_in) {
    workload_error(fmt::format("neuron {} received a surplus argument at t={} (fan-in {})",
                               spec_->id.value, now, spec_->fan_in));
  }
  ++buffered_;
  return try_start(now);
}

bool NeuronState::on_compute_end() {
  phase_ = spec_->targets.empty() ? NeuronPhase::kIdle : NeuronPhase::kSending;
  return phase_ == NeuronPhase::kSending;
}

std::optional<Interval> NeuronState::on_send_complete(Tick now) {
  phase_ = NeuronPhase::kIdle;
  return try_start(now);
}

std::optional<Interval> NeuronState::try_start(Tick now) {
  if (phase_ != NeuronPhase::kIdle || buffered_ < spec_->fan_in || spec_->fan_in == 0) {
    return std::nullopt;
  }
  buffered_ = 0;
  phase_ = NeuronPhase::kComputing;
  return Interval{now, now + effective_compute_time(*spec_)};
}

}  // namespace neurosim
