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

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "neurosim/sim_engine.hpp"
#include "neurosim/topology.hpp"

namespace neurosim {

/// Default context-switch cost: on the order of 10^4 instruction times,
/// with one instruction per tick.
inline constexpr Tick kDefaultContextSwitch = 10'000;

/// Computation handed to an analog unit through the operating system: the
/// core switches context out and back in around the analog evaluation.
struct AnalogOffload {
  Tick analog = 0;
  Tick context_switch = kDefaultContextSwitch;
};

struct NeuronSpec {
  NodeId id;
  Tick compute = 0;
  int fan_in = 0;  ///< arguments (messages or stimuli) needed per activation
  std::vector<NodeId> targets;
  std::optional<AnalogOffload> offload;
};

struct Stimulus {
  NodeId target;
  Tick at = 0;
};

struct EventDriven {
  friend bool operator==(const EventDriven&, const EventDriven&) = default;
};

/// Messages exchanged only at multiples of `period`.
struct TimeGrid {
  Tick period = 1;
  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

using TimeModel = std::variant<EventDriven, TimeGrid>;

struct Workload {
  std::vector<NeuronSpec> neurons;
  std::vector<Stimulus> stimuli;
  TimeModel time_model = EventDriven{};

  /// Throws Error(kWorkloadDefinition) on duplicate ids, dangling targets or
  /// stimuli, negative times, or a non-positive grid period.
  void validate() const;
};

/// Compute ticks of one activation, including offload context switches.
Tick effective_compute_time(const NeuronSpec& neuron);

/// Offloading pays off only when it saves more than the two context switches.
bool offload_beneficial(Tick digital, const AnalogOffload& offload);

/// Smallest multiple of `period` not earlier than `transport_complete`.
Tick grid_delivery_time(Tick transport_complete, Tick period);

Workload apply_time_grid(Workload workload, Tick period);

/// Fully connected feed-forward network description.
struct LayeredSpec {
  std::vector<int> layer_sizes;
  Tick compute = 1;           ///< per neuron in hidden and output layers
  Tick input_compute = 0;     ///< input neurons forward the stimulus
  /// When set, each hidden layer shares this much work among its neurons
  /// (compute = ceil(work / width)) instead of using `compute`.
  std::optional<Tick> hidden_work;
  std::vector<Tick> stimulus_times = {0};
  std::optional<AnalogOffload> offload;  ///< applied to non-input neurons
  TimeModel time_model = EventDriven{};
};

/// Places neurons on consecutive virtual cores (cluster-major, row-major on
/// EMPA) starting at `first_node`. Throws Error(kCapacity) when the network
/// does not fit.
Workload build_layered(const LayeredSpec& spec, const Topology& topology, int first_node = 0);

enum class NeuronPhase { kIdle, kComputing, kSending };

/// Per-run neuron state: argument buffering and the compute/send cycle.
/// Communication and computation block each other; an activation that
/// becomes ready while the neuron is busy waits until it is idle again.
class NeuronState {
 public:
  explicit NeuronState(const NeuronSpec& spec) : spec_(&spec) {}

  /// Buffers one argument. Returns the compute interval when an activation
  /// starts now. Throws Error(kWorkloadDefinition) on a surplus argument.
  std::optional<Interval> on_argument(Tick now);

  /// Returns true when the neuron now has messages to send. Otherwise the
  /// caller should follow up with on_send_complete to pick up a pending
  /// activation.
  bool on_compute_end();

  /// All outgoing messages left; may start a pending activation.
  std::optional<Interval> on_send_complete(Tick now);

  NeuronPhase phase() const { return phase_; }
  int buffered() const { return buffered_; }
  const NeuronSpec& spec() const { return *spec_; }

 private:
  std::optional<Interval> try_start(Tick now);

  const NeuronSpec* spec_;
  NeuronPhase phase_ = NeuronPhase::kIdle;
  int buffered_ = 0;
};

}  // namespace neurosim
