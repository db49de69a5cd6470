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

// Binds a workload to a topology and drives the event loop.

#include <algorithm>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "neurosim/errors.hpp"
#include "neurosim/experiments.hpp"

namespace neurosim {
namespace {

/// Sorted, merged copy of `intervals` clipped to [0, limit).
std::vector<Interval> merged(std::vector<Interval> intervals, Tick limit) {
  std::vector<Interval> out;
  for (auto& iv : intervals) {
    iv.start = std::max<Tick>(iv.start, 0);
    iv.end = std::min(iv.end, limit);
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.start < b.start; });
  for (const auto& iv : intervals) {
    if (iv.end <= iv.start) continue;
    if (!out.empty() && iv.start <= out.back().end) {
      out.back().end = std::max(out.back().end, iv.end);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

Tick total_length(const std::vector<Interval>& ivs) {
  Tick sum = 0;
  for (const auto& iv : ivs) sum += iv.length();
  return sum;
}

/// Overlap between two merged interval lists.
Tick overlap(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  Tick sum = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const Tick lo = std::max(a[i].start, b[j].start);
    const Tick hi = std::min(a[i].end, b[j].end);
    if (hi > lo) sum += hi - lo;
    if (a[i].end < b[j].end) ++i; else ++j;
  }
  return sum;
}

class NetworkRun {
 public:
  NetworkRun(const Workload& workload, const Topology& topology)
      : workload_(workload), topology_(topology) {
    workload_.validate();
    index_of_.assign(topology_.virtual_cores(), -1);
    for (std::size_t i = 0; i < workload_.neurons.size(); ++i) {
      const NodeId id = workload_.neurons[i].id;
      if (id.value < 0 || id.value >= topology_.virtual_cores()) {
        throw Error(ErrorCode::kCapacity,
                    fmt::format("neuron {} has no virtual core (topology maps {})", id.value,
                                topology_.virtual_cores()));
      }
      index_of_[id.value] = static_cast<int>(i);
      neurons_.emplace_back(workload_.neurons[i]);
    }
    if (const auto* grid = std::get_if<TimeGrid>(&workload_.time_model)) grid_period_ = grid->period;

    const auto n = workload_.neurons.size();
    outstanding_.assign(n, 0);
    send_start_.assign(n, 0);
    trace_.compute.resize(n);
    trace_.nonpayload.resize(n);
    trace_.bus_occupancy.resize(topology_.buses().size());
    buses_.resize(topology_.buses().size());

    sim_.set_handler([this](const Event& e) { handle(e); });
    sim_.set_instant_end_hook([this](Tick now) { arbitrate(now); });
    for (const auto& s : workload_.stimuli) sim_.schedule(s.at, EventKind::kStimulus, s.target.value);
  }

  RunResult run(std::optional<Tick> until) {
    sim_.run(until);
    trace_.final_time = sim_.now();
    trace_.events = sim_.take_executed();
    RunResult result;
    result.metrics = compute_metrics(trace_);
    result.metrics.messages_sent = sent_;
    result.metrics.messages_delivered = delivered_;
    result.trace = std::move(trace_);
    result.messages.reserve(msgs_.size());
    for (auto& m : msgs_) result.messages.push_back(std::move(m.record));
    return result;
  }

 private:
  struct Message {
    MessageRecord record;
    int src = 0;  ///< neuron index
    Path path;
    std::size_t next_segment = 0;
  };

  struct BusRequest {
    Tick requested;
    std::int32_t node;
    EventId seq;
    std::int64_t msg;
    auto key() const { return std::tie(requested, node, seq); }
    bool operator<(const BusRequest& o) const { return key() < o.key(); }
  };

  struct BusState {
    bool busy = false;
    std::set<BusRequest> waiting;
  };

  int neuron_index(std::int64_t node) const { return index_of_[node]; }

  void handle(const Event& e) {
    switch (e.kind) {
      case EventKind::kStimulus:
      case EventKind::kMsgDeliver: {
        if (e.kind == EventKind::kMsgDeliver) {
          ++delivered_;
          msgs_[e.object].record.delivered = e.at;
        }
        const int idx = neuron_index(e.subject);
        if (auto iv = neurons_[idx].on_argument(e.at)) start_compute(idx, *iv);
        break;
      }
      case EventKind::kComputeEnd: {
        const int idx = neuron_index(e.subject);
        if (neurons_[idx].on_compute_end()) {
          send(idx, e.at);
        } else if (auto iv = neurons_[idx].on_send_complete(e.at)) {
          start_compute(idx, *iv);
        }
        break;
      }
      case EventKind::kMsgSendRequest:
        advance(e.object, e.at);
        break;
      case EventKind::kBusRequest: {
        const auto& m = msgs_[e.object];
        buses_[e.subject].waiting.insert({e.at, m.record.src.value, e.seq, e.object});
        break;
      }
      case EventKind::kBusRelease: {
        buses_[e.subject].busy = false;
        ++msgs_[e.object].next_segment;
        advance(e.object, e.at);
        break;
      }
      case EventKind::kTransportComplete:
        transport_complete(e.object, e.at);
        break;
      case EventKind::kGridBoundary:
      case EventKind::kComputeStart:
      case EventKind::kBusAcquire:
        break;
    }
  }

  void start_compute(int idx, Interval iv) {
    const auto node = workload_.neurons[idx].id.value;
    sim_.schedule(iv.start, EventKind::kComputeStart, node, -1, iv.length());
    sim_.schedule(iv.end, EventKind::kComputeEnd, node);
    trace_.compute[idx].push_back(iv);
  }

  void send(int idx, Tick now) {
    const auto& spec = workload_.neurons[idx];
    send_start_[idx] = now;
    std::vector<std::vector<NodeId>> groups;
    if (topology_.kind() == TopologyKind::kSharedBus && topology_.broadcast()) {
      groups.push_back(spec.targets);
    } else {
      for (const auto& t : spec.targets) groups.push_back({t});
    }
    outstanding_[idx] = static_cast<int>(groups.size());
    for (auto& dsts : groups) {
      Message m;
      m.record.id = static_cast<std::int64_t>(msgs_.size());
      m.record.src = spec.id;
      m.record.requested = now;
      m.src = idx;
      // A broadcast takes the route of its first foreign addressee; on the
      // shared bus every route is the same single bus segment.
      const auto foreign = std::find_if(dsts.begin(), dsts.end(),
                                        [&](NodeId d) { return d != spec.id; });
      m.path = topology_.route(spec.id, foreign == dsts.end() ? spec.id : *foreign);
      m.record.path_latency = m.path.latency();
      m.record.bus_segments = m.path.bus_segments();
      sent_ += static_cast<std::int64_t>(dsts.size());
      m.record.dsts = std::move(dsts);
      msgs_.push_back(std::move(m));
      sim_.schedule(now, EventKind::kMsgSendRequest, spec.id.value, msgs_.back().record.id);
    }
  }

  /// Moves a message through its fixed-latency segments until it reaches a
  /// bus or its destination.
  void advance(std::int64_t msg_id, Tick now) {
    auto& m = msgs_[msg_id];
    Tick t = now;
    while (m.next_segment < m.path.segments.size()) {
      const auto& seg = m.path.segments[m.next_segment];
      if (seg.medium == Medium::kBus) {
        sim_.schedule(t, EventKind::kBusRequest, seg.bus, msg_id);
        return;
      }
      t += seg.latency;
      ++m.next_segment;
    }
    sim_.schedule(t, EventKind::kTransportComplete, m.record.src.value, msg_id);
  }

  void transport_complete(std::int64_t msg_id, Tick now) {
    auto& m = msgs_[msg_id];
    m.record.transport_complete = now;
    const int src = m.src;
    if (--outstanding_[src] == 0) {
      trace_.nonpayload[src].push_back({send_start_[src], now});
      if (auto iv = neurons_[src].on_send_complete(now)) start_compute(src, *iv);
    }
    Tick deliver_at = now;
    if (grid_period_) deliver_at = grid_delivery_time(now, *grid_period_);
    if (deliver_at > now) {
      if (boundaries_.insert(deliver_at).second) {
        sim_.schedule(deliver_at, EventKind::kGridBoundary, -1);
      }
      for (const auto& d : m.record.dsts) {
        trace_.nonpayload[neuron_index(d.value)].push_back({now, deliver_at});
      }
    }
    for (const auto& d : m.record.dsts) sim_.schedule(deliver_at, EventKind::kMsgDeliver, d.value, msg_id);
  }

  void arbitrate(Tick now) {
    for (std::size_t b = 0; b < buses_.size(); ++b) {
      auto& bus = buses_[b];
      if (bus.busy || bus.waiting.empty()) continue;
      const BusRequest req = *bus.waiting.begin();
      bus.waiting.erase(bus.waiting.begin());
      bus.busy = true;
      const Tick occupancy = topology_.buses()[b].occupancy;
      sim_.schedule(now, EventKind::kBusAcquire, static_cast<std::int64_t>(b), req.msg, occupancy);
      sim_.schedule(now + occupancy, EventKind::kBusRelease, static_cast<std::int64_t>(b), req.msg);
      trace_.bus_occupancy[b].push_back({now, now + occupancy});
    }
  }

  Workload workload_;
  const Topology& topology_;
  Simulator sim_;
  SimTrace trace_;
  std::vector<NeuronState> neurons_;
  std::vector<int> index_of_;
  std::vector<Message> msgs_;
  std::vector<int> outstanding_;
  std::vector<Tick> send_start_;
  std::vector<BusState> buses_;
  std::set<Tick> boundaries_;
  std::optional<Tick> grid_period_;
  std::int64_t sent_ = 0;
  std::int64_t delivered_ = 0;
};

}  // namespace

Metrics compute_metrics(const SimTrace& trace) {
  Metrics m;
  const Tick total = trace.final_time;
  m.entities = static_cast<int>(trace.compute.size());
  m.total_time = total;
  for (std::size_t i = 0; i < trace.compute.size(); ++i) {
    const auto compute = merged(trace.compute[i], total);
    const auto comm = merged(trace.nonpayload[i], total);
    const Tick payload = total_length(compute);
    const Tick nonpayload = total_length(comm) - overlap(compute, comm);
    const Tick idle = total - payload - nonpayload;
    m.payload_time += payload;
    m.nonpayload_time += nonpayload;
    m.idle_time += idle;
    m.idle_per_entity.push_back(idle);
  }
  for (const auto& bus : trace.bus_occupancy) {
    const Tick busy = total_length(merged(bus, total));
    m.bus_busy_per_bus.push_back(busy);
    m.bus_busy += busy;
  }
  m.energy_proxy = static_cast<Tick>(m.entities) * total;
  if (m.energy_proxy > 0) {
    m.efficiency = static_cast<double>(m.payload_time) / static_cast<double>(m.energy_proxy);
    m.speedup = static_cast<double>(m.payload_time) / static_cast<double>(total);
  }
  return m;
}

RunResult run_experiment(const Workload& workload, const Topology& topology,
                         std::optional<Tick> until) {
  return NetworkRun(workload, topology).run(until);
}

}  // namespace neurosim
