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
#include <functional>
#include <iosfwd>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

namespace neurosim {

/// Simulated time in integer ticks (1 tick = 1 ns unless configured otherwise).
using Tick = std::int64_t;

enum class EventKind {
  kStimulus,
  kComputeStart,
  kComputeEnd,
  kMsgSendRequest,
  kBusRequest,
  kBusAcquire,
  kBusRelease,
  kTransportComplete,
  kGridBoundary,
  kMsgDeliver,
};

std::string_view to_string(EventKind kind);

using EventId = std::uint64_t;

struct Event {
  Tick at = 0;
  EventId seq = 0;  ///< assigned by the simulator in scheduling order
  EventKind kind = EventKind::kStimulus;
  std::int64_t subject = -1;  ///< entity (neuron, bus) the event belongs to
  std::int64_t object = -1;   ///< message id, or -1
  Tick duration = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

struct Interval {
  Tick start = 0;
  Tick end = 0;
  Tick length() const { return end - start; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Everything a run produced: executed events in execution order, bus
/// occupancy per bus and payload/non-payload activity per entity, entities
/// in workload neuron order.
struct SimTrace {
  std::vector<Event> events;
  std::vector<std::vector<Interval>> bus_occupancy;
  std::vector<std::vector<Interval>> compute;
  std::vector<std::vector<Interval>> nonpayload;
  Tick final_time = 0;

  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

/// One JSON record per line: time, kind, subject, object, duration.
void write_trace_records(std::ostream& os, const SimTrace& trace);

/// Single-threaded event loop. Events run in (at, seq) order. After the last
/// event of an instant has run, the instant-end hook fires; it may schedule
/// further events at the same instant (used for bus arbitration).
class Simulator {
 public:
  using Handler = std::function<void(const Event&)>;
  using InstantHook = std::function<void(Tick)>;

  void set_handler(Handler handler) { handler_ = std::move(handler); }
  void set_instant_end_hook(InstantHook hook) { instant_end_ = std::move(hook); }

  /// Throws Error(kCausality) when `at` lies before the current time.
  EventId schedule(Tick at, EventKind kind, std::int64_t subject, std::int64_t object = -1,
                   Tick duration = 0);

  /// Processes events until the queue drains or the next event lies past
  /// `until`.
  void run(std::optional<Tick> until = std::nullopt);

  Tick now() const { return now_; }
  bool idle() const { return queue_.empty(); }
  const std::vector<Event>& executed() const { return executed_; }
  std::vector<Event> take_executed() { return std::move(executed_); }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::vector<Event> executed_;
  Handler handler_;
  InstantHook instant_end_;
  Tick now_ = 0;
  EventId next_seq_ = 0;
};

}  // namespace neurosim
