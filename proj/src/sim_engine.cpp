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

#include "neurosim/sim_engine.hpp"

#include <ostream>

#include <fmt/format.h>

#include "neurosim/errors.hpp"

namespace neurosim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kStimulus: return "Stimulus";
    case EventKind::kComputeStart: return "ComputeStart";
    case EventKind::kComputeEnd: return "ComputeEnd";
    case EventKind::kMsgSendRequest: return "MsgSendRequest";
    case EventKind::kBusRequest: return "BusRequest";
    case EventKind::kBusAcquire: return "BusAcquire";
    case EventKind::kBusRelease: return "BusRelease";
    case EventKind::kTransportComplete: return "TransportComplete";
    case EventKind::kGridBoundary: return "GridBoundary";
    case EventKind::kMsgDeliver: return "MsgDeliver";
  }
  return "Unknown";
}

void write_trace_records(std::ostream& os, const SimTrace& trace) {
  for (const auto& e : trace.events) {
    os << fmt::format(R"({{"time":{},"kind":"{}","subject":{},"object":{},"duration":{}}})", e.at,
                      to_string(e.kind), e.subject, e.object, e.duration)
       << '\n';
  }
}

EventId Simulator::schedule(Tick at, EventKind kind, std::int64_t subject, std::int64_t object,
                            Tick duration) {
  if (at < now_) {
    throw Error(ErrorCode::kCausality,
                fmt::format("cannot schedule {} at t={} from t={}", to_string(kind), at, now_));
  }
  const EventId id = next_seq_++;
  queue_.push(Event{at, id, kind, subject, object, duration});
  return id;
}

void Simulator::run(std::optional<Tick> until) {
  while (!queue_.empty()) {
    if (until && queue_.top().at > *until) break;
    Event event = queue_.top();
    queue_.pop();
    now_ = event.at;
    executed_.push_back(event);
    if (handler_) handler_(event);
    const bool instant_over = queue_.empty() || queue_.top().at > now_;
    if (instant_over && instant_end_) instant_end_(now_);
  }
}

}  // namespace neurosim
