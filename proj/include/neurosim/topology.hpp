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
#include <string>
#include <vector>

#include "neurosim/sim_engine.hpp"

namespace neurosim {

/// Virtual core address. For EMPA topologies the flat value enumerates
/// (cluster, row, column) cluster-major, row-major; see Topology::empa_node.
struct NodeId {
  std::int32_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

enum class TopologyKind { kDirect, kSharedBus, kEmpa };

enum class Medium { kWire, kIccb, kBus, kHead };

struct Segment {
  Medium medium = Medium::kWire;
  Tick latency = 0;
  int bus = -1;   ///< bus index for kBus segments
  int hops = 0;   ///< ICCB hop count for kIccb segments
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Path {
  std::vector<Segment> segments;

  /// Contention-free latency.
  Tick latency() const;
  int bus_segments() const;
  friend bool operator==(const Path&, const Path&) = default;
};

struct BusSpec {
  std::string name;
  Tick occupancy = 1;  ///< ticks one message holds the bus
};

struct EmpaGeometry {
  int clusters = 1;
  int rows = 2;  ///< per cluster
  int cols = 2;  ///< per cluster
  /// Clusters per row of the global grid; 0 places all clusters side by side.
  int clusters_per_row = 0;
  /// Clusters per chip; 0 keeps everything on one chip (no level-2 bus).
  int clusters_per_chip = 0;
};

struct EmpaLatencies {
  Tick hop = 1;        ///< per ICCB hop
  Tick head = 1;       ///< cluster head / gateway forwarding
  Tick bus_l1 = 1;     ///< inter-cluster bus occupancy
  Tick bus_l2 = 1;     ///< inter-chip bus occupancy
  Tick memory = 1;     ///< head memory port
};

struct GridCoord {
  int row = 0;
  int col = 0;
};

class Topology {
 public:
  static Topology direct(int n_nodes, Tick t_link);
  static Topology shared_bus(int n_nodes, Tick t_bus, bool broadcast);
  /// `virtual_cores` of 0 maps every physical core; a smaller count leaves
  /// the trailing cores as spares for remapping.
  static Topology empa(const EmpaGeometry& geometry, const EmpaLatencies& latencies,
                       int virtual_cores = 0);

  TopologyKind kind() const { return kind_; }
  bool broadcast() const { return broadcast_; }
  int physical_cores() const { return static_cast<int>(owner_.size()); }
  int virtual_cores() const { return static_cast<int>(map_.size()); }
  const std::vector<BusSpec>& buses() const { return buses_; }
  const EmpaGeometry& geometry() const { return geometry_; }
  const EmpaLatencies& latencies() const { return latencies_; }

  /// Routing under the fixed policy; throws Error(kRouting) for unmapped ids.
  Path route(NodeId src, NodeId dst) const;

  /// Moves a virtual core to an unassigned physical core.
  void remap_core(NodeId virtual_id, int new_physical);
  Topology remapped(NodeId virtual_id, int new_physical) const;

  int physical_of(NodeId virtual_id) const;
  bool is_head(int physical) const;

  /// EMPA only: flat physical index of (cluster, row, col).
  int empa_core(int cluster, int row, int col) const;
  NodeId empa_node(int cluster, int row, int col) const { return {empa_core(cluster, row, col)}; }
  int cluster_of(int physical) const;
  int chip_of(int physical) const;
  /// Position on the global grid formed by tiling the clusters.
  GridCoord global_coord(int physical) const;
  /// Chebyshev distance between the current physical locations.
  int distance(NodeId a, NodeId b) const;

  /// Latency of a member's request to its head's memory port.
  Tick memory_latency(NodeId node) const;

 private:
  Topology() = default;
  void check_mapped(NodeId id) const;
  Path route_empa(int src, int dst) const;

  TopologyKind kind_ = TopologyKind::kDirect;
  bool broadcast_ = false;
  Tick link_latency_ = 1;
  std::vector<BusSpec> buses_;
  EmpaGeometry geometry_;
  EmpaLatencies latencies_;
  int chips_ = 1;
  std::vector<int> map_;    ///< virtual -> physical
  std::vector<int> owner_;  ///< physical -> virtual, -1 when spare
};

}  // namespace neurosim
