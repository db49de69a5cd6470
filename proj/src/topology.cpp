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

#include "neurosim/topology.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include <fmt/format.h>

#include "neurosim/errors.hpp"

namespace neurosim {
namespace {

int chebyshev(GridCoord a, GridCoord b) {
  return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorCode::kUsage, msg);
}

}  // namespace

Tick Path::latency() const {
  Tick total = 0;
  for (const auto& s : segments) total += s.latency;
  return total;
}

int Path::bus_segments() const {
  return static_cast<int>(std::count_if(segments.begin(), segments.end(),
                                        [](const Segment& s) { return s.medium == Medium::kBus; }));
}

Topology Topology::direct(int n_nodes, Tick t_link) {
  require(n_nodes >= 1, "direct topology needs at least one node");
  require(t_link >= 1, "link latency must be >= 1 tick");
  Topology t;
  t.kind_ = TopologyKind::kDirect;
  t.link_latency_ = t_link;
  t.map_.resize(n_nodes);
  std::iota(t.map_.begin(), t.map_.end(), 0);
  t.owner_ = t.map_;
  return t;
}

Topology Topology::shared_bus(int n_nodes, Tick t_bus, bool broadcast) {
  require(n_nodes >= 1, "shared bus needs at least one node");
  require(t_bus >= 1, "bus message time must be >= 1 tick");
  Topology t;
  t.kind_ = TopologyKind::kSharedBus;
  t.broadcast_ = broadcast;
  t.buses_.push_back({"bus", t_bus});
  t.map_.resize(n_nodes);
  std::iota(t.map_.begin(), t.map_.end(), 0);
  t.owner_ = t.map_;
  return t;
}

Topology Topology::empa(const EmpaGeometry& geometry, const EmpaLatencies& latencies,
                        int virtual_cores) {
  require(geometry.clusters >= 1, "EMPA needs at least one cluster");
  require(geometry.rows >= 1 && geometry.cols >= 1 && geometry.rows * geometry.cols >= 2,
          "cluster geometry must hold a head plus at least one member");
  require(geometry.clusters_per_row >= 0 && geometry.clusters_per_chip >= 0,
          "cluster layout counts must be non-negative");
  require(latencies.hop >= 1 && latencies.bus_l1 >= 1 && latencies.bus_l2 >= 1,
          "hop and bus latencies must be >= 1 tick");
  require(latencies.head >= 0 && latencies.memory >= 0, "head and memory latencies must be >= 0");

  Topology t;
  t.kind_ = TopologyKind::kEmpa;
  t.geometry_ = geometry;
  if (t.geometry_.clusters_per_row == 0) t.geometry_.clusters_per_row = geometry.clusters;
  t.latencies_ = latencies;
  const int per_chip = geometry.clusters_per_chip == 0 ? geometry.clusters : geometry.clusters_per_chip;
  t.chips_ = (geometry.clusters + per_chip - 1) / per_chip;
  t.geometry_.clusters_per_chip = per_chip;
  for (int chip = 0; chip < t.chips_; ++chip) {
    t.buses_.push_back({fmt::format("l1.chip{}", chip), latencies.bus_l1});
  }
  if (t.chips_ > 1) t.buses_.push_back({"l2", latencies.bus_l2});

  const int physical = geometry.clusters * geometry.rows * geometry.cols;
  if (virtual_cores == 0) virtual_cores = physical;
  require(virtual_cores >= 1 && virtual_cores <= physical,
          fmt::format("virtual core count {} outside [1, {}]", virtual_cores, physical));
  t.map_.resize(virtual_cores);
  std::iota(t.map_.begin(), t.map_.end(), 0);
  t.owner_.assign(physical, -1);
  for (int v = 0; v < virtual_cores; ++v) t.owner_[v] = v;
  return t;
}

void Topology::check_mapped(NodeId id) const {
  if (id.value < 0 || id.value >= virtual_cores()) {
    throw Error(ErrorCode::kRouting,
                fmt::format("virtual core {} is not mapped (have {})", id.value, virtual_cores()));
  }
}

int Topology::physical_of(NodeId virtual_id) const {
  check_mapped(virtual_id);
  return map_[virtual_id.value];
}

bool Topology::is_head(int physical) const {
  if (kind_ != TopologyKind::kEmpa) return false;
  return physical % (geometry_.rows * geometry_.cols) == 0;
}

int Topology::empa_core(int cluster, int row, int col) const {
  if (kind_ != TopologyKind::kEmpa || cluster < 0 || cluster >= geometry_.clusters || row < 0 ||
      row >= geometry_.rows || col < 0 || col >= geometry_.cols) {
    throw Error(ErrorCode::kRouting,
                fmt::format("no EMPA core at cluster {} row {} col {}", cluster, row, col));
  }
  return (cluster * geometry_.rows + row) * geometry_.cols + col;
}

int Topology::cluster_of(int physical) const {
  if (kind_ != TopologyKind::kEmpa) return 0;
  return physical / (geometry_.rows * geometry_.cols);
}

int Topology::chip_of(int physical) const {
  return cluster_of(physical) / geometry_.clusters_per_chip;
}

GridCoord Topology::global_coord(int physical) const {
  if (kind_ != TopologyKind::kEmpa) return {0, physical};
  const int per_cluster = geometry_.rows * geometry_.cols;
  const int cluster = physical / per_cluster;
  const int local = physical % per_cluster;
  const int cluster_row = cluster / geometry_.clusters_per_row;
  const int cluster_col = cluster % geometry_.clusters_per_row;
  return {cluster_row * geometry_.rows + local / geometry_.cols,
          cluster_col * geometry_.cols + local % geometry_.cols};
}

int Topology::distance(NodeId a, NodeId b) const {
  return chebyshev(global_coord(physical_of(a)), global_coord(physical_of(b)));
}

Path Topology::route(NodeId src, NodeId dst) const {
  check_mapped(src);
  check_mapped(dst);
  if (src == dst) return {};
  switch (kind_) {
    case TopologyKind::kDirect:
      return {{Segment{Medium::kWire, link_latency_}}};
    case TopologyKind::kSharedBus:
      return {{Segment{Medium::kBus, buses_[0].occupancy, 0}}};
    case TopologyKind::kEmpa:
      return route_empa(map_[src.value], map_[dst.value]);
  }
  return {};
}

Path Topology::route_empa(int src, int dst) const {
  Path path;
  const auto iccb = [&](int hops) {
    if (hops > 0) path.segments.push_back({Medium::kIccb, hops * latencies_.hop, -1, hops});
  };
  const int d = chebyshev(global_coord(src), global_coord(dst));
  const int src_cluster = cluster_of(src);
  const int dst_cluster = cluster_of(dst);
  // Neighbours up to two hops away are wired directly, across cluster
  // borders too but not across chips; farther members of the same cluster
  // relay hop by hop.
  if ((d <= 2 && chip_of(src) == chip_of(dst)) || src_cluster == dst_cluster) {
    iccb(d);
    return path;
  }
  const int per_cluster = geometry_.rows * geometry_.cols;
  const int src_head = src_cluster * per_cluster;
  const int dst_head = dst_cluster * per_cluster;
  iccb(chebyshev(global_coord(src), global_coord(src_head)));
  path.segments.push_back({Medium::kHead, latencies_.head});
  const int src_chip = chip_of(src);
  const int dst_chip = chip_of(dst);
  path.segments.push_back({Medium::kBus, latencies_.bus_l1, src_chip});
  if (src_chip != dst_chip) {
    path.segments.push_back({Medium::kBus, latencies_.bus_l2, chips_});
    path.segments.push_back({Medium::kBus, latencies_.bus_l1, dst_chip});
  }
  path.segments.push_back({Medium::kHead, latencies_.head});
  iccb(chebyshev(global_coord(dst_head), global_coord(dst)));
  return path;
}

void Topology::remap_core(NodeId virtual_id, int new_physical) {
  check_mapped(virtual_id);
  if (new_physical < 0 || new_physical >= physical_cores()) {
    throw Error(ErrorCode::kRemap, fmt::format("physical core {} does not exist", new_physical));
  }
  const int old_physical = map_[virtual_id.value];
  if (is_head(old_physical) || is_head(new_physical)) {
    throw Error(ErrorCode::kUnsupported, "remapping onto or away from a cluster head is not supported");
  }
  if (owner_[new_physical] != -1) {
    throw Error(ErrorCode::kRemap, fmt::format("physical core {} is already assigned to virtual {}",
                                               new_physical, owner_[new_physical]));
  }
  owner_[old_physical] = -1;
  owner_[new_physical] = virtual_id.value;
  map_[virtual_id.value] = new_physical;
}

Topology Topology::remapped(NodeId virtual_id, int new_physical) const {
  Topology copy = *this;
  copy.remap_core(virtual_id, new_physical);
  return copy;
}

Tick Topology::memory_latency(NodeId node) const {
  if (kind_ != TopologyKind::kEmpa) {
    throw Error(ErrorCode::kUnsupported, "memory port exists only on EMPA cluster heads");
  }
  const int physical = physical_of(node);
  const int head = cluster_of(physical) * geometry_.rows * geometry_.cols;
  const int hops = chebyshev(global_coord(physical), global_coord(head));
  return hops * latencies_.hop + latencies_.head + latencies_.memory;
}

}  // namespace neurosim
