#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridwatch/tensor.hpp"

namespace gridwatch {

enum class Role : std::uint8_t {
  SmartMeter,
  DER,
  NeighborhoodGateway,
  SCADA,
  PMU,
  SubstationController,
  AMI,
};
inline constexpr int kRoleCount = 7;

enum class Layer : std::uint8_t { Han, Nan, Wan };
inline constexpr int kLayerCount = 3;

enum class Technology : std::uint8_t { ZigBee, PLC, LTE, FiberEthernet };
inline constexpr int kTechnologyCount = 4;

inline bool is_wireless(Technology t) { return t == Technology::ZigBee || t == Technology::LTE; }

inline const char* to_string(Role r) {
  switch (r) {
    case Role::SmartMeter: return "SmartMeter";
    case Role::DER: return "DER";
    case Role::NeighborhoodGateway: return "NeighborhoodGateway";
    case Role::SCADA: return "SCADA";
    case Role::PMU: return "PMU";
    case Role::SubstationController: return "SubstationController";
    case Role::AMI: return "AMI";
  }
  return "?";
}
inline const char* to_string(Layer l) {
  switch (l) {
    case Layer::Han: return "HAN";
    case Layer::Nan: return "NAN";
    case Layer::Wan: return "WAN";
  }
  return "?";
}
inline const char* to_string(Technology t) {
  switch (t) {
    case Technology::ZigBee: return "ZigBee";
    case Technology::PLC: return "PLC";
    case Technology::LTE: return "LTE";
    case Technology::FiberEthernet: return "FiberEthernet";
  }
  return "?";
}

// The layer each role lives on in the reference deployment; used to reject
// descriptors that put e.g. a smart meter on the WAN backbone.
inline Layer expected_layer(Role r) {
  switch (r) {
    case Role::SmartMeter:
    case Role::DER: return Layer::Han;
    case Role::NeighborhoodGateway: return Layer::Nan;
    default: return Layer::Wan;
  }
}

struct NodeDescriptor {
  int id = -1;
  Role role = Role::SmartMeter;
  Layer layer = Layer::Han;
  Technology technology = Technology::ZigBee;
  bool wireless = false;
};

inline void validate_descriptor(const NodeDescriptor& n) {
  if (n.id < 0) throw DomainError("node id must be nonnegative");
  if (n.wireless != is_wireless(n.technology))
    throw DomainError("node " + std::to_string(n.id) +
                      ": wireless flag inconsistent with technology");
  if (n.layer != expected_layer(n.role))
    throw DomainError("node " + std::to_string(n.id) + ": role " + to_string(n.role) +
                      " does not belong on layer " + to_string(n.layer));
}

struct GridTopology {
  std::vector<NodeDescriptor> nodes;
  std::vector<std::pair<int, int>> edges;  // unordered pairs, stored lo<hi, sorted
  Tensor adjacency;                        // NxN, {0,1}, zero diagonal

  int size() const { return static_cast<int>(nodes.size()); }

  const NodeDescriptor& node(int id) const {
    if (id < 0 || id >= size()) throw DomainError("node id out of range");
    return nodes[static_cast<std::size_t>(id)];
  }

  bool has_edge(int a, int b) const {
    if (a < 0 || b < 0 || a >= size() || b >= size()) return false;
    return adjacency(a, b) != 0.0;
  }
};

// Builds adjacency from an edge list and checks every structural invariant:
// ids dense 0..N-1, descriptors valid, edges in range without self-loops or
// duplicates, and the graph connected.
inline GridTopology make_topology(std::vector<NodeDescriptor> nodes,
                                  std::vector<std::pair<int, int>> edges) {
  GridTopology topo;
  int n = static_cast<int>(nodes.size());
  if (n < 1) throw DomainError("topology needs at least one node");
  for (int i = 0; i < n; ++i) {
    if (nodes[static_cast<std::size_t>(i)].id != i)
      throw DomainError("node ids must be dense and ordered 0..N-1");
    validate_descriptor(nodes[static_cast<std::size_t>(i)]);
  }
  topo.adjacency = Tensor(n, n);
  for (auto& [a, b] : edges) {
    if (a == b) throw DomainError("self-loop edge on node " + std::to_string(a));
    if (a < 0 || b < 0 || a >= n || b >= n) throw DomainError("edge endpoint out of range");
    if (a > b) std::swap(a, b);
    if (topo.adjacency(a, b) != 0.0) throw DomainError("duplicate edge");
    topo.adjacency(a, b) = 1.0;
    topo.adjacency(b, a) = 1.0;
  }
  std::sort(edges.begin(), edges.end());
  topo.edges = std::move(edges);
  topo.nodes = std::move(nodes);
  // connectivity via BFS from node 0
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  for (std::size_t qi = 0; qi < queue.size(); ++qi)
    for (int j = 0; j < n; ++j)
      if (topo.adjacency(queue[qi], j) != 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = 1;
        queue.push_back(j);
      }
  if (static_cast<int>(queue.size()) != n) throw DomainError("topology is not connected");
  return topo;
}

// Canonical 12-node reference grid. Two neighborhood gateways aggregate the
// HAN devices (three smart meters on ZigBee, one wireless and one PLC-coupled
// DER) and uplink to a WAN backbone of SCADA, two PMUs, a substation
// controller, and the AMI headend. Backbone links are fiber except the
// substation controller, which rides the LTE redundancy path (hence the
// extra PMU-controller links).
inline GridTopology default_topology() {
  std::vector<NodeDescriptor> nodes = {
      {0, Role::SmartMeter, Layer::Han, Technology::ZigBee, true},
      {1, Role::SmartMeter, Layer::Han, Technology::ZigBee, true},
      {2, Role::SmartMeter, Layer::Han, Technology::ZigBee, true},
      {3, Role::DER, Layer::Han, Technology::ZigBee, true},
      {4, Role::DER, Layer::Han, Technology::PLC, false},
      {5, Role::NeighborhoodGateway, Layer::Nan, Technology::LTE, true},
      {6, Role::NeighborhoodGateway, Layer::Nan, Technology::LTE, true},
      {7, Role::SCADA, Layer::Wan, Technology::FiberEthernet, false},
      {8, Role::PMU, Layer::Wan, Technology::FiberEthernet, false},
      {9, Role::PMU, Layer::Wan, Technology::FiberEthernet, false},
      {10, Role::SubstationController, Layer::Wan, Technology::LTE, true},
      {11, Role::AMI, Layer::Wan, Technology::FiberEthernet, false},
  };
  std::vector<std::pair<int, int>> edges = {
      {0, 5}, {1, 5}, {3, 5},                    // gateway 5's HAN clients
      {2, 6}, {4, 6},                            // gateway 6's HAN clients
      {5, 6},                                    // gateway interconnect
      {5, 7}, {6, 7}, {5, 10}, {6, 10}, {5, 11}, {6, 11},  // NAN-WAN uplinks
      {7, 8}, {7, 9}, {7, 10}, {7, 11},          // WAN backbone
      {8, 10}, {9, 10},                          // LTE redundancy to controller
  };
  return make_topology(std::move(nodes), std::move(edges));
}

struct StarSubgraph {
  int ego = -1;
  std::vector<int> neighbors;                    // ascending node ids, wireless only
  std::vector<std::pair<int, int>> edge_index;   // local indices; (0,j) and (j,0) per neighbor
  int K = 0;
  int N = 1;
};

// Ego-centric star over wireless links. Only wireless nodes participate in
// detection, so a wired ego is a caller error rather than an empty star.
inline StarSubgraph star_subgraph(const GridTopology& topo, int ego) {
  const NodeDescriptor& e = topo.node(ego);
  if (!e.wireless)
    throw PreconditionError("node " + std::to_string(ego) + " is wired and cannot be a client");
  StarSubgraph s;
  s.ego = ego;
  for (int j = 0; j < topo.size(); ++j)
    if (j != ego && topo.has_edge(ego, j) && topo.node(j).wireless) s.neighbors.push_back(j);
  s.K = static_cast<int>(s.neighbors.size());
  s.N = 1 + s.K;
  for (int j = 1; j <= s.K; ++j) {
    s.edge_index.emplace_back(0, j);
    s.edge_index.emplace_back(j, 0);
  }
  return s;
}

inline std::vector<int> wireless_clients(const GridTopology& topo) {
  std::vector<int> out;
  for (const auto& n : topo.nodes)
    if (n.wireless) out.push_back(n.id);
  return out;
}

inline constexpr int kMetadataDim = kRoleCount + kLayerCount + kTechnologyCount + 1;  // 15

// One-hot role | one-hot layer | one-hot technology | wireless flag.
inline Tensor metadata_vector(const NodeDescriptor& n) {
  validate_descriptor(n);
  Tensor m(1, kMetadataDim);
  m(0, static_cast<int>(n.role)) = 1.0;
  m(0, kRoleCount + static_cast<int>(n.layer)) = 1.0;
  m(0, kRoleCount + kLayerCount + static_cast<int>(n.technology)) = 1.0;
  m(0, kMetadataDim - 1) = n.wireless ? 1.0 : 0.0;
  return m;
}

}  // namespace gridwatch
