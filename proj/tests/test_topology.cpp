#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "gridwatch/topology.hpp"

using namespace gridwatch;

namespace {

std::vector<double> as_vector(const Tensor& t) {
  std::vector<double> v(static_cast<std::size_t>(t.size()));
  for (std::int64_t i = 0; i < t.size(); ++i) v[static_cast<std::size_t>(i)] = t[i];
  return v;
}

}  // namespace

TEST_CASE("default grid has twelve nodes and a symmetric connected graph") {
  GridTopology topo = default_topology();
  REQUIRE(topo.size() == 12);

  for (int i = 0; i < topo.size(); ++i) {
    CHECK_FALSE(topo.has_edge(i, i));
    for (int j = 0; j < topo.size(); ++j) CHECK(topo.has_edge(i, j) == topo.has_edge(j, i));
  }

  // Breadth-first reachability from node 0 covers everything.
  std::vector<bool> seen(12, false);
  std::vector<int> frontier = {0};
  seen[0] = true;
  while (!frontier.empty()) {
    int u = frontier.back();
    frontier.pop_back();
    for (int v = 0; v < topo.size(); ++v)
      if (topo.has_edge(u, v) && !seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        frontier.push_back(v);
      }
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("wireless flag follows the technology") {
  GridTopology topo = default_topology();
  for (int i = 0; i < topo.size(); ++i) {
    const NodeDescriptor& nd = topo.node(i);
    bool wl = nd.technology == Technology::ZigBee || nd.technology == Technology::LTE;
    CHECK(nd.wireless == wl);
    CHECK(is_wireless(nd.technology) == wl);
  }
  CHECK_FALSE(is_wireless(Technology::PLC));
  CHECK_FALSE(is_wireless(Technology::FiberEthernet));
}

TEST_CASE("roles sit on their expected layers") {
  GridTopology topo = default_topology();
  int meters = 0, ders = 0, gateways = 0;
  for (int i = 0; i < topo.size(); ++i) {
    const NodeDescriptor& nd = topo.node(i);
    CHECK(nd.layer == expected_layer(nd.role));
    switch (nd.role) {
      case Role::SmartMeter:
        ++meters;
        CHECK(nd.layer == Layer::Han);
        break;
      case Role::DER:
        ++ders;
        CHECK(nd.layer == Layer::Han);
        break;
      case Role::NeighborhoodGateway:
        ++gateways;
        CHECK(nd.layer == Layer::Nan);
        break;
      default: CHECK(nd.layer == Layer::Wan); break;
    }
  }
  CHECK(meters == 3);
  CHECK(ders == 2);
  CHECK(gateways == 2);
}

TEST_CASE("star subgraphs cover wireless egos with ascending neighbor ids") {
  GridTopology topo = default_topology();
  std::set<int> covered;
  for (int i = 0; i < topo.size(); ++i) {
    if (!topo.node(i).wireless) {
      CHECK_THROWS_AS(star_subgraph(topo, i), PreconditionError);
      continue;
    }
    StarSubgraph s = star_subgraph(topo, i);
    CHECK(s.ego == i);
    CHECK(static_cast<int>(s.neighbors.size()) == s.K);
    CHECK(s.N == 1 + s.K);
    CHECK(s.edge_index.size() == static_cast<std::size_t>(2 * s.K));
    covered.insert(i);
    int prev = -1;
    for (int nb : s.neighbors) {
      CHECK(nb > prev);
      prev = nb;
      CHECK(topo.node(nb).wireless);
      CHECK(topo.has_edge(i, nb));
      covered.insert(nb);
    }
    // Edge index is exactly the bidirectional ego spokes in local indices.
    for (int j = 1; j <= s.K; ++j) {
      CHECK(s.edge_index[static_cast<std::size_t>(2 * (j - 1))] == std::make_pair(0, j));
      CHECK(s.edge_index[static_cast<std::size_t>(2 * (j - 1) + 1)] == std::make_pair(j, 0));
    }
    // Idempotent: a second extraction is identical.
    StarSubgraph s2 = star_subgraph(topo, i);
    CHECK(s2.neighbors == s.neighbors);
  }
  // Every wireless node appears in at least one star.
  for (int i = 0; i < topo.size(); ++i)
    if (topo.node(i).wireless) CHECK(covered.count(i) == 1);
}

TEST_CASE("metadata vectors are one-hot blocks plus a wireless flag") {
  GridTopology topo = default_topology();
  std::set<std::vector<double>> distinct;
  for (int i = 0; i < topo.size(); ++i) {
    Tensor m = metadata_vector(topo.node(i));
    REQUIRE(m.size() == 15);
    double role_sum = 0.0, layer_sum = 0.0, tech_sum = 0.0;
    for (int k = 0; k < 7; ++k) role_sum += m[k];
    for (int k = 7; k < 10; ++k) layer_sum += m[k];
    for (int k = 10; k < 14; ++k) tech_sum += m[k];
    CHECK(role_sum == 1.0);
    CHECK(layer_sum == 1.0);
    CHECK(tech_sum == 1.0);
    CHECK((m[14] == 0.0 || m[14] == 1.0));
    CHECK(m[14] == (topo.node(i).wireless ? 1.0 : 0.0));
    for (std::int64_t k = 0; k < m.size(); ++k) CHECK((m[k] == 0.0 || m[k] == 1.0));
    distinct.insert(as_vector(m));
  }
  // A wireless smart meter has exactly four nonzeros.
  for (int i = 0; i < topo.size(); ++i) {
    const NodeDescriptor& nd = topo.node(i);
    if (nd.role == Role::SmartMeter && nd.wireless) {
      Tensor m = metadata_vector(nd);
      int nz = 0;
      for (std::int64_t k = 0; k < m.size(); ++k) nz += m[k] != 0.0 ? 1 : 0;
      CHECK(nz == 4);
    }
  }
}

TEST_CASE("distinct descriptor combinations give distinct metadata") {
  NodeDescriptor a;
  a.id = 0;
  a.role = Role::SmartMeter;
  a.layer = Layer::Han;
  a.technology = Technology::ZigBee;
  a.wireless = true;
  NodeDescriptor b = a;
  b.role = Role::DER;
  CHECK(as_vector(metadata_vector(a)) != as_vector(metadata_vector(b)));
  NodeDescriptor c = a;
  c.technology = Technology::LTE;
  CHECK(as_vector(metadata_vector(a)) != as_vector(metadata_vector(c)));
}

TEST_CASE("malformed topologies are rejected") {
  GridTopology topo = default_topology();
  std::vector<NodeDescriptor> nodes = topo.nodes;
  std::vector<std::pair<int, int>> edges = topo.edges;

  SECTION("edge endpoint out of range") {
    edges.emplace_back(0, 99);
    CHECK_THROWS_AS(make_topology(nodes, edges), DomainError);
  }
  SECTION("self edge") {
    edges.emplace_back(3, 3);
    CHECK_THROWS_AS(make_topology(nodes, edges), DomainError);
  }
  SECTION("duplicate edge") {
    edges.push_back(edges.front());
    CHECK_THROWS_AS(make_topology(nodes, edges), DomainError);
  }
  SECTION("non-dense node ids") {
    nodes[1].id = 0;
    CHECK_THROWS_AS(make_topology(nodes, edges), DomainError);
  }
  SECTION("wireless flag contradicting technology") {
    nodes[0].wireless = !nodes[0].wireless;
    CHECK_THROWS_AS(make_topology(nodes, edges), DomainError);
  }
  SECTION("role on the wrong layer") {
    nodes[0].layer = Layer::Wan;
    CHECK_THROWS_AS(make_topology(nodes, edges), DomainError);
  }
  SECTION("disconnected graph") {
    CHECK_THROWS_AS(make_topology(nodes, {{0, 1}}), DomainError);
  }
}
