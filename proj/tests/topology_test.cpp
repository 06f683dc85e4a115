#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "gridsim/cases.hpp"
#include "gridsim/routing.hpp"
#include "gridsim/topology.hpp"
#include "test_support.hpp"

using namespace gridsim;

namespace {

std::size_t degree(const Topology& t, std::string_view id) {
  return t.graph().neighbors(t.graph().require(id)).size();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(ParseTopology, MinimalTopology) {
  auto t = parse_topology("node S sink\nnode R1 router\nnode G1 generator\nedge S R1\nedge R1 G1");
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.id(0), "S");
  EXPECT_EQ(t.id(1), "R1");
  EXPECT_EQ(t.id(2), "G1");
  EXPECT_EQ(t.role("G1"), NodeRole::Generator);
  EXPECT_EQ(t.id(t.sink()), "S");
}

TEST(ParseTopology, CommentsAndBlankLines) {
  auto t = parse_topology("# header\n\nnode S sink   # trailing\n  node R router\nnode G generator\n\nedge S R\nedge R G\n");
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.graph().edge_count(), 2u);
}

TEST(ParseTopology, MultipleSinksRejected) {
  try {
    parse_topology("node S sink\nnode T sink\nnode R router\nnode G generator\nedge S R\nedge T R\nedge R G");
    FAIL() << "expected failure";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("multiple sinks"), std::string::npos);
  }
}

TEST(ParseTopology, SyntaxErrorReportsLine) {
  try {
    parse_topology("node S sink\nnode R router\nnode G gateway\n");
    FAIL() << "expected failure";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 3u);
  }
  try {
    parse_topology("node S sink\nlink S R\n");
    FAIL() << "expected failure";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
  }
  EXPECT_THROW(parse_topology("node S\n"), ParseError);
  EXPECT_THROW(parse_topology("edge A B C\n"), ParseError);
}

TEST(ParseTopology, ValidationFailures) {
  const std::string base = "node S sink\nnode R router\nnode G generator\nedge S R\nedge R G\n";
  EXPECT_THROW(parse_topology(base + "edge R R\n"), ValidationError);            // self-loop
  EXPECT_THROW(parse_topology(base + "edge G R\n"), ValidationError);            // duplicate, reversed
  EXPECT_THROW(parse_topology(base + "edge R X\n"), ValidationError);            // unknown endpoint
  EXPECT_THROW(parse_topology(base + "node R router\n"), ValidationError);       // duplicate node
  EXPECT_THROW(parse_topology(base + "node R2 router\n"), ValidationError);      // disconnected
  EXPECT_THROW(parse_topology(base + "node G2 generator\nedge G G2\n"), ValidationError);
  EXPECT_THROW(parse_topology(base + "node G2 generator\nedge S G2\n"), ValidationError);
  EXPECT_THROW(parse_topology(base + "node G2 generator\n"), ValidationError);   // isolated generator
  EXPECT_THROW(parse_topology("node S sink\nnode R router\nedge S R\n"), ValidationError);
  EXPECT_THROW(parse_topology("node S sink\nnode G generator\nedge S G\n"), ValidationError);
  EXPECT_THROW(parse_topology("node R router\nnode G generator\nedge R G\n"), ValidationError);
  EXPECT_THROW(parse_topology("node S,1 sink\n"), ValidationError);
}

TEST(ParseTopology, MissingFile) {
  EXPECT_THROW(load_topology_file("/nonexistent/missing.topo"), Error);
}

TEST(ParseTopology, RoundTripOnRandomTopologies) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    auto t = oracle::random_topology(rng, 2 + i % 9, 1 + i % 4, 0.3);
    auto again = parse_topology(serialize_topology(t), t.name());
    EXPECT_EQ(t, again);
    for (NodeIndex n = 0; n < t.size(); ++n) EXPECT_EQ(t.id(n), again.id(n));
  }
}

TEST(BuiltinCase, Case2Structure) {
  auto t = builtin_case(2);
  EXPECT_EQ(t.size(), 23u);
  EXPECT_EQ(t.nodes_with_role(NodeRole::Router).size(), 14u);
  EXPECT_EQ(t.nodes_with_role(NodeRole::Generator).size(), 8u);
  EXPECT_EQ(t.id(t.sink()), "0");
  EXPECT_EQ(degree(t, "0"), 2u);

  // Router-induced subgraph (sink included): complete binary tree of depth 3 at 0.
  for (int v = 1; v <= 14; ++v) {
    auto parent = std::to_string((v - 1) / 2);
    EXPECT_TRUE(t.graph().adjacent(t.graph().require(std::to_string(v)), t.graph().require(parent))) << v;
  }
  for (int leaf = 7; leaf <= 14; ++leaf) {
    std::size_t gens = 0;
    for (NodeIndex n : t.graph().neighbors(t.graph().require(std::to_string(leaf))))
      if (t.role(n) == NodeRole::Generator) ++gens;
    EXPECT_EQ(gens, 1u) << leaf;
  }
  std::size_t router_edges = 0;
  for (auto [a, b] : t.graph().edges())
    if (t.role(a) != NodeRole::Generator && t.role(b) != NodeRole::Generator) ++router_edges;
  EXPECT_EQ(router_edges, 14u);
}

TEST(BuiltinCase, Case3Structure) {
  auto t = builtin_case(3);
  EXPECT_EQ(t.nodes_with_role(NodeRole::Router).size(), 5u);
  EXPECT_EQ(t.nodes_with_role(NodeRole::Generator).size(), 12u);
  EXPECT_EQ(t.graph().edge_count(), 18u);  // 5 ring + 13 spokes
  EXPECT_EQ(degree(t, "1"), 3u);
  for (auto r : {"2", "6", "10", "14"}) EXPECT_EQ(degree(t, r), 5u) << r;
  for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
           {"1", "2"}, {"2", "6"}, {"6", "10"}, {"10", "14"}, {"14", "1"}})
    EXPECT_TRUE(t.graph().adjacent(t.graph().require(a), t.graph().require(b)));
  EXPECT_TRUE(t.sink_adjacent(t.graph().require("1")));
}

TEST(BuiltinCase, Case1Approximate) {
  auto t = builtin_case(1);
  EXPECT_EQ(t.nodes_with_role(NodeRole::Router).size(), 18u);
  EXPECT_EQ(t.nodes_with_role(NodeRole::Generator).size(), 7u);
  for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
           {"5", "7"}, {"7", "11"}, {"10", "11"}, {"4", "8"}})
    EXPECT_TRUE(t.graph().adjacent(t.graph().require(a), t.graph().require(b)));
  // one generator per router
  std::set<NodeIndex> hosts;
  for (NodeIndex g : t.nodes_with_role(NodeRole::Generator)) {
    ASSERT_EQ(t.graph().neighbors(g).size(), 1u);
    hosts.insert(t.graph().neighbors(g).front());
  }
  EXPECT_EQ(hosts.size(), 7u);
  EXPECT_FALSE(builtin_case_is_exact(1));
}

TEST(BuiltinCase, InvalidId) {
  EXPECT_THROW(builtin_case(0), Error);
  EXPECT_THROW(builtin_case(4), Error);
}

TEST(BuiltinCase, DataFilesMatchBuiltins) {
  for (int id = 1; id <= 3; ++id) {
    auto path = std::string(GRIDSIM_DATA_DIR) + "/case" + std::to_string(id) + ".topo";
    EXPECT_EQ(read_file(path), std::string(builtin_case_text(id))) << path;
    EXPECT_EQ(load_topology_file(path), builtin_case(id));
  }
}

TEST(RoutingTable, EqualProbabilitiesExcludingGenerators) {
  auto t = builtin_case(3);
  auto rt = build_routing_table(t);
  const auto& e6 = rt.entries(t.graph().require("6"));
  ASSERT_EQ(e6.size(), 2u);
  std::set<NodeId> targets;
  for (const auto& e : e6) {
    targets.insert(t.id(e.neighbor));
    EXPECT_DOUBLE_EQ(e.probability, 0.5);
  }
  EXPECT_EQ(targets, (std::set<NodeId>{"2", "10"}));

  const auto& e1 = rt.entries(t.graph().require("1"));  // routers 2, 14 and the sink
  ASSERT_EQ(e1.size(), 3u);
  for (const auto& e : e1) EXPECT_NEAR(e.probability, 0.333333, 1e-6);
}

TEST(RoutingTable, SinkOnlyRouter) {
  auto t = parse_topology("node S sink\nnode R router\nnode G generator\nedge S R\nedge R G\n");
  auto rt = build_routing_table(t);
  const auto& e = rt.entries(t.graph().require("R"));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].neighbor, t.sink());
  EXPECT_DOUBLE_EQ(e[0].probability, 1.0);
}

TEST(RoutingTable, ProbabilitiesSumToOneOnRandomTopologies) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto t = oracle::random_topology(rng, 1 + i % 10, 1 + i % 5, 0.25);
    auto rt = build_routing_table(t);
    for (NodeIndex r : t.nodes_with_role(NodeRole::Router)) {
      double sum = 0;
      for (const auto& e : rt.entries(r)) {
        sum += e.probability;
        EXPECT_NE(t.role(e.neighbor), NodeRole::Generator);
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(RoutingTable, RouterWithOnlyGeneratorsRejected) {
  // R2's only link is to a generator shared with R1.
  auto t = parse_topology(
      "node S sink\nnode R1 router\nnode R2 router\nnode G generator\n"
      "edge S R1\nedge R1 G\nedge G R2\n");
  EXPECT_THROW(build_routing_table(t), ValidationError);
}
