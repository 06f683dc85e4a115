#pragma once

// Test-only oracles and generators. Nothing here shares code paths with the
// library algorithms it is used to check.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gridsim/graph.hpp"
#include "gridsim/topology.hpp"

namespace gridsim::oracle {

// All-pairs hop distances by Floyd-Warshall.
inline std::vector<std::vector<std::size_t>> floyd_warshall(const Graph& g) {
  const std::size_t n = g.size();
  const std::size_t inf = n + 1;
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [a, b] : g.edges()) d[a][b] = d[b][a] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

struct NaiveBetweenness {
  std::vector<double> node;  // normalized like the library
  std::vector<double> edge;
};

// Lists every shortest s-t path explicitly (depth-first over the distance
// layers) and counts, for each unordered pair, the fraction of paths through
// each interior node and each edge.
inline NaiveBetweenness naive_betweenness(const Graph& g) {
  const std::size_t n = g.size();
  auto dist = floyd_warshall(g);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_id;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edges()[e];
    edge_id[{a, b}] = e;
    edge_id[{b, a}] = e;
  }
  std::vector<double> node(n, 0.0), edge(g.edge_count(), 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      std::vector<std::vector<std::size_t>> paths;
      std::vector<std::size_t> path{s};
      std::function<void(std::size_t)> walk = [&](std::size_t v) {
        if (v == t) {
          paths.push_back(path);
          return;
        }
        for (std::size_t w = 0; w < n; ++w) {
          if (dist[v][w] == 1 && dist[s][w] == dist[s][v] + 1 && dist[w][t] + dist[s][w] == dist[s][t]) {
            path.push_back(w);
            walk(w);
            path.pop_back();
          }
        }
      };
      walk(s);
      const double total = static_cast<double>(paths.size());
      for (const auto& p : paths) {
        for (std::size_t i = 1; i + 1 < p.size(); ++i) node[p[i]] += 1.0 / total;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) edge[edge_id.at({p[i], p[i + 1]})] += 1.0 / total;
      }
    }
  }
  if (n >= 3)
    for (auto& v : node) v /= static_cast<double>((n - 1) * (n - 2)) / 2.0;
  else
    std::fill(node.begin(), node.end(), 0.0);
  if (n >= 2)
    for (auto& v : edge) v /= static_cast<double>(n * (n - 1)) / 2.0;
  return {node, edge};
}

// Random connected graph: random spanning tree plus extra edges with
// probability p. Node ids are "n0".."n<k>" in a shuffled declaration order.
inline Graph random_connected_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node("n" + std::to_string(perm[i]));
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    g.add_edge(i, parent(rng));
  }
  std::bernoulli_distribution extra(p);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (!g.adjacent(a, b) && extra(rng)) g.add_edge(a, b);
  return g;
}

// Random valid topology: connected router core, sink on one router,
// generators on random routers.
inline Topology random_topology(std::mt19937_64& rng, std::size_t routers, std::size_t generators, double p) {
  Graph core = random_connected_graph(rng, routers, p);
  std::vector<NodeSpec> nodes;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& id : core.ids()) nodes.push_back({"r" + id, NodeRole::Router});
  for (auto [a, b] : core.edges()) edges.emplace_back("r" + core.id(a), "r" + core.id(b));
  std::uniform_int_distribution<std::size_t> pick(0, routers - 1);
  nodes.push_back({"sink", NodeRole::Sink});
  edges.emplace_back("sink", "r" + core.id(pick(rng)));
  for (std::size_t g = 0; g < generators; ++g) {
    nodes.push_back({"g" + std::to_string(g), NodeRole::Generator});
    edges.emplace_back("g" + std::to_string(g), "r" + core.id(pick(rng)));
  }
  return Topology("random", nodes, edges);
}

inline Graph graph_from_edges(const std::vector<std::string>& ids,
                              const std::vector<std::pair<std::string, std::string>>& edges) {
  Graph g;
  for (const auto& id : ids) g.add_node(id);
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  return g;
}

}  // namespace gridsim::oracle
