#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <stack>
#include <string>
#include <vector>

#include "gridsim/error.hpp"
#include "gridsim/graph.hpp"
#include "gridsim/topology.hpp"

namespace gridsim {

/// Metric values keyed by node id or edge, in graph declaration order.
template <class Key>
struct Scores {
  std::vector<Key> keys;
  std::vector<double> values;

  std::size_t size() const { return keys.size(); }

  double at(const Key& k) const {
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (keys[i] == k) return values[i];
    throw Error("no score for '" + to_string(k) + "'");
  }
};

using NodeCentrality = Scores<NodeId>;
using EdgeCentrality = Scores<EdgeKey>;

namespace detail {

// Single-source shortest-path DAG (unit weights), as used by Brandes.
struct PathCounts {
  std::vector<NodeIndex> order;  // nondecreasing distance
  std::vector<std::vector<NodeIndex>> preds;
  std::vector<double> sigma;
};

inline PathCounts shortest_path_counts(const Graph& g, NodeIndex s) {
  const std::size_t n = g.size();
  PathCounts pc;
  pc.preds.assign(n, {});
  pc.sigma.assign(n, 0.0);
  std::vector<std::size_t> dist(n, kUnreachable);
  std::vector<NodeIndex> queue{s};
  dist[s] = 0;
  pc.sigma[s] = 1.0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeIndex v = queue[head];
    for (NodeIndex w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
      if (dist[w] == dist[v] + 1) {
        pc.sigma[w] += pc.sigma[v];
        pc.preds[w].push_back(v);
      }
    }
  }
  pc.order = std::move(queue);
  return pc;
}

struct BrandesTotals {
  std::vector<double> node;
  std::vector<double> edge;
};

// Raw pair-dependency sums over ordered (s, t) pairs; each unordered pair is
// therefore counted twice.
inline BrandesTotals brandes(const Graph& g) {
  const std::size_t n = g.size();
  BrandesTotals out{std::vector<double>(n, 0.0), std::vector<double>(g.edge_count(), 0.0)};

  // edge index lookup by endpoint pair
  std::vector<std::vector<std::pair<NodeIndex, std::size_t>>> edge_of(n);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edges()[e];
    edge_of[a].emplace_back(b, e);
    edge_of[b].emplace_back(a, e);
  }
  auto edge_index = [&](NodeIndex a, NodeIndex b) {
    for (auto [nb, e] : edge_of[a])
      if (nb == b) return e;
    return std::size_t{0};
  };

  std::vector<double> delta(n);
  for (NodeIndex s = 0; s < n; ++s) {
    auto pc = shortest_path_counts(g, s);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = pc.order.rbegin(); it != pc.order.rend(); ++it) {
      NodeIndex w = *it;
      for (NodeIndex v : pc.preds[w]) {
        double c = pc.sigma[v] / pc.sigma[w] * (1.0 + delta[w]);
        out.edge[edge_index(v, w)] += c;
        delta[v] += c;
      }
      if (w != s) out.node[w] += delta[w];
    }
  }
  return out;
}

}  // namespace detail

/// Fraction of shortest paths between other node pairs that pass through each
/// node, normalized by (n-1)(n-2)/2 unordered pairs.
inline NodeCentrality betweenness_centrality(const Graph& g) {
  const std::size_t n = g.size();
  auto totals = detail::brandes(g);
  NodeCentrality c{g.ids(), std::vector<double>(n, 0.0)};
  if (n < 3) return c;
  const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
  for (std::size_t i = 0; i < n; ++i) c.values[i] = totals.node[i] / 2.0 / pairs;
  return c;
}

inline NodeCentrality betweenness_centrality(const Topology& t) {
  return betweenness_centrality(t.graph());
}

/// Shortest-path load per edge, normalized by n(n-1)/2 unordered pairs.
inline EdgeCentrality edge_betweenness(const Graph& g) {
  const std::size_t n = g.size();
  auto totals = detail::brandes(g);
  EdgeCentrality c;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    c.keys.push_back(g.edge_key(e));
    c.values.push_back(n < 2 ? 0.0
                             : totals.edge[e] / 2.0 /
                                   (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0));
  }
  return c;
}

inline EdgeCentrality edge_betweenness(const Topology& t) { return edge_betweenness(t.graph()); }

namespace detail {

inline std::optional<NodeCentrality> eccentricity_over_arcs(
    const Graph& g, const std::vector<std::vector<NodeIndex>>& out_arcs) {
  const std::size_t n = g.size();
  NodeCentrality c{g.ids(), std::vector<double>(n, 0.0)};
  std::vector<std::size_t> dist(n);
  std::vector<NodeIndex> queue;
  for (NodeIndex s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnreachable);
    queue.assign(1, s);
    dist[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      NodeIndex v = queue[head];
      for (NodeIndex w : out_arcs[v]) {
        if (dist[w] == kUnreachable) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
    if (queue.size() != n) return std::nullopt;
    c.values[s] = static_cast<double>(dist[queue.back()]);
  }
  return c;
}

}  // namespace detail

/// Longest shortest-path hop distance from each node. Returns nullopt
/// ("not computable") when some node cannot reach another.
inline std::optional<NodeCentrality> eccentricity_centrality(const Graph& g) {
  std::vector<std::vector<NodeIndex>> arcs(g.size());
  for (NodeIndex v = 0; v < g.size(); ++v) arcs[v] = g.neighbors(v);
  return detail::eccentricity_over_arcs(g, arcs);
}

/// With `directed` set, generator links only carry traffic away from the
/// generator and sink links only toward the sink; any topology with a sink
/// is then not strongly connected.
inline std::optional<NodeCentrality> eccentricity_centrality(const Topology& t, bool directed) {
  if (!directed) return eccentricity_centrality(t.graph());
  const Graph& g = t.graph();
  std::vector<std::vector<NodeIndex>> arcs(g.size());
  for (auto [a, b] : g.edges()) {
    auto allow = [&](NodeIndex from, NodeIndex to) {
      return t.role(to) != NodeRole::Generator && t.role(from) != NodeRole::Sink;
    };
    if (allow(a, b)) arcs[a].push_back(b);
    if (allow(b, a)) arcs[b].push_back(a);
  }
  return detail::eccentricity_over_arcs(g, arcs);
}

struct EigenvectorResult {
  NodeCentrality centrality;
  double eigenvalue = 0.0;
  double residual = 0.0;  // max-norm of A x - lambda x
  std::size_t iterations = 0;
};

inline constexpr double kEigenTolerance = 1e-10;
inline constexpr std::size_t kEigenMaxIterations = 100000;

/// Dominant eigenvector of the adjacency matrix by power iteration on A + I.
///
/// The unit shift keeps eigenvectors but makes the dominant eigenvalue
/// strictly largest in magnitude, so bipartite graphs (trees) converge.
/// Iteration starts from the uniform vector and stops once successive
/// unit-norm iterates differ by less than `tol` in max-norm and the
/// residual against the Rayleigh quotient is at most 10 * tol.
inline EigenvectorResult eigenvector_solve(const Graph& g, double tol = kEigenTolerance,
                                           std::size_t max_iter = kEigenMaxIterations) {
  if (!(tol > 0)) throw Error("eigenvector tolerance must be positive");
  const std::size_t n = g.size();
  if (n == 0) throw Error("eigenvector centrality of an empty graph");
  if (!g.connected()) throw Error("eigenvector centrality requires a connected graph");

  auto multiply = [&](const std::vector<double>& x, double shift) {
    std::vector<double> y(n);
    for (NodeIndex v = 0; v < n; ++v) {
      double acc = shift * x[v];
      for (NodeIndex w : g.neighbors(v)) acc += x[w];
      y[v] = acc;
    }
    return y;
  };
  auto normalize = [](std::vector<double>& x) {
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : x) v /= norm;
  };

  EigenvectorResult r;
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  for (r.iterations = 1; r.iterations <= max_iter; ++r.iterations) {
    auto next = multiply(x, 1.0);
    normalize(next);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(next[i] - x[i]));
    x = std::move(next);
    if (diff >= tol) continue;

    auto ax = multiply(x, 0.0);
    double lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda += x[i] * ax[i];
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(ax[i] - lambda * x[i]));
    r.eigenvalue = lambda;
    r.residual = residual;
    if (residual <= 10.0 * tol) {
      r.centrality = NodeCentrality{g.ids(), std::move(x)};
      return r;
    }
  }
  auto ax = multiply(x, 0.0);
  double lambda = 0.0, residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) lambda += x[i] * ax[i];
  for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(ax[i] - lambda * x[i]));
  throw ConvergenceError("eigenvector power iteration did not converge after " +
                             std::to_string(max_iter) + " iterations (residual " +
                             std::to_string(residual) + ")",
                         residual);
}

inline NodeCentrality eigenvector_centrality(const Graph& g, double tol = kEigenTolerance,
                                             std::size_t max_iter = kEigenMaxIterations) {
  return eigenvector_solve(g, tol, max_iter).centrality;
}

inline NodeCentrality eigenvector_centrality(const Topology& t, double tol = kEigenTolerance,
                                             std::size_t max_iter = kEigenMaxIterations) {
  return eigenvector_centrality(t.graph(), tol, max_iter);
}

// ---------------------------------------------------------------------------
// Tie-clustered ranking

enum class Direction { HigherIsCritical, LowerIsCritical };

inline constexpr double kDefaultTieEpsilon = 1e-9;

template <class Key>
struct Cluster {
  int rank = 0;
  std::vector<Key> members;  // natural order
  double value = 0.0;
};

template <class Key>
struct RankedClusters {
  Direction direction = Direction::HigherIsCritical;
  std::vector<Cluster<Key>> clusters;

  std::size_t member_count() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.members.size();
    return n;
  }

  std::vector<std::set<Key>> member_sets() const {
    std::vector<std::set<Key>> out;
    for (const auto& c : clusters) out.emplace_back(c.members.begin(), c.members.end());
    return out;
  }
};

/// Groups keys into dense-ranked clusters, most critical first. A key joins
/// the current cluster when its value lies within `tie_epsilon` of the
/// cluster's first (representative) value. `subset`, when given, restricts
/// the ranking to those keys.
template <class Key>
RankedClusters<Key> rank_with_ties(const Scores<Key>& scores, Direction direction,
                                   double tie_epsilon = kDefaultTieEpsilon,
                                   const std::optional<std::set<Key>>& subset = std::nullopt) {
  if (!(tie_epsilon >= 0)) throw Error("tie epsilon must be non-negative");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (!subset || subset->contains(scores.keys[i])) idx.push_back(i);
  if (idx.empty()) throw Error("nothing to rank");

  const bool higher = direction == Direction::HigherIsCritical;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    double va = scores.values[a], vb = scores.values[b];
    if (va != vb) return higher ? va > vb : va < vb;
    return natural_less(scores.keys[a], scores.keys[b]);
  });

  RankedClusters<Key> out;
  out.direction = direction;
  for (std::size_t i : idx) {
    double v = scores.values[i];
    if (out.clusters.empty() || std::abs(v - out.clusters.back().value) > tie_epsilon)
      out.clusters.push_back({static_cast<int>(out.clusters.size()) + 1, {}, v});
    out.clusters.back().members.push_back(scores.keys[i]);
  }
  for (auto& c : out.clusters)
    std::sort(c.members.begin(), c.members.end(),
              [](const Key& a, const Key& b) { return natural_less(a, b); });
  return out;
}

// Subsets used for criticality tables: infrastructure nodes (routers and the
// sink) and links that do not touch a generator.
inline std::set<NodeId> infrastructure_nodes(const Topology& t) {
  std::set<NodeId> out;
  for (NodeIndex i = 0; i < t.size(); ++i)
    if (t.role(i) != NodeRole::Generator) out.insert(t.id(i));
  return out;
}

inline std::set<NodeId> router_nodes(const Topology& t) {
  auto ids = t.ids_with_role(NodeRole::Router);
  return {ids.begin(), ids.end()};
}

inline std::set<EdgeKey> infrastructure_edges(const Topology& t) {
  std::set<EdgeKey> out;
  for (std::size_t e = 0; e < t.graph().edge_count(); ++e) {
    auto [a, b] = t.graph().edges()[e];
    if (t.role(a) != NodeRole::Generator && t.role(b) != NodeRole::Generator)
      out.insert(t.graph().edge_key(e));
  }
  return out;
}

}  // namespace gridsim
