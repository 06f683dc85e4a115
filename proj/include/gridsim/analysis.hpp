#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gridsim/error.hpp"
#include "gridsim/metrics.hpp"
#include "gridsim/simulator.hpp"
#include "gridsim/topology.hpp"

namespace gridsim {

enum class Aggregation { Mean, Median };

inline constexpr std::size_t kDefaultTopK = 3;

struct Exclusion {
  NodeId id;
  std::string reason;
  friend bool operator==(const Exclusion&, const Exclusion&) = default;
};

struct DelayRanking {
  RankedClusters<NodeId> ranking;  // HigherIsCritical
  NodeCentrality delays;           // aggregated final delay per ranked router
  std::vector<Exclusion> excluded;
  std::size_t k = kDefaultTopK;

  bool is_excluded(const NodeId& id) const {
    return std::any_of(excluded.begin(), excluded.end(),
                       [&](const Exclusion& e) { return e.id == id; });
  }
};

/// Ranks routers by final delay aggregated across seeds. Routers adjacent to
/// the sink are excluded: their delay tracks the sink rather than the network.
inline DelayRanking rank_by_delay(std::span<const SimResult> results, const Topology& t,
                                  std::size_t k = kDefaultTopK,
                                  double tie_epsilon = kDefaultTieEpsilon,
                                  Aggregation aggregation = Aggregation::Mean) {
  if (results.empty()) throw Error("no simulation results to rank");
  if (k == 0) throw Error("k must be at least 1");
  const auto routers = t.nodes_with_role(NodeRole::Router);
  for (const auto& r : results) {
    bool same = r.topology_name == t.name() && r.routers.size() == routers.size();
    for (std::size_t i = 0; same && i < routers.size(); ++i) same = r.routers[i].id == t.id(routers[i]);
    if (!same) throw Error("simulation result does not match topology '" + t.name() + "'");
  }

  DelayRanking out;
  out.k = k;
  for (std::size_t i = 0; i < routers.size(); ++i) {
    const NodeId& id = t.id(routers[i]);
    if (t.sink_adjacent(routers[i])) {
      out.excluded.push_back({id, "sink-adjacent"});
      continue;
    }
    std::vector<double> v;
    for (const auto& r : results) v.push_back(r.routers[i].final_delay);
    double agg = 0.0;
    if (aggregation == Aggregation::Mean) {
      for (double x : v) agg += x;
      agg /= static_cast<double>(v.size());
    } else {
      std::sort(v.begin(), v.end());
      agg = v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    }
    out.delays.keys.push_back(id);
    out.delays.values.push_back(agg);
  }
  if (out.delays.size() == 0) throw Error("every router is sink-adjacent; nothing to rank");
  out.ranking = rank_with_ties(out.delays, Direction::HigherIsCritical, tie_epsilon);
  return out;
}

// Router score derived from link scores: the largest score among a router's
// incident links.
inline NodeCentrality router_scores_from_edges(const EdgeCentrality& edges, const Topology& t) {
  NodeCentrality out;
  for (NodeIndex r : t.nodes_with_role(NodeRole::Router)) {
    double best = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges.keys[e].u == t.id(r) || edges.keys[e].v == t.id(r)) best = std::max(best, edges.values[e]);
    out.keys.push_back(t.id(r));
    out.values.push_back(best);
  }
  return out;
}

/// Membership weight of each key in the top-k of a clustered ranking. Whole
/// clusters inside the first k positions weigh 1; the cluster straddling
/// position k shares the remaining slots equally among its members.
template <class Key>
std::map<Key, double> top_k_weights(const RankedClusters<Key>& r, std::size_t k) {
  std::map<Key, double> w;
  std::size_t used = 0;
  for (const auto& c : r.clusters) {
    if (used >= k) break;
    const std::size_t room = k - used;
    const double share = c.members.size() <= room
                             ? 1.0
                             : static_cast<double>(room) / static_cast<double>(c.members.size());
    for (const auto& m : c.members) w[m] = share;
    used += std::min(room, c.members.size());
  }
  return w;
}

template <class Key>
RankedClusters<Key> restrict_ranking(const RankedClusters<Key>& r, const std::set<Key>& keep) {
  RankedClusters<Key> out;
  out.direction = r.direction;
  for (const auto& c : r.clusters) {
    Cluster<Key> nc{static_cast<int>(out.clusters.size()) + 1, {}, c.value};
    for (const auto& m : c.members)
      if (keep.contains(m)) nc.members.push_back(m);
    if (!nc.members.empty()) out.clusters.push_back(std::move(nc));
  }
  return out;
}

/// Mid-rank positions (ties share the average of the positions they span).
template <class Key>
std::map<Key, double> mid_ranks(const RankedClusters<Key>& r) {
  std::map<Key, double> out;
  double position = 1.0;
  for (const auto& c : r.clusters) {
    const double m = static_cast<double>(c.members.size());
    for (const auto& key : c.members) out[key] = position + (m - 1.0) / 2.0;
    position += m;
  }
  return out;
}

/// Spearman correlation with mid-ranks over keys ranked by both sides;
/// nullopt when either side has no spread.
template <class Key>
std::optional<double> spearman(const RankedClusters<Key>& a, const RankedClusters<Key>& b) {
  auto ra = mid_ranks(a), rb = mid_ranks(b);
  std::set<Key> common;
  for (const auto& [key, _] : ra)
    if (rb.contains(key)) common.insert(key);
  if (common.size() < 2) return std::nullopt;
  auto ca = mid_ranks(restrict_ranking(a, common));
  auto cb = mid_ranks(restrict_ranking(b, common));
  double ma = 0, mb = 0;
  for (const auto& key : common) {
    ma += ca[key];
    mb += cb[key];
  }
  ma /= static_cast<double>(common.size());
  mb /= static_cast<double>(common.size());
  double sab = 0, saa = 0, sbb = 0;
  for (const auto& key : common) {
    const double da = ca[key] - ma, db = cb[key] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

template <class Key>
double overlap_at_k(const RankedClusters<Key>& a, const RankedClusters<Key>& b, std::size_t k) {
  auto wa = top_k_weights(a, k), wb = top_k_weights(b, k);
  double shared = 0.0;
  for (const auto& [key, w] : wa)
    if (auto it = wb.find(key); it != wb.end()) shared += std::min(w, it->second);
  return shared / static_cast<double>(k);
}

struct ComparisonRow {
  std::string metric;
  std::size_t k = 0;
  double overlap = 0.0;
  std::optional<double> spearman;
  std::vector<NodeId> metric_topk;
  std::vector<NodeId> delay_topk;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::vector<Exclusion> excluded;
};

template <class Key>
std::vector<Key> top_k_members(const RankedClusters<Key>& r, std::size_t k) {
  std::vector<Key> out;
  for (const auto& c : r.clusters) {
    if (out.size() >= k) break;
    out.insert(out.end(), c.members.begin(), c.members.end());
  }
  return out;
}

/// Compares a metric ranking against a delay ranking over the routers the
/// delay ranking covers (sink-adjacent routers are never part of it).
inline ComparisonRow compare_rankings(const RankedClusters<NodeId>& metric_ranks,
                                      const DelayRanking& delay_rank, std::size_t k,
                                      std::string metric_name = {}) {
  if (k == 0) throw Error("k must be at least 1");
  std::set<NodeId> universe;
  for (const auto& c : delay_rank.ranking.clusters) universe.insert(c.members.begin(), c.members.end());
  if (k > universe.size())
    throw Error("k=" + std::to_string(k) + " exceeds the " + std::to_string(universe.size()) +
                " ranked routers");
  auto metric = restrict_ranking(metric_ranks, universe);
  if (metric.clusters.empty()) throw Error("metric ranking shares no routers with delay ranking");

  ComparisonRow row;
  row.metric = std::move(metric_name);
  row.k = k;
  row.overlap = overlap_at_k(metric, delay_rank.ranking, k);
  row.spearman = spearman(metric, delay_rank.ranking);
  row.metric_topk = top_k_members(metric, k);
  row.delay_topk = top_k_members(delay_rank.ranking, k);
  return row;
}

}  // namespace gridsim
