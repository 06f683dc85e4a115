#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gridsim/error.hpp"
#include "gridsim/rng.hpp"
#include "gridsim/topology.hpp"

namespace gridsim {

struct RouteEntry {
  NodeIndex neighbor;
  double probability;
};

// Per-router forwarding choices. Eligible neighbors of a router are its
// adjacent routers plus the sink; generators are never forwarding targets.
class RoutingTable {
 public:
  explicit RoutingTable(const Topology& t) : entries_(t.size()) {
    for (NodeIndex r : t.nodes_with_role(NodeRole::Router)) {
      std::vector<NodeIndex> eligible;
      for (NodeIndex n : t.graph().neighbors(r))
        if (t.role(n) != NodeRole::Generator) eligible.push_back(n);
      if (eligible.empty())
        throw ValidationError("router '" + t.id(r) + "' has no eligible forwarding neighbor");
      const double p = 1.0 / static_cast<double>(eligible.size());
      for (NodeIndex n : eligible) entries_[r].push_back({n, p});
      routers_.push_back(r);
    }
  }

  const std::vector<RouteEntry>& entries(NodeIndex router) const { return entries_.at(router); }
  const std::vector<NodeIndex>& routers() const { return routers_; }
  bool has(NodeIndex router) const { return router < entries_.size() && !entries_[router].empty(); }

 private:
  std::vector<std::vector<RouteEntry>> entries_;
  std::vector<NodeIndex> routers_;
};

inline RoutingTable build_routing_table(const Topology& t) { return RoutingTable(t); }

/// Picks the next hop for a packet at `router`. The link the packet came in on
/// is excluded; when that leaves nothing (a leaf router) the packet goes back
/// out the arrival link. `uniform` must lie in [0, 1).
inline NodeIndex next_hop(const RoutingTable& rt, NodeIndex router,
                          std::optional<NodeIndex> arrival_link, double uniform) {
  if (!rt.has(router)) throw ValidationError("node has no routing entries");
  const auto& entries = rt.entries(router);
  std::size_t candidates = entries.size();
  if (arrival_link) {
    for (const auto& e : entries)
      if (e.neighbor == *arrival_link) --candidates;
    if (candidates == 0) return *arrival_link;
  }
  auto pick = static_cast<std::size_t>(uniform * static_cast<double>(candidates));
  if (pick >= candidates) pick = candidates - 1;
  for (const auto& e : entries) {
    if (arrival_link && e.neighbor == *arrival_link) continue;
    if (pick-- == 0) return e.neighbor;
  }
  return entries.back().neighbor;  // unreachable
}

inline NodeIndex next_hop(const RoutingTable& rt, NodeIndex router,
                          std::optional<NodeIndex> arrival_link, Rng& rng) {
  return next_hop(rt, router, arrival_link, rng.uniform());
}

}  // namespace gridsim
