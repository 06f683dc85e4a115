#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridsim/error.hpp"

namespace gridsim {

using NodeId = std::string;
using NodeIndex = std::size_t;

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// Orders embedded digit runs numerically, so "2" < "10" and "G2" < "G10".
inline bool natural_less(std::string_view a, std::string_view b) {
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t i0 = i, j0 = j;
      while (i < a.size() && is_digit(a[i])) ++i;
      while (j < b.size() && is_digit(b[j])) ++j;
      auto da = a.substr(i0, i - i0), db = b.substr(j0, j - j0);
      while (da.size() > 1 && da.front() == '0') da.remove_prefix(1);
      while (db.size() > 1 && db.front() == '0') db.remove_prefix(1);
      if (da.size() != db.size()) return da.size() < db.size();
      if (da != db) return da < db;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

// Unordered node pair, stored with u before v in natural order.
struct EdgeKey {
  NodeId u;
  NodeId v;

  EdgeKey() = default;
  EdgeKey(NodeId a, NodeId b) : u(std::move(a)), v(std::move(b)) {
    if (natural_less(v, u)) std::swap(u, v);
  }

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};

inline std::string to_string(const EdgeKey& e) { return e.u + "-" + e.v; }
inline const std::string& to_string(const NodeId& id) { return id; }

inline bool natural_less(const EdgeKey& a, const EdgeKey& b) {
  if (a.u != b.u) return natural_less(a.u, b.u);
  return natural_less(a.v, b.v);
}

// Simple undirected graph with string labels. Adjacency lists keep edge
// declaration order, which makes every traversal deterministic.
class Graph {
 public:
  Graph() = default;

  NodeIndex add_node(NodeId id) {
    if (index_.contains(id)) throw ValidationError("duplicate node '" + id + "'");
    index_.emplace(id, ids_.size());
    ids_.push_back(std::move(id));
    adjacency_.emplace_back();
    return ids_.size() - 1;
  }

  void add_edge(NodeIndex a, NodeIndex b) {
    if (a >= size() || b >= size()) throw ValidationError("edge endpoint out of range");
    if (a == b) throw ValidationError("self-loop on node '" + ids_[a] + "'");
    if (adjacent(a, b))
      throw ValidationError("duplicate edge " + ids_[a] + "-" + ids_[b]);
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
    edges_.emplace_back(a, b);
  }

  void add_edge(std::string_view a, std::string_view b) {
    add_edge(require(a), require(b));
  }

  std::size_t size() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const NodeId& id(NodeIndex i) const { return ids_.at(i); }
  const std::vector<NodeId>& ids() const { return ids_; }
  const std::vector<NodeIndex>& neighbors(NodeIndex i) const { return adjacency_.at(i); }
  const std::vector<std::pair<NodeIndex, NodeIndex>>& edges() const { return edges_; }

  EdgeKey edge_key(std::size_t e) const {
    return {ids_[edges_[e].first], ids_[edges_[e].second]};
  }

  std::optional<NodeIndex> find(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  NodeIndex require(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw ValidationError("unknown node '" + std::string(id) + "'");
  }

  bool adjacent(NodeIndex a, NodeIndex b) const {
    const auto& n = adjacency_[a];
    return std::find(n.begin(), n.end(), b) != n.end();
  }

  bool connected() const {
    if (ids_.empty()) return true;
    auto d = bfs_distances(0);
    return std::none_of(d.begin(), d.end(), [](std::size_t x) { return x == kUnreachable; });
  }

  // Hop distances from source; kUnreachable where no path exists.
  std::vector<std::size_t> bfs_distances(NodeIndex source) const {
    std::vector<std::size_t> dist(size(), kUnreachable);
    std::queue<NodeIndex> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      NodeIndex v = frontier.front();
      frontier.pop();
      for (NodeIndex w : adjacency_[v]) {
        if (dist[w] == kUnreachable) {
          dist[w] = dist[v] + 1;
          frontier.push(w);
        }
      }
    }
    return dist;
  }

 private:
  std::vector<NodeId> ids_;
  std::map<NodeId, NodeIndex, std::less<>> index_;
  std::vector<std::vector<NodeIndex>> adjacency_;
  std::vector<std::pair<NodeIndex, NodeIndex>> edges_;
};

}  // namespace gridsim
