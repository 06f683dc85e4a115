#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridsim/error.hpp"
#include "gridsim/graph.hpp"

namespace gridsim {

enum class NodeRole { Generator, Router, Sink };

inline std::string_view to_string(NodeRole r) {
  switch (r) {
    case NodeRole::Generator: return "generator";
    case NodeRole::Router: return "router";
    case NodeRole::Sink: return "sink";
  }
  return "?";
}

inline std::optional<NodeRole> parse_role(std::string_view s) {
  if (s == "generator") return NodeRole::Generator;
  if (s == "router") return NodeRole::Router;
  if (s == "sink") return NodeRole::Sink;
  return std::nullopt;
}

struct NodeSpec {
  NodeId id;
  NodeRole role;
};

/// Communication topology: generators (traffic sources), routers and a single
/// sink joined by undirected unit-length links.
///
/// Instances are validated on construction and immutable afterwards, so one
/// topology can be shared by any number of concurrent simulation runs.
class Topology {
 public:
  Topology(std::string name, std::vector<NodeSpec> nodes,
           const std::vector<std::pair<NodeId, NodeId>>& edges)
      : name_(std::move(name)) {
    for (auto& n : nodes) {
      if (n.id.empty() || n.id.find_first_of(", \t\r\n#") != std::string::npos)
        throw ValidationError("invalid node id '" + n.id + "'");
      graph_.add_node(n.id);
      roles_.push_back(n.role);
    }
    for (const auto& [a, b] : edges) {
      auto ia = graph_.find(a);
      auto ib = graph_.find(b);
      if (!ia || !ib)
        throw ValidationError("edge " + a + "-" + b + " references unknown node '" +
                              (!ia ? a : b) + "'");
      graph_.add_edge(*ia, *ib);
    }
    validate();
  }

  const std::string& name() const { return name_; }
  const Graph& graph() const { return graph_; }
  std::size_t size() const { return graph_.size(); }

  NodeRole role(NodeIndex i) const { return roles_.at(i); }
  NodeRole role(std::string_view id) const { return roles_.at(graph_.require(id)); }
  const NodeId& id(NodeIndex i) const { return graph_.id(i); }

  NodeIndex sink() const { return sink_; }

  std::vector<NodeIndex> nodes_with_role(NodeRole r) const {
    std::vector<NodeIndex> out;
    for (NodeIndex i = 0; i < size(); ++i)
      if (roles_[i] == r) out.push_back(i);
    return out;
  }

  std::vector<NodeId> ids_with_role(NodeRole r) const {
    std::vector<NodeId> out;
    for (NodeIndex i : nodes_with_role(r)) out.push_back(id(i));
    return out;
  }

  bool sink_adjacent(NodeIndex i) const { return graph_.adjacent(i, sink_); }

  friend bool operator==(const Topology& a, const Topology& b) {
    if (a.size() != b.size() || a.graph_.edge_count() != b.graph_.edge_count()) return false;
    for (NodeIndex i = 0; i < a.size(); ++i) {
      auto j = b.graph_.find(a.id(i));
      if (!j || a.role(i) != b.role(*j)) return false;
    }
    auto edge_set = [](const Topology& t) {
      std::vector<EdgeKey> keys;
      for (std::size_t e = 0; e < t.graph_.edge_count(); ++e) keys.push_back(t.graph_.edge_key(e));
      std::sort(keys.begin(), keys.end());
      return keys;
    };
    return edge_set(a) == edge_set(b);
  }

 private:
  void validate() {
    std::size_t sinks = 0, generators = 0, routers = 0;
    for (NodeIndex i = 0; i < size(); ++i) {
      switch (roles_[i]) {
        case NodeRole::Sink:
          ++sinks;
          sink_ = i;
          break;
        case NodeRole::Generator: ++generators; break;
        case NodeRole::Router: ++routers; break;
      }
    }
    if (sinks == 0) throw ValidationError("no sink");
    if (sinks > 1) throw ValidationError("multiple sinks");
    if (generators == 0) throw ValidationError("no generator");
    if (routers == 0) throw ValidationError("no router");

    for (NodeIndex i = 0; i < size(); ++i) {
      if (roles_[i] == NodeRole::Router) continue;
      const auto& nbrs = graph_.neighbors(i);
      if (nbrs.empty())
        throw ValidationError(std::string(to_string(roles_[i])) + " '" + id(i) + "' has no links");
      for (NodeIndex j : nbrs) {
        if (roles_[j] != NodeRole::Router)
          throw ValidationError(std::string(to_string(roles_[i])) + " '" + id(i) +
                                "' linked to non-router '" + id(j) + "'");
      }
    }
    if (!graph_.connected()) throw ValidationError("topology is not connected");
  }

  std::string name_;
  Graph graph_;
  std::vector<NodeRole> roles_;
  NodeIndex sink_ = 0;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Parses the line-oriented topology format:
///
///     # comment
///     node <id> <generator|router|sink>
///     edge <id> <id>
///
/// Node declaration order is preserved. Syntax errors carry the line number;
/// structural problems surface as ValidationError naming the element.
inline Topology parse_topology(std::string_view text, std::string name = "topology") {
  std::vector<NodeSpec> nodes;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = detail::split_ws(line);
    if (tok.empty()) continue;

    if (tok[0] == "node") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'node <id> <role>'");
      auto role = parse_role(tok[2]);
      if (!role) throw ParseError(line_no, "unknown role '" + std::string(tok[2]) + "'");
      nodes.push_back({std::string(tok[1]), *role});
    } else if (tok[0] == "edge") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'edge <id> <id>'");
      edges.emplace_back(std::string(tok[1]), std::string(tok[2]));
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(tok[0]) + "'");
    }
  }
  return Topology(std::move(name), std::move(nodes), edges);
}

inline std::string serialize_topology(const Topology& t) {
  std::ostringstream out;
  out << "# " << t.name() << "\n";
  for (NodeIndex i = 0; i < t.size(); ++i)
    out << "node " << t.id(i) << " " << to_string(t.role(i)) << "\n";
  for (const auto& [a, b] : t.graph().edges()) out << "edge " << t.id(a) << " " << t.id(b) << "\n";
  return out.str();
}

inline Topology load_topology_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open topology file '" + path + "': file not found or unreadable");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.rfind('.'); dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
  return parse_topology(buf.str(), stem);
}

}  // namespace gridsim
