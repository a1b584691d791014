// Copyright 2026 The HAGS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "hags/errors.hpp"

namespace hags {

using NodeId = int;

/// Role of a host in the attack model.
enum class NodeKind { kEntry, kIntermediate, kTarget };

/// Precondition logic for compromising a node. Only OR is supported by
/// this attack model: a single compromised predecessor suffices.
enum class NodeType { kOr, kAnd };

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::kEntry: return "entry";
    case NodeKind::kIntermediate: return "intermediate";
    case NodeKind::kTarget: return "target";
  }
  return "?";
}

struct Node {
  NodeId id = 0;
  double value = 0.0;  // importance units; 0 for entry nodes
  NodeKind kind = NodeKind::kIntermediate;
  NodeType type = NodeType::kOr;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Directed exploit-reachability relation between two hosts.
struct Edge {
  NodeId src = 0;
  NodeId dst = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A pure attacker action: a simple entry->target node sequence.
struct AttackPath {
  std::vector<NodeId> nodes;

  std::size_t length_in_edges() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  bool contains(NodeId id) const {
    return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
  }

  friend auto operator<=>(const AttackPath&, const AttackPath&) = default;
};

/// Immutable directed attack graph with per-node values and designated
/// entry/target subsets. All mutating operations return a new graph.
class AttackGraph {
 public:
  AttackGraph() = default;

  /// Validates and builds a graph. Node kinds are assigned from the entry
  /// and target id lists; every other node is intermediate.
  ///
  /// Rejected inputs: duplicate node ids, duplicate or dangling or
  /// self-loop edges, empty or overlapping entry/target sets, AND-typed
  /// nodes, nonzero entry values, non-positive intermediate/target values.
  static AttackGraph build(std::vector<Node> nodes, std::vector<Edge> edges,
                           const std::vector<NodeId>& entries,
                           const std::vector<NodeId>& targets);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<NodeId>& entry_ids() const { return entry_ids_; }
  const std::vector<NodeId>& target_ids() const { return target_ids_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_node(NodeId id) const { return index_.count(id) != 0; }
  const Node& node(NodeId id) const { return nodes_[index_of(id)]; }
  double value(NodeId id) const { return node(id).value; }
  NodeKind kind(NodeId id) const { return node(id).kind; }

  /// Total degree (in + out); the mobility model treats connectivity as
  /// undirected.
  int degree(NodeId id) const { return degree_[index_of(id)]; }

  /// Outgoing neighbors in ascending id order.
  const std::vector<NodeId>& out_neighbors(NodeId id) const {
    return out_adj_[index_of(id)];
  }

  /// Maximum node value over the whole graph.
  double max_value() const { return max_value_; }
  /// Maximum total degree over the whole graph.
  int max_degree() const { return max_degree_; }

  /// Intermediate node ids in ascending order (the mobile subset).
  std::vector<NodeId> intermediate_ids() const;

  bool has_edge(NodeId src, NodeId dst) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{src, dst});
  }

  friend bool operator==(const AttackGraph& a, const AttackGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t index_of(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end())
      throw ValidationError("unknown node id " + std::to_string(id));
    return it->second;
  }

  std::vector<Node> nodes_;             // sorted by id
  std::vector<Edge> edges_;             // sorted by (src, dst)
  std::vector<NodeId> entry_ids_;       // sorted
  std::vector<NodeId> target_ids_;      // sorted
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<NodeId>> out_adj_;
  std::vector<int> degree_;
  double max_value_ = 0.0;
  int max_degree_ = 0;
};

inline AttackGraph AttackGraph::build(std::vector<Node> nodes,
                                      std::vector<Edge> edges,
                                      const std::vector<NodeId>& entries,
                                      const std::vector<NodeId>& targets) {
  if (entries.empty()) throw ValidationError("entry set is empty");
  if (targets.empty()) throw ValidationError("target set is empty");

  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].id == nodes[i - 1].id)
      throw ValidationError("duplicate node id " + std::to_string(nodes[i].id));

  AttackGraph g;
  g.nodes_ = std::move(nodes);
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
    if (g.nodes_[i].id < 0)
      throw ValidationError("negative node id " + std::to_string(g.nodes_[i].id));
    if (g.nodes_[i].type != NodeType::kOr)
      throw ValidationError("unsupported node type: AND (node " +
                            std::to_string(g.nodes_[i].id) + ")");
    g.index_.emplace(g.nodes_[i].id, i);
  }

  auto mark = [&](const std::vector<NodeId>& ids, NodeKind kind) {
    for (NodeId id : ids) {
      auto it = g.index_.find(id);
      if (it == g.index_.end())
        throw ValidationError("entry/target id " + std::to_string(id) +
                              " is not a node");
      Node& n = g.nodes_[it->second];
      if (kind == NodeKind::kTarget && n.kind == NodeKind::kEntry)
        throw ValidationError("node " + std::to_string(id) +
                              " is both entry and target");
      n.kind = kind;
    }
  };
  for (Node& n : g.nodes_) n.kind = NodeKind::kIntermediate;
  mark(entries, NodeKind::kEntry);
  mark(targets, NodeKind::kTarget);

  for (const Node& n : g.nodes_) {
    if (n.kind == NodeKind::kEntry) {
      if (n.value != 0.0)
        throw ValidationError("entry node " + std::to_string(n.id) +
                              " must have value 0");
    } else if (!(n.value > 0.0)) {
      throw ValidationError("node " + std::to_string(n.id) +
                            " must have positive value");
    }
  }

  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.src == e.dst)
      throw ValidationError("self-loop edge at node " + std::to_string(e.src));
    if (!g.index_.count(e.src) || !g.index_.count(e.dst))
      throw ValidationError("edge " + std::to_string(e.src) + "->" +
                            std::to_string(e.dst) + " has a dangling endpoint");
    if (i > 0 && edges[i] == edges[i - 1])
      throw ValidationError("duplicate edge " + std::to_string(e.src) + "->" +
                            std::to_string(e.dst));
  }
  g.edges_ = std::move(edges);

  g.out_adj_.assign(g.nodes_.size(), {});
  g.degree_.assign(g.nodes_.size(), 0);
  for (const Edge& e : g.edges_) {
    g.out_adj_[g.index_.at(e.src)].push_back(e.dst);
    ++g.degree_[g.index_.at(e.src)];
    ++g.degree_[g.index_.at(e.dst)];
  }
  // edges_ sorted by (src, dst) => adjacency lists come out ascending

  for (const Node& n : g.nodes_) {
    if (n.kind == NodeKind::kEntry) g.entry_ids_.push_back(n.id);
    if (n.kind == NodeKind::kTarget) g.target_ids_.push_back(n.id);
    g.max_value_ = std::max(g.max_value_, n.value);
  }
  for (int d : g.degree_) g.max_degree_ = std::max(g.max_degree_, d);
  return g;
}

inline std::vector<NodeId> AttackGraph::intermediate_ids() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes_)
    if (n.kind == NodeKind::kIntermediate) out.push_back(n.id);
  return out;
}

/// All simple entry->target paths in lexicographic node-sequence order.
/// Targets are absorbing: a path ends at the first target it reaches.
/// Deterministic; returns an empty list when no target is reachable.
inline std::vector<AttackPath> enumerate_attack_paths(const AttackGraph& g) {
  std::vector<AttackPath> result;
  std::vector<NodeId> stack;
  std::unordered_map<NodeId, bool> on_path;

  // Entry ids and adjacency lists are ascending, so depth-first order is
  // lexicographic order of the emitted sequences.
  auto dfs = [&](auto&& self, NodeId u) -> void {
    stack.push_back(u);
    on_path[u] = true;
    if (g.kind(u) == NodeKind::kTarget) {
      result.push_back(AttackPath{stack});
    } else {
      for (NodeId v : g.out_neighbors(u))
        if (!on_path[v]) self(self, v);
    }
    on_path[u] = false;
    stack.pop_back();
  };
  for (NodeId e : g.entry_ids()) dfs(dfs, e);
  return result;
}

/// Returns a copy of `g` without node `u` and without every edge incident
/// to it. Only intermediate nodes are removable; entry and target nodes
/// persist across mobility.
inline AttackGraph remove_node(const AttackGraph& g, NodeId u) {
  if (!g.has_node(u))
    throw ValidationError("cannot remove unknown node " + std::to_string(u));
  if (g.kind(u) != NodeKind::kIntermediate)
    throw ValidationError("cannot remove " + std::string(to_string(g.kind(u))) +
                          " node " + std::to_string(u) +
                          ": only intermediate nodes are mobile");

  std::vector<Node> nodes;
  nodes.reserve(g.node_count() - 1);
  for (const Node& n : g.nodes())
    if (n.id != u) nodes.push_back(n);

  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges())
    if (e.src != u && e.dst != u) edges.push_back(e);

  std::vector<NodeId> entries = g.entry_ids();
  std::vector<NodeId> targets = g.target_ids();
  return AttackGraph::build(std::move(nodes), std::move(edges), entries, targets);
}

}  // namespace hags
