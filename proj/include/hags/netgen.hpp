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
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hags/attack_graph.hpp"
#include "hags/errors.hpp"
#include "hags/rng.hpp"

namespace hags {

/// Seven-node fixture: entry 1, intermediates {2,3,4,6}, targets {5,7}.
/// Four attack paths; removing nodes 4 and 6 leaves two, both into node 5.
inline AttackGraph gen_fig1_tree() {
  std::vector<Node> nodes{
      {1, 0.0}, {2, 15.0}, {3, 25.0}, {4, 20.0}, {5, 80.0}, {6, 30.0}, {7, 60.0}};
  std::vector<Edge> edges{{1, 2}, {1, 3}, {1, 4}, {2, 5},
                          {3, 5}, {4, 5}, {3, 6}, {6, 7}};
  return AttackGraph::build(std::move(nodes), std::move(edges), {1}, {5, 7});
}

/// Twenty-node reference network. Entries {0,1,2}, targets {18,19,20}
/// (id 17 unused), fourteen intermediates. Entry 0 reaches the targets
/// through two four-hop branches giving exactly the four canonical paths
///   [0,5,11,15,18] [0,5,11,15,19] [0,6,12,16,19] [0,6,12,16,20]
/// and ten distinct path edges, so the defender has ten single-edge
/// placements under H=1. Entries 1 and 2 feed a side cluster that never
/// reaches a target. The wiring is frozen; only the intermediate values
/// depend on the seed (uniform in [10, 50]; targets are worth 100).
inline AttackGraph gen_reference_20(std::uint64_t seed = 20) {
  std::mt19937_64 rng(mix_seed(seed));
  std::vector<Node> nodes;
  for (NodeId id : {0, 1, 2}) nodes.push_back({id, 0.0});
  for (NodeId id = 3; id <= 16; ++id)
    nodes.push_back({id, uniform_real(rng, 10.0, 50.0)});
  for (NodeId id : {18, 19, 20}) nodes.push_back({id, 100.0});

  std::vector<Edge> edges{
      // the two target-bound branches (the ten published placements)
      {0, 5}, {5, 11}, {11, 15}, {15, 18}, {15, 19},
      {0, 6}, {6, 12}, {12, 16}, {16, 19}, {16, 20},
      // mobile side cluster reachable from entries 1 and 2 only
      {1, 3}, {1, 4}, {2, 7}, {2, 8}, {3, 9}, {4, 9}, {4, 10},
      {7, 10}, {8, 10}, {9, 13}, {10, 14}, {13, 14}};
  return AttackGraph::build(std::move(nodes), std::move(edges), {0, 1, 2},
                            {18, 19, 20});
}

struct WattsStrogatzParams {
  int n = 100;          // node count
  int k = 4;            // nearest neighbors in the ring (k/2 per side)
  double p = 0.1;       // rewiring probability
  std::uint64_t seed = 1;
  int n_entry = 3;
  int n_target = 3;
};

namespace detail {

/// Undirected Watts-Strogatz edge set as unordered node pairs.
inline std::set<std::pair<int, int>> ws_undirected_edges(
    const WattsStrogatzParams& wp, std::mt19937_64& rng) {
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  std::set<std::pair<int, int>> edges;
  const int half = wp.k / 2;
  for (int i = 0; i < wp.n; ++i)
    for (int j = 1; j <= half; ++j) edges.insert(key(i, (i + j) % wp.n));

  // Rewire each ring edge's far endpoint with probability p.
  for (int j = 1; j <= half; ++j) {
    for (int i = 0; i < wp.n; ++i) {
      const auto old_edge = key(i, (i + j) % wp.n);
      if (uniform01(rng) >= wp.p) continue;
      const int w = static_cast<int>(uniform_index(rng, wp.n));
      if (w == i || edges.count(key(i, w))) continue;  // keep simple graph
      if (edges.erase(old_edge)) edges.insert(key(i, w));
    }
  }
  return edges;
}

}  // namespace detail

/// Watts-Strogatz attack graph: ring-lattice rewiring, then a directed
/// orientation away from the entry set (edges point from lower to higher
/// BFS layer; same-layer edges point from lower to higher id, which keeps
/// the graph acyclic). Targets are drawn from nodes a few BFS layers out
/// so entry->target paths stay short. Infeasible draws retry on the next
/// derived seed a bounded number of times.
inline AttackGraph gen_watts_strogatz(const WattsStrogatzParams& wp) {
  if (wp.n <= wp.k || wp.k < 2) throw ValidationError("require n > k >= 2");
  if (wp.p < 0.0 || wp.p > 1.0) throw ValidationError("require 0 <= p <= 1");
  if (wp.n_entry < 1 || wp.n_target < 1)
    throw ValidationError("need at least one entry and one target");
  if (wp.n_entry + wp.n_target > wp.n)
    throw ValidationError("more entries+targets than nodes");

  constexpr int kMaxAttempts = 32;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::mt19937_64 rng(derive_seed(wp.seed, attempt));
    auto undirected = detail::ws_undirected_edges(wp, rng);

    // entries: seeded sample without replacement
    std::vector<int> ids(wp.n);
    for (int i = 0; i < wp.n; ++i) ids[i] = i;
    for (int i = wp.n - 1; i > 0; --i)
      std::swap(ids[i], ids[uniform_index(rng, i + 1)]);
    std::vector<NodeId> entries(ids.begin(), ids.begin() + wp.n_entry);

    // BFS layers from the entry set over the undirected graph
    std::vector<std::vector<int>> adj(wp.n);
    for (const auto& [a, b] : undirected) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    const int inf = std::numeric_limits<int>::max();
    std::vector<int> layer(wp.n, inf);
    std::deque<int> queue;
    for (int e : entries) {
      layer[e] = 0;
      queue.push_back(e);
    }
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adj[u])
        if (layer[v] == inf) {
          layer[v] = layer[u] + 1;
          queue.push_back(v);
        }
    }

    // targets: a few layers out, so path enumeration stays tractable
    std::vector<int> candidates;
    for (int v = 0; v < wp.n; ++v)
      if (layer[v] >= 3 && layer[v] <= 4) candidates.push_back(v);
    if (static_cast<int>(candidates.size()) < wp.n_target) continue;
    for (int i = static_cast<int>(candidates.size()) - 1; i > 0; --i)
      std::swap(candidates[i], candidates[uniform_index(rng, i + 1)]);
    std::vector<NodeId> targets(candidates.begin(),
                                candidates.begin() + wp.n_target);
    std::sort(targets.begin(), targets.end());

    std::vector<Edge> edges;
    for (const auto& [a, b] : undirected) {
      const long la = layer[a] == inf ? static_cast<long>(wp.n) + a : layer[a];
      const long lb = layer[b] == inf ? static_cast<long>(wp.n) + b : layer[b];
      if (la < lb || (la == lb && a < b))
        edges.push_back({a, b});
      else
        edges.push_back({b, a});
    }

    std::vector<Node> nodes;
    std::sort(entries.begin(), entries.end());
    for (int v = 0; v < wp.n; ++v) {
      const bool is_entry = std::binary_search(entries.begin(), entries.end(), v);
      nodes.push_back({v, is_entry ? 0.0 : uniform_real(rng, 10.0, 50.0)});
    }

    AttackGraph g =
        AttackGraph::build(std::move(nodes), std::move(edges), entries, targets);
    if (!enumerate_attack_paths(g).empty()) return g;
  }
  throw ValidationError("no feasible Watts-Strogatz instance after " +
                        std::to_string(kMaxAttempts) + " attempts");
}

}  // namespace hags
