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
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hags/attack_graph.hpp"
#include "hags/errors.hpp"
#include "hags/matrix_game.hpp"

namespace hags {

/// Which edges may host a honeypot.
enum class EligibleEdgeMode {
  kPathEdges,  // edges on at least one attack path (default)
  kAllEdges,
};

/// All tunable model parameters. Defaults give the standard configuration:
/// unit capture/escape weights, half-unit honeypot cost, light attack cost,
/// one honeypot, gamma 0.9, mu 0.2, two-step look-ahead.
struct GameParams {
  double cap = 1.0;            // capture reward weight
  double esc = 1.0;            // escape reward weight
  double defender_cost = 0.5;  // cost per installed honeypot
  double attacker_cost = 0.1;  // attacker cost per traversed edge
  int budget = 1;              // honeypot budget H
  double gamma = 0.9;          // discount factor
  double mu = 0.2;             // self-transition (no-mobility) probability
  int depth = 2;               // look-ahead depth in node removals
  double tol_vi = 1e-6;        // value-iteration stopping tolerance
  double tol_lp = 1e-9;        // equilibrium certificate tolerance
  int max_sweeps = 500;        // value-iteration sweep cap
  EligibleEdgeMode eligible = EligibleEdgeMode::kPathEdges;
  int threads = 1;             // worker cap for per-state solves

  void validate() const {
    if (cap < 0 || esc < 0 || defender_cost < 0 || attacker_cost < 0)
      throw ValidationError("reward weights and costs must be non-negative");
    if (budget < 1) throw ValidationError("honeypot budget must be >= 1");
    if (!(gamma > 0.0 && gamma < 1.0))
      throw ValidationError("gamma must lie in (0, 1)");
    if (!(mu >= 0.0 && mu < 1.0)) throw ValidationError("mu must lie in [0, 1)");
    if (depth < 0) throw ValidationError("look-ahead depth must be >= 0");
    if (!(tol_vi > 0.0) || !(tol_lp > 0.0))
      throw ValidationError("tolerances must be positive");
    if (max_sweeps < 1) throw ValidationError("sweep cap must be >= 1");
    if (threads < 1) throw ValidationError("thread cap must be >= 1");
  }
};

/// A pure defender action: the monitored edge set, at most H edges.
struct HoneypotAllocation {
  std::vector<Edge> edges;  // sorted by (src, dst)

  bool monitors(const Edge& e) const {
    return std::binary_search(edges.begin(), edges.end(), e);
  }

  friend auto operator<=>(const HoneypotAllocation&, const HoneypotAllocation&) = default;
};

/// Edges a honeypot may occupy, ascending (src, dst) order.
inline std::vector<Edge> eligible_edges(const AttackGraph& g,
                                        std::span<const AttackPath> paths,
                                        EligibleEdgeMode mode) {
  if (mode == EligibleEdgeMode::kAllEdges) return g.edges();
  std::vector<Edge> out;
  for (const AttackPath& p : paths)
    for (std::size_t i = 1; i < p.nodes.size(); ++i)
      out.push_back(Edge{p.nodes[i - 1], p.nodes[i]});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// All honeypot allocations over the eligible edges with size <= H,
/// the empty allocation first, then by size and lexicographic edge index.
inline std::vector<HoneypotAllocation> defender_action_space(
    const AttackGraph& g, std::span<const AttackPath> paths,
    const GameParams& params) {
  params.validate();
  const std::vector<Edge> pool = eligible_edges(g, paths, params.eligible);
  const std::size_t h = std::min<std::size_t>(params.budget, pool.size());

  std::vector<HoneypotAllocation> actions;
  actions.push_back(HoneypotAllocation{});  // declining deployment is legal
  std::vector<std::size_t> combo;
  for (std::size_t k = 1; k <= h; ++k) {
    combo.resize(k);
    for (std::size_t i = 0; i < k; ++i) combo[i] = i;
    while (true) {
      HoneypotAllocation a;
      a.edges.reserve(k);
      for (std::size_t idx : combo) a.edges.push_back(pool[idx]);
      actions.push_back(std::move(a));
      // next lexicographic k-combination of indices
      std::size_t i = k;
      while (i > 0 && combo[i - 1] == pool.size() - k + i - 1) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  return actions;
}

inline std::vector<HoneypotAllocation> defender_action_space(
    const AttackGraph& g, const GameParams& params) {
  const std::vector<AttackPath> paths = enumerate_attack_paths(g);
  return defender_action_space(g, paths, params);
}

/// The attacker's pure actions: every attack path of the graph.
inline std::vector<AttackPath> attacker_action_space(const AttackGraph& g) {
  return enumerate_attack_paths(g);
}

namespace detail {

/// One-shot defender reward, no action validation. A path node counts as
/// captured iff the edge by which the path reaches it is monitored; the
/// start node is reached without an exploit and contributes nothing.
inline double stage_reward_unchecked(const AttackGraph& g,
                                     const HoneypotAllocation& a_d,
                                     const AttackPath& a_a,
                                     const GameParams& params) {
  double r = 0.0;
  for (std::size_t i = 1; i < a_a.nodes.size(); ++i) {
    const NodeId node = a_a.nodes[i];
    const Edge incoming{a_a.nodes[i - 1], node};
    if (a_d.monitors(incoming))
      r += params.cap * g.value(node);
    else
      r -= params.esc * g.value(node);
  }
  r -= params.defender_cost * static_cast<double>(a_d.edges.size());
  r += params.attacker_cost * static_cast<double>(a_a.length_in_edges());
  return r;
}

inline void validate_actions(const AttackGraph& g, const HoneypotAllocation& a_d,
                             const AttackPath& a_a, const GameParams& params) {
  if (static_cast<int>(a_d.edges.size()) > params.budget)
    throw ValidationError("allocation exceeds honeypot budget");
  for (std::size_t i = 1; i < a_d.edges.size(); ++i)
    if (!(a_d.edges[i - 1] < a_d.edges[i]))
      throw ValidationError("allocation edges must be sorted and distinct");
  for (const Edge& e : a_d.edges)
    if (!g.has_edge(e.src, e.dst))
      throw ValidationError("allocation edge " + std::to_string(e.src) + "->" +
                            std::to_string(e.dst) + " is not in the graph");

  if (a_a.nodes.size() < 2) throw ValidationError("attack path too short");
  if (g.kind(a_a.nodes.front()) != NodeKind::kEntry)
    throw ValidationError("attack path must start at an entry node");
  if (g.kind(a_a.nodes.back()) != NodeKind::kTarget)
    throw ValidationError("attack path must end at a target node");
  std::vector<NodeId> seen = a_a.nodes;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw ValidationError("attack path revisits a node");
  for (std::size_t i = 1; i < a_a.nodes.size(); ++i)
    if (!g.has_edge(a_a.nodes[i - 1], a_a.nodes[i]))
      throw ValidationError("attack path uses a missing edge");
}

}  // namespace detail

/// Defender reward R_d for one action pair: captured node values weighted
/// by cap minus escaped node values weighted by esc, minus the per-honeypot
/// cost, plus the attacker's traversal cost (which the defender gains in
/// the zero-sum convention).
inline double stage_reward(const AttackGraph& g, const HoneypotAllocation& a_d,
                           const AttackPath& a_a, const GameParams& params) {
  params.validate();
  detail::validate_actions(g, a_d, a_a, params);
  return detail::stage_reward_unchecked(g, a_d, a_a, params);
}

/// The one-shot game at a fixed topology: defender rows, attacker columns,
/// entries are defender payoffs (attacker payoff is the negation).
struct PayoffMatrix {
  std::vector<HoneypotAllocation> rows;
  std::vector<AttackPath> cols;
  Matrix values;
};

inline PayoffMatrix build_payoff_matrix(const AttackGraph& g,
                                        std::span<const AttackPath> paths,
                                        const GameParams& params) {
  if (paths.empty())
    throw ValidationError(
        "no attack path exists; treat this state as terminal instead");
  PayoffMatrix pm;
  pm.cols.assign(paths.begin(), paths.end());
  pm.rows = defender_action_space(g, paths, params);
  pm.values = Matrix(pm.rows.size(), pm.cols.size());
  for (std::size_t r = 0; r < pm.rows.size(); ++r)
    for (std::size_t c = 0; c < pm.cols.size(); ++c)
      pm.values(r, c) =
          detail::stage_reward_unchecked(g, pm.rows[r], pm.cols[c], params);
  return pm;
}

inline PayoffMatrix build_payoff_matrix(const AttackGraph& g,
                                        const GameParams& params) {
  const std::vector<AttackPath> paths = enumerate_attack_paths(g);
  return build_payoff_matrix(g, paths, params);
}

}  // namespace hags
