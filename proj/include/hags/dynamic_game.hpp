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
#include <chrono>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hags/attack_graph.hpp"
#include "hags/errors.hpp"
#include "hags/matrix_game.hpp"
#include "hags/stage_game.hpp"

namespace hags {

/// Which intermediate nodes may leave the network from a given state.
enum class StateSpaceMode {
  kFull,     // any intermediate node
  kCompact,  // only intermediate nodes on at least one current attack path
};

inline const char* to_string(StateSpaceMode m) {
  return m == StateSpaceMode::kFull ? "full" : "compact";
}

/// One topology state of the Markov game. States are identified by their
/// canonical sorted removed-node set; depth equals the number of removals.
struct GameState {
  int id = 0;
  AttackGraph graph;
  std::vector<NodeId> removed;      // sorted
  std::vector<AttackPath> paths;    // attacker action space, cached
  int depth = 0;
  bool terminal = false;
};

/// One outgoing transition: the node that leaves (or kNoMobility for the
/// self-loop) and the resulting state.
struct Transition {
  static constexpr NodeId kNoMobility = -1;
  NodeId leaving = kNoMobility;
  int to = 0;
  double prob = 0.0;
};

/// Layered mobility state space with per-state transition distributions.
struct StateSpace {
  std::vector<GameState> states;
  std::vector<std::vector<Transition>> successors;  // empty for terminals
  int root = 0;
  StateSpaceMode mode = StateSpaceMode::kFull;
  int depth_cap = 0;

  const GameState& state(int id) const { return states[id]; }
  std::size_t size() const { return states.size(); }
};

/// Mobility weight w(u) = 1 - (value share) * (degree share).
/// High-valued, highly connected nodes are the least likely to leave.
inline double removal_weight(const AttackGraph& g, NodeId u) {
  if (!g.has_node(u) || g.kind(u) != NodeKind::kIntermediate)
    throw ValidationError("removal weight requires a removable node");
  const double vmax = g.max_value();
  const int dmax = g.max_degree();
  if (!(vmax > 0.0) || dmax <= 0)
    throw ValidationError("degenerate graph: max value/degree not positive");
  return 1.0 - (g.value(u) / vmax) * (static_cast<double>(g.degree(u)) / dmax);
}

/// Removable nodes of a state under the given mode, ascending id order.
inline std::vector<NodeId> removable_nodes(const GameState& s, StateSpaceMode mode) {
  std::vector<NodeId> inter = s.graph.intermediate_ids();
  if (mode == StateSpaceMode::kFull) return inter;
  std::vector<NodeId> out;
  for (NodeId u : inter) {
    bool on_path = false;
    for (const AttackPath& p : s.paths)
      if (p.contains(u)) {
        on_path = true;
        break;
      }
    if (on_path) out.push_back(u);
  }
  return out;
}

/// Mobility distribution of a non-terminal state: the self-loop carries mu
/// and the removable nodes share 1 - mu proportionally to their weights
/// (uniformly when all weights vanish).
inline std::vector<std::pair<NodeId, double>> mobility_distribution(
    const GameState& s, StateSpaceMode mode, const GameParams& params) {
  if (s.terminal)
    throw ValidationError("transition distribution of a terminal state");
  const std::vector<NodeId> removable = removable_nodes(s, mode);
  if (removable.empty())
    throw ValidationError("non-terminal state has no removable node");

  std::vector<std::pair<NodeId, double>> dist;
  dist.emplace_back(Transition::kNoMobility, params.mu);

  std::vector<double> w(removable.size());
  double total = 0.0;
  for (std::size_t i = 0; i < removable.size(); ++i) {
    w[i] = removal_weight(s.graph, removable[i]);
    total += w[i];
  }
  const double mass = 1.0 - params.mu;
  for (std::size_t i = 0; i < removable.size(); ++i) {
    const double share = total > 0.0 ? w[i] / total : 1.0 / removable.size();
    dist.emplace_back(removable[i], mass * share);
  }
  return dist;
}

namespace detail {

inline void parallel_for(std::size_t n, int threads, auto&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Breadth-first layered expansion of the mobility state space up to the
/// look-ahead depth. States reached by different removal orders of the
/// same node set are merged. A state is terminal when the depth cap is
/// reached, no attack path exists, or no removable node remains.
inline StateSpace expand_state_space(const AttackGraph& g0,
                                     const GameParams& params,
                                     StateSpaceMode mode) {
  params.validate();
  StateSpace space;
  space.mode = mode;
  space.depth_cap = params.depth;

  auto make_state = [&](AttackGraph graph, std::vector<NodeId> removed,
                        int depth) {
    GameState s;
    s.id = static_cast<int>(space.states.size());
    s.graph = std::move(graph);
    s.removed = std::move(removed);
    s.paths = enumerate_attack_paths(s.graph);
    s.depth = depth;
    s.terminal = depth >= params.depth || s.paths.empty() ||
                 removable_nodes(s, mode).empty();
    space.states.push_back(std::move(s));
    return space.states.back().id;
  };

  space.root = make_state(g0, {}, 0);
  std::vector<int> frontier{space.root};
  // per-depth index: removed set -> state id
  std::vector<std::map<std::vector<NodeId>, int>> layer_index(params.depth + 1);

  for (int depth = 0; depth < params.depth && !frontier.empty(); ++depth) {
    std::vector<int> next;
    auto& dedup = layer_index[depth + 1];
    for (int sid : frontier) {
      if (space.states[sid].terminal) continue;
      for (NodeId u : removable_nodes(space.states[sid], mode)) {
        std::vector<NodeId> removed = space.states[sid].removed;
        removed.insert(std::lower_bound(removed.begin(), removed.end(), u), u);
        if (dedup.count(removed)) continue;
        AttackGraph child = remove_node(space.states[sid].graph, u);
        const int cid = make_state(std::move(child), std::move(removed), depth + 1);
        dedup.emplace(space.states[cid].removed, cid);
        next.push_back(cid);
      }
    }
    frontier = std::move(next);
  }

  space.successors.resize(space.states.size());
  for (const GameState& s : space.states) {
    if (s.terminal) continue;
    for (const auto& [u, prob] : mobility_distribution(s, mode, params)) {
      Transition t;
      t.leaving = u;
      t.prob = prob;
      if (u == Transition::kNoMobility) {
        t.to = s.id;
      } else {
        std::vector<NodeId> removed = s.removed;
        removed.insert(std::lower_bound(removed.begin(), removed.end(), u), u);
        auto it = layer_index[s.depth + 1].find(removed);
        if (it == layer_index[s.depth + 1].end())
          throw SolveError("internal: successor state missing");
        t.to = it->second;
      }
      space.successors[s.id].push_back(t);
    }
  }
  return space;
}

/// Equilibrium outcome of one state's stage game.
struct StageSolution {
  double value = 0.0;
  MixedStrategy defender;
  MixedStrategy attacker;
};

/// Solves the one-shot game on a state's topology. States without attack
/// paths are worth 0: the defender declines deployment and the attacker
/// has no action.
inline StageSolution solve_stage_game(const GameState& s, const GameParams& params) {
  if (s.paths.empty()) {
    StageSolution out;
    out.defender.probs = {1.0};  // the empty allocation
    return out;
  }
  const PayoffMatrix pm = build_payoff_matrix(s.graph, s.paths, params);
  const MatrixGameSolution sol = solve_matrix_game(pm.values, params.tol_lp);
  return StageSolution{sol.value, sol.row_strategy, sol.col_strategy};
}

/// Quality of a state-action pair against a value estimate:
/// Q = R(s, a_d, a_a) + gamma * sum_s' p(s,s') V(s'); terminal states
/// have no continuation.
inline double q_value(const StateSpace& space, int sid,
                      const HoneypotAllocation& a_d, const AttackPath& a_a,
                      const std::vector<double>& values,
                      const GameParams& params) {
  if (values.size() != space.size())
    throw ValidationError("value vector does not cover the state space");
  const GameState& s = space.state(sid);
  const double r = stage_reward(s.graph, a_d, a_a, params);
  if (s.terminal) return r;
  double ev = 0.0;
  for (const Transition& t : space.successors[sid]) ev += t.prob * values[t.to];
  return r + params.gamma * ev;
}

/// Convergence record of a solve.
struct SolveTrace {
  std::vector<double> sup_deltas;               // one entry per sweep
  std::vector<std::vector<double>> snapshots;   // [0] = boundary init, then per sweep
  bool converged = false;
  int sweeps = 0;
};

/// Values, stationary equilibrium policies, and the convergence trace.
struct SolveResult {
  std::vector<double> values;                   // V*(s) per state id
  std::vector<MixedStrategy> defender_policy;   // over defender_action_space order
  std::vector<MixedStrategy> attacker_policy;   // over state.paths order
  SolveTrace trace;
};

namespace detail {

/// Boundary conditions: terminal states keep their one-shot value forever
/// after; they are solved once and never iterated.
inline void solve_terminals(const StateSpace& space, const GameParams& params,
                            SolveResult& out) {
  detail::parallel_for(space.size(), params.threads, [&](std::size_t i) {
    const GameState& s = space.states[i];
    if (!s.terminal) return;
    StageSolution sol = solve_stage_game(s, params);
    out.values[i] = sol.value;
    out.defender_policy[i] = std::move(sol.defender);
    out.attacker_policy[i] = std::move(sol.attacker);
  });
}

}  // namespace detail

/// Q-minimax value iteration: synchronous sweeps where each non-terminal
/// state's value becomes the equilibrium value of its Q-matrix against the
/// previous sweep's values. Stops when the sup-norm change drops below
/// tol_vi; `trace.converged` is false if the sweep cap is hit first (the
/// partial trace is still returned).
inline SolveResult value_iteration(const StateSpace& space, const GameParams& params) {
  params.validate();
  const std::size_t n = space.size();
  SolveResult out;
  out.values.assign(n, 0.0);
  out.defender_policy.resize(n);
  out.attacker_policy.resize(n);
  detail::solve_terminals(space, params, out);
  out.trace.snapshots.push_back(out.values);

  const bool any_nonterminal =
      std::any_of(space.states.begin(), space.states.end(),
                  [](const GameState& s) { return !s.terminal; });
  if (!any_nonterminal) {
    out.trace.converged = true;  // boundary pass settles everything
    return out;
  }

  std::vector<double> next(out.values);
  for (int sweep = 1; sweep <= params.max_sweeps; ++sweep) {
    detail::parallel_for(n, params.threads, [&](std::size_t i) {
      const GameState& s = space.states[i];
      if (s.terminal) return;  // pathless states are terminal by construction
      PayoffMatrix pm = build_payoff_matrix(s.graph, s.paths, params);
      double ev = 0.0;
      for (const Transition& t : space.successors[i])
        ev += t.prob * out.values[t.to];
      const double shift = params.gamma * ev;
      for (std::size_t r = 0; r < pm.values.rows(); ++r)
        for (std::size_t c = 0; c < pm.values.cols(); ++c)
          pm.values(r, c) += shift;
      next[i] = solve_matrix_game(pm.values, params.tol_lp).value;
    });

    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      delta = std::max(delta, std::fabs(next[i] - out.values[i]));
    out.values = next;
    out.trace.sup_deltas.push_back(delta);
    out.trace.snapshots.push_back(out.values);
    out.trace.sweeps = sweep;
    if (delta < params.tol_vi) {
      out.trace.converged = true;
      break;
    }
  }

  // Policies of the converged Q-games (terminals already hold theirs).
  detail::parallel_for(n, params.threads, [&](std::size_t i) {
    const GameState& s = space.states[i];
    if (s.terminal) return;
    PayoffMatrix pm = build_payoff_matrix(s.graph, s.paths, params);
    double ev = 0.0;
    for (const Transition& t : space.successors[i])
      ev += t.prob * out.values[t.to];
    const double shift = params.gamma * ev;
    for (std::size_t r = 0; r < pm.values.rows(); ++r)
      for (std::size_t c = 0; c < pm.values.cols(); ++c)
        pm.values(r, c) += shift;
    MatrixGameSolution sol = solve_matrix_game(pm.values, params.tol_lp);
    out.defender_policy[i] = std::move(sol.row_strategy);
    out.attacker_policy[i] = std::move(sol.col_strategy);
  });
  return out;
}

/// Single backward pass over the layered space. Deeper layers are final
/// before shallower ones are touched; transitions are uncontrolled, so a
/// state's equilibrium strategies are those of its stage game and the
/// self-loop resolves in closed form:
///   V(s) = (stage value + gamma * E[V(children)]) / (1 - gamma * mu).
/// Agrees with value_iteration's fixed point on every state.
inline SolveResult predictive_solve(const StateSpace& space, const GameParams& params,
                                    std::optional<std::chrono::steady_clock::time_point>
                                        deadline = std::nullopt) {
  params.validate();
  const std::size_t n = space.size();
  SolveResult out;
  out.values.assign(n, 0.0);
  out.defender_policy.resize(n);
  out.attacker_policy.resize(n);

  std::vector<std::vector<std::size_t>> by_depth;
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = static_cast<std::size_t>(space.states[i].depth);
    if (by_depth.size() <= d) by_depth.resize(d + 1);
    by_depth[d].push_back(i);
  }

  for (auto layer = by_depth.rbegin(); layer != by_depth.rend(); ++layer) {
    if (deadline && std::chrono::steady_clock::now() > *deadline)
      throw TimeoutError("predictive solve exceeded its deadline");
    detail::parallel_for(layer->size(), params.threads, [&](std::size_t k) {
      const std::size_t i = (*layer)[k];
      const GameState& s = space.states[i];
      StageSolution sol = solve_stage_game(s, params);
      if (s.terminal) {
        out.values[i] = sol.value;
      } else {
        double ev_children = 0.0;
        for (const Transition& t : space.successors[i])
          if (t.to != s.id) ev_children += t.prob * out.values[t.to];
        out.values[i] =
            (sol.value + params.gamma * ev_children) / (1.0 - params.gamma * params.mu);
      }
      out.defender_policy[i] = std::move(sol.defender);
      out.attacker_policy[i] = std::move(sol.attacker);
    });
  }

  out.trace.converged = true;
  out.trace.sweeps = 0;
  out.trace.snapshots.push_back(out.values);
  return out;
}

/// Convenience overload: expand then solve.
inline SolveResult predictive_solve(const AttackGraph& g0, const GameParams& params,
                                    StateSpaceMode mode) {
  const StateSpace space = expand_state_space(g0, params, mode);
  return predictive_solve(space, params);
}

}  // namespace hags
