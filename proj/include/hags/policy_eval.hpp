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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hags/dynamic_game.hpp"
#include "hags/errors.hpp"
#include "hags/rng.hpp"
#include "hags/stage_game.hpp"

namespace hags {

enum class PolicyKind { kRandom, kMyopic, kPredictive, kCustom };

inline const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::kRandom: return "random";
    case PolicyKind::kMyopic: return "myopic";
    case PolicyKind::kPredictive: return "predictive";
    case PolicyKind::kCustom: return "custom";
  }
  return "?";
}

/// Stationary defender policy: one mixed strategy per state, indexed in
/// defender_action_space order for that state's graph.
struct DefenderPolicy {
  PolicyKind label = PolicyKind::kCustom;
  std::vector<MixedStrategy> per_state;
};

/// Stationary attacker policy over each state's path list.
struct AttackerPolicy {
  std::vector<MixedStrategy> per_state;
};

/// Uniform distribution over every state's allocation list.
inline DefenderPolicy random_policy(const StateSpace& space, const GameParams& params) {
  DefenderPolicy pi;
  pi.label = PolicyKind::kRandom;
  pi.per_state.resize(space.size());
  for (const GameState& s : space.states) {
    const auto actions = defender_action_space(s.graph, s.paths, params);
    pi.per_state[s.id].probs.assign(actions.size(), 1.0 / actions.size());
  }
  return pi;
}

/// Per-state equilibrium of the stage game alone, ignoring transitions.
inline DefenderPolicy myopic_policy(const StateSpace& space, const GameParams& params) {
  DefenderPolicy pi;
  pi.label = PolicyKind::kMyopic;
  pi.per_state.resize(space.size());
  detail::parallel_for(space.size(), params.threads, [&](std::size_t i) {
    pi.per_state[i] = solve_stage_game(space.states[i], params).defender;
  });
  return pi;
}

/// Wraps the Markov-game equilibrium as a labelled policy pair.
inline std::pair<DefenderPolicy, AttackerPolicy> predictive_policy(
    const SolveResult& solved) {
  DefenderPolicy d;
  d.label = PolicyKind::kPredictive;
  d.per_state = solved.defender_policy;
  AttackerPolicy a;
  a.per_state = solved.attacker_policy;
  return {std::move(d), std::move(a)};
}

/// Attacker best response to a fixed defender policy.
struct BestResponse {
  std::vector<double> values;    // attacker value per state
  std::vector<int> best_path;    // chosen path index, -1 when no action
  AttackerPolicy policy;         // point mass on best_path
  double root_value = 0.0;
};

/// Backward induction of the attacker's best response against `pi_d`.
/// With `entry` set, the attacker is restricted to paths starting at that
/// node (in every state); states offering no admissible path are worth 0
/// to the attacker. Ties break to the lowest path index.
inline BestResponse attacker_best_response(
    const StateSpace& space, const DefenderPolicy& pi_d, const GameParams& params,
    std::optional<NodeId> entry = std::nullopt) {
  params.validate();
  if (pi_d.per_state.size() != space.size())
    throw ValidationError("defender policy does not cover the state space");

  BestResponse br;
  br.values.assign(space.size(), 0.0);
  br.best_path.assign(space.size(), -1);
  br.policy.per_state.resize(space.size());

  std::vector<int> order(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return space.states[a].depth > space.states[b].depth;
  });

  for (int sid : order) {
    const GameState& s = space.states[sid];
    br.policy.per_state[sid].probs.assign(s.paths.size(), 0.0);
    if (s.paths.empty()) continue;  // value 0, nothing to attack

    const PayoffMatrix pm = build_payoff_matrix(s.graph, s.paths, params);
    const auto& x = pi_d.per_state[sid].probs;
    if (x.size() != pm.rows.size())
      throw ValidationError("defender policy shape mismatch at state " +
                            std::to_string(sid));

    double best = 0.0;
    int best_j = -1;
    for (std::size_t j = 0; j < pm.cols.size(); ++j) {
      if (entry && pm.cols[j].nodes.front() != *entry) continue;
      double attacker_gain = 0.0;
      for (std::size_t r = 0; r < pm.rows.size(); ++r)
        attacker_gain -= x[r] * pm.values(r, j);
      if (best_j < 0 || attacker_gain > best) {
        best = attacker_gain;
        best_j = static_cast<int>(j);
      }
    }
    if (best_j < 0) continue;  // restriction removed every path

    if (s.terminal) {
      br.values[sid] = best;
    } else {
      double ev_children = 0.0;
      for (const Transition& t : space.successors[sid])
        if (t.to != sid) ev_children += t.prob * br.values[t.to];
      br.values[sid] =
          (best + params.gamma * ev_children) / (1.0 - params.gamma * params.mu);
    }
    br.best_path[sid] = best_j;
    br.policy.per_state[sid].probs[best_j] = 1.0;
  }
  br.root_value = br.values[space.root];
  return br;
}

/// Exact evaluation of a fixed policy pair: the defender's expected
/// discounted return per state under (pi_d, pi_a) and the mobility
/// kernel. Evaluating the equilibrium pair reproduces V*. This is the
/// alternative to the worst-case adversary of attacker_best_response.
inline std::vector<double> policy_value(const StateSpace& space,
                                        const DefenderPolicy& pi_d,
                                        const AttackerPolicy& pi_a,
                                        const GameParams& params) {
  params.validate();
  if (pi_d.per_state.size() != space.size() || pi_a.per_state.size() != space.size())
    throw ValidationError("policies do not cover the state space");

  std::vector<int> order(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return space.states[a].depth > space.states[b].depth;
  });

  std::vector<double> values(space.size(), 0.0);
  for (int sid : order) {
    const GameState& s = space.states[sid];
    if (s.paths.empty()) continue;
    const PayoffMatrix pm = build_payoff_matrix(s.graph, s.paths, params);
    const auto& x = pi_d.per_state[sid].probs;
    const auto& y = pi_a.per_state[sid].probs;
    if (x.size() != pm.rows.size() || y.size() != pm.cols.size())
      throw ValidationError("policy shape mismatch at state " + std::to_string(sid));
    double stage = 0.0;
    for (std::size_t r = 0; r < pm.rows.size(); ++r)
      for (std::size_t c = 0; c < pm.cols.size(); ++c)
        stage += x[r] * y[c] * pm.values(r, c);
    if (s.terminal) {
      values[sid] = stage;
    } else {
      double ev_children = 0.0;
      for (const Transition& t : space.successors[sid])
        if (t.to != sid) ev_children += t.prob * values[t.to];
      values[sid] =
          (stage + params.gamma * ev_children) / (1.0 - params.gamma * params.mu);
    }
  }
  return values;
}

/// Monte Carlo estimate of the defender's discounted return.
struct RolloutEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double half_width = 0.0;  // 1.96 standard errors
  int episodes = 0;
};

/// Samples `episodes` trajectories from the root under the two stationary
/// policies and the mobility kernel, stopping at terminal absorption (the
/// terminal stage reward is collected once). Episode e draws from an
/// independent substream of `seed`, so the estimate is reproducible and
/// independent of evaluation order.
inline RolloutEstimate rollout(const StateSpace& space, const DefenderPolicy& pi_d,
                               const AttackerPolicy& pi_a, int episodes,
                               std::uint64_t seed, const GameParams& params) {
  params.validate();
  if (episodes < 1) throw ValidationError("need at least one episode");
  if (pi_d.per_state.size() != space.size() || pi_a.per_state.size() != space.size())
    throw ValidationError("policies do not cover the state space");

  // Payoff matrices cached lazily: rollouts touch few distinct states.
  std::map<int, PayoffMatrix> payoff_cache;
  auto payoff = [&](int sid) -> const PayoffMatrix& {
    auto it = payoff_cache.find(sid);
    if (it == payoff_cache.end()) {
      const GameState& s = space.states[sid];
      it = payoff_cache
               .emplace(sid, build_payoff_matrix(s.graph, s.paths, params))
               .first;
    }
    return it->second;
  };

  auto sample = [](const std::vector<double>& probs, std::mt19937_64& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.size() - 1;
  };

  double mean = 0.0, m2 = 0.0;  // Welford running moments
  for (int ep = 0; ep < episodes; ++ep) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(ep)));
    double total = 0.0, disc = 1.0;
    int sid = space.root;
    while (true) {
      const GameState& s = space.states[sid];
      if (s.paths.empty()) break;  // nothing to attack, nothing to earn

      const PayoffMatrix& pm = payoff(sid);
      if (pi_d.per_state[sid].probs.size() != pm.rows.size() ||
          pi_a.per_state[sid].probs.size() != pm.cols.size())
        throw ValidationError("policy shape mismatch at state " +
                              std::to_string(sid));
      const std::size_t r = sample(pi_d.per_state[sid].probs, rng);
      const std::size_t c = sample(pi_a.per_state[sid].probs, rng);
      total += disc * pm.values(r, c);
      if (s.terminal) break;

      const double u = uniform01(rng);
      double acc = 0.0;
      int next = sid;
      for (const Transition& t : space.successors[sid]) {
        acc += t.prob;
        if (u < acc) {
          next = t.to;
          break;
        }
      }
      sid = next;
      disc *= params.gamma;
    }
    const double delta = total - mean;
    mean += delta / (ep + 1);
    m2 += delta * (total - mean);
  }

  RolloutEstimate est;
  est.episodes = episodes;
  est.mean = mean;
  if (episodes > 1)
    est.std_error = std::sqrt(m2 / (episodes - 1) / episodes);
  est.half_width = 1.96 * est.std_error;
  return est;
}

/// Side-by-side evaluation of the random, myopic, and predictive policies.
struct EvalReport {
  struct EntryRow {
    NodeId entry = 0;
    double random = 0.0, myopic = 0.0, predictive = 0.0;
  };
  struct StateRow {
    int state = 0;
    int depth = 0;
    bool terminal = false;
    double random = 0.0, myopic = 0.0, predictive = 0.0;
  };
  StateSpaceMode mode = StateSpaceMode::kFull;
  std::vector<EntryRow> per_entry;    // attacker best-response reward
  std::vector<StateRow> per_state;    // unrestricted attacker value
  double analytic_root = 0.0;         // V*(root) of the predictive solve
  RolloutEstimate ne_rollout;         // NE-vs-NE Monte Carlo check
  double solve_ms = 0.0;
  double eval_ms = 0.0;
};

/// Runs the policy comparison on one state space: per-entry attacker
/// best-response rewards and a per-state breakdown for every baseline,
/// plus a rollout consistency check of the equilibrium pair.
inline EvalReport compare_policies(const AttackGraph& g0, const GameParams& params,
                                   StateSpaceMode mode, int rollout_episodes = 10000,
                                   std::uint64_t seed = 1) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  const StateSpace space = expand_state_space(g0, params, mode);
  const SolveResult solved = predictive_solve(space, params);
  const auto t1 = clock::now();

  auto [pred_d, pred_a] = predictive_policy(solved);
  const DefenderPolicy rand_d = random_policy(space, params);
  const DefenderPolicy myop_d = myopic_policy(space, params);

  const BestResponse br_rand = attacker_best_response(space, rand_d, params);
  const BestResponse br_myop = attacker_best_response(space, myop_d, params);
  const BestResponse br_pred = attacker_best_response(space, pred_d, params);

  EvalReport report;
  report.mode = mode;
  report.analytic_root = solved.values[space.root];

  for (NodeId e : g0.entry_ids()) {
    EvalReport::EntryRow row;
    row.entry = e;
    row.random = attacker_best_response(space, rand_d, params, e).root_value;
    row.myopic = attacker_best_response(space, myop_d, params, e).root_value;
    row.predictive = attacker_best_response(space, pred_d, params, e).root_value;
    report.per_entry.push_back(row);
  }

  for (const GameState& s : space.states) {
    EvalReport::StateRow row;
    row.state = s.id;
    row.depth = s.depth;
    row.terminal = s.terminal;
    row.random = br_rand.values[s.id];
    row.myopic = br_myop.values[s.id];
    row.predictive = br_pred.values[s.id];
    report.per_state.push_back(row);
  }

  report.ne_rollout = rollout(space, pred_d, pred_a, rollout_episodes, seed, params);
  const auto t2 = clock::now();
  report.solve_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  report.eval_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return report;
}

}  // namespace hags
