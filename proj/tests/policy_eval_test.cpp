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

#include "hags/policy_eval.hpp"

#include <cmath>

#include "catch2/catch_amalgamated.hpp"
#include "hags/netgen.hpp"

using namespace hags;

namespace {

GameParams defaults() {
  GameParams p;
  p.depth = 2;
  return p;
}

}  // namespace

TEST_CASE("random policy is uniform at every state") {
  GameParams p = defaults();
  StateSpace space =
      expand_state_space(gen_reference_20(), p, StateSpaceMode::kCompact);
  DefenderPolicy pi = random_policy(space, p);
  REQUIRE(pi.per_state.size() == space.size());

  // root: empty + ten single placements
  REQUIRE(pi.per_state[space.root].probs.size() == 11);
  for (double q : pi.per_state[space.root].probs)
    CHECK(q == Catch::Approx(1.0 / 11.0));

  for (const GameState& s : space.states) {
    const auto& probs = pi.per_state[s.id].probs;
    CHECK(MixedStrategy{probs}.valid(1e-9));
    if (s.paths.empty()) {
      REQUIRE(probs.size() == 1);  // only the empty allocation
      CHECK(probs[0] == Catch::Approx(1.0));
    }
  }
}

TEST_CASE("myopic equals gamma->0 behavior and predictive strategies") {
  GameParams p = defaults();
  StateSpace space = expand_state_space(gen_fig1_tree(), p, StateSpaceMode::kFull);
  DefenderPolicy myopic = myopic_policy(space, p);
  SolveResult solved = predictive_solve(space, p);

  // Transitions are uncontrolled and the stage reward ignores the next
  // state, so the Q-matrix is the stage matrix plus a constant: the
  // per-state equilibrium strategies coincide exactly.
  for (std::size_t i = 0; i < space.size(); ++i)
    CHECK(myopic.per_state[i].probs == solved.defender_policy[i].probs);

  // terminal states: myopic is the stage equilibrium by definition
  for (const GameState& s : space.states)
    if (s.terminal && !s.paths.empty())
      CHECK(myopic.per_state[s.id].probs ==
            solve_stage_game(s, p).defender.probs);
}

TEST_CASE("attacker best response") {
  GameParams p = defaults();
  StateSpace space =
      expand_state_space(gen_reference_20(), p, StateSpaceMode::kCompact);
  SolveResult solved = predictive_solve(space, p);
  auto [pred_d, pred_a] = predictive_policy(solved);

  SECTION("equilibrium property: BR against the NE equals -V*") {
    BestResponse br = attacker_best_response(space, pred_d, p);
    CHECK(br.root_value ==
          Catch::Approx(-solved.values[space.root]).margin(1e-7));
    for (const GameState& s : space.states)
      if (!s.paths.empty())
        CHECK(br.values[s.id] ==
              Catch::Approx(-solved.values[s.id]).margin(1e-7));
  }
  SECTION("worse policies concede at least the equilibrium value") {
    BestResponse against_pred = attacker_best_response(space, pred_d, p);
    BestResponse against_rand =
        attacker_best_response(space, random_policy(space, p), p);
    CHECK(against_rand.root_value >= against_pred.root_value - 1e-9);
  }
  SECTION("terminal states use the stage best reply") {
    BestResponse br = attacker_best_response(space, pred_d, p);
    for (const GameState& s : space.states) {
      if (!s.terminal || s.paths.empty()) continue;
      const PayoffMatrix pm = build_payoff_matrix(s.graph, s.paths, p);
      double best = -1e300;
      for (std::size_t j = 0; j < pm.cols.size(); ++j) {
        double gain = 0.0;
        for (std::size_t r = 0; r < pm.rows.size(); ++r)
          gain -= pred_d.per_state[s.id].probs[r] * pm.values(r, j);
        best = std::max(best, gain);
      }
      CHECK(br.values[s.id] == Catch::Approx(best).margin(1e-9));
    }
  }
  SECTION("no single-state deviation improves the response") {
    DefenderPolicy rand_d = random_policy(space, p);
    BestResponse br = attacker_best_response(space, rand_d, p);
    for (const GameState& s : space.states) {
      if (s.paths.empty()) continue;
      const PayoffMatrix pm = build_payoff_matrix(s.graph, s.paths, p);
      double ev_children = 0.0;
      if (!s.terminal)
        for (const Transition& t : space.successors[s.id])
          if (t.to != s.id) ev_children += t.prob * br.values[t.to];
      for (std::size_t j = 0; j < pm.cols.size(); ++j) {
        double gain = 0.0;
        for (std::size_t r = 0; r < pm.rows.size(); ++r)
          gain -= rand_d.per_state[s.id].probs[r] * pm.values(r, j);
        const double dev =
            s.terminal ? gain
                       : (gain + p.gamma * ev_children) / (1.0 - p.gamma * p.mu);
        CHECK(dev <= br.values[s.id] + 1e-9);
      }
    }
  }
  SECTION("entry restriction") {
    DefenderPolicy rand_d = random_policy(space, p);
    BestResponse all = attacker_best_response(space, rand_d, p);
    BestResponse from0 = attacker_best_response(space, rand_d, p, NodeId{0});
    // every reference path starts at entry 0
    CHECK(from0.root_value == Catch::Approx(all.root_value));
    BestResponse from1 = attacker_best_response(space, rand_d, p, NodeId{1});
    CHECK(from1.root_value == 0.0);
    CHECK(from1.best_path[space.root] == -1);
  }
  SECTION("policy shape mismatches are rejected") {
    DefenderPolicy bad;
    bad.per_state.resize(space.size() - 1);
    CHECK_THROWS_AS(attacker_best_response(space, bad, p), ValidationError);
  }
}

TEST_CASE("policy_value evaluates a fixed pair exactly") {
  GameParams p = defaults();
  StateSpace space =
      expand_state_space(gen_reference_20(), p, StateSpaceMode::kCompact);
  SolveResult solved = predictive_solve(space, p);
  auto [pred_d, pred_a] = predictive_policy(solved);

  SECTION("the equilibrium pair reproduces V*") {
    auto values = policy_value(space, pred_d, pred_a, p);
    for (std::size_t i = 0; i < space.size(); ++i)
      CHECK(values[i] == Catch::Approx(solved.values[i]).margin(1e-7));
  }
  SECTION("against the NE attacker, random does no better than the NE") {
    auto vs_random = policy_value(space, random_policy(space, p), pred_a, p);
    // the NE attacker strategy guarantees the attacker at least -V*
    CHECK(vs_random[space.root] <= solved.values[space.root] + 1e-7);
  }
}

TEST_CASE("rollout") {
  GameParams p = defaults();

  SECTION("single-state space with pure policies is exact") {
    GameParams q = p;
    q.depth = 0;
    StateSpace space =
        expand_state_space(gen_fig1_tree(), q, StateSpaceMode::kFull);
    const GameState& root = space.state(0);
    const PayoffMatrix pm = build_payoff_matrix(root.graph, root.paths, q);

    DefenderPolicy d;
    d.per_state.resize(1);
    d.per_state[0].probs.assign(pm.rows.size(), 0.0);
    d.per_state[0].probs[2] = 1.0;
    AttackerPolicy a;
    a.per_state.resize(1);
    a.per_state[0].probs.assign(pm.cols.size(), 0.0);
    a.per_state[0].probs[1] = 1.0;

    RolloutEstimate est = rollout(space, d, a, 500, 42, q);
    CHECK(est.mean == Catch::Approx(pm.values(2, 1)));
    CHECK(est.std_error == Catch::Approx(0.0).margin(1e-12));
    CHECK(est.half_width == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("same seed reproduces the estimate exactly") {
    StateSpace space =
        expand_state_space(gen_fig1_tree(), p, StateSpaceMode::kFull);
    SolveResult solved = predictive_solve(space, p);
    auto [d, a] = predictive_policy(solved);
    RolloutEstimate e1 = rollout(space, d, a, 2000, 7, p);
    RolloutEstimate e2 = rollout(space, d, a, 2000, 7, p);
    CHECK(e1.mean == e2.mean);
    CHECK(e1.std_error == e2.std_error);
    RolloutEstimate e3 = rollout(space, d, a, 2000, 8, p);
    CHECK(e1.mean != e3.mean);
  }
  SECTION("NE rollout is statistically consistent with V*") {
    StateSpace space =
        expand_state_space(gen_reference_20(), p, StateSpaceMode::kCompact);
    SolveResult solved = predictive_solve(space, p);
    auto [d, a] = predictive_policy(solved);
    RolloutEstimate est = rollout(space, d, a, 20000, 20260810, p);
    CHECK(std::fabs(est.mean - solved.values[space.root]) <=
          4.0 * est.std_error);
  }
}

TEST_CASE("compare_policies on the reference network") {
  GameParams p = defaults();
  EvalReport report =
      compare_policies(gen_reference_20(), p, StateSpaceMode::kCompact, 5000, 3);

  SECTION("predictive weakly dominates at every entry") {
    REQUIRE(report.per_entry.size() == 3);
    bool strict_somewhere = false;
    for (const auto& row : report.per_entry) {
      CHECK(row.predictive <= row.myopic + 1e-9);
      CHECK(row.predictive <= row.random + 1e-9);
      if (row.predictive < row.random - 1e-9) strict_somewhere = true;
    }
    CHECK(strict_somewhere);
  }
  SECTION("pathless entries are worthless to the attacker") {
    for (const auto& row : report.per_entry) {
      if (row.entry == 0) continue;  // only entry 0 reaches a target
      CHECK(row.random == 0.0);
      CHECK(row.myopic == 0.0);
      CHECK(row.predictive == 0.0);
    }
  }
  SECTION("terminal-layer states: myopic and predictive coincide") {
    for (const auto& row : report.per_state)
      if (row.depth == p.depth)
        CHECK(row.myopic == Catch::Approx(row.predictive).margin(1e-9));
  }
  SECTION("rollout sits near the analytic root value") {
    CHECK(std::fabs(report.ne_rollout.mean - report.analytic_root) <=
          4.0 * report.ne_rollout.std_error + 1e-9);
  }
}

TEST_CASE("evaluation determinism") {
  GameParams p = defaults();
  EvalReport a =
      compare_policies(gen_fig1_tree(), p, StateSpaceMode::kFull, 1000, 5);
  EvalReport b =
      compare_policies(gen_fig1_tree(), p, StateSpaceMode::kFull, 1000, 5);
  REQUIRE(a.per_entry.size() == b.per_entry.size());
  for (std::size_t i = 0; i < a.per_entry.size(); ++i) {
    CHECK(a.per_entry[i].random == b.per_entry[i].random);
    CHECK(a.per_entry[i].myopic == b.per_entry[i].myopic);
    CHECK(a.per_entry[i].predictive == b.per_entry[i].predictive);
  }
  CHECK(a.ne_rollout.mean == b.ne_rollout.mean);
  CHECK(a.analytic_root == b.analytic_root);
}
