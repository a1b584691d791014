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

// Command-line driver: graph generation, equilibrium solving, policy
// comparison, and scalability benchmarks, all emitting CSV artifacts.
//
// Exit codes: 0 ok, 2 bad input, 3 non-convergence/numeric failure,
// 4 I/O failure.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hags/csv.hpp"
#include "hags/dynamic_game.hpp"
#include "hags/graph_io.hpp"
#include "hags/netgen.hpp"
#include "hags/policy_eval.hpp"

namespace {

using namespace hags;

struct CommonOpts {
  std::string graph_file;
  std::string fixture;
  std::string mode = "full";
  std::string out_dir = ".";
  std::uint64_t seed = 20;
  GameParams params;
  // Watts-Strogatz knobs (fixture "ws")
  int ws_n = 100;
  int ws_k = 4;
  double ws_p = 0.1;
  int ws_entries = 3;
  int ws_targets = 3;
};

void add_graph_source(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--graph", o.graph_file, "Graph file to load");
  cmd->add_option("--fixture", o.fixture, "Built-in graph: ref20, fig1, ws");
  cmd->add_option("--seed", o.seed, "Generator / evaluation seed");
  cmd->add_option("--n", o.ws_n, "ws fixture: node count");
  cmd->add_option("--k", o.ws_k, "ws fixture: ring neighbors");
  cmd->add_option("--p", o.ws_p, "ws fixture: rewiring probability");
  cmd->add_option("--entries", o.ws_entries, "ws fixture: entry count");
  cmd->add_option("--targets", o.ws_targets, "ws fixture: target count");
}

void add_param_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--mode", o.mode, "State space: full or compact")
      ->check(CLI::IsMember({"full", "compact"}));
  cmd->add_option("--depth", o.params.depth, "Look-ahead depth");
  cmd->add_option("--gamma", o.params.gamma, "Discount factor");
  cmd->add_option("--mu", o.params.mu, "Self-transition probability");
  cmd->add_option("--budget", o.params.budget, "Honeypot budget H");
  cmd->add_option("--cap", o.params.cap, "Capture reward weight");
  cmd->add_option("--esc", o.params.esc, "Escape reward weight");
  cmd->add_option("--cd", o.params.defender_cost, "Cost per honeypot");
  cmd->add_option("--ca", o.params.attacker_cost, "Attacker cost per hop");
  cmd->add_option("--tol-vi", o.params.tol_vi, "Value-iteration tolerance");
  cmd->add_option("--tol-lp", o.params.tol_lp, "Equilibrium tolerance");
  cmd->add_option("--max-sweeps", o.params.max_sweeps, "Sweep cap");
  cmd->add_option("--threads", o.params.threads, "Worker thread cap");
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_flag_callback(
      "--all-edges",
      [&o] { o.params.eligible = EligibleEdgeMode::kAllEdges; },
      "Allow honeypots on every edge, not only attack-path edges");
}

StateSpaceMode mode_of(const CommonOpts& o) {
  return o.mode == "compact" ? StateSpaceMode::kCompact : StateSpaceMode::kFull;
}

AttackGraph resolve_graph(const CommonOpts& o) {
  if (!o.graph_file.empty() && !o.fixture.empty())
    throw ValidationError("give either --graph or --fixture, not both");
  if (!o.graph_file.empty()) return load_graph(o.graph_file);
  if (o.fixture == "ref20") return gen_reference_20(o.seed);
  if (o.fixture == "fig1") return gen_fig1_tree();
  if (o.fixture == "ws") {
    WattsStrogatzParams wp;
    wp.n = o.ws_n;
    wp.k = o.ws_k;
    wp.p = o.ws_p;
    wp.seed = o.seed;
    wp.n_entry = o.ws_entries;
    wp.n_target = o.ws_targets;
    return gen_watts_strogatz(wp);
  }
  if (o.fixture.empty())
    throw ValidationError("no graph given: use --graph FILE or --fixture NAME");
  throw ValidationError("unknown fixture '" + o.fixture +
                        "' (expected ref20, fig1, or ws)");
}

std::filesystem::path ensure_out_dir(const CommonOpts& o) {
  std::filesystem::path dir(o.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

std::string join_path(const AttackPath& p) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < p.nodes.size(); ++i)
    ss << (i ? "-" : "") << p.nodes[i];
  return ss.str();
}

std::string join_edges(const std::vector<Edge>& edges) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < edges.size(); ++i)
    ss << (i ? ";" : "") << edges[i].src << "-" << edges[i].dst;
  return ss.str();
}

std::string join_ids(const std::vector<NodeId>& ids) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < ids.size(); ++i) ss << (i ? ";" : "") << ids[i];
  return ss.str();
}

// ---------------------------------------------------------------------------

int cmd_generate(const CommonOpts& o) {
  AttackGraph g = resolve_graph(o);
  const auto dir = ensure_out_dir(o);
  const auto out = dir / "graph.json";
  save_graph(g, out.string(),
             {{"source", o.fixture.empty() ? o.graph_file : o.fixture},
              {"seed", std::to_string(o.seed)}});
  const auto paths = enumerate_attack_paths(g);
  std::cout << "graph: " << g.node_count() << " nodes, " << g.edge_count()
            << " edges, " << g.entry_ids().size() << " entries, "
            << g.target_ids().size() << " targets\n"
            << "paths: " << paths.size() << "\n"
            << "wrote " << out.string() << "\n";
  return 0;
}

void write_solution_files(const std::filesystem::path& dir, const StateSpace& space,
                          const SolveResult& result, const GameParams& params) {
  std::vector<CsvRow> value_rows;
  for (const GameState& s : space.states)
    value_rows.push_back({static_cast<long long>(s.id),
                          static_cast<long long>(s.depth),
                          static_cast<long long>(s.terminal ? 1 : 0),
                          join_ids(s.removed), result.values[s.id]});
  write_csv((dir / "values.csv").string(),
            {"state", "depth", "terminal", "removed", "value"}, value_rows);

  std::vector<CsvRow> def_rows;
  std::vector<CsvRow> atk_rows;
  for (const GameState& s : space.states) {
    const auto actions = defender_action_space(s.graph, s.paths, params);
    const auto& x = result.defender_policy[s.id].probs;
    for (std::size_t i = 0; i < x.size(); ++i)
      def_rows.push_back({static_cast<long long>(s.id),
                          static_cast<long long>(i), x[i],
                          join_edges(actions[i].edges)});
    const auto& y = result.attacker_policy[s.id].probs;
    for (std::size_t j = 0; j < y.size(); ++j)
      atk_rows.push_back({static_cast<long long>(s.id),
                          static_cast<long long>(j), y[j],
                          join_path(s.paths[j])});
  }
  write_csv((dir / "defender_policy.csv").string(),
            {"state", "action", "prob", "edges"}, def_rows);
  write_csv((dir / "attacker_policy.csv").string(),
            {"state", "path", "prob", "nodes"}, atk_rows);
}

void write_trace_file(const std::filesystem::path& dir, const SolveTrace& trace) {
  // iteration 0 is the boundary pass; its delta is the change from the
  // zero vector. Later rows carry the sweep sup-norm deltas.
  std::vector<CsvRow> rows;
  for (std::size_t it = 0; it < trace.snapshots.size(); ++it) {
    double delta = 0.0;
    if (it == 0) {
      for (double v : trace.snapshots[0]) delta = std::max(delta, std::fabs(v));
    } else {
      delta = trace.sup_deltas[it - 1];
    }
    for (std::size_t sid = 0; sid < trace.snapshots[it].size(); ++sid)
      rows.push_back({static_cast<long long>(it), static_cast<long long>(sid),
                      trace.snapshots[it][sid], delta});
  }
  write_csv((dir / "trace.csv").string(),
            {"iteration", "state", "value", "sup_norm_delta"}, rows);
}

int cmd_solve(const CommonOpts& o, const std::string& method) {
  o.params.validate();
  AttackGraph g = resolve_graph(o);
  const auto dir = ensure_out_dir(o);
  const StateSpace space = expand_state_space(g, o.params, mode_of(o));
  std::cout << "state space (" << o.mode << "): " << space.size() << " states\n";

  SolveResult result;
  bool have_result = false;
  if (method != "vi") {
    result = predictive_solve(space, o.params);
    have_result = true;
  }

  bool vi_converged = true;
  if (method != "predictive") {
    // the iterative solver supplies the convergence trace
    SolveResult vi = value_iteration(space, o.params);
    write_trace_file(dir, vi.trace);
    vi_converged = vi.trace.converged;
    if (have_result) {
      double gap = 0.0;
      for (std::size_t i = 0; i < space.size(); ++i)
        gap = std::max(gap, std::fabs(vi.values[i] - result.values[i]));
      std::cout << "sweeps: " << vi.trace.sweeps
                << ", method agreement: " << gap << "\n";
    } else {
      std::cout << "sweeps: " << vi.trace.sweeps << "\n";
      result = std::move(vi);
      have_result = true;
    }
  }

  write_solution_files(dir, space, result, o.params);
  std::cout << "root value: " << result.values[space.root] << "\n"
            << "wrote values.csv, defender_policy.csv, attacker_policy.csv"
            << (method != "predictive" ? ", trace.csv" : "") << " in "
            << dir.string() << "\n";
  if (!vi_converged)
    throw ConvergenceError("value iteration hit the sweep cap (" +
                           std::to_string(o.params.max_sweeps) +
                           ") before reaching tolerance; partial trace written");
  return 0;
}

int cmd_evaluate(const CommonOpts& o, int episodes, const std::string& sweep_cap,
                 const std::string& sweep_esc) {
  o.params.validate();
  AttackGraph g = resolve_graph(o);
  const auto dir = ensure_out_dir(o);

  EvalReport report = compare_policies(g, o.params, mode_of(o), episodes, o.seed);

  std::vector<CsvRow> entry_rows;
  for (const auto& row : report.per_entry)
    entry_rows.push_back({static_cast<long long>(row.entry), row.random,
                          row.myopic, row.predictive});
  write_csv((dir / "eval_entries.csv").string(),
            {"entry", "random", "myopic", "predictive"}, entry_rows);

  std::vector<CsvRow> state_rows;
  for (const auto& row : report.per_state)
    state_rows.push_back({static_cast<long long>(row.state),
                          static_cast<long long>(row.depth),
                          static_cast<long long>(row.terminal ? 1 : 0),
                          row.random, row.myopic, row.predictive});
  write_csv((dir / "eval_states.csv").string(),
            {"state", "depth", "terminal", "random", "myopic", "predictive"},
            state_rows);

  write_csv((dir / "eval_rollout.csv").string(),
            {"episodes", "mean", "std_error", "half_width", "analytic_root"},
            {{static_cast<long long>(report.ne_rollout.episodes),
              report.ne_rollout.mean, report.ne_rollout.std_error,
              report.ne_rollout.half_width, report.analytic_root}});

  auto run_sweep = [&](const std::string& list, bool is_cap,
                       const std::string& file) {
    if (list.empty()) return;
    std::vector<CsvRow> rows;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      GameParams q = o.params;
      (is_cap ? q.cap : q.esc) = std::stod(tok);
      EvalReport r = compare_policies(g, q, mode_of(o), 1, o.seed);
      const auto& root_row = r.per_state[0];  // unrestricted root rewards
      rows.push_back(
          {std::stod(tok), root_row.random, root_row.myopic, root_row.predictive});
    }
    write_csv((dir / file).string(),
              {is_cap ? "cap" : "esc", "random", "myopic", "predictive"}, rows);
  };
  run_sweep(sweep_cap, true, "sweep_cap.csv");
  run_sweep(sweep_esc, false, "sweep_esc.csv");

  std::cout << "analytic root value: " << report.analytic_root << "\n"
            << "rollout: " << report.ne_rollout.mean << " +/- "
            << report.ne_rollout.half_width << " (" << episodes
            << " episodes)\n";
  for (const auto& row : report.per_entry)
    std::cout << "entry " << row.entry << ": random " << row.random
              << ", myopic " << row.myopic << ", predictive " << row.predictive
              << "\n";
  std::cout << "wrote eval_entries.csv, eval_states.csv, eval_rollout.csv in "
            << dir.string() << "\n";
  return 0;
}

std::vector<int> parse_int_list(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

int cmd_bench(const CommonOpts& o, const std::string& ns_list,
              const std::string& ks_list, const std::string& budgets_list,
              double timeout_s) {
  o.params.validate();
  const auto dir = ensure_out_dir(o);
  const std::vector<int> ns = parse_int_list(ns_list);
  const std::vector<int> ks = parse_int_list(ks_list);
  const std::vector<int> budgets = parse_int_list(budgets_list);
  if (ns.empty() || ks.empty() || budgets.empty())
    throw ValidationError("bench needs --ns, --ks, and --budgets lists");

  std::vector<CsvRow> rows;
  for (int n : ns) {
    for (int k : ks) {
      WattsStrogatzParams wp;
      wp.n = n;
      wp.k = k;
      wp.p = o.ws_p;
      wp.seed = o.seed;
      wp.n_entry = o.ws_entries;
      wp.n_target = o.ws_targets;
      const AttackGraph g = gen_watts_strogatz(wp);
      for (int h : budgets) {
        GameParams q = o.params;
        q.budget = h;
        for (StateSpaceMode mode :
             {StateSpaceMode::kFull, StateSpaceMode::kCompact}) {
          const auto t0 = std::chrono::steady_clock::now();
          std::string status = "ok";
          long long states = 0;
          double root_value = 0.0;
          try {
            const auto deadline =
                t0 +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(timeout_s));
            const StateSpace space = expand_state_space(g, q, mode);
            states = static_cast<long long>(space.size());
            SolveResult r = predictive_solve(space, q, deadline);
            root_value = r.values[space.root];
          } catch (const TimeoutError&) {
            status = "timeout";  // recorded, the grid keeps going
          }
          const double ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
          rows.push_back({static_cast<long long>(n), static_cast<long long>(k),
                          o.ws_p, static_cast<long long>(h),
                          std::string(to_string(mode)), states, root_value, ms,
                          status});
          std::cout << "n=" << n << " k=" << k << " H=" << h
                    << " mode=" << to_string(mode) << ": " << states
                    << " states, " << ms << " ms, " << status << "\n";
        }
      }
    }
  }
  write_csv((dir / "bench.csv").string(),
            {"n", "k", "p", "H", "mode", "states", "root_value", "wall_ms",
             "status"},
            rows);
  std::cout << "wrote bench.csv in " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"honeypot allocation game solver on mobile attack graphs"};
  app.require_subcommand(1);

  CommonOpts gen_o, solve_o, eval_o, bench_o;
  std::string method = "both";
  int episodes = 10000;
  std::string sweep_cap, sweep_esc;
  std::string ns_list = "20,50,100", ks_list = "4", budgets_list = "1,2";
  double timeout_s = 600.0;

  CLI::App* gen = app.add_subcommand("generate", "Generate a graph file");
  add_graph_source(gen, gen_o);
  gen->add_option("--out", gen_o.out_dir, "Output directory");

  CLI::App* solve = app.add_subcommand("solve", "Solve the Markov game");
  add_graph_source(solve, solve_o);
  add_param_flags(solve, solve_o);
  solve->add_option("--method", method, "both (default), predictive, or vi")
      ->check(CLI::IsMember({"both", "predictive", "vi"}));

  CLI::App* eval = app.add_subcommand("evaluate", "Compare defender policies");
  add_graph_source(eval, eval_o);
  add_param_flags(eval, eval_o);
  eval->add_option("--episodes", episodes, "Rollout episode count");
  eval->add_option("--sweep-cap", sweep_cap, "Comma list of capture weights");
  eval->add_option("--sweep-esc", sweep_esc, "Comma list of escape weights");

  CLI::App* bench = app.add_subcommand("bench", "Scalability benchmark");
  add_graph_source(bench, bench_o);
  add_param_flags(bench, bench_o);
  bench->add_option("--ns", ns_list, "Comma list of node counts");
  bench->add_option("--ks", ks_list, "Comma list of ring-neighbor counts");
  bench->add_option("--budgets", budgets_list, "Comma list of H values");
  bench->add_option("--timeout-s", timeout_s, "Per-cell timeout in seconds");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_generate(gen_o);
    if (solve->parsed()) return cmd_solve(solve_o, method);
    if (eval->parsed()) return cmd_evaluate(eval_o, episodes, sweep_cap, sweep_esc);
    if (bench->parsed()) return cmd_bench(bench_o, ns_list, ks_list, budgets_list, timeout_s);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[bad_input]: " << e.get_name() << "\n";
    return 2;
  } catch (const hags::ValidationError& e) {
    std::cerr << "error[bad_input]: " << e.what() << "\n";
    return 2;
  } catch (const hags::ConvergenceError& e) {
    std::cerr << "error[no_convergence]: " << e.what() << "\n";
    return 3;
  } catch (const hags::SolveError& e) {
    std::cerr << "error[no_convergence]: " << e.what() << "\n";
    return 3;
  } catch (const hags::TimeoutError& e) {
    std::cerr << "error[no_convergence]: " << e.what() << "\n";
    return 3;
  } catch (const hags::IoError& e) {
    std::cerr << "error[io]: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
}
