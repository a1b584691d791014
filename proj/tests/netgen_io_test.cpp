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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "hags/csv.hpp"
#include "hags/graph_io.hpp"
#include "hags/netgen.hpp"
#include "hags/stage_game.hpp"

using namespace hags;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("fig1 fixture matches its published facts") {
  AttackGraph g = gen_fig1_tree();
  CHECK(g.node_count() == 7);
  CHECK(g.entry_ids().size() == 1);
  CHECK(enumerate_attack_paths(g).size() == 4);

  AttackGraph after = remove_node(remove_node(g, 4), 6);
  auto paths = enumerate_attack_paths(after);
  CHECK(paths.size() == 2);
  for (const auto& p : paths) CHECK(p.nodes.back() == 5);
}

TEST_CASE("reference network publishes 4 paths and 10 placements") {
  AttackGraph g = gen_reference_20();
  CHECK(g.node_count() == 20);
  CHECK(g.entry_ids() == std::vector<NodeId>{0, 1, 2});
  CHECK(g.target_ids() == std::vector<NodeId>{18, 19, 20});

  auto paths = enumerate_attack_paths(g);
  REQUIRE(paths.size() == 4);
  CHECK(paths[0].nodes == std::vector<NodeId>{0, 5, 11, 15, 18});
  CHECK(paths[1].nodes == std::vector<NodeId>{0, 5, 11, 15, 19});
  CHECK(paths[2].nodes == std::vector<NodeId>{0, 6, 12, 16, 19});
  CHECK(paths[3].nodes == std::vector<NodeId>{0, 6, 12, 16, 20});

  const std::vector<Edge> published{{6, 12}, {5, 11}, {16, 19}, {11, 15}, {0, 5},
                                    {16, 20}, {12, 16}, {0, 6}, {15, 19}, {15, 18}};
  auto pool = eligible_edges(g, paths, EligibleEdgeMode::kPathEdges);
  CHECK(pool.size() == 10);
  for (const Edge& e : published)
    CHECK(std::binary_search(pool.begin(), pool.end(), e));

  GameParams params;  // H = 1
  auto actions = defender_action_space(g, paths, params);
  CHECK(actions.size() == 11);  // empty + the ten single placements
  CHECK(actions.front().edges.empty());

  SECTION("values are seeded and in range") {
    for (NodeId u : g.intermediate_ids()) {
      CHECK(g.value(u) >= 10.0);
      CHECK(g.value(u) <= 50.0);
    }
    AttackGraph g2 = gen_reference_20();
    CHECK(g2 == g);
    AttackGraph g3 = gen_reference_20(99);
    CHECK_FALSE(g3 == g);               // values move with the seed
    CHECK(g3.edges() == g.edges());     // wiring is frozen
  }
  SECTION("stage game is an 11x4 matrix at H=1") {
    PayoffMatrix pm = build_payoff_matrix(g, params);
    CHECK(pm.values.rows() == 11);
    CHECK(pm.values.cols() == 4);
  }
  SECTION("removing node 11 kills the first branch") {
    AttackGraph after = remove_node(g, 11);
    auto remaining = enumerate_attack_paths(after);
    REQUIRE(remaining.size() == 2);
    CHECK(remaining[0].nodes == std::vector<NodeId>{0, 6, 12, 16, 19});
    CHECK(remaining[1].nodes == std::vector<NodeId>{0, 6, 12, 16, 20});
  }
}

TEST_CASE("watts-strogatz generator") {
  WattsStrogatzParams wp;
  wp.n = 40;
  wp.k = 4;
  wp.p = 0.1;
  wp.seed = 7;

  AttackGraph g = gen_watts_strogatz(wp);
  CHECK(g.node_count() == 40);
  CHECK(g.entry_ids().size() == 3);
  CHECK(g.target_ids().size() == 3);
  CHECK_FALSE(enumerate_attack_paths(g).empty());

  SECTION("determinism under the seed") {
    AttackGraph g2 = gen_watts_strogatz(wp);
    CHECK(g2 == g);
    CHECK(g2.entry_ids() == g.entry_ids());
  }
  SECTION("p=0 keeps the ring lattice degree") {
    WattsStrogatzParams ring = wp;
    ring.p = 0.0;
    AttackGraph r = gen_watts_strogatz(ring);
    for (const Node& n : r.nodes()) CHECK(r.degree(n.id) == 4);
  }
  SECTION("parameter validation") {
    WattsStrogatzParams bad = wp;
    bad.k = 50;
    CHECK_THROWS_AS(gen_watts_strogatz(bad), ValidationError);
    bad = wp;
    bad.p = 1.5;
    CHECK_THROWS_AS(gen_watts_strogatz(bad), ValidationError);
  }
  SECTION("orientation is acyclic") {
    std::map<NodeId, int> indeg;
    for (const Node& n : g.nodes()) indeg[n.id] = 0;
    for (const Edge& e : g.edges()) indeg[e.dst]++;
    std::vector<NodeId> order;
    std::vector<NodeId> ready;
    for (auto& [id, d] : indeg)
      if (d == 0) ready.push_back(id);
    while (!ready.empty()) {
      NodeId u = ready.back();
      ready.pop_back();
      order.push_back(u);
      for (NodeId v : g.out_neighbors(u))
        if (--indeg[v] == 0) ready.push_back(v);
    }
    CHECK(order.size() == g.node_count());
  }
}

TEST_CASE("graph file round trip") {
  const std::string path = temp_path("hags_roundtrip.json");
  AttackGraph g = gen_fig1_tree();
  save_graph(g, path, {{"generator", "fig1"}});
  AttackGraph loaded = load_graph(path);
  CHECK(loaded == g);
  CHECK(loaded.entry_ids() == g.entry_ids());
  CHECK(loaded.target_ids() == g.target_ids());

  AttackGraph big = gen_reference_20(3);
  save_graph(big, path);
  CHECK(load_graph(path) == big);  // double values survive exactly
  std::remove(path.c_str());
}

TEST_CASE("graph file error handling") {
  const std::string path = temp_path("hags_badfile.json");

  SECTION("truncated file") {
    std::ofstream(path) << "{\"version\": \"hags-graph-1\", \"nodes\": [";
    CHECK_THROWS_AS(load_graph(path), IoError);
  }
  SECTION("version mismatch") {
    std::ofstream(path) << R"({"version":"hags-graph-99","nodes":[],"edges":[]})";
    CHECK_THROWS_AS(load_graph(path), IoError);
  }
  SECTION("edge to a missing node fails validation") {
    std::ofstream(path) << R"({"version":"hags-graph-1",
      "nodes":[{"id":0,"value":0.0,"kind":"entry"},
               {"id":1,"value":5.0,"kind":"target"}],
      "edges":[[0,9]]})";
    CHECK_THROWS_AS(load_graph(path), ValidationError);
  }
  SECTION("missing file") {
    CHECK_THROWS_AS(load_graph(temp_path("does_not_exist.json")), IoError);
  }
  std::remove(path.c_str());
}

TEST_CASE("csv writer is byte-stable") {
  const std::string a = temp_path("hags_a.csv");
  const std::string b = temp_path("hags_b.csv");
  std::vector<std::string> header{"iteration", "state", "value", "sup_norm_delta"};
  std::vector<CsvRow> rows{
      {0LL, 0LL, -130.123456789, 1.0},
      {1LL, 0LL, -130.0, 0.25},
  };
  write_csv(a, header, rows);
  write_csv(b, header, rows);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) ==
        "iteration,state,value,sup_norm_delta\n"
        "0,0,-130.123457,1\n"
        "1,0,-130,0.25\n");

  SECTION("empty record list yields a header-only file") {
    write_csv(a, header, {});
    CHECK(slurp(a) == "iteration,state,value,sup_norm_delta\n");
  }
  std::remove(a.c_str());
  std::remove(b.c_str());
}
