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

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "hags/attack_graph.hpp"
#include "hags/errors.hpp"
#include "json.hpp"

namespace hags {

inline constexpr const char* kGraphFormatVersion = "hags-graph-1";

/// Serializes a graph to a versioned JSON document. Node kinds travel with
/// the nodes; doubles round-trip exactly (shortest-representation dump).
inline void save_graph(const AttackGraph& g, const std::string& path,
                       const std::map<std::string, std::string>& metadata = {}) {
  nlohmann::json doc;
  doc["version"] = kGraphFormatVersion;
  doc["nodes"] = nlohmann::json::array();
  for (const Node& n : g.nodes())
    doc["nodes"].push_back(
        {{"id", n.id}, {"value", n.value}, {"kind", to_string(n.kind)}});
  doc["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges()) doc["edges"].push_back({e.src, e.dst});
  doc["metadata"] = metadata;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

/// Loads and re-validates a graph; the result satisfies every AttackGraph
/// invariant or an error is thrown.
inline AttackGraph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed graph file " + path + ": " + e.what());
  }

  try {
    if (!doc.contains("version") || doc["version"] != kGraphFormatVersion)
      throw IoError("unsupported graph format version in " + path);

    std::vector<Node> nodes;
    std::vector<NodeId> entries, targets;
    for (const auto& jn : doc.at("nodes")) {
      Node n;
      n.id = jn.at("id").get<NodeId>();
      n.value = jn.at("value").get<double>();
      const std::string kind = jn.at("kind").get<std::string>();
      if (kind == "entry")
        entries.push_back(n.id);
      else if (kind == "target")
        targets.push_back(n.id);
      else if (kind != "intermediate")
        throw IoError("unknown node kind '" + kind + "' in " + path);
      nodes.push_back(n);
    }
    std::vector<Edge> edges;
    for (const auto& je : doc.at("edges"))
      edges.push_back({je.at(0).get<NodeId>(), je.at(1).get<NodeId>()});
    return AttackGraph::build(std::move(nodes), std::move(edges), entries, targets);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed graph file " + path + ": " + e.what());
  }
}

}  // namespace hags
