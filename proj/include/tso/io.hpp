// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tso/exact_tso.hpp"
#include "tso/greedy.hpp"
#include "tso/instance.hpp"

namespace tso {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline NodeId node_by_label(const SurvivalGraph& g, long long label) {
  const auto id = g.find_label(label);
  if (!id) throw FormatError("unknown node id " + std::to_string(label));
  return *id;
}

}  // namespace detail

inline Instance instance_from_json(const json& doc) {
  try {
    if (doc.value("version", 1) != 1) throw FormatError("unsupported instance version");
    Instance inst;
    inst.directed = doc.value("directed", true);
    SurvivalGraph& g = inst.graph;
    for (const auto& n : doc.at("nodes")) {
      const long long label = n.at("id").get<long long>();
      if (g.find_label(label)) throw FormatError("duplicate node id " + std::to_string(label));
      g.add_node(label, n.value("priority", 1.0));
    }
    for (const auto& e : doc.at("edges")) {
      const NodeId from = detail::node_by_label(g, e.at("from").get<long long>());
      const NodeId to = detail::node_by_label(g, e.at("to").get<long long>());
      const double w = e.at("survival").get<double>();
      if (inst.directed) {
        g.add_edge(from, to, w);
      } else {
        g.add_undirected_edge(from, to, w);
      }
    }
    g.set_endpoints(detail::node_by_label(g, doc.at("start").get<long long>()),
                    detail::node_by_label(g, doc.at("terminal").get<long long>()));
    g.set_survival_threshold(doc.at("p_s").get<double>());
    const long long team = doc.value("team_size", 1LL);
    if (team < 1) throw FormatError("team_size must be at least 1");
    inst.team_size = static_cast<std::size_t>(team);
    if (doc.contains("multi_visit")) {
      const auto& mv = doc.at("multi_visit");
      MultiVisitTable table;
      table.max_visits = mv.at("M").get<std::size_t>();
      table.reward = mv.at("d").get<std::vector<std::vector<double>>>();
      inst.multi_visit = std::move(table);
    }
    if (doc.contains("edge_rewards")) {
      for (const auto& r : doc.at("edge_rewards")) {
        inst.edge_rewards.push_back({detail::node_by_label(g, r.at("from").get<long long>()),
                                     detail::node_by_label(g, r.at("to").get<long long>()), r.at("d").get<double>()});
      }
    }
    return inst;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed instance: ") + e.what());
  }
}

inline json instance_to_json(const Instance& inst) {
  const SurvivalGraph& g = inst.graph;
  json doc;
  doc["version"] = 1;
  doc["directed"] = inst.directed;
  json nodes = json::array();
  for (const Node& n : g.nodes()) nodes.push_back({{"id", n.label}, {"priority", n.priority}});
  doc["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    // Undirected instances store each pair once.
    if (!inst.directed && e.from > e.to && g.find_edge(e.to, e.from)) continue;
    edges.push_back({{"from", g.node(e.from).label}, {"to", g.node(e.to).label}, {"survival", e.survival}});
  }
  doc["edges"] = std::move(edges);
  doc["start"] = g.node(g.start()).label;
  doc["terminal"] = g.node(g.terminal()).label;
  doc["p_s"] = g.survival_threshold();
  doc["team_size"] = inst.team_size;
  if (inst.multi_visit) {
    doc["multi_visit"] = {{"M", inst.multi_visit->max_visits}, {"d", inst.multi_visit->reward}};
  }
  if (!inst.edge_rewards.empty()) {
    json rewards = json::array();
    for (const EdgeReward& r : inst.edge_rewards) {
      rewards.push_back({{"from", g.node(r.from).label}, {"to", g.node(r.to).label}, {"d", r.reward}});
    }
    doc["edge_rewards"] = std::move(rewards);
  }
  return doc;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

inline Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

inline json path_to_json(const SurvivalGraph& g, const Path& p) {
  json out = json::array();
  for (NodeId v : p) out.push_back(g.node(v).label);
  return out;
}

inline Path path_from_json(const SurvivalGraph& g, const json& j) {
  Path p;
  for (const auto& v : j) p.push_back(detail::node_by_label(g, v.get<long long>()));
  return p;
}

inline json plan_to_json(const SurvivalGraph& g, const TeamPlan& plan) {
  json doc;
  json paths = json::array();
  for (const Path& p : plan.paths) paths.push_back(path_to_json(g, p));
  doc["paths"] = std::move(paths);
  doc["objective"] = plan.objective;
  doc["per_node_visit_prob"] = plan.visit_prob;
  std::vector<double> survival;
  for (const auto& profile : plan.profiles) survival.push_back(profile.survival());
  doc["per_path_survival"] = survival;
  return doc;
}

inline json bounds_to_json(const BoundCertificate& cert) {
  json b;
  b["U1"] = cert.reachable_bound;
  b["U2"] = cert.factor_bound;
  b["U3"] = cert.oversize_bound ? json(*cert.oversize_bound) : json(nullptr);
  b["factor"] = cert.factor;
  b["oversize_factor"] = cert.oversize_factor ? json(*cert.oversize_factor) : json(nullptr);
  b["U"] = cert.upper;
  b["certified"] = cert.certified;
  if (!cert.certified) b["note"] = "heuristic oracle: bound not certified";
  return b;
}

// Plan file for a greedy solve: base plan plus marginal gains and bounds.
inline json greedy_plan_to_json(const SurvivalGraph& g, const GreedyResult& result, const BoundCertificate& cert,
                                std::size_t team_size) {
  json doc = plan_to_json(g, result.plan);
  doc["marginal_gains"] = std::vector<double>(result.marginal_gains.begin(),
                                              result.marginal_gains.begin() + static_cast<std::ptrdiff_t>(team_size));
  doc["bounds"] = bounds_to_json(cert);
  doc["oracle"] = result.exact_oracle ? "exact" : "heuristic";
  return doc;
}

inline std::vector<Path> plan_paths_from_json(const SurvivalGraph& g, const json& doc) {
  std::vector<Path> paths;
  for (const auto& p : doc.at("paths")) paths.push_back(path_from_json(g, p));
  return paths;
}

inline std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace tso
