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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tso/tso.hpp"

namespace tso {
namespace {

Instance diamond_instance() {
  Instance inst;
  inst.graph = testing::diamond();
  inst.team_size = 2;
  return inst;
}

TEST(InstanceJson, RoundTrip) {
  Instance inst = diamond_instance();
  inst.graph.set_priority(2, 2.5);
  inst.edge_rewards = {{0, 1, 0.5}};
  MultiVisitTable t;
  t.max_visits = 2;
  t.reward.assign(4, {1.0, 0.25});
  inst.multi_visit = t;
  const json doc = instance_to_json(inst);
  const Instance back = instance_from_json(json::parse(doc.dump()));
  EXPECT_EQ(instance_to_json(back), doc);
  EXPECT_EQ(back.graph.priority(2), 2.5);
  EXPECT_EQ(back.graph.edges().size(), 5u);
  EXPECT_EQ(back.team_size, 2u);
  ASSERT_TRUE(back.multi_visit.has_value());
  EXPECT_EQ(back.multi_visit->reward[3][1], 0.25);
  EXPECT_EQ(back.edge_rewards.size(), 1u);
}

TEST(InstanceJson, UndirectedEdgesExpand) {
  const json doc = json::parse(R"({
    "version": 1, "directed": false,
    "nodes": [{"id": 10}, {"id": 20, "priority": 3.0}],
    "edges": [{"from": 10, "to": 20, "survival": 0.9}],
    "start": 10, "terminal": 10, "p_s": 0.8, "team_size": 1})");
  const Instance inst = instance_from_json(doc);
  EXPECT_EQ(inst.graph.edges().size(), 2u);
  EXPECT_TRUE(inst.graph.find_edge(1, 0).has_value());
  EXPECT_EQ(inst.graph.priority(0), 1.0);
  EXPECT_TRUE(inst.graph.is_depot());
  EXPECT_EQ(instance_to_json(inst)["edges"].size(), 1u);
}

TEST(InstanceJson, MalformedInputs) {
  const auto bad = [](const char* text) { return instance_from_json(json::parse(text)); };
  EXPECT_THROW(bad(R"({"nodes": [{"id": 1}], "edges": [], "start": 1, "terminal": 2, "p_s": 0.5})"), FormatError);
  EXPECT_THROW(bad(R"({"nodes": [{"id": 1}, {"id": 1}], "edges": [], "start": 1, "terminal": 1, "p_s": 0.5})"),
               FormatError);
  EXPECT_THROW(bad(R"({"nodes": [{"id": 1}], "edges": [], "start": 1, "terminal": 1})"), FormatError);
  EXPECT_THROW(bad(R"({"version": 2, "nodes": [], "edges": [], "start": 1, "terminal": 1, "p_s": 0.5})"),
               FormatError);
}

TEST(PlanJson, ReloadedPlanReproducesObjective) {
  const Instance inst = diamond_instance();
  GreedyConfig cfg;
  cfg.team_size = 2;
  const auto res = greedy_survivors(inst.graph, cfg);
  const json doc = greedy_plan_to_json(inst.graph, res, compute_bounds(inst.graph, cfg, res), 2);
  const json back = json::parse(dump(doc));
  const auto paths = plan_paths_from_json(inst.graph, back);
  EXPECT_EQ(back["paths"][0], json::parse("[1, 2, 4]"));
  EXPECT_NEAR(team_objective(inst.graph, std::span<const Path>(paths)).value, back["objective"].get<double>(), 1e-9);
  EXPECT_EQ(back["marginal_gains"].size(), 2u);
  EXPECT_TRUE(back["bounds"]["certified"].get<bool>());
  EXPECT_TRUE(back["bounds"]["U3"].is_null());
  EXPECT_EQ(back["per_path_survival"][1].get<double>(), 0.81);
}

TEST(RandomInstance, DeterministicPerSeed) {
  RandomGraphOptions opt;
  opt.nodes = 5;
  opt.seed = 42;
  EXPECT_EQ(instance_to_json(random_instance(opt)), instance_to_json(random_instance(opt)));
  const auto inst = random_instance(opt);
  EXPECT_EQ(inst.graph.edges().size(), 20u);
  for (const Edge& e : inst.graph.edges()) {
    EXPECT_GE(e.survival, 0.3);
    EXPECT_LT(e.survival, 1.0);
  }
  opt.seed = 43;
  EXPECT_NE(instance_to_json(random_instance(opt)), instance_to_json(inst));
}

TEST(RandomInstance, UnitRangeMakesEverythingReachable) {
  RandomGraphOptions opt;
  opt.nodes = 6;
  opt.min_survival = 1.0;
  opt.max_survival = 1.0;
  opt.p_s = 1.0;
  const auto report = feasibility_check(random_instance(opt).graph);
  for (NodeId j = 1; j < 6; ++j) EXPECT_TRUE(report.reachable[j]);
}

TEST(RandomInstance, BadRange) {
  RandomGraphOptions opt;
  opt.min_survival = 0.8;
  opt.max_survival = 0.5;
  EXPECT_THROW(random_instance(opt), std::invalid_argument);
  opt.min_survival = 0.0;
  EXPECT_THROW(random_instance(opt), std::invalid_argument);
}

TEST(HexInstance, Shape) {
  const Instance inst = hex_instance();
  const SurvivalGraph& g = inst.graph;
  EXPECT_EQ(g.size(), 19u);
  EXPECT_TRUE(g.is_depot());
  EXPECT_EQ(g.node(g.start()).label, 0);
  EXPECT_EQ(g.survival_threshold(), 0.70);
  EXPECT_EQ(inst.team_size, 6u);
  EXPECT_TRUE(validate_instance(g).empty());
  EXPECT_EQ(g.edges().size(), 84u);
  std::size_t safe = 0;
  for (const Edge& e : g.edges()) {
    EXPECT_TRUE(e.survival == 0.98 || e.survival == 0.91);
    if (e.survival == 0.98) {
      ++safe;
      EXPECT_TRUE(e.from == g.start() || e.to == g.start());
    }
    EXPECT_TRUE(g.find_edge(e.to, e.from).has_value());
  }
  EXPECT_EQ(safe, 12u);
}

TEST(Bench, OversizeRule) {
  EXPECT_EQ(oversize_for(1, 0.5, 6.0), 12u);
  EXPECT_EQ(oversize_for(2, 0.8, 6.0), 15u);
  EXPECT_EQ(oversize_for(3, 0.95, 0.1), 3u);
}

TEST(Bench, CsvFormat) {
  BenchRecord r;
  r.instance = "x";
  r.nodes = 3;
  r.team_size = 2;
  r.p_s = 0.85;
  r.oracle = "exact";
  r.objective = 1.0 / 3.0;
  r.upper = 0.5;
  r.ratio = 2.0 / 3.0;
  EXPECT_EQ(format_csv({r}), "instance,V,K,p_s,oracle,J,U,ratio,ms\nx,3,2,0.85,exact,0.333333333,0.5,0.666666667,0\n");
}

TEST(Bench, SmallRatioSuiteIsThreadIndependent) {
  BenchOptions opt;
  opt.instances = 2;
  opt.nodes = 8;
  opt.max_team = 3;
  opt.threads = 1;
  const std::string one = format_csv(ratio_suite(opt));
  opt.threads = 3;
  EXPECT_EQ(format_csv(ratio_suite(opt)), one);
  for (const auto& r : ratio_suite(opt)) {
    EXPECT_GT(r.ratio, 0.0);
    EXPECT_LE(r.ratio, 1.0 + 1e-12);
    EXPECT_GE(r.ratio, guarantee_factor(r.p_s) - 1e-9);
  }
}

TEST(Bench, HexSuite) {
  const auto records = hex_suite(BenchOptions{});
  ASSERT_EQ(records.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_EQ(records[k].team_size, k + 1);
    EXPECT_EQ(records[k].instance, "hex");
    if (k > 0) {
      EXPECT_GE(records[k].objective, records[k - 1].objective);
    }
  }
}

}  // namespace
}  // namespace tso
