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

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "tso/graph.hpp"
#include "tso/greedy.hpp"
#include "tso/objective.hpp"

namespace tso {

// A SurvivalGraph plus the planning parameters and optional variant rewards
// carried by an instance file.
struct Instance {
  SurvivalGraph graph;
  std::size_t team_size = 1;
  bool directed = true;
  std::optional<MultiVisitTable> multi_visit;
  std::vector<EdgeReward> edge_rewards;

  VariantData variant_data() const {
    VariantData data;
    if (multi_visit) data.multi_visit = *multi_visit;
    data.edge_rewards = edge_rewards;
    return data;
  }
};

namespace detail {
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
}  // namespace detail

struct RandomGraphOptions {
  std::size_t nodes = 20;
  double min_survival = 0.3;
  double max_survival = 1.0;
  double p_s = 0.7;
  bool complete = true;
  double density = 0.5;  // edge probability when not complete
  std::uint64_t seed = 0;
  std::size_t team_size = 1;
};

// Random directed graph with survival probabilities uniform in [min, max).
// Nodes are labelled 1..V; v_s = 1 and v_t = V.
inline Instance random_instance(const RandomGraphOptions& opt) {
  if (!(opt.min_survival > 0.0 && opt.min_survival <= opt.max_survival && opt.max_survival <= 1.0)) {
    throw std::invalid_argument("survival range must satisfy 0 < min <= max <= 1");
  }
  if (opt.nodes < 2) throw std::invalid_argument("random instances need at least two nodes");
  Instance inst;
  inst.team_size = opt.team_size;
  SurvivalGraph& g = inst.graph;
  for (std::size_t i = 0; i < opt.nodes; ++i) g.add_node(static_cast<long long>(i + 1));
  std::mt19937_64 rng(opt.seed);
  const double span = opt.max_survival - opt.min_survival;
  for (NodeId i = 0; i < opt.nodes; ++i) {
    for (NodeId j = 0; j < opt.nodes; ++j) {
      if (i == j) continue;
      const double w = opt.min_survival + span * detail::unit_uniform(rng);
      const bool keep = opt.complete || detail::unit_uniform(rng) < opt.density;
      if (keep) g.add_edge(i, j, w);
    }
  }
  g.set_endpoints(0, opt.nodes - 1);
  g.set_survival_threshold(opt.p_s);
  return inst;
}

inline constexpr double kHexSafeSurvival = 0.98;
inline constexpr double kHexRiskySurvival = 0.91;

// 19-node hexagonal patch with the depot (label 0) in the middle. Nodes 1..6
// form the inner ring (clockwise from the top), 7..12 the outer ring
// vertices at distance sqrt(3), 13..18 the outer corners. The depot's six
// spokes survive with 0.98; every other lattice edge with 0.91. Undirected.
inline Instance hex_instance(double p_s = 0.70, std::size_t team_size = 6) {
  struct Link {
    int a;
    int b;
  };
  static constexpr Link kSpokes[] = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}};
  static constexpr Link kRisky[] = {
      {1, 2},   {1, 6},   {1, 7},   {1, 12},  {1, 13},  {2, 3},   {2, 7},   {2, 8},   {2, 14},
      {3, 4},   {3, 8},   {3, 9},   {3, 15},  {4, 5},   {4, 9},   {4, 10},  {4, 16},  {5, 6},
      {5, 10},  {5, 11},  {5, 17},  {6, 11},  {6, 12},  {6, 18},  {7, 13},  {7, 14},  {8, 14},
      {8, 15},  {9, 15},  {9, 16},  {10, 16}, {10, 17}, {11, 17}, {11, 18}, {12, 13}, {12, 18}};
  Instance inst;
  inst.team_size = team_size;
  inst.directed = false;
  SurvivalGraph& g = inst.graph;
  for (int i = 0; i < 19; ++i) g.add_node(i);
  for (const Link& l : kSpokes) g.add_undirected_edge(l.a, l.b, kHexSafeSurvival);
  for (const Link& l : kRisky) g.add_undirected_edge(l.a, l.b, kHexRiskySurvival);
  g.set_endpoints(0, 0);
  g.set_survival_threshold(p_s);
  return inst;
}

}  // namespace tso
