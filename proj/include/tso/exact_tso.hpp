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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tso/graph.hpp"
#include "tso/greedy.hpp"
#include "tso/objective.hpp"

namespace tso {

inline constexpr std::size_t kCatalogMaxNodes = 12;
inline constexpr double kMaxMultisets = 1e7;

// Every feasible v_s -> v_t path with at least one edge, sorted
// lexicographically.
struct PathCatalog {
  std::vector<VisitProfile> paths;
};

// `max_nodes` may be raised for larger graphs whose budget keeps the catalog
// small.
inline PathCatalog enumerate_feasible_paths(const SurvivalGraph& g, std::size_t max_nodes = kCatalogMaxNodes) {
  if (g.size() > max_nodes) {
    throw GuardViolation("path enumeration limited to " + std::to_string(max_nodes) + " nodes");
  }
  require_valid(g);
  const LogGraph lg = log_transform(g);
  const auto to_terminal = dijkstra(lg, lg.terminal(), Direction::kReverse);
  const double limit = lg.budget() + kBudgetTolerance;
  std::vector<Path> found;
  enumerate_simple_paths(
      g, [&](NodeId v, double s) { return -std::log(s) + to_terminal.distance[v] <= limit; },
      [&](const Path& p, double s) {
        if (p.size() > 1 && -std::log(s) <= limit) found.push_back(p);
      });
  std::sort(found.begin(), found.end());
  PathCatalog catalog;
  catalog.paths.reserve(found.size());
  for (const Path& p : found) catalog.paths.push_back(visit_profile(g, p));
  return catalog;
}

inline double multiset_count(std::size_t n, std::size_t k) {
  // C(n + k - 1, k)
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n + i - 1) / static_cast<double>(i);
  return c;
}

// Optimal K-robot plan by exhaustive search over K-multisets of catalog paths.
// Among maximizers the lexicographically smallest sorted path list wins.
inline TeamPlan solve_exact_tso(const SurvivalGraph& g, std::size_t team_size, const PathCatalog& catalog) {
  if (team_size == 0) throw std::invalid_argument("team size must be at least 1");
  const std::size_t n = catalog.paths.size();
  if (n == 0) throw InfeasibleInstance("no feasible path with at least one edge");
  if (multiset_count(n, team_size) > kMaxMultisets) {
    throw GuardViolation("exact search over " + std::to_string(n) + " paths with K = " + std::to_string(team_size) +
                         " exceeds the enumeration limit");
  }
  const std::size_t V = g.size();
  std::vector<std::vector<double>> miss(team_size + 1, std::vector<double>(V, 1.0));
  std::vector<std::size_t> pick(team_size, 0);
  std::vector<std::size_t> best;
  double best_value = -1.0;

  const auto leaf_value = [&](const std::vector<double>& m) {
    double v = 0.0;
    for (NodeId j = 0; j < V; ++j) v += g.priority(j) * (1.0 - m[j]);
    return v;
  };
  const auto recurse = [&](auto&& self, std::size_t depth, std::size_t from) -> void {
    if (depth == team_size) {
      const double v = leaf_value(miss[depth]);
      const double tol = 1e-12 * (1.0 + std::abs(best_value));
      if (best.empty() || v > best_value + tol || (v >= best_value - tol && pick < best)) {
        best_value = v;
        best = pick;
      }
      return;
    }
    for (std::size_t i = from; i < n; ++i) {
      pick[depth] = i;
      const auto& z = catalog.paths[i].visit_prob;
      for (NodeId j = 0; j < V; ++j) miss[depth + 1][j] = miss[depth][j] * (1.0 - z[j]);
      self(self, depth + 1, i);
    }
  };
  recurse(recurse, 0, 0);

  std::vector<Path> paths;
  for (std::size_t i : best) paths.push_back(catalog.paths[i].path);
  TeamPlan plan = make_plan(g, std::move(paths));
  plan.exact = true;
  return plan;
}

inline TeamPlan solve_exact_tso(const SurvivalGraph& g, std::size_t team_size) {
  return solve_exact_tso(g, team_size, enumerate_feasible_paths(g));
}

}  // namespace tso
