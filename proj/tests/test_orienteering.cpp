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
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tso/orienteering.hpp"

namespace tso {
namespace {

using testing::diamond;

double node_reward(const Path& p, const std::vector<double>& nu) {
  std::vector<char> seen(nu.size(), 0);
  double r = 0.0;
  for (std::size_t n = 1; n < p.size(); ++n) {
    if (!seen[p[n]]) r += nu[p[n]];
    seen[p[n]] = 1;
  }
  return r;
}

double edge_reward(const SurvivalGraph& g, const Path& p, const std::vector<double>& by_edge) {
  double r = 0.0;
  for (std::size_t n = 1; n < p.size(); ++n) {
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      if (g.edges()[e].from == p[n - 1] && g.edges()[e].to == p[n]) r += by_edge[e];
    }
  }
  return r;
}

struct Best {
  double reward = -1.0;
  Path path;
};

template <class Score>
Best enumerate_best(const SurvivalGraph& g, Score score) {
  Best best;
  for (const auto& p : testing::feasible_paths(g)) {
    const double r = score(p.path);
    const double tol = 1e-12 * (1.0 + std::abs(best.reward));
    if (r > best.reward + tol || (r >= best.reward - tol && p.path < best.path)) best = {r, p.path};
  }
  return best;
}

std::vector<double> random_rewards(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> nu(n);
  for (double& x : nu) x = rng() % 4 == 0 ? 0.0 : testing::uniform(rng, 0.0, 1.0);
  return nu;
}

TEST(SolveExact, Diamond) {
  const auto g = diamond();
  const LogGraph lg = log_transform(g);
  const auto res = solve_exact(OrienteeringProblem(lg, max_visit_probabilities(lg)));
  EXPECT_EQ(res.path, (Path{0, 1, 3}));
  EXPECT_NEAR(res.reward, 1.9, 1e-12);
  EXPECT_TRUE(res.exact);
  EXPECT_GT(res.nodes_expanded, 0u);
}

TEST(SolveExact, ZeroBudgetTakesFreeEdge) {
  auto g = diamond(1.0);
  const LogGraph lg = log_transform(g);
  const auto res = solve_exact(OrienteeringProblem(lg, {5.0, 5.0, 5.0, 2.0}));
  EXPECT_EQ(res.path, (Path{0, 3}));
  EXPECT_EQ(res.reward, 2.0);
}

TEST(SolveExact, ZeroRewardsStillFeasible) {
  const LogGraph lg = log_transform(diamond());
  const auto res = solve_exact(OrienteeringProblem(lg, std::vector<double>(4, 0.0)));
  EXPECT_EQ(res.reward, 0.0);
  EXPECT_LE(path_cost(lg, res.path), lg.budget() + kBudgetTolerance);
  EXPECT_EQ(res.path, (Path{0, 1, 3}));  // lexicographically smallest feasible path
}

TEST(SolveExact, InfeasibleThrows) {
  SurvivalGraph g;
  g.add_node(1);
  g.add_node(2);
  g.add_edge(0, 1, 0.5);
  g.set_endpoints(0, 1);
  g.set_survival_threshold(0.9);
  const LogGraph lg = log_transform(g);
  EXPECT_THROW(solve_exact(OrienteeringProblem(lg, {1.0, 1.0})), InfeasibleInstance);
}

TEST(SolveExact, RejectsNegativeRewards) {
  const LogGraph lg = log_transform(diamond());
  EXPECT_THROW(solve_exact(OrienteeringProblem(lg, {0.0, -1.0, 0.0, 0.0})), std::invalid_argument);
}

TEST(SolveExact, MatchesEnumeration) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 80; ++trial) {
    const bool depot = trial % 4 == 0;
    const std::size_t n = 4 + trial % 5;
    const auto g = testing::random_graph(rng, {.nodes = n, .density = 0.6, .depot = depot,
                                               .p_s = testing::uniform(rng, 0.2, 0.8)});
    const LogGraph lg = log_transform(g);
    const auto nu = random_rewards(rng, n);
    const Best want = enumerate_best(g, [&](const Path& p) { return node_reward(p, nu); });
    if (want.path.empty()) continue;
    const auto got = solve_exact(OrienteeringProblem(lg, nu));
    EXPECT_NEAR(got.reward, want.reward, 1e-12);
    EXPECT_NEAR(node_reward(got.path, nu), got.reward, 1e-12);
    EXPECT_EQ(got.path, want.path);
    EXPECT_LE(path_cost(lg, got.path), lg.budget() + kBudgetTolerance);
  }
}

TEST(SolveExact, BoundDoesNotChangeResult) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = testing::random_graph(rng, {.nodes = 7, .density = 0.7, .p_s = 0.3});
    const LogGraph lg = log_transform(g);
    const DistanceTable dist(lg);
    const OrienteeringProblem problem(lg, random_rewards(rng, 7));
    const auto with = solve_exact(problem, dist, true);
    const auto without = solve_exact(problem, dist, false);
    EXPECT_EQ(with.reward, without.reward);
    EXPECT_EQ(with.path, without.path);
    EXPECT_LE(with.nodes_expanded, without.nodes_expanded);
  }
}

TEST(SolveHeuristic, Diamond) {
  const LogGraph lg = log_transform(diamond());
  const OrienteeringProblem problem(lg, max_visit_probabilities(lg));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto one = solve_heuristic(problem, {.seed = seed, .restarts = 1});
    EXPECT_GE(one.reward, 1.0);
    EXPECT_FALSE(one.exact);
  }
  const auto ten = solve_heuristic(problem, {.seed = 3, .restarts = 10});
  EXPECT_NEAR(ten.reward, 1.9, 1e-12);
  EXPECT_EQ(ten.path, (Path{0, 1, 3}));
}

TEST(SolveHeuristic, Deterministic) {
  std::mt19937_64 rng(71);
  const auto g = testing::random_graph(rng, {.nodes = 12, .density = 1.0, .p_s = 0.5});
  const LogGraph lg = log_transform(g);
  const OrienteeringProblem problem(lg, random_rewards(rng, 12));
  const auto a = solve_heuristic(problem, {.seed = 99});
  const auto b = solve_heuristic(problem, {.seed = 99});
  EXPECT_EQ(a.path, b.path);
  EXPECT_EQ(a.reward, b.reward);
}

TEST(SolveHeuristic, NeverBeatsExact) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 40; ++trial) {
    const bool depot = trial % 4 == 1;
    const auto g = testing::random_graph(rng, {.nodes = 8, .density = 0.8, .depot = depot,
                                               .p_s = testing::uniform(rng, 0.3, 0.8)});
    const auto nu = random_rewards(rng, 8);
    if (!feasibility_check(g).nonempty) continue;
    const LogGraph lg = log_transform(g);
    const OrienteeringProblem problem(lg, nu);
    const auto exact = solve_exact(problem);
    const auto heur = solve_heuristic(problem, {.seed = static_cast<std::uint64_t>(trial), .restarts = 16});
    EXPECT_LE(heur.reward, exact.reward + 1e-12);
    EXPECT_NEAR(node_reward(heur.path, problem.reward), heur.reward, 1e-12);
    EXPECT_NO_THROW(check_feasible_path(g, heur.path));
  }
}

std::vector<double> edge_vector(const SurvivalGraph& g, NodeId from, NodeId to, double value) {
  std::vector<double> r(g.edges().size(), 0.0);
  r[*g.find_edge(from, to)] = value;
  return r;
}

TEST(SolveArcExact, UnitRewardOnOneEdge) {
  const auto g = diamond();
  const LogGraph lg = log_transform(g);
  const auto res = solve_arc_exact(OrienteeringProblem(lg, edge_vector(g, 0, 1, 1.0)));
  EXPECT_EQ(res.path, (Path{0, 1, 3}));
  EXPECT_EQ(res.reward, 1.0);
}

TEST(SolveArcExact, UnreachableRewardFallsBackToShortestReturn) {
  const auto g = diamond();
  const LogGraph lg = log_transform(g);
  const auto res = solve_arc_exact(OrienteeringProblem(lg, edge_vector(g, 0, 2, 1.0)));
  EXPECT_EQ(res.reward, 0.0);
  EXPECT_LE(path_cost(lg, res.path), lg.budget() + kBudgetTolerance);
}

TEST(SolveArcExact, DirectEdge) {
  const auto g = diamond();
  const LogGraph lg = log_transform(g);
  const auto res = solve_arc_exact(OrienteeringProblem(lg, edge_vector(g, 0, 3, 2.5)));
  EXPECT_EQ(res.path, (Path{0, 3}));
  EXPECT_EQ(res.reward, 2.5);
}

TEST(SolveArcExact, MatchesEnumeration) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    const bool depot = trial % 4 == 2;
    const auto g = testing::random_graph(rng, {.nodes = 6, .density = 0.6, .depot = depot,
                                               .p_s = testing::uniform(rng, 0.2, 0.7)});
    const LogGraph lg = log_transform(g);
    const auto r = random_rewards(rng, g.edges().size());
    const Best want = enumerate_best(g, [&](const Path& p) { return edge_reward(g, p, r); });
    if (want.path.empty()) continue;
    const auto got = solve_arc_exact(OrienteeringProblem(lg, r));
    EXPECT_NEAR(got.reward, want.reward, 1e-12);
    EXPECT_EQ(got.path, want.path);
    const auto heur = solve_arc_heuristic(OrienteeringProblem(lg, r), DistanceTable(lg), {.seed = 1, .restarts = 8});
    EXPECT_LE(heur.reward, got.reward + 1e-12);
    EXPECT_NEAR(edge_reward(g, heur.path, r), heur.reward, 1e-12);
    EXPECT_NO_THROW(check_feasible_path(g, heur.path)) << ::testing::PrintToString(heur.path) << " depot " << depot;
  }
}

}  // namespace
}  // namespace tso
