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
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tso/graph.hpp"
#include "tso/objective.hpp"
#include "tso/orienteering.hpp"

namespace tso {

enum class OracleKind { kExact, kHeuristic };
enum class Variant { kNode, kEdge, kMultiVisit };

struct GreedyConfig {
  std::size_t team_size = 1;
  std::optional<std::size_t> oversize;  // L >= K robots planned for the U3 bound
  OracleKind oracle = OracleKind::kExact;
  Variant variant = Variant::kNode;
  std::uint64_t seed = 0;
  std::size_t restarts = 64;

  std::size_t planned_robots() const { return std::max(team_size, oversize.value_or(team_size)); }
};

// Reward data for the edge and multi-visit variants.
struct VariantData {
  MultiVisitTable multi_visit;
  std::vector<EdgeReward> edge_rewards;
};

struct TeamPlan {
  std::vector<Path> paths;
  std::vector<VisitProfile> profiles;
  std::vector<double> visit_prob;  // E[x_j]
  double objective = 0.0;
  bool exact = false;
};

inline TeamPlan make_plan(const SurvivalGraph& g, std::vector<Path> paths) {
  TeamPlan plan;
  plan.paths = std::move(paths);
  plan.profiles = visit_profiles(g, plan.paths);
  auto team = team_objective(g, std::span<const VisitProfile>(plan.profiles));
  plan.visit_prob = std::move(team.visit_prob);
  plan.objective = team.value;
  return plan;
}

struct GreedyResult {
  TeamPlan plan;                          // first K paths
  std::vector<Path> trajectory;           // all planned paths in selection order
  std::vector<double> marginal_gains;     // true objective gain of each step
  std::vector<double> oracle_rewards;     // linearized reward the oracle maximized
  std::vector<double> objective_by_size;  // objective after each step
  std::vector<double> zeta;
  bool exact_oracle = true;
};

inline void require_valid(const SurvivalGraph& g) {
  const auto violations = validate_instance(g);
  if (violations.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& v : violations) msg += " " + v.message + ";";
  throw std::invalid_argument(msg);
}

namespace detail {

inline std::uint64_t step_seed(std::uint64_t seed, std::size_t step) {
  return seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(step) + 1));
}

// Per-node reward weights c_j for the next robot given the visit-count
// distribution of the robots already planned.
inline double multi_visit_weight(const std::vector<double>& reward, const std::vector<double>& counts) {
  double c = 0.0;
  for (std::size_t m = 1; m <= reward.size(); ++m) {
    if (m - 1 < counts.size()) c += reward[m - 1] * counts[m - 1];
  }
  return c;
}

}  // namespace detail

// Greedy team construction. Each robot's path solves an orienteering problem
// on the log graph with rewards zeta * c, where c is the still-unclaimed
// value of a node (or edge) given the robots already planned.
inline GreedyResult greedy_survivors_variant(const SurvivalGraph& g, const GreedyConfig& cfg,
                                             const VariantData& data) {
  if (cfg.team_size == 0) throw std::invalid_argument("team size must be at least 1");
  if (cfg.oversize && *cfg.oversize < cfg.team_size) {
    throw std::invalid_argument("oversized team must be at least the team size");
  }
  require_valid(g);
  const LogGraph lg = log_transform(g);
  const DistanceTable dist(lg);
  const std::size_t robots = cfg.planned_robots();

  GreedyResult result;
  result.exact_oracle = cfg.oracle == OracleKind::kExact;
  result.zeta = max_visit_probabilities(lg);
  const auto& zeta = result.zeta;
  const std::size_t V = g.size();

  // Node and multi-visit state.
  std::vector<double> miss(V, 1.0);
  std::vector<std::vector<double>> counts(V, std::vector<double>{1.0});
  const MultiVisitTable* table = nullptr;
  if (cfg.variant == Variant::kMultiVisit) {
    validate_multi_visit(data.multi_visit, V);
    table = &data.multi_visit;
  }
  // Edge state.
  std::vector<double> edge_reward;
  std::vector<double> edge_miss;
  std::vector<double> edge_zeta;
  if (cfg.variant == Variant::kEdge) {
    edge_reward = edge_reward_vector(g, data.edge_rewards);
    edge_miss.assign(g.edges().size(), 1.0);
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      edge_zeta.push_back(zeta[g.edges()[e].from] * g.edges()[e].survival);
    }
  }

  std::vector<VisitProfile> chosen;
  double previous = 0.0;
  for (std::size_t k = 0; k < robots; ++k) {
    std::vector<double> nu;
    if (cfg.variant == Variant::kEdge) {
      nu.resize(g.edges().size());
      for (std::size_t e = 0; e < nu.size(); ++e) nu[e] = edge_zeta[e] * (edge_reward[e] * edge_miss[e]);
    } else {
      nu.resize(V);
      for (NodeId j = 0; j < V; ++j) {
        const double c = table ? detail::multi_visit_weight(table->reward[j], counts[j]) : g.priority(j) * miss[j];
        nu[j] = zeta[j] * c;
      }
    }
    const OrienteeringProblem problem(lg, std::move(nu));
    OracleResult oracle;
    if (cfg.oracle == OracleKind::kExact) {
      oracle = cfg.variant == Variant::kEdge ? solve_arc_exact(problem, dist) : solve_exact(problem, dist);
    } else {
      const HeuristicOptions options{detail::step_seed(cfg.seed, k), cfg.restarts, 3};
      oracle = cfg.variant == Variant::kEdge ? solve_arc_heuristic(problem, dist, options)
                                             : solve_heuristic(problem, dist, options);
    }
    VisitProfile profile = visit_profile(g, oracle.path);

    double value = 0.0;
    if (cfg.variant == Variant::kNode) {
      const double gain = discrete_derivative(g, profile, chosen);
      chosen.push_back(profile);
      value = previous + gain;
      result.marginal_gains.push_back(gain);
    } else {
      chosen.push_back(profile);
      value = cfg.variant == Variant::kEdge ? edge_team_objective(g, chosen, edge_reward)
                                            : multi_visit_objective(chosen, *table);
      result.marginal_gains.push_back(value - previous);
    }
    previous = value;
    result.objective_by_size.push_back(value);
    result.oracle_rewards.push_back(oracle.reward);

    for (NodeId j = 0; j < V; ++j) {
      const double p = profile.visit_prob[j];
      miss[j] *= 1.0 - p;
      auto& row = counts[j];
      row.push_back(0.0);
      for (std::size_t m = row.size() - 1; m > 0; --m) row[m] = row[m] * (1.0 - p) + row[m - 1] * p;
      row[0] *= 1.0 - p;
    }
    if (cfg.variant == Variant::kEdge) {
      const auto z = edge_visit_prob(g, profile);
      for (std::size_t e = 0; e < z.size(); ++e) edge_miss[e] *= 1.0 - z[e];
    }
    result.trajectory.push_back(std::move(oracle.path));
  }

  std::vector<Path> first(result.trajectory.begin(),
                          result.trajectory.begin() + static_cast<std::ptrdiff_t>(cfg.team_size));
  result.plan = make_plan(g, std::move(first));
  result.plan.objective = result.objective_by_size[cfg.team_size - 1];
  // Node variant: recompute J from the profiles so the plan is self-consistent.
  if (cfg.variant == Variant::kNode) {
    result.plan.objective = team_objective(g, std::span<const VisitProfile>(result.plan.profiles)).value;
  }
  return result;
}

inline GreedyResult greedy_survivors(const SurvivalGraph& g, const GreedyConfig& cfg) {
  GreedyConfig node_cfg = cfg;
  node_cfg.variant = Variant::kNode;
  return greedy_survivors_variant(g, node_cfg, {});
}

// Upper bounds on the optimal K-robot objective:
//   U1  value reachable within budget, each item capped by K independent
//       visits at probability zeta;
//   U2  J(greedy K) / (1 - e^{-p_s});
//   U3  J(greedy L) / (1 - e^{-p_s L / K}).
// Only certified when the oracle is exact.
struct BoundCertificate {
  double reachable_bound = 0.0;
  double factor_bound = 0.0;
  std::optional<double> oversize_bound;
  double factor = 0.0;
  std::optional<double> oversize_factor;
  double upper = 0.0;
  bool certified = false;
};

inline double guarantee_factor(double p_s, double lambda = 1.0, double team_ratio = 1.0) {
  return 1.0 - std::exp(-p_s * team_ratio / lambda);
}

inline BoundCertificate compute_bounds(const SurvivalGraph& g, const GreedyConfig& cfg, const GreedyResult& greedy,
                                       const VariantData& data = {}) {
  const LogGraph lg = log_transform(g);
  const auto from_start = dijkstra(lg, lg.start());
  const auto to_terminal = dijkstra(lg, lg.terminal(), Direction::kReverse);
  const double limit = lg.budget() + kBudgetTolerance;
  const auto K = static_cast<double>(cfg.team_size);
  const double p_s = g.survival_threshold();
  const auto& zeta = greedy.zeta;

  BoundCertificate cert;
  double u1 = 0.0;
  if (cfg.variant == Variant::kEdge) {
    const auto reward = edge_reward_vector(g, data.edge_rewards);
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      const Edge& edge = g.edges()[e];
      if (reward[e] == 0.0) continue;
      if (from_start.distance[edge.from] - std::log(edge.survival) + to_terminal.distance[edge.to] > limit) continue;
      u1 += reward[e] * (1.0 - std::pow(1.0 - zeta[edge.from] * edge.survival, K));
    }
  } else {
    for (NodeId j = 0; j < g.size(); ++j) {
      if (j == g.start() && !g.is_depot()) continue;
      if (from_start.distance[j] + to_terminal.distance[j] > limit) continue;
      if (cfg.variant == Variant::kMultiVisit) {
        const std::vector<double> probs(cfg.team_size, zeta[j]);
        const auto dist = poisson_binomial(probs);
        double tail = 1.0;
        for (std::size_t m = 1; m <= data.multi_visit.max_visits && m <= cfg.team_size; ++m) {
          tail -= dist[m - 1];
          u1 += data.multi_visit.reward[j][m - 1] * std::max(0.0, tail);
        }
      } else {
        u1 += g.priority(j) * (1.0 - std::pow(1.0 - zeta[j], K));
      }
    }
  }
  cert.reachable_bound = u1;
  cert.factor = guarantee_factor(p_s);
  cert.factor_bound = greedy.objective_by_size.at(cfg.team_size - 1) / cert.factor;
  cert.upper = std::min(cert.reachable_bound, cert.factor_bound);
  if (cfg.oversize) {
    const std::size_t L = *cfg.oversize;
    if (greedy.objective_by_size.size() < L) throw std::invalid_argument("greedy run shorter than the oversized team");
    cert.oversize_factor = guarantee_factor(p_s, 1.0, static_cast<double>(L) / K);
    cert.oversize_bound = greedy.objective_by_size[L - 1] / *cert.oversize_factor;
    cert.upper = std::min(cert.upper, *cert.oversize_bound);
  }
  cert.certified = greedy.exact_oracle;
  return cert;
}

}  // namespace tso
