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
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tso/graph.hpp"
#include "tso/parallel.hpp"

namespace tso {

// Survival prefix E[a_n] for n = 0..|path| and per-node visit probability
// E[z_j]. The start node counts as visited only on a depot return.
struct VisitProfile {
  Path path;
  std::vector<double> survival_prefix;
  std::vector<double> visit_prob;

  double survival() const { return survival_prefix.back(); }
};

inline VisitProfile visit_profile(const SurvivalGraph& g, const Path& path) {
  check_path(g, path);
  VisitProfile profile{path, std::vector<double>(path.size()), std::vector<double>(g.size(), 0.0)};
  profile.survival_prefix[0] = 1.0;
  for (std::size_t n = 1; n < path.size(); ++n) {
    const double w = g.edges()[*g.find_edge(path[n - 1], path[n])].survival;
    profile.survival_prefix[n] = profile.survival_prefix[n - 1] * w;
    profile.visit_prob[path[n]] = profile.survival_prefix[n];
  }
  return profile;
}

inline std::vector<VisitProfile> visit_profiles(const SurvivalGraph& g, std::span<const Path> paths) {
  std::vector<VisitProfile> out;
  out.reserve(paths.size());
  for (const Path& p : paths) out.push_back(visit_profile(g, p));
  return out;
}

struct TeamValue {
  double value = 0.0;
  std::vector<double> visit_prob;  // E[x_j]
};

inline TeamValue team_objective(const SurvivalGraph& g, std::span<const VisitProfile> profiles) {
  TeamValue team{0.0, std::vector<double>(g.size(), 0.0)};
  for (NodeId j = 0; j < g.size(); ++j) {
    double miss = 1.0;
    for (const VisitProfile& p : profiles) miss *= 1.0 - p.visit_prob[j];
    team.visit_prob[j] = 1.0 - miss;
    team.value += g.priority(j) * team.visit_prob[j];
  }
  return team;
}

inline TeamValue team_objective(const SurvivalGraph& g, std::span<const Path> paths) {
  const auto profiles = visit_profiles(g, paths);
  return team_objective(g, std::span<const VisitProfile>(profiles));
}

// Marginal gain of adding `candidate` to `existing`:
// sum_j E[z_j(candidate)] d_j prod_k (1 - E[z_j(existing_k)]).
inline double discrete_derivative(const SurvivalGraph& g, const VisitProfile& candidate,
                                  std::span<const VisitProfile> existing) {
  double gain = 0.0;
  for (NodeId j = 0; j < g.size(); ++j) {
    if (candidate.visit_prob[j] == 0.0) continue;
    double miss = 1.0;
    for (const VisitProfile& p : existing) miss *= 1.0 - p.visit_prob[j];
    gain += candidate.visit_prob[j] * g.priority(j) * miss;
  }
  return gain;
}

inline double discrete_derivative(const SurvivalGraph& g, const Path& candidate,
                                  std::span<const Path> existing) {
  const auto profiles = visit_profiles(g, existing);
  return discrete_derivative(g, visit_profile(g, candidate), profiles);
}

// Distribution of the number of successes among independent Bernoulli trials
// with the given probabilities. out[m] = P(exactly m successes).
inline std::vector<double> poisson_binomial(std::span<const double> probs) {
  std::vector<double> dist(probs.size() + 1, 0.0);
  dist[0] = 1.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double p = probs[k];
    for (std::size_t m = k + 1; m > 0; --m) dist[m] = dist[m] * (1.0 - p) + dist[m - 1] * p;
    dist[0] *= 1.0 - p;
  }
  return dist;
}

// rows[j][m] = P(node j is visited by exactly m of the given paths).
struct VisitCountDistribution {
  std::vector<std::vector<double>> rows;

  // P(at least m visits to j).
  double at_least(NodeId j, std::size_t m) const {
    const auto& row = rows[j];
    if (m >= row.size()) return 0.0;
    double below = 0.0;
    for (std::size_t i = 0; i < m; ++i) below += row[i];
    return std::max(0.0, 1.0 - below);
  }
};

inline VisitCountDistribution visit_count_distribution(std::size_t num_nodes,
                                                       std::span<const VisitProfile> profiles) {
  VisitCountDistribution out;
  out.rows.reserve(num_nodes);
  std::vector<double> probs(profiles.size());
  for (NodeId j = 0; j < num_nodes; ++j) {
    for (std::size_t k = 0; k < profiles.size(); ++k) probs[k] = profiles[k].visit_prob[j];
    out.rows.push_back(poisson_binomial(probs));
  }
  return out;
}

// Reward d[j][m-1] for the m-th visit of node j, m = 1..M. Must be
// non-increasing in m.
struct MultiVisitTable {
  std::size_t max_visits = 1;
  std::vector<std::vector<double>> reward;
};

inline void validate_multi_visit(const MultiVisitTable& table, std::size_t num_nodes) {
  if (table.max_visits == 0) throw std::invalid_argument("multi-visit M must be at least 1");
  if (table.reward.size() != num_nodes) {
    throw std::invalid_argument("multi-visit table must have one row per node");
  }
  for (std::size_t j = 0; j < num_nodes; ++j) {
    const auto& row = table.reward[j];
    if (row.size() != table.max_visits) {
      throw std::invalid_argument("multi-visit row " + std::to_string(j) + " must have M entries");
    }
    for (std::size_t m = 0; m < row.size(); ++m) {
      if (!(row[m] >= 0.0)) throw std::invalid_argument("multi-visit rewards must be non-negative");
      if (m > 0 && row[m] > row[m - 1]) {
        throw std::invalid_argument("multi-visit rewards for node " + std::to_string(j) +
                                    " increase with the visit count");
      }
    }
  }
}

// Table that pays d_j for the first visit only.
inline MultiVisitTable single_visit_table(const SurvivalGraph& g) {
  MultiVisitTable t{1, {}};
  for (NodeId j = 0; j < g.size(); ++j) t.reward.push_back({g.priority(j)});
  return t;
}

inline double multi_visit_objective(std::span<const VisitProfile> profiles, const MultiVisitTable& table) {
  validate_multi_visit(table, table.reward.size());
  const auto counts = visit_count_distribution(table.reward.size(), profiles);
  double value = 0.0;
  for (NodeId j = 0; j < table.reward.size(); ++j) {
    for (std::size_t m = 1; m <= table.max_visits; ++m) {
      value += table.reward[j][m - 1] * counts.at_least(j, m);
    }
  }
  return value;
}

inline double multi_visit_objective(const SurvivalGraph& g, std::span<const Path> paths,
                                    const MultiVisitTable& table) {
  validate_multi_visit(table, g.size());
  const auto profiles = visit_profiles(g, paths);
  return multi_visit_objective(profiles, table);
}

struct EdgeReward {
  NodeId from = 0;
  NodeId to = 0;
  double reward = 0.0;
};

// Per-edge reward vector indexed like g.edges(). Throws when a reward sits on
// a pair that is not an edge.
inline std::vector<double> edge_reward_vector(const SurvivalGraph& g, std::span<const EdgeReward> rewards) {
  std::vector<double> out(g.edges().size(), 0.0);
  for (const EdgeReward& r : rewards) {
    const auto e = g.find_edge(r.from, r.to);
    if (!e) {
      throw std::invalid_argument("edge reward on non-edge (" + std::to_string(g.node(r.from).label) +
                                  "," + std::to_string(g.node(r.to).label) + ")");
    }
    if (!(r.reward >= 0.0)) throw std::invalid_argument("edge rewards must be non-negative");
    out[*e] += r.reward;
  }
  return out;
}

// E[z_e(path)] for every edge: survival prefix at the traversal step.
inline std::vector<double> edge_visit_prob(const SurvivalGraph& g, const VisitProfile& profile) {
  std::vector<double> z(g.edges().size(), 0.0);
  for (std::size_t n = 1; n < profile.path.size(); ++n) {
    z[*g.find_edge(profile.path[n - 1], profile.path[n])] = profile.survival_prefix[n];
  }
  return z;
}

inline double edge_team_objective(const SurvivalGraph& g, std::span<const VisitProfile> profiles,
                                  std::span<const double> reward_by_edge) {
  std::vector<double> miss(g.edges().size(), 1.0);
  for (const VisitProfile& p : profiles) {
    const auto z = edge_visit_prob(g, p);
    for (std::size_t e = 0; e < z.size(); ++e) miss[e] *= 1.0 - z[e];
  }
  double value = 0.0;
  for (std::size_t e = 0; e < miss.size(); ++e) value += reward_by_edge[e] * (1.0 - miss[e]);
  return value;
}

inline double edge_team_objective(const SurvivalGraph& g, std::span<const Path> paths,
                                  std::span<const EdgeReward> rewards) {
  const auto by_edge = edge_reward_vector(g, rewards);
  const auto profiles = visit_profiles(g, paths);
  return edge_team_objective(g, profiles, by_edge);
}

struct SimulationResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> survival_rate;  // per robot
  std::uint64_t trials = 0;
};

// Monte-Carlo estimate of the team objective. Each trial draws one Bernoulli
// per edge traversal from its own generator seeded by (seed, trial index), so
// the result does not depend on the thread count.
inline SimulationResult simulate_team(const SurvivalGraph& g, std::span<const Path> paths,
                                      std::uint64_t trials, std::uint64_t seed,
                                      std::size_t threads = 0) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  std::vector<std::vector<double>> step_survival;
  for (const Path& p : paths) {
    check_path(g, p);
    std::vector<double> w;
    for (std::size_t n = 1; n < p.size(); ++n) w.push_back(g.edges()[*g.find_edge(p[n - 1], p[n])].survival);
    step_survival.push_back(std::move(w));
  }
  const std::size_t robots = paths.size();
  std::vector<double> value(trials, 0.0);
  std::vector<std::vector<char>> survived(robots, std::vector<char>(trials, 0));
  parallel_for(trials, threads, [&](std::size_t t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<char> visited(g.size(), 0);
    for (std::size_t k = 0; k < robots; ++k) {
      const Path& p = paths[k];
      std::size_t n = 1;
      for (; n < p.size(); ++n) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u >= step_survival[k][n - 1]) break;
        visited[p[n]] = 1;
      }
      survived[k][t] = n == p.size();
    }
    double v = 0.0;
    for (NodeId j = 0; j < g.size(); ++j) {
      if (visited[j]) v += g.priority(j);
    }
    value[t] = v;
  });
  SimulationResult result;
  result.trials = trials;
  double sum = 0.0;
  for (double v : value) sum += v;
  result.mean = sum / static_cast<double>(trials);
  double sq = 0.0;
  for (double v : value) sq += (v - result.mean) * (v - result.mean);
  if (trials > 1) {
    result.std_error = std::sqrt(sq / static_cast<double>(trials - 1) / static_cast<double>(trials));
  }
  for (std::size_t k = 0; k < robots; ++k) {
    std::uint64_t alive = 0;
    for (char s : survived[k]) alive += s;
    result.survival_rate.push_back(static_cast<double>(alive) / static_cast<double>(trials));
  }
  return result;
}

}  // namespace tso
