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

// Test fixtures and independent oracles. Nothing here calls the solver code
// it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "tso/graph.hpp"

namespace tso::testing {

// Directed diamond, labels 1..4: 1->2 0.9, 2->4 0.9, 1->3 0.8, 3->4 0.8,
// 1->4 1.0. v_s = 1, v_t = 4.
inline SurvivalGraph diamond(double p_s = 0.8) {
  SurvivalGraph g;
  for (int i = 1; i <= 4; ++i) g.add_node(i);
  g.add_edge(0, 1, 0.9);
  g.add_edge(1, 3, 0.9);
  g.add_edge(0, 2, 0.8);
  g.add_edge(2, 3, 0.8);
  g.add_edge(0, 3, 1.0);
  g.set_endpoints(0, 3);
  g.set_survival_threshold(p_s);
  return g;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct SmallGraphSpec {
  std::size_t nodes = 6;
  double density = 1.0;
  bool depot = false;
  double p_s = 0.7;
  bool random_priorities = false;
};

// Random digraph with survival U[0.3, 1). The v_s -> v_t edge (or, for a
// depot, one spoke pair) is always present so most instances are feasible.
inline SurvivalGraph random_graph(std::mt19937_64& rng, const SmallGraphSpec& spec) {
  SurvivalGraph g;
  for (std::size_t i = 0; i < spec.nodes; ++i) {
    g.add_node(static_cast<long long>(i), spec.random_priorities ? uniform(rng, 0.5, 2.0) : 1.0);
  }
  const NodeId s = 0;
  const NodeId t = spec.depot ? 0 : spec.nodes - 1;
  for (NodeId i = 0; i < spec.nodes; ++i) {
    for (NodeId j = 0; j < spec.nodes; ++j) {
      if (i == j) continue;
      const double w = uniform(rng, 0.3, 1.0);
      const bool forced = (!spec.depot && i == s && j == t) || (spec.depot && (i == 1 || j == 1) && (i == 0 || j == 0));
      if (forced || uniform(rng, 0.0, 1.0) < spec.density) g.add_edge(i, j, w);
    }
  }
  g.set_endpoints(s, t);
  g.set_survival_threshold(spec.p_s);
  return g;
}

struct EnumeratedPath {
  Path path;
  double survival;
};

// Every simple v_s -> v_t path (depot instances: every simple cycle through
// v_s plus the single-node path), with no pruning at all.
inline std::vector<EnumeratedPath> all_paths(const SurvivalGraph& g) {
  std::vector<EnumeratedPath> out;
  const NodeId s = g.start();
  const NodeId t = g.terminal();
  Path path{s};
  if (s == t) out.push_back({path, 1.0});
  std::function<void(double)> walk = [&](double survival) {
    const NodeId u = path.back();
    for (const Edge& e : g.edges()) {
      if (e.from != u) continue;
      const bool closes = e.to == t && (s != t || path.size() > 1);
      if (closes) {
        path.push_back(e.to);
        out.push_back({path, survival * e.survival});
        path.pop_back();
        continue;
      }
      if (std::find(path.begin(), path.end(), e.to) != path.end() || e.to == t) continue;
      path.push_back(e.to);
      walk(survival * e.survival);
      path.pop_back();
    }
  };
  walk(1.0);
  return out;
}

inline std::vector<EnumeratedPath> feasible_paths(const SurvivalGraph& g) {
  std::vector<EnumeratedPath> out;
  for (auto& p : all_paths(g)) {
    if (p.survival >= g.survival_threshold() * (1.0 - 1e-12)) out.push_back(std::move(p));
  }
  return out;
}

inline double edge_survival(const SurvivalGraph& g, NodeId a, NodeId b) {
  for (const Edge& e : g.edges()) {
    if (e.from == a && e.to == b) return e.survival;
  }
  return 0.0;
}

// Minimum of sum(-ln w) over every simple path a -> b, by exhaustive DFS.
inline double brute_distance(const SurvivalGraph& g, NodeId a, NodeId b) {
  if (a == b) return 0.0;
  double best = kInfinity;
  std::vector<char> seen(g.size(), 0);
  std::function<void(NodeId, double)> walk = [&](NodeId u, double cost) {
    if (u == b) {
      best = std::min(best, cost);
      return;
    }
    seen[u] = 1;
    for (const Edge& e : g.edges()) {
      if (e.from == u && !seen[e.to]) walk(e.to, cost - std::log(e.survival));
    }
    seen[u] = 0;
  };
  walk(a, 0.0);
  return best;
}

// Team objective by enumerating every joint survival outcome of every edge
// traversal of every robot.
inline double brute_team_objective(const SurvivalGraph& g, const std::vector<Path>& paths) {
  struct Step {
    std::size_t robot;
    NodeId node;
    double w;
  };
  std::vector<Step> steps;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    for (std::size_t n = 1; n < paths[k].size(); ++n) {
      steps.push_back({k, paths[k][n], edge_survival(g, paths[k][n - 1], paths[k][n])});
    }
  }
  const std::size_t m = steps.size();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    double prob = 1.0;
    std::vector<char> visited(g.size(), 0);
    std::vector<char> alive(paths.size(), 1);
    for (std::size_t i = 0; i < m; ++i) {
      const bool ok = (mask >> i) & 1u;
      prob *= ok ? steps[i].w : 1.0 - steps[i].w;
      if (!alive[steps[i].robot]) continue;
      if (ok) {
        visited[steps[i].node] = 1;
      } else {
        alive[steps[i].robot] = 0;
      }
    }
    double value = 0.0;
    for (NodeId j = 0; j < g.size(); ++j) {
      if (visited[j]) value += g.priority(j);
    }
    total += prob * value;
  }
  return total;
}

// P(exactly m successes) by summing over all 2^n outcomes.
inline std::vector<double> brute_counts(const std::vector<double>& probs) {
  std::vector<double> out(probs.size() + 1, 0.0);
  for (std::uint64_t mask = 0; mask < (1ull << probs.size()); ++mask) {
    double p = 1.0;
    std::size_t c = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if ((mask >> i) & 1u) {
        p *= probs[i];
        ++c;
      } else {
        p *= 1.0 - probs[i];
      }
    }
    out[c] += p;
  }
  return out;
}

// Survival-weighted visit probability of j along a path (steps n >= 1).
inline double brute_visit(const SurvivalGraph& g, const Path& p, NodeId j) {
  double a = 1.0;
  double z = 0.0;
  for (std::size_t n = 1; n < p.size(); ++n) {
    a *= edge_survival(g, p[n - 1], p[n]);
    if (p[n] == j) z = a;
  }
  return z;
}

}  // namespace tso::testing
