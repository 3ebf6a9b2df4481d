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
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "tso/graph.hpp"

namespace tso {

// Orienteering on a log graph: maximize the summed reward of a v_s -> v_t
// path whose log-cost stays within the budget. `reward` is indexed by node,
// or by edge index for the arc variant.
struct OrienteeringProblem {
  const LogGraph& graph;
  std::vector<double> reward;
  double budget;
  NodeId start;
  NodeId terminal;

  OrienteeringProblem(const LogGraph& lg, std::vector<double> rewards)
      : graph(lg), reward(std::move(rewards)), budget(lg.budget()), start(lg.start()), terminal(lg.terminal()) {}
};

struct OracleResult {
  Path path;
  double reward = 0.0;
  double cost = 0.0;
  bool exact = false;
  std::uint64_t nodes_expanded = 0;
};

struct HeuristicOptions {
  std::uint64_t seed = 0;
  std::size_t restarts = 64;
  std::size_t candidate_list = 3;
};

namespace detail {

inline double tie_tolerance(double value) { return 1e-12 * (1.0 + std::abs(value)); }

// True when (reward, path) beats (best_reward, best_path): higher reward, or
// the same reward up to rounding and a lexicographically smaller path.
inline bool improves(double reward, const Path& path, double best_reward, const Path& best_path) {
  if (best_path.empty()) return true;
  const double tol = tie_tolerance(best_reward);
  if (reward > best_reward + tol) return true;
  if (reward < best_reward - tol) return false;
  return path < best_path;
}

class NodeRewards {
 public:
  NodeRewards(const LogGraph& lg, std::span<const double> reward) : lg_(lg), reward_(reward) {
    if (reward.size() != lg.size()) throw std::invalid_argument("node reward vector has wrong size");
    for (double r : reward) {
      if (!(r >= 0.0)) throw std::invalid_argument("orienteering rewards must be non-negative");
    }
  }

  double step(NodeId, NodeId to, std::size_t) const { return reward_[to]; }

  // Reward still collectible from `current` with `remaining` budget.
  double optimistic(const DistanceTable& dist, NodeId current, double remaining,
                    std::span<const char> on_path) const {
    const NodeId t = lg_.terminal();
    const bool depot = lg_.start() == t;
    double total = 0.0;
    for (NodeId j = 0; j < reward_.size(); ++j) {
      if (reward_[j] == 0.0) continue;
      if (on_path[j] && !(depot && j == t)) continue;
      if (dist.at(current, j) + dist.at(j, t) <= remaining + kBudgetTolerance) total += reward_[j];
    }
    return total;
  }

  double path_reward(const Path& path) const {
    double total = 0.0;
    for (std::size_t n = 1; n < path.size(); ++n) total += reward_[path[n]];
    return total;
  }

  // Change in reward when j is placed between a and b. a == b only for the
  // empty depot route, where the closing visit of the depot is gained too.
  double insert_gain(NodeId a, NodeId j, NodeId b) const { return reward_[j] + (a == b ? reward_[b] : 0.0); }
  double remove_gain(NodeId a, NodeId j, NodeId b) const { return -insert_gain(a, j, b); }

 private:
  const LogGraph& lg_;
  std::span<const double> reward_;
};

class EdgeRewards {
 public:
  EdgeRewards(const LogGraph& lg, std::span<const double> reward) : lg_(lg), reward_(reward), by_pair_(lg.size() * lg.size(), 0.0) {
    if (reward.size() != lg.num_edges()) throw std::invalid_argument("edge reward vector has wrong size");
    for (NodeId u = 0; u < lg.size(); ++u) {
      for (const Arc& arc : lg.out(u)) {
        if (!(reward[arc.edge] >= 0.0)) throw std::invalid_argument("orienteering rewards must be non-negative");
        if (reward[arc.edge] > 0.0) {
          bearing_.push_back({u, arc.to, arc.cost, reward[arc.edge]});
          by_pair_[u * lg.size() + arc.to] = reward[arc.edge];
        }
      }
    }
  }

  double step(NodeId, NodeId, std::size_t edge) const { return reward_[edge]; }

  double optimistic(const DistanceTable& dist, NodeId current, double remaining,
                    std::span<const char> on_path) const {
    const NodeId t = lg_.terminal();
    const bool depot = lg_.start() == t;
    double total = 0.0;
    for (const Bearing& e : bearing_) {
      if (e.from != current && on_path[e.from]) continue;
      if (on_path[e.to] && !(depot && e.to == t)) continue;
      if (dist.at(current, e.from) + e.cost + dist.at(e.to, t) <= remaining + kBudgetTolerance) total += e.reward;
    }
    return total;
  }

  double path_reward(const Path& path) const {
    double total = 0.0;
    for (std::size_t n = 1; n < path.size(); ++n) total += pair(path[n - 1], path[n]);
    return total;
  }

  double insert_gain(NodeId a, NodeId j, NodeId b) const { return pair(a, j) + pair(j, b) - pair(a, b); }
  double remove_gain(NodeId a, NodeId j, NodeId b) const { return -insert_gain(a, j, b); }

 private:
  struct Bearing {
    NodeId from;
    NodeId to;
    double cost;
    double reward;
  };
  double pair(NodeId a, NodeId b) const { return a == b ? 0.0 : by_pair_[a * lg_.size() + b]; }

  const LogGraph& lg_;
  std::span<const double> reward_;
  std::vector<Bearing> bearing_;
  std::vector<double> by_pair_;
};

inline void require_feasible(const DistanceTable& dist, NodeId start, NodeId terminal, double budget) {
  if (!(dist.at(start, terminal) <= budget + kBudgetTolerance)) {
    throw InfeasibleInstance("no v_s -> v_t path satisfies the survival budget");
  }
}

// Depth-first branch and bound over simple paths. A prefix is cut when it
// cannot reach v_t within budget, or when its optimistic reward cannot beat
// the incumbent (ties survive only if the prefix could still yield a
// lexicographically smaller path).
template <class Rewards>
class BranchAndBound {
 public:
  BranchAndBound(const OrienteeringProblem& problem, const DistanceTable& dist, const Rewards& rewards,
                 bool use_bound)
      : lg_(problem.graph), dist_(dist), rewards_(rewards), budget_(problem.budget),
        start_(problem.start), terminal_(problem.terminal), use_bound_(use_bound),
        on_path_(lg_.size(), 0) {}

  OracleResult solve() {
    require_feasible(dist_, start_, terminal_, budget_);
    if (start_ == terminal_) {
      best_path_ = {start_};
      best_reward_ = 0.0;
    } else {
      best_path_ = dijkstra(lg_, start_).path(terminal_);
      best_reward_ = rewards_.path_reward(best_path_);
    }
    path_ = {start_};
    on_path_[start_] = 1;
    descend(start_, 0.0, 0.0);
    OracleResult result;
    result.path = best_path_;
    result.reward = best_reward_;
    result.cost = path_cost(lg_, best_path_);
    result.exact = true;
    result.nodes_expanded = expanded_;
    return result;
  }

 private:
  struct Child {
    NodeId node;
    double cost;
    double gain;
    double ratio;
  };

  bool prefix_after_incumbent() const {
    const std::size_t n = std::min(path_.size(), best_path_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (path_[i] != best_path_[i]) return path_[i] > best_path_[i];
    }
    return false;
  }

  void descend(NodeId u, double cost, double reward) {
    ++expanded_;
    const bool depot = start_ == terminal_;
    const double limit = budget_ + kBudgetTolerance;
    std::vector<Child> children;
    for (const Arc& arc : lg_.out(u)) {
      const NodeId v = arc.to;
      if (v == terminal_) {
        if (on_path_[v] && !(depot && path_.size() > 1)) continue;
      } else if (on_path_[v]) {
        continue;
      }
      if (cost + arc.cost + dist_.at(v, terminal_) > limit) continue;
      const double gain = rewards_.step(u, v, arc.edge);
      children.push_back({v, arc.cost, gain, gain / std::max(arc.cost, 1e-12)});
    }
    std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
      if (a.ratio != b.ratio) return a.ratio > b.ratio;
      return a.node < b.node;
    });
    for (const Child& c : children) {
      const double next_cost = cost + c.cost;
      const double next_reward = reward + c.gain;
      path_.push_back(c.node);
      if (c.node == terminal_) {
        if (improves(next_reward, path_, best_reward_, best_path_)) {
          best_reward_ = next_reward;
          best_path_ = path_;
        }
        path_.pop_back();
        continue;
      }
      on_path_[c.node] = 1;
      bool prune = false;
      if (use_bound_) {
        const double bound = next_reward + rewards_.optimistic(dist_, c.node, budget_ - next_cost, on_path_);
        const double tol = tie_tolerance(best_reward_);
        prune = bound < best_reward_ - tol || (bound <= best_reward_ + tol && prefix_after_incumbent());
      }
      if (!prune) descend(c.node, next_cost, next_reward);
      on_path_[c.node] = 0;
      path_.pop_back();
    }
  }

  const LogGraph& lg_;
  const DistanceTable& dist_;
  const Rewards& rewards_;
  double budget_;
  NodeId start_;
  NodeId terminal_;
  bool use_bound_;
  std::vector<char> on_path_;
  Path path_;
  Path best_path_;
  double best_reward_ = 0.0;
  std::uint64_t expanded_ = 0;
};

// Randomized greedy insertion with a restricted candidate list, then local
// search (2-exchange, insertion, replacement, removal-and-refill) until no
// move improves. Routes for depot instances start as [v_s, v_s].
template <class Rewards>
class Grasp {
 public:
  Grasp(const OrienteeringProblem& problem, const DistanceTable& dist, const Rewards& rewards,
        const HeuristicOptions& options)
      : lg_(problem.graph), dist_(dist), rewards_(rewards), budget_(problem.budget),
        start_(problem.start), terminal_(problem.terminal), options_(options) {}

  OracleResult solve() {
    require_feasible(dist_, start_, terminal_, budget_);
    Path initial = start_ == terminal_ ? Path{start_, start_} : dijkstra(lg_, start_).path(terminal_);
    Path best_path;
    double best_reward = 0.0;
    const std::size_t restarts = std::max<std::size_t>(1, options_.restarts);
    for (std::size_t r = 0; r < restarts; ++r) {
      std::seed_seq seq{static_cast<std::uint32_t>(options_.seed), static_cast<std::uint32_t>(options_.seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);
      const std::size_t width = r < 2 ? 1 : options_.candidate_list;
      Path route = initial;
      if (r % 2 == 0) {
        construct(route, width, rng);
      } else {
        route = extend({start_}, width, rng);
      }
      local_search(route);
      Path path = emit(route);
      const double reward = rewards_.path_reward(path);
      if (improves(reward, path, best_reward, best_path)) {
        best_reward = reward;
        best_path = std::move(path);
      }
    }
    OracleResult result;
    result.path = best_path;
    result.reward = best_reward;
    result.cost = path_cost(lg_, best_path);
    result.exact = false;
    result.nodes_expanded = evaluations_;
    return result;
  }

 private:
  struct Insertion {
    NodeId node;
    std::size_t position;  // insert before route[position]
    double delta_cost;
    double gain;
  };

  double arc(NodeId a, NodeId b) const { return a == b ? 0.0 : lg_.cost(a, b); }

  double route_cost(const Path& route) const {
    double c = 0.0;
    for (std::size_t i = 1; i < route.size(); ++i) c += arc(route[i - 1], route[i]);
    return c;
  }

  Path emit(const Path& route) const {
    if (route.size() == 2 && route[0] == route[1]) return {route[0]};
    return route;
  }

  std::vector<char> membership(const Path& route) const {
    std::vector<char> on(lg_.size(), 0);
    for (NodeId v : route) on[v] = 1;
    return on;
  }

  // Cheapest feasible position for every off-route node with positive gain.
  std::vector<Insertion> insertions(const Path& route, double cost) {
    const auto on = membership(route);
    const double limit = budget_ + kBudgetTolerance;
    std::vector<Insertion> out;
    for (NodeId j = 0; j < lg_.size(); ++j) {
      if (on[j]) continue;
      std::optional<Insertion> best;
      for (std::size_t p = 1; p < route.size(); ++p) {
        ++evaluations_;
        const NodeId a = route[p - 1];
        const NodeId b = route[p];
        const double delta = lg_.cost(a, j) + lg_.cost(j, b) - arc(a, b);
        if (!(cost + delta <= limit)) continue;
        const double gain = rewards_.insert_gain(a, j, b);
        if (gain <= 0.0) continue;
        if (!best || gain > best->gain || (gain == best->gain && delta < best->delta_cost)) {
          best = Insertion{j, p, delta, gain};
        }
      }
      if (best) out.push_back(*best);
    }
    return out;
  }

  void construct(Path& route, std::size_t candidate_list, std::mt19937_64& rng) {
    double cost = route_cost(route);
    for (;;) {
      auto options = insertions(route, cost);
      if (options.empty()) return;
      std::sort(options.begin(), options.end(), [](const Insertion& a, const Insertion& b) {
        const double ra = a.gain / std::max(a.delta_cost, 1e-9);
        const double rb = b.gain / std::max(b.delta_cost, 1e-9);
        if (ra != rb) return ra > rb;
        return a.node < b.node;
      });
      const std::size_t width = std::min(std::max<std::size_t>(1, candidate_list), options.size());
      const Insertion& pick = options[rng() % width];
      route.insert(route.begin() + static_cast<std::ptrdiff_t>(pick.position), pick.node);
      cost += pick.delta_cost;
    }
  }

  // Shortest from -> v_t path avoiding `used` nodes (v_t itself is allowed).
  // `from` must differ from v_t. Empty when no such path exists.
  Path closing_path(NodeId from, const std::vector<char>& used) const {
    const std::size_t n = lg_.size();
    std::vector<double> d(n, kInfinity);
    std::vector<NodeId> parent(n, kNoNode);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    d[from] = 0.0;
    queue.emplace(0.0, from);
    while (!queue.empty()) {
      const auto [du, u] = queue.top();
      queue.pop();
      if (done[u]) continue;
      done[u] = 1;
      if (u == terminal_) break;
      for (const Arc& a : lg_.out(u)) {
        if (a.to != terminal_ && used[a.to]) continue;
        if (du + a.cost < d[a.to]) {
          d[a.to] = du + a.cost;
          parent[a.to] = u;
          queue.emplace(d[a.to], a.to);
        }
      }
    }
    if (d[terminal_] == kInfinity) return {};
    Path p;
    for (NodeId v = terminal_; v != kNoNode; v = parent[v]) p.push_back(v);
    std::reverse(p.begin(), p.end());
    return p;
  }

  // Forward construction from `prefix` (which must not contain v_t except as
  // the depot start): repeatedly step to a high reward-per-cost neighbour
  // that still leaves a way back to v_t, then close with a shortest path.
  Path extend(Path route, std::size_t candidate_list, std::mt19937_64& rng) {
    const double limit = budget_ + kBudgetTolerance;
    std::vector<char> used(lg_.size(), 0);
    std::vector<char> banned(lg_.size(), 0);
    for (NodeId v : route) used[v] = 1;
    double cost = path_cost(lg_, route);
    for (;;) {
      const NodeId u = route.back();
      struct Step {
        NodeId node;
        double cost;
        double score;
      };
      std::vector<Step> steps;
      for (const Arc& a : lg_.out(u)) {
        ++evaluations_;
        const NodeId v = a.to;
        if (used[v] || banned[v] || v == terminal_) continue;
        if (cost + a.cost + dist_.at(v, terminal_) > limit) continue;
        const double gain = rewards_.step(u, v, a.edge);
        if (gain <= 0.0) continue;
        steps.push_back({v, a.cost, gain / std::max(a.cost, 1e-9)});
      }
      if (steps.empty()) break;
      std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.node < b.node;
      });
      const std::size_t width = std::min(std::max<std::size_t>(1, candidate_list), steps.size());
      const Step pick = steps[rng() % width];
      used[pick.node] = 1;
      const Path back = closing_path(pick.node, used);
      if (back.empty() || cost + pick.cost + path_cost(lg_, back) > limit) {
        used[pick.node] = 0;
        banned[pick.node] = 1;
        continue;
      }
      route.push_back(pick.node);
      cost += pick.cost;
      std::fill(banned.begin(), banned.end(), 0);
    }
    if (route.size() == 1 && start_ == terminal_) return {start_, start_};
    const Path back = closing_path(route.back(), used);
    if (back.empty()) return {};
    route.insert(route.end(), back.begin() + 1, back.end());
    return route;
  }

  // Keep route[0..i] and rebuild the rest greedily.
  bool truncate_and_extend(Path& route, double& cost) {
    const double reward = rewards_.path_reward(emit(route));
    std::mt19937_64 unused;
    for (std::size_t i = 0; i + 1 < route.size(); ++i) {
      Path trial = extend(Path(route.begin(), route.begin() + static_cast<std::ptrdiff_t>(i + 1)), 1, unused);
      if (trial.empty()) continue;
      const double c = route_cost(trial);
      if (!(c <= budget_ + kBudgetTolerance)) continue;
      if (rewards_.path_reward(emit(trial)) > reward + detail::tie_tolerance(reward)) {
        route = std::move(trial);
        cost = c;
        return true;
      }
    }
    return false;
  }

  bool two_exchange(Path& route, double& cost) {
    if (route.size() < 4) return false;
    const double reward = rewards_.path_reward(emit(route));
    for (std::size_t i = 1; i + 2 < route.size(); ++i) {
      for (std::size_t k = i + 1; k + 1 < route.size(); ++k) {
        ++evaluations_;
        Path trial = route;
        std::reverse(trial.begin() + static_cast<std::ptrdiff_t>(i), trial.begin() + static_cast<std::ptrdiff_t>(k + 1));
        const double c = route_cost(trial);
        if (!(c < cost - 1e-12) || !(c <= budget_ + kBudgetTolerance)) continue;
        if (rewards_.path_reward(emit(trial)) < reward - detail::tie_tolerance(reward)) continue;
        route = std::move(trial);
        cost = c;
        return true;
      }
    }
    return false;
  }

  bool insert_best(Path& route, double& cost) {
    auto options = insertions(route, cost);
    if (options.empty()) return false;
    const auto best = std::min_element(options.begin(), options.end(), [](const Insertion& a, const Insertion& b) {
      if (a.gain != b.gain) return a.gain > b.gain;
      if (a.delta_cost != b.delta_cost) return a.delta_cost < b.delta_cost;
      return a.node < b.node;
    });
    route.insert(route.begin() + static_cast<std::ptrdiff_t>(best->position), best->node);
    cost += best->delta_cost;
    return true;
  }

  bool replace_one(Path& route, double& cost) {
    const auto on = membership(route);
    const double limit = budget_ + kBudgetTolerance;
    double best_gain = 1e-12;
    std::size_t best_pos = 0;
    NodeId best_node = kNoNode;
    double best_delta = 0.0;
    for (std::size_t i = 1; i + 1 < route.size(); ++i) {
      const NodeId a = route[i - 1];
      const NodeId old = route[i];
      const NodeId b = route[i + 1];
      const double base = arc(a, old) + arc(old, b);
      for (NodeId j = 0; j < lg_.size(); ++j) {
        if (on[j]) continue;
        ++evaluations_;
        const double delta = lg_.cost(a, j) + lg_.cost(j, b) - base;
        if (!(cost + delta <= limit)) continue;
        const double gain = rewards_.remove_gain(a, old, b) + rewards_.insert_gain(a, j, b);
        if (gain > best_gain) {
          best_gain = gain;
          best_pos = i;
          best_node = j;
          best_delta = delta;
        }
      }
    }
    if (best_node == kNoNode) return false;
    route[best_pos] = best_node;
    cost += best_delta;
    return true;
  }

  bool remove_and_refill(Path& route, double& cost) {
    const double reward = rewards_.path_reward(emit(route));
    for (std::size_t i = 1; i + 1 < route.size(); ++i) {
      const NodeId a = route[i - 1];
      const NodeId b = route[i + 1];
      if (a != b && !lg_.has_edge(a, b)) continue;
      Path trial = route;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      double c = route_cost(trial);
      if (!(c <= budget_ + kBudgetTolerance)) continue;
      while (insert_best(trial, c)) {
      }
      const double r = rewards_.path_reward(emit(trial));
      if (r > reward + detail::tie_tolerance(reward)) {
        route = std::move(trial);
        cost = c;
        return true;
      }
    }
    return false;
  }

  void local_search(Path& route) {
    double cost = route_cost(route);
    for (;;) {
      if (two_exchange(route, cost)) continue;
      if (insert_best(route, cost)) continue;
      if (replace_one(route, cost)) continue;
      if (remove_and_refill(route, cost)) continue;
      if (truncate_and_extend(route, cost)) continue;
      return;
    }
  }

  const LogGraph& lg_;
  const DistanceTable& dist_;
  const Rewards& rewards_;
  double budget_;
  NodeId start_;
  NodeId terminal_;
  HeuristicOptions options_;
  std::uint64_t evaluations_ = 0;
};

}  // namespace detail

inline OracleResult solve_exact(const OrienteeringProblem& problem, const DistanceTable& dist,
                                bool use_bound = true) {
  const detail::NodeRewards rewards(problem.graph, problem.reward);
  return detail::BranchAndBound<detail::NodeRewards>(problem, dist, rewards, use_bound).solve();
}

inline OracleResult solve_exact(const OrienteeringProblem& problem) {
  return solve_exact(problem, DistanceTable(problem.graph));
}

inline OracleResult solve_arc_exact(const OrienteeringProblem& problem, const DistanceTable& dist,
                                    bool use_bound = true) {
  const detail::EdgeRewards rewards(problem.graph, problem.reward);
  return detail::BranchAndBound<detail::EdgeRewards>(problem, dist, rewards, use_bound).solve();
}

inline OracleResult solve_arc_exact(const OrienteeringProblem& problem) {
  return solve_arc_exact(problem, DistanceTable(problem.graph));
}

inline OracleResult solve_heuristic(const OrienteeringProblem& problem, const DistanceTable& dist,
                                    const HeuristicOptions& options = {}) {
  const detail::NodeRewards rewards(problem.graph, problem.reward);
  return detail::Grasp<detail::NodeRewards>(problem, dist, rewards, options).solve();
}

inline OracleResult solve_heuristic(const OrienteeringProblem& problem, const HeuristicOptions& options = {}) {
  return solve_heuristic(problem, DistanceTable(problem.graph), options);
}

inline OracleResult solve_arc_heuristic(const OrienteeringProblem& problem, const DistanceTable& dist,
                                        const HeuristicOptions& options = {}) {
  const detail::EdgeRewards rewards(problem.graph, problem.reward);
  return detail::Grasp<detail::EdgeRewards>(problem, dist, rewards, options).solve();
}

}  // namespace tso
