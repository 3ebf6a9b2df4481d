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
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tso {

// Absolute slack on log-domain budget comparisons.
inline constexpr double kBudgetTolerance = 1e-9;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// Ordered node sequence. Nodes are unique except that the last node may
// equal the first (depot return).
using Path = std::vector<NodeId>;

class InfeasibleInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPath : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Node {
  long long label = 0;
  double priority = 1.0;
};

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  double survival = 1.0;
};

// Directed graph whose edges carry survival probabilities, together with the
// start/terminal nodes and the per-robot survival threshold p_s.
class SurvivalGraph {
 public:
  SurvivalGraph() = default;

  NodeId add_node(long long label, double priority = 1.0) {
    const NodeId id = nodes_.size();
    nodes_.push_back({label, priority});
    out_.emplace_back();
    labels_.emplace(label, id);
    return id;
  }

  // Appends the edge even when it duplicates an existing pair or carries an
  // out-of-range probability; validate_instance reports such problems.
  std::size_t add_edge(NodeId from, NodeId to, double survival) {
    if (from >= nodes_.size() || to >= nodes_.size()) {
      throw std::out_of_range("edge endpoint is not a node of the graph");
    }
    const std::size_t index = edges_.size();
    edges_.push_back({from, to, survival});
    out_[from].push_back(index);
    lookup_.try_emplace(key(from, to), index);
    return index;
  }

  void add_undirected_edge(NodeId a, NodeId b, double survival) {
    add_edge(a, b, survival);
    add_edge(b, a, survival);
  }

  std::size_t size() const { return nodes_.size(); }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  double priority(NodeId id) const { return nodes_.at(id).priority; }
  void set_priority(NodeId id, double d) { nodes_.at(id).priority = d; }

  std::span<const std::size_t> out_edges(NodeId id) const { return out_.at(id); }

  std::optional<std::size_t> find_edge(NodeId from, NodeId to) const {
    auto it = lookup_.find(key(from, to));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<NodeId> find_label(long long label) const {
    auto it = labels_.find(label);
    if (it == labels_.end()) return std::nullopt;
    return it->second;
  }

  NodeId start() const { return start_; }
  NodeId terminal() const { return terminal_; }
  double survival_threshold() const { return p_s_; }
  bool is_depot() const { return start_ == terminal_; }

  void set_endpoints(NodeId start, NodeId terminal) {
    start_ = start;
    terminal_ = terminal;
  }
  void set_survival_threshold(double p_s) { p_s_ = p_s; }

 private:
  static std::uint64_t key(NodeId from, NodeId to) {
    return (static_cast<std::uint64_t>(from) << 32) ^ static_cast<std::uint64_t>(to);
  }

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
  std::unordered_map<long long, NodeId> labels_;
  NodeId start_ = 0;
  NodeId terminal_ = 0;
  double p_s_ = 1.0;
};

struct Violation {
  enum class Kind {
    kEmptyGraph,
    kBadEndpoint,
    kThresholdOutOfRange,
    kPriorityNotPositive,
    kSurvivalOutOfRange,
    kSelfLoop,
    kNotSimple,
  };
  Kind kind;
  std::string message;
};

inline std::vector<Violation> validate_instance(const SurvivalGraph& g) {
  std::vector<Violation> out;
  using K = Violation::Kind;
  const auto label = [&](NodeId id) { return std::to_string(g.node(id).label); };
  if (g.size() == 0) {
    out.push_back({K::kEmptyGraph, "graph has no nodes"});
    return out;
  }
  if (g.start() >= g.size()) out.push_back({K::kBadEndpoint, "start node does not exist"});
  if (g.terminal() >= g.size()) out.push_back({K::kBadEndpoint, "terminal node does not exist"});
  const double p_s = g.survival_threshold();
  if (!(p_s > 0.0 && p_s <= 1.0)) {
    out.push_back({K::kThresholdOutOfRange, "p_s " + std::to_string(p_s) + " outside (0,1]"});
  }
  for (NodeId j = 0; j < g.size(); ++j) {
    if (!(g.priority(j) > 0.0) || !std::isfinite(g.priority(j))) {
      out.push_back({K::kPriorityNotPositive, "node " + label(j) + ": priority must be positive"});
    }
  }
  std::unordered_map<std::uint64_t, std::size_t> seen;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const Edge& edge = g.edges()[e];
    const std::string name = "edge (" + label(edge.from) + "," + label(edge.to) + ")";
    if (!(edge.survival > 0.0 && edge.survival <= 1.0)) {
      out.push_back({K::kSurvivalOutOfRange, name + ": survival out of (0,1]"});
    }
    if (edge.from == edge.to) out.push_back({K::kSelfLoop, name + ": self-loop"});
    const auto k = (static_cast<std::uint64_t>(edge.from) << 32) ^ edge.to;
    if (!seen.emplace(k, e).second) out.push_back({K::kNotSimple, name + ": not simple, duplicate edge"});
  }
  return out;
}

struct Arc {
  NodeId to = 0;
  double cost = 0.0;
  std::size_t edge = 0;
};

// Same topology as a SurvivalGraph with edge cost -ln(survival) and budget
// -ln(p_s). Keeps a dense cost matrix for constant-time arc lookup.
class LogGraph {
 public:
  std::size_t size() const { return out_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  std::span<const Arc> out(NodeId id) const { return out_[id]; }
  std::span<const Arc> in(NodeId id) const { return in_[id]; }
  double cost(NodeId from, NodeId to) const { return cost_[from * size() + to]; }
  bool has_edge(NodeId from, NodeId to) const { return cost(from, to) < kInfinity; }
  double budget() const { return budget_; }
  NodeId start() const { return start_; }
  NodeId terminal() const { return terminal_; }

 private:
  friend LogGraph log_transform(const SurvivalGraph& g);

  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
  std::vector<double> cost_;
  std::size_t num_edges_ = 0;
  double budget_ = 0.0;
  NodeId start_ = 0;
  NodeId terminal_ = 0;
};

inline LogGraph log_transform(const SurvivalGraph& g) {
  LogGraph lg;
  const std::size_t n = g.size();
  lg.out_.assign(n, {});
  lg.in_.assign(n, {});
  lg.cost_.assign(n * n, kInfinity);
  lg.num_edges_ = g.edges().size();
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const Edge& edge = g.edges()[e];
    const double c = -std::log(edge.survival);
    lg.out_[edge.from].push_back({edge.to, c, e});
    lg.in_[edge.to].push_back({edge.from, c, e});
    double& slot = lg.cost_[edge.from * n + edge.to];
    slot = std::min(slot, c);
  }
  const auto by_node = [](const Arc& a, const Arc& b) { return a.to < b.to; };
  for (auto& arcs : lg.out_) std::stable_sort(arcs.begin(), arcs.end(), by_node);
  for (auto& arcs : lg.in_) std::stable_sort(arcs.begin(), arcs.end(), by_node);
  lg.budget_ = -std::log(g.survival_threshold());
  lg.start_ = g.start();
  lg.terminal_ = g.terminal();
  return lg;
}

enum class Direction { kForward, kReverse };

struct ShortestPaths {
  std::vector<double> distance;
  std::vector<NodeId> parent;
  Direction direction = Direction::kForward;

  // Node sequence from the source to `target` (forward) or from `target` to
  // the source (reverse). Empty when unreachable.
  Path path(NodeId target) const {
    if (distance[target] == kInfinity) return {};
    Path p;
    for (NodeId v = target; v != kNoNode; v = parent[v]) p.push_back(v);
    if (direction == Direction::kForward) std::reverse(p.begin(), p.end());
    return p;
  }
};

// Single-source shortest paths. Reverse direction follows incoming arcs, so
// distance[j] is the distance from j to the source. Arcs whose edge index is
// flagged in `blocked` are skipped. On equal distances the lower-index parent
// wins.
inline ShortestPaths dijkstra(const LogGraph& lg, NodeId source,
                              Direction direction = Direction::kForward,
                              std::span<const char> blocked = {}) {
  const std::size_t n = lg.size();
  ShortestPaths sp{std::vector<double>(n, kInfinity), std::vector<NodeId>(n, kNoNode), direction};
  std::vector<char> done(n, 0);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  sp.distance[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = 1;
    const auto arcs = direction == Direction::kForward ? lg.out(u) : lg.in(u);
    for (const Arc& arc : arcs) {
      if (!blocked.empty() && blocked[arc.edge]) continue;
      const NodeId v = arc.to;
      if (done[v]) continue;
      const double nd = d + arc.cost;
      if (nd < sp.distance[v]) {
        sp.distance[v] = nd;
        sp.parent[v] = u;
        queue.emplace(nd, v);
      } else if (nd == sp.distance[v] && u < sp.parent[v]) {
        sp.parent[v] = u;
      }
    }
  }
  return sp;
}

// All-pairs shortest distances, row-major: at(i, j) = dist(i -> j).
class DistanceTable {
 public:
  explicit DistanceTable(const LogGraph& lg) : n_(lg.size()), dist_(n_ * n_) {
    for (NodeId i = 0; i < n_; ++i) {
      const auto sp = dijkstra(lg, i);
      std::copy(sp.distance.begin(), sp.distance.end(), dist_.begin() + i * n_);
    }
  }
  double at(NodeId from, NodeId to) const { return dist_[from * n_ + to]; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> dist_;
};

// zeta_j = exp(-dist(v_s -> j)): the largest probability with which any robot
// can reach j. Unreachable nodes get 0.
inline std::vector<double> max_visit_probabilities(const LogGraph& lg) {
  const auto sp = dijkstra(lg, lg.start());
  std::vector<double> zeta(lg.size());
  for (NodeId j = 0; j < lg.size(); ++j) {
    zeta[j] = sp.distance[j] == kInfinity ? 0.0 : std::exp(-sp.distance[j]);
  }
  zeta[lg.start()] = 1.0;
  return zeta;
}

struct FeasibilityReport {
  std::vector<char> reachable;
  std::vector<double> outbound;  // dist(v_s -> j)
  std::vector<double> inbound;   // dist(j -> v_t) after deleting the outbound edges
  bool nonempty = false;
};

// Shortest-path deletion test: for each node j, take the shortest v_s -> j
// path, delete its edges, then take the shortest j -> v_t path on what is
// left. j is flagged reachable when the two legs fit the budget.
inline FeasibilityReport feasibility_check(const LogGraph& lg) {
  const std::size_t n = lg.size();
  const double limit = lg.budget() + kBudgetTolerance;
  FeasibilityReport report;
  report.reachable.assign(n, 0);
  report.outbound.assign(n, kInfinity);
  report.inbound.assign(n, kInfinity);
  const auto from_start = dijkstra(lg, lg.start());
  report.nonempty = from_start.distance[lg.terminal()] <= limit;
  std::vector<char> blocked(lg.num_edges(), 0);
  for (NodeId j = 0; j < n; ++j) {
    report.outbound[j] = from_start.distance[j];
    if (from_start.distance[j] > limit) continue;
    const Path leg = from_start.path(j);
    std::fill(blocked.begin(), blocked.end(), 0);
    for (std::size_t i = 1; i < leg.size(); ++i) {
      for (const Arc& arc : lg.out(leg[i - 1])) {
        if (arc.to == leg[i]) blocked[arc.edge] = 1;
      }
    }
    const auto back = dijkstra(lg, j, Direction::kForward, blocked);
    report.inbound[j] = back.distance[lg.terminal()];
    report.reachable[j] = report.outbound[j] + report.inbound[j] <= limit;
  }
  return report;
}

inline FeasibilityReport feasibility_check(const SurvivalGraph& g) {
  return feasibility_check(log_transform(g));
}

// Depth-first enumeration of simple v_s -> v_t paths (a depot instance may
// return to v_s as its final step). `keep(node, survival)` decides whether a
// prefix ending at `node` with the given survival product is worth extending; `visit` is
// called with every complete path and its survival product. The single-node
// path [v_s] is reported for depot instances.
template <class Keep, class Visit>
void enumerate_simple_paths(const SurvivalGraph& g, Keep&& keep, Visit&& visit) {
  const NodeId start = g.start();
  const NodeId terminal = g.terminal();
  std::vector<char> on_path(g.size(), 0);
  Path path{start};
  on_path[start] = 1;
  if (start == terminal) visit(std::as_const(path), 1.0);
  std::function<void(NodeId, double)> descend = [&](NodeId u, double survival) {
    for (std::size_t e : g.out_edges(u)) {
      const Edge& edge = g.edges()[e];
      const NodeId v = edge.to;
      const double s = survival * edge.survival;
      if (v == terminal) {
        if (on_path[v] && !(start == terminal && path.size() > 1)) continue;
        if (!keep(v, s)) continue;
        path.push_back(v);
        visit(std::as_const(path), s);
        path.pop_back();
        continue;
      }
      if (on_path[v] || !keep(v, s)) continue;
      on_path[v] = 1;
      path.push_back(v);
      descend(v, s);
      path.pop_back();
      on_path[v] = 0;
    }
  };
  descend(start, 1.0);
}

inline constexpr std::size_t kBruteForceMaxNodes = 12;

// Exact reachability: some simple feasible path passes through j. Returns a
// witness path when one exists.
inline std::optional<Path> brute_force_witness(const SurvivalGraph& g, NodeId j) {
  if (g.size() > kBruteForceMaxNodes) {
    throw GuardViolation("brute-force feasibility limited to " +
                         std::to_string(kBruteForceMaxNodes) + " nodes");
  }
  const double threshold = g.survival_threshold() - 1e-12;
  std::optional<Path> witness;
  enumerate_simple_paths(
      g, [&](NodeId, double s) { return !witness && s >= threshold; },
      [&](const Path& p, double s) {
        if (witness || s < threshold) return;
        if (std::find(p.begin(), p.end(), j) != p.end()) witness = p;
      });
  return witness;
}

inline bool brute_force_feasibility(const SurvivalGraph& g, NodeId j) {
  return brute_force_witness(g, j).has_value();
}

// Structural check: unique nodes (last may repeat the first) joined by edges.
inline void check_path(const SurvivalGraph& g, const Path& path) {
  if (path.empty()) throw InvalidPath("empty path");
  std::vector<char> seen(g.size(), 0);
  for (std::size_t n = 0; n < path.size(); ++n) {
    const NodeId v = path[n];
    if (v >= g.size()) throw InvalidPath("path references unknown node");
    const bool depot_return = n + 1 == path.size() && n > 0 && v == path.front();
    if (seen[v] && !depot_return) {
      throw InvalidPath("path repeats node " + std::to_string(g.node(v).label));
    }
    seen[v] = 1;
    if (n > 0 && !g.find_edge(path[n - 1], v)) {
      throw InvalidPath("path uses missing edge (" + std::to_string(g.node(path[n - 1]).label) +
                        "," + std::to_string(g.node(v).label) + ")");
    }
  }
}

inline double path_survival(const SurvivalGraph& g, const Path& path) {
  check_path(g, path);
  double s = 1.0;
  for (std::size_t n = 1; n < path.size(); ++n) {
    s *= g.edges()[*g.find_edge(path[n - 1], path[n])].survival;
  }
  return s;
}

// Throws unless `path` runs v_s -> v_t and survives with probability >= p_s.
// A depot instance also admits the single-node path [v_s].
inline void check_feasible_path(const SurvivalGraph& g, const Path& path) {
  const double survival = path_survival(g, path);
  const bool stay = path.size() == 1 && g.is_depot();
  if ((path.size() < 2 && !stay) || path.front() != g.start() || path.back() != g.terminal()) {
    throw InvalidPath("path must run from the start node to the terminal node");
  }
  if (-std::log(survival) > -std::log(g.survival_threshold()) + kBudgetTolerance) {
    throw InvalidPath("path survival " + std::to_string(survival) + " is below the threshold");
  }
}

inline double path_cost(const LogGraph& lg, const Path& path) {
  double c = 0.0;
  for (std::size_t n = 1; n < path.size(); ++n) c += lg.cost(path[n - 1], path[n]);
  return c;
}

}  // namespace tso
