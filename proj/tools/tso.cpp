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

// Command-line front end: instance generation, solving, bounding, simulation,
// exact ground truth, feasibility audit and benchmark suites.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tso/tso.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitGuard = 3;

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    tso::write_text_file(out, text);
  }
}

tso::Instance load_checked(const std::string& path) {
  tso::Instance inst = tso::load_instance(path);
  tso::require_valid(inst.graph);
  return inst;
}

void require_nonempty(const tso::SurvivalGraph& g) {
  if (!tso::feasibility_check(g).nonempty) {
    throw tso::InfeasibleInstance(
        "feasibility check failed: no v_s -> v_t path has survival probability >= p_s");
  }
}

std::optional<tso::OracleKind> parse_oracle(const std::string& s) {
  if (s == "exact") return tso::OracleKind::kExact;
  if (s == "heuristic") return tso::OracleKind::kHeuristic;
  return std::nullopt;
}

struct GenArgs {
  std::size_t nodes = 20;
  double min_survival = 0.3;
  double max_survival = 1.0;
  double p_s = 0.7;
  bool sparse = false;
  double density = 0.5;
  std::uint64_t seed = 0;
  std::size_t team = 1;
  std::string preset;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  tso::Instance inst;
  if (a.preset == "hex") {
    inst = tso::hex_instance(a.p_s, a.team);
  } else if (a.preset.empty()) {
    tso::RandomGraphOptions opt;
    opt.nodes = a.nodes;
    opt.min_survival = a.min_survival;
    opt.max_survival = a.max_survival;
    opt.p_s = a.p_s;
    opt.complete = !a.sparse;
    opt.density = a.density;
    opt.seed = a.seed;
    opt.team_size = a.team;
    inst = tso::random_instance(opt);
  } else {
    throw std::invalid_argument("unknown preset '" + a.preset + "'");
  }
  emit(a.out, tso::dump(tso::instance_to_json(inst)));
  return kExitOk;
}

struct SolveArgs {
  std::string instance;
  std::string oracle = "exact";
  std::string variant = "node";
  std::size_t team = 0;
  std::size_t oversize = 0;
  std::uint64_t seed = 0;
  std::size_t restarts = 64;
  std::string out;
};

int cmd_solve(const SolveArgs& a) {
  const tso::Instance inst = load_checked(a.instance);
  require_nonempty(inst.graph);
  tso::GreedyConfig cfg;
  cfg.team_size = a.team > 0 ? a.team : inst.team_size;
  if (a.oversize > 0) cfg.oversize = a.oversize;
  const auto oracle = parse_oracle(a.oracle);
  if (!oracle) throw std::invalid_argument("unknown oracle '" + a.oracle + "'");
  cfg.oracle = *oracle;
  cfg.seed = a.seed;
  cfg.restarts = a.restarts;
  if (a.variant == "node") {
    cfg.variant = tso::Variant::kNode;
  } else if (a.variant == "edge") {
    cfg.variant = tso::Variant::kEdge;
  } else if (a.variant == "multi") {
    cfg.variant = tso::Variant::kMultiVisit;
    if (!inst.multi_visit) throw std::invalid_argument("instance has no multi_visit table");
  } else {
    throw std::invalid_argument("unknown variant '" + a.variant + "'");
  }
  const auto data = inst.variant_data();
  const tso::GreedyResult result = tso::greedy_survivors_variant(inst.graph, cfg, data);
  const tso::BoundCertificate cert = tso::compute_bounds(inst.graph, cfg, result, data);
  tso::json doc = tso::greedy_plan_to_json(inst.graph, result, cert, cfg.team_size);
  doc["variant"] = a.variant;
  emit(a.out, tso::dump(doc));
  return kExitOk;
}

struct ExactArgs {
  std::string instance;
  std::size_t team = 0;
  std::string out;
};

int cmd_exact(const ExactArgs& a) {
  const tso::Instance inst = load_checked(a.instance);
  require_nonempty(inst.graph);
  const std::size_t k = a.team > 0 ? a.team : inst.team_size;
  const tso::TeamPlan plan = tso::solve_exact_tso(inst.graph, k);
  tso::json doc = tso::plan_to_json(inst.graph, plan);
  doc["exact"] = true;
  emit(a.out, tso::dump(doc));
  return kExitOk;
}

struct SimulateArgs {
  std::string instance;
  std::string plan;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  const tso::Instance inst = load_checked(a.instance);
  std::vector<tso::Path> paths;
  if (a.plan.empty()) {
    require_nonempty(inst.graph);
    tso::GreedyConfig cfg;
    cfg.team_size = inst.team_size;
    paths = tso::greedy_survivors(inst.graph, cfg).plan.paths;
  } else {
    paths = tso::plan_paths_from_json(inst.graph, tso::read_json_file(a.plan));
    for (const auto& p : paths) tso::check_feasible_path(inst.graph, p);
  }
  const auto sim = tso::simulate_team(inst.graph, paths, a.trials, a.seed);
  const auto analytic = tso::team_objective(inst.graph, std::span<const tso::Path>(paths));
  tso::json doc;
  doc["trials"] = sim.trials;
  doc["estimate"] = sim.mean;
  doc["std_error"] = sim.std_error;
  doc["analytic"] = analytic.value;
  doc["survival_rate"] = sim.survival_rate;
  std::vector<double> survival;
  for (const auto& p : paths) survival.push_back(tso::path_survival(inst.graph, p));
  doc["analytic_survival"] = survival;
  emit(a.out, tso::dump(doc));
  return kExitOk;
}

struct FeasibleArgs {
  std::string instance;
  bool brute_force = false;
  std::string out;
};

int cmd_feasible(const FeasibleArgs& a) {
  const tso::Instance inst = load_checked(a.instance);
  const auto& g = inst.graph;
  const auto report = tso::feasibility_check(g);
  std::ostringstream os;
  os << "node,outbound,inbound,reachable";
  if (a.brute_force) os << ",brute_force,discrepancy";
  os << "\n";
  std::size_t disagreements = 0;
  char buf[64];
  for (tso::NodeId j = 0; j < g.size(); ++j) {
    os << g.node(j).label;
    std::snprintf(buf, sizeof buf, ",%.9g,%.9g", report.outbound[j], report.inbound[j]);
    os << buf << "," << (report.reachable[j] ? "yes" : "no");
    if (a.brute_force) {
      const bool truth = tso::brute_force_feasibility(g, j);
      const bool differs = truth != static_cast<bool>(report.reachable[j]);
      disagreements += differs;
      os << "," << (truth ? "yes" : "no") << "," << (differs ? (truth ? "missed" : "false_positive") : "");
    }
    os << "\n";
  }
  os << "# nonempty," << (report.nonempty ? "yes" : "no") << "\n";
  if (a.brute_force) os << "# discrepancies," << disagreements << "\n";
  emit(a.out, os.str());
  return kExitOk;
}

struct BenchArgs {
  std::string suite = "ratio";
  std::string oracle = "exact";
  std::uint64_t seed = 0;
  std::size_t instances = 10;
  std::size_t nodes = 20;
  bool timing = false;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  tso::BenchOptions opt;
  opt.seed = a.seed;
  opt.instances = a.instances;
  opt.nodes = a.nodes;
  opt.timing = a.timing;
  const auto oracle = parse_oracle(a.oracle);
  if (!oracle) throw std::invalid_argument("unknown oracle '" + a.oracle + "'");
  opt.oracle = *oracle;
  std::vector<tso::BenchRecord> records;
  if (a.suite == "ratio") {
    records = tso::ratio_suite(opt);
  } else if (a.suite == "hex") {
    records = tso::hex_suite(opt);
  } else {
    throw std::invalid_argument("unknown suite '" + a.suite + "'");
  }
  emit(a.out, tso::format_csv(records));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Team surviving orienteers: chance-constrained multi-robot path planning"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file");
  gen_cmd->add_option("-V,--nodes", gen.nodes, "Number of nodes");
  gen_cmd->add_option("--min", gen.min_survival, "Smallest edge survival probability");
  gen_cmd->add_option("--max", gen.max_survival, "Largest edge survival probability (exclusive unless equal to min)");
  gen_cmd->add_option("--p-s", gen.p_s, "Per-robot survival threshold");
  gen_cmd->add_flag("--sparse", gen.sparse, "Random digraph instead of a complete one");
  gen_cmd->add_option("--density", gen.density, "Edge probability for --sparse");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--team", gen.team, "Team size stored in the instance");
  gen_cmd->add_option("--preset", gen.preset, "Named preset (hex)");
  gen_cmd->add_option("-o,--out", gen.out, "Output file (default stdout)");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Plan a team with the greedy algorithm and bound the optimum");
  solve_cmd->add_option("instance", solve.instance, "Instance file")->required();
  solve_cmd->add_option("--oracle", solve.oracle, "Orienteering oracle: exact | heuristic");
  solve_cmd->add_option("--variant", solve.variant, "Reward model: node | edge | multi");
  solve_cmd->add_option("-K,--team", solve.team, "Team size (default from instance)");
  solve_cmd->add_option("-L,--oversize", solve.oversize, "Oversized team for the upper bound");
  solve_cmd->add_option("--seed", solve.seed, "Heuristic seed");
  solve_cmd->add_option("--restarts", solve.restarts, "Heuristic restarts");
  solve_cmd->add_option("-o,--out", solve.out, "Output plan file (default stdout)");

  ExactArgs exact;
  auto* exact_cmd = app.add_subcommand("exact", "Optimal team by exhaustive search (small instances)");
  exact_cmd->add_option("instance", exact.instance, "Instance file")->required();
  exact_cmd->add_option("-K,--team", exact.team, "Team size (default from instance)");
  exact_cmd->add_option("-o,--out", exact.out, "Output plan file (default stdout)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo estimate of a plan's objective");
  sim_cmd->add_option("instance", sim.instance, "Instance file")->required();
  sim_cmd->add_option("--plan", sim.plan, "Plan file (default: greedy plan)");
  sim_cmd->add_option("--trials", sim.trials, "Number of trials");
  sim_cmd->add_option("--seed", sim.seed, "Random seed");
  sim_cmd->add_option("-o,--out", sim.out, "Output file (default stdout)");

  FeasibleArgs feas;
  auto* feas_cmd = app.add_subcommand("feasible", "Per-node reachability within the survival budget");
  feas_cmd->add_option("instance", feas.instance, "Instance file")->required();
  feas_cmd->add_flag("--brute-force", feas.brute_force, "Compare against exhaustive path enumeration");
  feas_cmd->add_option("-o,--out", feas.out, "Output file (default stdout)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite and write CSV");
  bench_cmd->add_option("--suite", bench.suite, "ratio | hex");
  bench_cmd->add_option("--oracle", bench.oracle, "exact | heuristic");
  bench_cmd->add_option("--seed", bench.seed, "Master seed");
  bench_cmd->add_option("--instances", bench.instances, "Random instances in the ratio suite");
  bench_cmd->add_option("-V,--nodes", bench.nodes, "Nodes per random instance");
  bench_cmd->add_flag("--timing", bench.timing, "Report wall time in the ms column");
  bench_cmd->add_option("-o,--out", bench.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*solve_cmd) return cmd_solve(solve);
    if (*exact_cmd) return cmd_exact(exact);
    if (*sim_cmd) return cmd_simulate(sim);
    if (*feas_cmd) return cmd_feasible(feas);
    if (*bench_cmd) return cmd_bench(bench);
  } catch (const tso::InfeasibleInstance& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const tso::GuardViolation& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
