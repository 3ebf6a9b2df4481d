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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "tso/greedy.hpp"
#include "tso/instance.hpp"
#include "tso/parallel.hpp"

namespace tso {

struct BenchRecord {
  std::string instance;
  std::size_t nodes = 0;
  std::size_t team_size = 0;
  double p_s = 0.0;
  std::string oracle;
  double objective = 0.0;
  double upper = 0.0;
  double ratio = 0.0;
  double millis = 0.0;
  bool certified = false;
};

struct BenchOptions {
  std::uint64_t seed = 0;
  std::size_t instances = 10;
  std::size_t nodes = 20;
  std::vector<double> p_s_grid{0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95};
  std::size_t max_team = 5;
  OracleKind oracle = OracleKind::kExact;
  std::size_t threads = 0;  // 0 = TSO_THREADS / hardware
  bool timing = false;      // wall time is reported only on request
  // Oversized team for the U3 bound: L = ceil(oversize_target * K / p_s).
  double oversize_target = 6.0;
};

inline std::size_t oversize_for(std::size_t team_size, double p_s, double target) {
  return std::max(team_size, static_cast<std::size_t>(std::ceil(target * static_cast<double>(team_size) / p_s - 1e-9)));
}

inline std::uint64_t cell_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// One greedy run with the largest oversized team serves every K <= max_team,
// since the first K greedy paths do not depend on how many follow.
inline std::vector<BenchRecord> bench_cell(const Instance& inst, const std::string& name, std::size_t max_team,
                                           OracleKind oracle, std::uint64_t seed, double oversize_target,
                                           bool timing) {
  const double p_s = inst.graph.survival_threshold();
  GreedyConfig cfg;
  cfg.team_size = max_team;
  cfg.oversize = oversize_for(max_team, p_s, oversize_target);
  cfg.oracle = oracle;
  cfg.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  const GreedyResult greedy = greedy_survivors(inst.graph, cfg);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::vector<BenchRecord> out;
  for (std::size_t k = 1; k <= max_team; ++k) {
    GreedyConfig at_k = cfg;
    at_k.team_size = k;
    at_k.oversize = oversize_for(k, p_s, oversize_target);
    const BoundCertificate cert = compute_bounds(inst.graph, at_k, greedy);
    BenchRecord r;
    r.instance = name;
    r.nodes = inst.graph.size();
    r.team_size = k;
    r.p_s = p_s;
    r.oracle = oracle == OracleKind::kExact ? "exact" : "heuristic";
    r.objective = greedy.objective_by_size[k - 1];
    r.upper = cert.upper;
    r.ratio = cert.upper > 0.0 ? r.objective / cert.upper : 1.0;
    r.millis = timing ? ms : 0.0;
    r.certified = cert.certified;
    out.push_back(r);
  }
  return out;
}

inline RandomGraphOptions ratio_graph(std::size_t nodes, double p_s, std::uint64_t seed) {
  RandomGraphOptions gen;
  gen.nodes = nodes;
  gen.min_survival = 0.3;
  gen.max_survival = 1.0;
  gen.p_s = p_s;
  gen.seed = seed;
  return gen;
}

// Seed of the i-th suite instance: the first candidate whose graph admits a
// feasible path at every threshold of the grid.
inline std::uint64_t ratio_instance_seed(const BenchOptions& opt, std::size_t index) {
  const double hardest = *std::max_element(opt.p_s_grid.begin(), opt.p_s_grid.end());
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t seed = cell_seed(opt.seed, index, 0x10000 + attempt);
    const Instance inst = random_instance(ratio_graph(opt.nodes, hardest, seed));
    if (feasibility_check(inst.graph).nonempty) return seed;
  }
}

// Random complete graphs, survival U[0.3, 1), every (instance, p_s) cell run
// for K = 1..max_team.
inline std::vector<BenchRecord> ratio_suite(const BenchOptions& opt) {
  struct Cell {
    std::size_t instance;
    std::size_t grid;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < opt.instances; ++i) {
    for (std::size_t p = 0; p < opt.p_s_grid.size(); ++p) cells.push_back({i, p});
  }
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < opt.instances; ++i) seeds.push_back(ratio_instance_seed(opt, i));
  std::vector<std::vector<BenchRecord>> results(cells.size());
  parallel_for(cells.size(), opt.threads, [&](std::size_t c) {
    const Cell cell = cells[c];
    const Instance inst = random_instance(ratio_graph(opt.nodes, opt.p_s_grid[cell.grid], seeds[cell.instance]));
    const std::string name = "complete" + std::to_string(opt.nodes) + "-" + std::to_string(cell.instance);
    results[c] = bench_cell(inst, name, opt.max_team, opt.oracle, cell_seed(opt.seed, cell.instance, cell.grid + 1),
                            opt.oversize_target, opt.timing);
  });
  std::vector<BenchRecord> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

inline std::vector<BenchRecord> hex_suite(const BenchOptions& opt, double p_s = 0.70, std::size_t max_team = 6) {
  const Instance inst = hex_instance(p_s, max_team);
  return bench_cell(inst, "hex", max_team, opt.oracle, cell_seed(opt.seed, 0, 0), opt.oversize_target, opt.timing);
}

inline std::string format_csv(const std::vector<BenchRecord>& records) {
  std::string out = "instance,V,K,p_s,oracle,J,U,ratio,ms\n";
  char line[512];
  for (const BenchRecord& r : records) {
    std::snprintf(line, sizeof line, "%s,%zu,%zu,%.9g,%s,%.9g,%.9g,%.9g,%.9g\n", r.instance.c_str(), r.nodes,
                  r.team_size, r.p_s, r.oracle.c_str(), r.objective, r.upper, r.ratio, r.millis);
    out += line;
  }
  return out;
}

}  // namespace tso
