// Copyright 2026 The msrdc Authors
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

// Command-line front end. JSON goes to stdout, diagnostics to stderr.
// Exit codes: 0 ok/optimal, 1 input error, 2 infeasible, 3 resource limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "msrdc/bench.h"
#include "msrdc/dp.h"
#include "msrdc/generators.h"
#include "msrdc/instance.h"
#include "msrdc/metric.h"
#include "msrdc/oracle.h"
#include "msrdc/solution.h"
#include "msrdc/tree_decomposition.h"

namespace {

using namespace msrdc;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitLimit = 3;

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(path, text);
  }
}

Instance load_instance(const std::string& path, std::optional<int> k,
                       const std::string& cost_flag) {
  Instance inst = read_instance_file(path);
  if (k) inst.k = *k;
  if (!cost_flag.empty()) inst.cost = CostFunction::from_flag(cost_flag);
  validate_instance(inst);
  return inst;
}

int report(const SolveOutcome& outcome) {
  std::cout << outcome_to_json(outcome) << '\n';
  return outcome.status == SolveStatus::kOptimal ? kExitOk : kExitInfeasible;
}

struct SolveArgs {
  std::string graph, td, cost, stats;
  std::optional<int> k;
  bool tables = false;
  double timeout = 0;
};

int run_solve(const SolveArgs& a) {
  const Instance inst = load_instance(a.graph, a.k, a.cost);
  const MetricClosure closure(inst);
  TreeDecomposition td;
  if (a.td.empty()) {
    td = min_fill_heuristic(inst);
  } else {
    int n = 0;
    td = td_from_pace(read_text_file(a.td), &n);
    if (n != inst.vertex_count) {
      throw InputError("decomposition is for " + std::to_string(n) + " vertices, instance has " +
                       std::to_string(inst.vertex_count));
    }
  }
  if (auto violation = validate_td(td, inst)) throw InputError(violation->message);
  const NiceTreeDecomposition ntd = nicify(td, inst);
  DpOptions options;
  options.materialize_tables = a.tables;
  if (a.timeout > 0) {
    options.deadline = std::chrono::steady_clock::now() +
                       std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                           std::chrono::duration<double>(a.timeout));
  }
  const SolveResult result = solve(inst, ntd, closure, options);
  std::cerr << "width " << result.width << (a.td.empty() ? " (min-fill)" : "") << '\n';
  if (!a.stats.empty()) write_text_file(a.stats, result.stats.to_json());
  return report(result.outcome);
}

int run_oracle(const std::string& graph, std::optional<int> k, const std::string& cost,
               std::int64_t work_limit) {
  const Instance inst = load_instance(graph, k, cost);
  return report(brute_force_msrdc(inst, MetricClosure(inst), work_limit));
}

int run_verify(const std::string& graph, const std::string& solution_path, std::optional<int> k,
               const std::string& cost) {
  const Instance inst = load_instance(graph, k, cost);
  const SolveOutcome outcome = outcome_from_json(read_text_file(solution_path));
  if (outcome.status != SolveStatus::kOptimal) {
    std::cerr << "solution file reports infeasible; nothing to verify\n";
    return kExitInfeasible;
  }
  const MetricClosure closure(inst);
  for (const OpenedBall& b : outcome.solution.opened) {
    if (!std::binary_search(inst.facilities.begin(), inst.facilities.end(), b.facility)) {
      std::cerr << "vertex " << b.facility << " is not a facility\n";
      return kExitInput;
    }
  }
  if (static_cast<int>(outcome.solution.size()) > inst.k) {
    std::cerr << "opens " << outcome.solution.size() << " balls, k = " << inst.k << '\n';
    return kExitInput;
  }
  if (!is_covering_global(outcome.solution, inst, closure)) {
    std::cerr << "some client is not covered\n";
    return kExitInput;
  }
  const Cost cost_value = solution_cost(outcome.solution, inst.cost);
  if (cost_value != outcome.cost) {
    std::cerr << "stated cost " << format_cost(outcome.cost) << " differs from recomputed "
              << format_cost(cost_value) << '\n';
    return kExitInput;
  }
  std::cout << "{\"valid\":true,\"cost\":" << format_cost(cost_value) << "}\n";
  return kExitOk;
}

struct GenerateArgs {
  std::string family, out, td_out;
  int n = 10, m = 5, k = 3, width = 2;
  std::optional<std::uint64_t> seed;
  double edge_probability = 0.2, keep = 0.7, client_probability = 0.5, facility_probability = 0.5;
  Distance wmin = 1, wmax = 10;
  bool all_positive = false;
};

int run_generate(const GenerateArgs& a) {
  const WeightRange weights{a.wmin, a.wmax};
  const RoleSampling roles{a.client_probability, a.facility_probability};
  const std::uint64_t seed = *a.seed;
  if (a.family == "3sat") {
    emit(cnf_to_dimacs(gen_random_3sat(a.n, a.m, seed, a.all_positive)), a.out);
    return kExitOk;
  }
  Instance inst;
  if (a.family == "tree") {
    inst = gen_random_tree(a.n, weights, roles, a.k, seed);
  } else if (a.family == "graph") {
    inst = gen_random_graph(a.n, a.edge_probability, weights, roles, a.k, seed);
  } else {
    auto [generated, td] = gen_partial_ktree(a.n, a.width, a.keep, weights, roles, a.k, seed);
    inst = std::move(generated);
    if (!a.td_out.empty()) write_text_file(a.td_out, td_to_pace(td, inst.vertex_count));
  }
  emit(instance_to_json(inst), a.out);
  return kExitOk;
}

int run_reduce(const std::string& cnf_path, const std::string& out) {
  emit(instance_to_json(sat_to_msra(cnf_from_dimacs(read_text_file(cnf_path)))), out);
  return kExitOk;
}

int run_validate(const std::string& graph, const std::string& td_path) {
  const Instance inst = read_instance_file(graph);
  int n = 0;
  const TreeDecomposition td = td_from_pace(read_text_file(td_path), &n);
  if (n != inst.vertex_count) {
    std::cerr << "invalid: decomposition declares " << n << " vertices, instance has "
              << inst.vertex_count << '\n';
    return kExitInput;
  }
  if (auto violation = validate_td(td, inst)) {
    std::cerr << "invalid: " << violation->message << '\n';
    return kExitInput;
  }
  std::cout << "valid, width " << td.width() << '\n';
  return kExitOk;
}

int run_bench(const BenchConfig& config, const std::string& out, const std::string& report_path) {
  const auto rows = run_scaling(config);
  emit(bench_to_csv(rows), out);
  const std::string summary = slopes_to_text(summarize_slopes(rows));
  if (report_path.empty()) {
    std::cerr << summary;
  } else {
    write_text_file(report_path, summary);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact min-sum-radii clustering with radius-dependent costs"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance with the tree-decomposition DP");
  solve_cmd->add_option("graph", solve_args.graph, "Instance JSON")->required();
  solve_cmd->add_option("--td", solve_args.td, "PACE .td decomposition (default: min-fill)");
  solve_cmd->add_option("-k,--k", solve_args.k, "Override the ball budget");
  solve_cmd->add_option("--cost", solve_args.cost, "identity | power:A | table:PATH");
  solve_cmd->add_option("--stats", solve_args.stats, "Write DP statistics JSON here");
  solve_cmd->add_flag("--tables", solve_args.tables, "Materialize every DP table");
  solve_cmd->add_option("--timeout", solve_args.timeout, "Give up after this many seconds");

  std::string oracle_graph, oracle_cost;
  std::optional<int> oracle_k;
  std::int64_t work_limit = 50'000'000;
  auto* oracle_cmd = app.add_subcommand("oracle", "Solve by exhaustive search");
  oracle_cmd->add_option("graph", oracle_graph, "Instance JSON")->required();
  oracle_cmd->add_option("-k,--k", oracle_k, "Override the ball budget");
  oracle_cmd->add_option("--cost", oracle_cost, "identity | power:A | table:PATH");
  oracle_cmd->add_option("--work-limit", work_limit, "Search node limit")->check(CLI::PositiveNumber);

  std::string verify_graph, verify_solution, verify_cost;
  std::optional<int> verify_k;
  auto* verify_cmd = app.add_subcommand("verify", "Check a solution JSON against an instance");
  verify_cmd->add_option("graph", verify_graph, "Instance JSON")->required();
  verify_cmd->add_option("solution", verify_solution, "Solution JSON")->required();
  verify_cmd->add_option("-k,--k", verify_k, "Override the ball budget");
  verify_cmd->add_option("--cost", verify_cost, "identity | power:A | table:PATH");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a random instance or formula");
  gen_cmd->add_option("--family", gen.family, "tree | graph | ktree | 3sat")
      ->required()
      ->check(CLI::IsMember({"tree", "graph", "ktree", "3sat"}));
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("-n,--n", gen.n, "Vertices (variables for 3sat)");
  gen_cmd->add_option("-m,--m", gen.m, "Clauses (3sat)");
  gen_cmd->add_option("-k,--k", gen.k, "Ball budget");
  gen_cmd->add_option("--width", gen.width, "Width target (ktree)");
  gen_cmd->add_option("--keep", gen.keep, "Edge keep probability (ktree)");
  gen_cmd->add_option("--edge-prob", gen.edge_probability, "Extra edge probability (graph)");
  gen_cmd->add_option("--wmin", gen.wmin, "Smallest edge weight");
  gen_cmd->add_option("--wmax", gen.wmax, "Largest edge weight");
  gen_cmd->add_option("--client-prob", gen.client_probability, "Client probability");
  gen_cmd->add_option("--facility-prob", gen.facility_probability, "Facility probability");
  gen_cmd->add_flag("--all-positive", gen.all_positive, "Only positive literals (3sat)");
  gen_cmd->add_option("--out", gen.out, "Output path (default stdout)");
  gen_cmd->add_option("--td-out", gen.td_out, "Decomposition output path (ktree)");

  std::string cnf_path, reduce_out;
  auto* reduce_cmd = app.add_subcommand("reduce", "Turn a DIMACS CNF into a clustering instance");
  reduce_cmd->add_option("cnf", cnf_path, "DIMACS file")->required();
  reduce_cmd->add_option("--out", reduce_out, "Output path (default stdout)");

  std::string validate_graph, validate_td_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a tree decomposition");
  validate_cmd->add_option("graph", validate_graph, "Instance JSON")->required();
  validate_cmd->add_option("td", validate_td_path, "PACE .td file")->required();

  BenchConfig bench;
  std::string bench_out, bench_report;
  auto* bench_cmd = app.add_subcommand("bench", "Run the scaling harness and print CSV");
  bench_cmd->add_option("--family", bench.family, "tree | ktree | graph")
      ->check(CLI::IsMember({"tree", "ktree", "graph"}));
  bench_cmd->add_option("--sizes", bench.sizes, "Vertex counts")->delimiter(',');
  bench_cmd->add_option("--widths", bench.widths, "Width targets (ktree)")->delimiter(',');
  bench_cmd->add_option("--k", bench.ks, "Ball budgets")->delimiter(',');
  bench_cmd->add_option("--reps", bench.repetitions, "Repetitions per point");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--timeout", bench.timeout_seconds, "Seconds per run");
  bench_cmd->add_option("--out", bench_out, "CSV path (default stdout)");
  bench_cmd->add_option("--report", bench_report, "Slope summary path (default stderr)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*solve_cmd) return run_solve(solve_args);
    if (*oracle_cmd) return run_oracle(oracle_graph, oracle_k, oracle_cost, work_limit);
    if (*verify_cmd) return run_verify(verify_graph, verify_solution, verify_k, verify_cost);
    if (*gen_cmd) return run_generate(gen);
    if (*reduce_cmd) return run_reduce(cnf_path, reduce_out);
    if (*validate_cmd) return run_validate(validate_graph, validate_td_path);
    if (*bench_cmd) return run_bench(bench, bench_out, bench_report);
  } catch (const WorkLimitExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitLimit;
  } catch (const DpTimeout& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitLimit;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
