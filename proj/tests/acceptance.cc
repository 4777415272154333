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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// gating criterion fails. Pass criterion numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "msrdc/bench.h"
#include "msrdc/dp.h"
#include "msrdc/generators.h"
#include "msrdc/oracle.h"
#include "test_support.h"

namespace msrdc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

DpOptions tables() {
  DpOptions o;
  o.materialize_tables = true;
  return o;
}

SolveOutcome oracle(const Instance& inst) { return brute_force_msrdc(inst, MetricClosure(inst)); }

bool same_outcome(const SolveOutcome& a, const SolveOutcome& b) {
  return a.status == b.status && (a.status == SolveStatus::kInfeasible || a.cost == b.cost);
}

std::string show(const SolveOutcome& o) {
  return o.status == SolveStatus::kOptimal ? format_cost(o.cost) : "infeasible";
}

// 1. solve against the brute-force oracle.
Verdict oracle_equivalence() {
  const auto start = Clock::now();
  int agree = 0, checked = 0, infeasible = 0, largest = 0;
  std::string first_failure;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const int n = 3 + static_cast<int>(rng() % 7);
    const int k = 1 + static_cast<int>(rng() % 3);
    Instance inst = testing::random_connected(rng, n, 0, 8, k, 0.3);
    if (rng() % 2) inst.cost = CostFunction::power(2);
    const MetricClosure closure(inst);
    const SolveOutcome want = brute_force_msrdc(inst, closure);
    const SolveOutcome got = solve(inst).outcome;
    ++checked;
    infeasible += want.status == SolveStatus::kInfeasible;
    largest = std::max(largest, static_cast<int>(closure.candidate_radii().size()) *
                                    static_cast<int>(inst.facilities.size()));
    bool ok = same_outcome(got, want);
    if (ok && got.status == SolveStatus::kOptimal) {
      ok = is_covering_global(got.solution, inst, closure) &&
           solution_cost(got.solution, inst.cost) == got.cost &&
           static_cast<int>(got.solution.size()) <= inst.k;
    }
    if (ok) {
      ++agree;
    } else if (first_failure.empty()) {
      first_failure = " first failure: dp=" + show(got) + " oracle=" + show(want) + " " +
                      instance_to_json(inst);
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream out;
  out << agree << "/" << checked << " agree (" << infeasible << " infeasible, up to " << largest
      << " facility-radius pairs), " << elapsed << "s" << first_failure;
  return {agree == checked && elapsed < 600, out.str()};
}

// 2. Reduction instances: satisfiable iff the optimum is 2^n - 1.
Verdict reduction_equivalence() {
  const auto start = Clock::now();
  int agree = 0, sat = 0;
  std::string first_failure;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const int m = 1 + static_cast<int>((seed / 4) % 8);
    const CnfFormula cnf = gen_random_3sat(n, m, 5000 + seed);
    const bool satisfiable = brute_force_sat(cnf);
    const SolveOutcome got = solve(sat_to_msra(cnf)).outcome;
    const Cost threshold = std::ldexp(1.0, n) - 1;
    const bool ok = got.status == SolveStatus::kOptimal &&
                    (satisfiable ? got.cost == threshold : got.cost >= threshold + 1);
    sat += satisfiable;
    if (ok) {
      ++agree;
    } else if (first_failure.empty()) {
      first_failure = " first failure: seed " + std::to_string(5000 + seed) + " cost " + show(got);
    }
  }
  std::ostringstream out;
  out << agree << "/100 agree (" << sat << " satisfiable), " << seconds_since(start) << "s"
      << first_failure;
  return {agree == 100, out.str()};
}

// 3. Materialized tables: stored entries are feasible for their key, values
// fall with the budget, and the root is the optimum.
Verdict structural() {
  const auto start = Clock::now();
  std::int64_t entries = 0, infeasible = 0, not_monotone = 0;
  int root_agree = 0;
  std::string first_failure;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(20000 + seed);
    const int n = 3 + static_cast<int>(rng() % 4);
    const int k = 1 + static_cast<int>(rng() % 2);
    const Instance inst = testing::random_connected(rng, n, 1, 6, k, 0.25);
    const MetricClosure closure(inst);
    const NiceTreeDecomposition ntd = nicify(min_fill_heuristic(inst), inst);
    const DpContext ctx(inst, closure, ntd);
    DpEngine engine(ctx, tables());
    engine.run();
    for (int t = 0; t < ntd.size(); ++t) {
      Cost previous = 0;
      engine.for_each_entry(t, [&](const TupleKey& key, const DpEntry& e) {
        ++entries;
        if (!e.is_nil() && !is_feasible_for(ctx, *e.solution, key)) ++infeasible;
        // Budgets of one (c, dirs) pair are visited consecutively from 0.
        if (key.budget > 0 && e.value > previous) ++not_monotone;
        previous = e.value;
      });
    }
    const DpEntry root = engine.root_entry();
    const SolveOutcome want = oracle(inst);
    const bool ok = want.status == SolveStatus::kOptimal ? !root.is_nil() && root.value == want.cost
                                                         : root.is_nil();
    if (ok) {
      ++root_agree;
    } else if (first_failure.empty()) {
      first_failure = " first root mismatch: " + instance_to_json(inst);
    }
  }
  std::ostringstream out;
  out << entries << " entries, " << infeasible << " infeasible, " << not_monotone
      << " budget violations, root " << root_agree << "/200, " << seconds_since(start) << "s"
      << first_failure;
  return {infeasible == 0 && not_monotone == 0 && root_agree == 200, out.str()};
}

// 4. Decomposition toolkit on random connected graphs.
Verdict decompositions() {
  constexpr int kNodeConstant = 8;
  int ok = 0;
  double worst_ratio = 0;
  std::string first_failure;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    std::mt19937_64 rng(30000 + seed);
    const int n = 1 + static_cast<int>(rng() % 12);
    const double density = std::uniform_real_distribution<double>(0.0, 0.8)(rng);
    const Instance g = testing::random_connected(rng, n, 1, 5, 1, density);
    std::string problem;
    const TreeDecomposition td = min_fill_heuristic(g);
    if (auto v = validate_td(td, g)) problem = "min-fill: " + v->message;
    if (problem.empty()) {
      const NiceTreeDecomposition ntd = nicify(td, g);
      const int width = ntd.width();
      const double ratio =
          static_cast<double>(ntd.size()) / (std::max(width, 1) * static_cast<double>(n));
      worst_ratio = std::max(worst_ratio, ratio);
      if (auto p = check_nice(ntd)) problem = *p;
      else if (width != td.width()) problem = "width changed";
      else if (!ntd.node(ntd.root()).bag.empty()) problem = "root bag not empty";
      else if (auto v = validate_td(as_tree_decomposition(ntd), g)) problem = "nice: " + v->message;
      else if (ratio > kNodeConstant) problem = "too many nodes";
    }
    if (problem.empty()) {
      ++ok;
    } else if (first_failure.empty()) {
      first_failure = " first failure: " + problem + " on " + instance_to_json(g);
    }
  }
  std::ostringstream out;
  out << ok << "/1000 ok, max nodes/(max(w,1)*|V|) = " << worst_ratio << " (bound "
      << kNodeConstant << ")" << first_failure;
  return {ok == 1000, out.str()};
}

// 5. Relabeling, client removal and DOWN-dominance.
Verdict invariance() {
  int relabel_ok = 0, removal_ok = 0, tables_ok = 0;
  std::int64_t flips = 0;
  std::string first_failure;
  auto fail = [&](const std::string& what, const Instance& inst) {
    if (first_failure.empty()) first_failure = " first failure (" + what + "): " + instance_to_json(inst);
  };
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(40000 + seed);
    const Instance inst = testing::random_connected(rng, 4 + static_cast<int>(rng() % 6), 0, 8,
                                                    1 + static_cast<int>(rng() % 3));
    const SolveOutcome base = solve(inst).outcome;
    bool all = true;
    for (int p = 0; p < 3; ++p) {
      const Instance moved = testing::relabel(inst, testing::random_permutation(rng, inst.vertex_count));
      all = all && same_outcome(solve(moved).outcome, base);
    }
    relabel_ok += all;
    if (!all) fail("relabel", inst);

    if (inst.clients.empty()) {
      ++removal_ok;
      continue;
    }
    Instance fewer = inst;
    fewer.clients.erase(fewer.clients.begin() +
                        static_cast<std::ptrdiff_t>(rng() % fewer.clients.size()));
    const SolveOutcome less = solve(fewer).outcome;
    const bool monotone = base.status == SolveStatus::kInfeasible ||
                          (less.status == SolveStatus::kOptimal && less.cost <= base.cost);
    removal_ok += monotone;
    if (!monotone) fail("client removal", inst);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(45000 + seed);
    const Instance inst = testing::random_connected(rng, 3 + static_cast<int>(rng() % 3), 1, 6,
                                                    1 + static_cast<int>(rng() % 2), 0.3);
    const MetricClosure closure(inst);
    const NiceTreeDecomposition ntd = nicify(min_fill_heuristic(inst), inst);
    const DpContext ctx(inst, closure, ntd);
    DpEngine engine(ctx, tables());
    engine.run();
    bool all = true;
    for (int t = 0; t < ntd.size(); ++t) {
      engine.for_each_entry(t, [&](const TupleKey& key, const DpEntry& e) {
        for (std::size_t i = 0; i < key.dirs.size(); ++i) {
          if (key.dirs[i] != Direction::kUp) continue;
          TupleKey down = key;
          down.dirs[i] = Direction::kDown;
          ++flips;
          if (engine.entry(down).value > e.value) all = false;
        }
      });
    }
    tables_ok += all;
    if (!all) fail("DOWN-dominance", inst);
  }
  std::ostringstream out;
  out << "relabel " << relabel_ok << "/50, client removal " << removal_ok << "/50, DOWN-dominance "
      << tables_ok << "/20 (" << flips << " flips)" << first_failure;
  return {relabel_ok == 50 && removal_ok == 50 && tables_ok == 20, out.str()};
}

// 6. Width-1 trees up to 24 vertices with k = 3.
Verdict scaling() {
  const std::vector<int> sizes{8, 12, 16, 20, 24};
  double slowest = 0;
  bool all_solved = true;
  for (int n : sizes) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Instance tree = gen_random_tree(n, {1, 10}, {}, 3, 60000 + seed * 100 + n);
      const auto start = Clock::now();
      DpOptions o;
      o.deadline = start + std::chrono::minutes(5);
      try {
        all_solved = all_solved && solve(tree, o).outcome.status == SolveStatus::kOptimal;
      } catch (const DpTimeout&) {
        all_solved = false;
      }
      slowest = std::max(slowest, seconds_since(start));
    }
  }
  BenchConfig config;
  config.family = "tree";
  config.sizes = sizes;
  config.ks = {3};
  config.timeout_seconds = 300;
  const auto rows = run_scaling(config);
  const bool bench_done = std::all_of(rows.begin(), rows.end(),
                                      [](const BenchRow& r) { return r.wall_time.has_value(); });
  const auto slopes = summarize_slopes(rows);
  const double slope = slopes.empty() ? INFINITY : slopes.front().entry_slope;
  std::ostringstream out;
  out << "slowest solve " << slowest << "s, all optimal " << (all_solved ? "yes" : "no")
      << ", materialized entry_count slope " << slope << " (ceiling 5.5), counters:";
  for (const BenchRow& r : rows) out << ' ' << r.vertices << ':' << r.entry_count;
  return {all_solved && slowest < 300 && bench_done && slope <= 5.5, out.str()};
}

// 7. Zero-weight edges: record disagreements and shrink one of them.
bool is_connected_without(const Instance& inst, std::size_t edge) {
  Instance copy = inst;
  copy.edges.erase(copy.edges.begin() + static_cast<std::ptrdiff_t>(edge));
  return is_connected(copy);
}

Instance minimize(Instance inst, const std::function<bool(const Instance&)>& bad) {
  bool changed = true;
  while (changed) {
    changed = false;
    auto attempt = [&](Instance next) {
      normalize(next);
      if (!bad(next)) return false;
      inst = std::move(next);
      changed = true;
      return true;
    };
    for (std::size_t i = 0; i < inst.clients.size(); ++i) {
      Instance next = inst;
      next.clients.erase(next.clients.begin() + static_cast<std::ptrdiff_t>(i));
      if (attempt(next)) --i;
    }
    for (std::size_t i = 0; inst.facilities.size() > 1 && i < inst.facilities.size(); ++i) {
      Instance next = inst;
      next.facilities.erase(next.facilities.begin() + static_cast<std::ptrdiff_t>(i));
      if (attempt(next)) --i;
    }
    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
      if (!is_connected_without(inst, i)) continue;
      Instance next = inst;
      next.edges.erase(next.edges.begin() + static_cast<std::ptrdiff_t>(i));
      if (attempt(next)) --i;
    }
    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
      for (Distance w = 0; w < inst.edges[i].weight; ++w) {
        Instance next = inst;
        next.edges[i].weight = w;
        if (attempt(next)) break;
      }
    }
    while (inst.k > 1) {
      Instance next = inst;
      --next.k;
      if (!attempt(next)) break;
    }
  }
  return inst;
}

Verdict zero_distance() {
  int table_mismatch = 0, list_mismatch = 0;
  std::string witness;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(70000 + seed);
    const int n = 3 + static_cast<int>(rng() % 5);
    Instance inst = testing::random_connected(rng, n, 0, 4, 1 + static_cast<int>(rng() % 3), 0.25);
    if (std::none_of(inst.edges.begin(), inst.edges.end(), [](const Edge& e) { return e.weight == 0; })) {
      inst.edges[rng() % inst.edges.size()].weight = 0;
    }
    if (std::all_of(inst.edges.begin(), inst.edges.end(), [](const Edge& e) { return e.weight == 0; })) {
      inst.edges.back().weight = 1;
    }
    const SolveOutcome want = oracle(inst);
    if (!same_outcome(solve(inst).outcome, want)) ++list_mismatch;
    const SolveOutcome literal = solve(inst, tables()).outcome;
    if (!same_outcome(literal, want)) {
      ++table_mismatch;
      if (witness.empty()) {
        const Instance small = minimize(inst, [](const Instance& i) {
          return !same_outcome(solve(i, tables()).outcome, oracle(i));
        });
        witness = instance_to_json(small);
        witness.pop_back();
        detail = " (materialized " + show(solve(small, tables()).outcome) + ", oracle " +
                 show(oracle(small)) + ")";
      }
    }
  }
  std::ostringstream out;
  out << "non-gating: materialized tables disagree with the oracle on " << table_mismatch
      << "/100, candidate lists on " << list_mismatch << "/100";
  if (!witness.empty()) out << "; minimized witness " << witness << detail;
  return {true, out.str()};
}

}  // namespace
}  // namespace msrdc

int main(int argc, char** argv) {
  using namespace msrdc;
  const std::vector<std::pair<const char*, Verdict (*)()>> criteria{
      {"oracle equivalence (500 instances)", oracle_equivalence},
      {"3-SAT reduction (100 formulas)", reduction_equivalence},
      {"stored entries: feasibility, budget monotonicity, root optimum (200 instances)", structural},
      {"decomposition toolkit (1000 graphs)", decompositions},
      {"invariances: relabeling, client removal, DOWN-dominance", invariance},
      {"width-1 scaling up to |V| = 24, k = 3", scaling},
      {"zero-distance exploratory suite (100 instances)", zero_distance},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(number)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d %s: %s -- %s\n", number, v.pass ? "PASS" : "FAIL", criteria[i].first,
                v.detail.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
