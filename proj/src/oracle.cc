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

#include "msrdc/oracle.h"

#include <algorithm>
#include <limits>
#include <sstream>

namespace msrdc {

void validate_cnf(const CnfFormula& cnf) {
  if (cnf.num_vars < 0) throw InputError("negative variable count");
  for (std::size_t j = 0; j < cnf.clauses.size(); ++j) {
    if (cnf.clauses[j].empty()) throw InputError("clause " + std::to_string(j + 1) + " is empty");
    for (int lit : cnf.clauses[j]) {
      if (lit == 0 || lit > cnf.num_vars || lit < -cnf.num_vars) {
        throw InputError("literal " + std::to_string(lit) + " out of range");
      }
    }
  }
}

CnfFormula cnf_from_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  CnfFormula cnf;
  bool have_header = false;
  long declared_clauses = 0;
  std::vector<int> current;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "c") continue;
    if (first == "%") break;
    if (first == "p") {
      std::string format;
      if (have_header || !(fields >> format >> cnf.num_vars >> declared_clauses) ||
          format != "cnf" || cnf.num_vars < 0 || declared_clauses < 0) {
        throw InputError("bad DIMACS header: " + line);
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw InputError("DIMACS clause before the 'p cnf' header");
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) {
      int lit = 0;
      try {
        std::size_t used = 0;
        lit = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw InputError("bad DIMACS literal '" + token + "'");
      }
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(lit);
      }
    }
  }
  if (!have_header) throw InputError("missing 'p cnf' header");
  if (!current.empty()) throw InputError("last clause is not terminated by 0");
  if (static_cast<long>(cnf.clauses.size()) != declared_clauses) {
    throw InputError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                     std::to_string(cnf.clauses.size()));
  }
  validate_cnf(cnf);
  return cnf;
}

std::string cnf_to_dimacs(const CnfFormula& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

bool brute_force_sat(const CnfFormula& cnf) {
  validate_cnf(cnf);
  if (cnf.num_vars > 20) throw std::invalid_argument("brute_force_sat supports at most 20 variables");
  const std::uint32_t limit = std::uint32_t{1} << cnf.num_vars;
  for (std::uint32_t assignment = 0; assignment < limit; ++assignment) {
    const bool all = std::all_of(cnf.clauses.begin(), cnf.clauses.end(), [&](const auto& clause) {
      return std::any_of(clause.begin(), clause.end(), [&](int lit) {
        const bool value = (assignment >> (std::abs(lit) - 1)) & 1u;
        return lit > 0 ? value : !value;
      });
    });
    if (all) return true;
  }
  return false;
}

namespace {

struct Search {
  const Instance& instance;
  std::vector<OpenedBall> pairs;
  std::vector<Cost> pair_cost;
  std::vector<Bitset> pair_ball;
  Bitset clients;
  std::int64_t work_left;

  std::vector<OpenedBall> current;
  std::vector<OpenedBall> best;
  Cost best_cost = std::numeric_limits<Cost>::infinity();

  void visit(std::size_t start, Cost cost, const Bitset& covered) {
    if (--work_left < 0) throw WorkLimitExceeded();
    if (clients.is_subset_of(covered)) {
      if (cost < best_cost) {
        best_cost = cost;
        best = current;
      }
      return;
    }
    if (static_cast<int>(current.size()) >= instance.k) return;
    for (std::size_t i = start; i < pairs.size(); ++i) {
      const Cost next = cost + pair_cost[i];
      if (next >= best_cost) continue;
      current.push_back(pairs[i]);
      visit(i + 1, next, covered | pair_ball[i]);
      current.pop_back();
    }
  }
};

}  // namespace

SolveOutcome brute_force_msrdc(const Instance& instance, const MetricClosure& closure,
                               std::int64_t work_limit) {
  validate_instance(instance);
  const auto radii = closure.candidate_radii();
  instance.cost.validate_for(radii);
  Search search{instance, {}, {}, {}, client_mask(instance), work_limit, {}, {}};
  for (VertexId f : instance.facilities) {
    for (Distance r : radii) {
      search.pairs.push_back({f, r});
      search.pair_cost.push_back(instance.cost(r));
      Bitset b(instance.vertex_count);
      for (VertexId c : ball(closure, instance.clients, f, r)) b.set(c);
      search.pair_ball.push_back(std::move(b));
    }
  }
  search.visit(0, 0, Bitset(instance.vertex_count));
  SolveOutcome outcome;
  if (search.best_cost < std::numeric_limits<Cost>::infinity()) {
    outcome.status = SolveStatus::kOptimal;
    outcome.cost = search.best_cost;
    outcome.solution.opened = search.best;
  }
  return outcome;
}

}  // namespace msrdc
