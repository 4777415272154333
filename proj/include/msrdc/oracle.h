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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "msrdc/instance.h"
#include "msrdc/metric.h"
#include "msrdc/solution.h"

namespace msrdc {

/// CNF formula; literal +i / -i refers to variable i in 1..num_vars.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  bool operator==(const CnfFormula&) const = default;
};

/// Throws InputError on empty clauses or out-of-range literals.
void validate_cnf(const CnfFormula& cnf);

/// DIMACS `p cnf n m` with 0-terminated clauses; `c` lines are comments.
CnfFormula cnf_from_dimacs(std::string_view text);
std::string cnf_to_dimacs(const CnfFormula& cnf);

/// Exhaustive search over all assignments. Requires num_vars <= 20.
bool brute_force_sat(const CnfFormula& cnf);

class WorkLimitExceeded : public std::runtime_error {
 public:
  WorkLimitExceeded() : std::runtime_error("brute-force work limit exceeded") {}
};

/// Enumerates every set of at most k distinct (facility, radius) pairs with
/// radii from the candidate radii, and returns the cheapest cover (the
/// lexicographically smallest one among equal costs). Each visited
/// enumeration node counts against `work_limit`.
SolveOutcome brute_force_msrdc(const Instance& instance, const MetricClosure& closure,
                               std::int64_t work_limit = 50'000'000);

}  // namespace msrdc
