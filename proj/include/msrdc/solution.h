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

#include <compare>
#include <string>
#include <vector>

#include "msrdc/instance.h"
#include "msrdc/metric.h"
#include "msrdc/types.h"

namespace msrdc {

struct OpenedBall {
  VertexId facility = 0;
  Distance radius = 0;

  auto operator<=>(const OpenedBall&) const = default;
};

/// Opened (facility, radius) pairs. The same facility may appear more than
/// once; each entry is paid for. The empty list is the empty solution.
struct Solution {
  std::vector<OpenedBall> opened;

  std::size_t size() const { return opened.size(); }
  bool empty() const { return opened.empty(); }

  /// Sorts the entries; solution order carries no meaning.
  void canonicalize();

  auto operator<=>(const Solution&) const = default;
};

/// Sum of g(radius) over all entries.
Cost solution_cost(const Solution& solution, const CostFunction& cost);

/// True iff every client lies in some opened ball.
bool is_covering_global(const Solution& solution, const Instance& instance,
                        const MetricClosure& closure);

enum class SolveStatus { kOptimal, kInfeasible };

struct SolveOutcome {
  SolveStatus status = SolveStatus::kInfeasible;
  Cost cost = 0;
  Solution solution;
};

/// {"status": "optimal"|"infeasible", "cost": value, "opened": [...]}.
std::string outcome_to_json(const SolveOutcome& outcome);
SolveOutcome outcome_from_json(const std::string& text);

/// Writes integral costs as JSON integers.
std::string format_cost(Cost cost);

}  // namespace msrdc
