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

#include "msrdc/solution.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace msrdc {

using json = nlohmann::ordered_json;

void Solution::canonicalize() { std::sort(opened.begin(), opened.end()); }

Cost solution_cost(const Solution& solution, const CostFunction& cost) {
  Cost total = 0;
  for (const OpenedBall& b : solution.opened) total += cost(b.radius);
  return total;
}

bool is_covering_global(const Solution& solution, const Instance& instance,
                        const MetricClosure& closure) {
  return std::all_of(instance.clients.begin(), instance.clients.end(), [&](VertexId c) {
    return std::any_of(solution.opened.begin(), solution.opened.end(), [&](const OpenedBall& b) {
      const Distance d = closure(c, b.facility);
      return d != kUnreachable && d <= b.radius;
    });
  });
}

std::string format_cost(Cost cost) {
  if (cost == std::floor(cost) && std::abs(cost) <= kMaxExactCost) {
    return std::to_string(static_cast<std::int64_t>(cost));
  }
  return json(cost).dump();
}

std::string outcome_to_json(const SolveOutcome& outcome) {
  json out;
  const bool optimal = outcome.status == SolveStatus::kOptimal;
  out["status"] = optimal ? "optimal" : "infeasible";
  if (!optimal) {
    out["cost"] = nullptr;
  } else if (outcome.cost == std::floor(outcome.cost) && outcome.cost <= kMaxExactCost) {
    out["cost"] = static_cast<std::int64_t>(outcome.cost);
  } else {
    out["cost"] = outcome.cost;
  }
  json opened = json::array();
  for (const OpenedBall& b : outcome.solution.opened) {
    opened.push_back({{"facility", b.facility}, {"radius", b.radius}});
  }
  out["opened"] = std::move(opened);
  return out.dump();
}

SolveOutcome outcome_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed solution JSON: ") + e.what());
  }
  SolveOutcome outcome;
  try {
    const std::string status = doc.at("status");
    if (status == "optimal") {
      outcome.status = SolveStatus::kOptimal;
      outcome.cost = doc.at("cost").get<double>();
    } else if (status == "infeasible") {
      outcome.status = SolveStatus::kInfeasible;
    } else {
      throw InputError("unknown solution status '" + status + "'");
    }
    for (const auto& b : doc.at("opened")) {
      outcome.solution.opened.push_back(
          {b.at("facility").get<VertexId>(), b.at("radius").get<Distance>()});
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("bad solution JSON: ") + e.what());
  }
  return outcome;
}

}  // namespace msrdc
