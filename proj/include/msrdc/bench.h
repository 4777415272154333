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
#include <optional>
#include <string>
#include <vector>

namespace msrdc {

struct BenchConfig {
  std::string family = "tree";  // tree | ktree | graph
  std::vector<int> sizes{8, 12, 16, 20, 24};
  std::vector<int> widths{1};   // width target; ktree only
  std::vector<int> ks{3};
  int repetitions = 1;
  std::uint64_t seed = 1;
  double timeout_seconds = 300.0;
  bool materialize_tables = true;
};

struct BenchRow {
  std::string family;
  int vertices = 0;
  int width = 0;
  int k = 0;
  std::int64_t node_count = 0;
  std::int64_t entry_count = 0;
  std::int64_t feasibility_checks = 0;
  std::optional<double> wall_time;  // nullopt: timed out
  std::optional<double> cost;       // optimum, when solved
};

/// One row per (size, width, k, repetition), run sequentially. Repetition r
/// reuses the seed of repetition 0 so counters can be compared across runs.
std::vector<BenchRow> run_scaling(const BenchConfig& config);

/// Header: family,|V|,width,k,node_count,entry_count,feasibility_checks,wall_time
std::string bench_to_csv(const std::vector<BenchRow>& rows);

struct SlopeSummary {
  std::string family;
  int width = 0;
  int k = 0;
  double entry_slope = 0;  // least-squares slope of log(entries) vs log(|V|)
  double check_slope = 0;
  int points = 0;
};

std::vector<SlopeSummary> summarize_slopes(const std::vector<BenchRow>& rows);
std::string slopes_to_text(const std::vector<SlopeSummary>& slopes);

}  // namespace msrdc
