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

#include <gtest/gtest.h>

#include <sstream>

#include "msrdc/bench.h"

namespace msrdc {
namespace {

TEST(Bench, TreeCountersGrow) {
  BenchConfig config;
  config.family = "tree";
  config.sizes = {8, 12, 16};
  config.ks = {3};
  const auto rows = run_scaling(config);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].wall_time.has_value());
    EXPECT_TRUE(rows[i].cost.has_value());
    EXPECT_EQ(rows[i].width, 1);
    if (i > 0) {
      EXPECT_GT(rows[i].entry_count, rows[i - 1].entry_count);
      EXPECT_GT(rows[i].node_count, rows[i - 1].node_count);
    }
  }
  const auto slopes = summarize_slopes(rows);
  ASSERT_EQ(slopes.size(), 1u);
  EXPECT_EQ(slopes[0].points, 3);
  EXPECT_GT(slopes[0].entry_slope, 0);
  EXPECT_NE(slopes_to_text(slopes).find("family=tree width=1 k=3 points=3"), std::string::npos);
}

TEST(Bench, RepetitionsShareCounters) {
  BenchConfig config;
  config.family = "ktree";
  config.sizes = {6};
  config.widths = {2};
  config.ks = {2};
  config.repetitions = 2;
  const auto rows = run_scaling(config);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].entry_count, rows[1].entry_count);
  EXPECT_EQ(rows[0].cost, rows[1].cost);
  EXPECT_LE(rows[0].width, 2);
}

TEST(Bench, Csv) {
  BenchRow done{"tree", 8, 1, 3, 20, 400, 900, 0.25, 7.0};
  BenchRow late{"tree", 24, 1, 3, 60, 0, 0, std::nullopt, std::nullopt};
  const std::string csv = bench_to_csv({done, late});
  EXPECT_EQ(csv,
            "family,|V|,width,k,node_count,entry_count,feasibility_checks,wall_time\n"
            "tree,8,1,3,20,400,900,0.250000\n"
            "tree,24,1,3,60,0,0,timeout\n");
}

TEST(Bench, TimeoutIsMarked) {
  BenchConfig config;
  config.family = "graph";
  config.sizes = {12};
  config.timeout_seconds = 0;
  const auto rows = run_scaling(config);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].wall_time.has_value());
  EXPECT_TRUE(summarize_slopes(rows).empty());
}

TEST(Bench, Errors) {
  BenchConfig config;
  config.family = "lattice";
  EXPECT_THROW(run_scaling(config), std::invalid_argument);
  config.family = "tree";
  config.repetitions = 0;
  EXPECT_THROW(run_scaling(config), std::invalid_argument);
}

TEST(Bench, SlopeOfExactPowerLaw) {
  std::vector<BenchRow> rows;
  for (int n : {2, 4, 8, 16}) {
    BenchRow r;
    r.family = "tree";
    r.vertices = n;
    r.width = 1;
    r.k = 1;
    r.entry_count = static_cast<std::int64_t>(n) * n * n;
    r.feasibility_checks = n;
    r.wall_time = 0.0;
    rows.push_back(r);
  }
  const auto s = summarize_slopes(rows);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s[0].entry_slope, 3.0, 1e-9);
  EXPECT_NEAR(s[0].check_slope, 1.0, 1e-9);
  EXPECT_NE(slopes_to_text(s).find(" ok"), std::string::npos);
}

}  // namespace
}  // namespace msrdc
