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

#include <random>

#include "msrdc/instance.h"
#include "msrdc/metric.h"
#include "msrdc/solution.h"
#include "test_support.h"

namespace msrdc {
namespace {

using testing::make_instance;

// a=0, b=1, c=2
Instance path_abc() { return make_instance(3, {{0, 1, 1}, {1, 2, 2}}, {0, 2}, {1}, 1); }

TEST(Metric, PathSums) {
  const MetricClosure d(path_abc());
  EXPECT_EQ(d(0, 2), 3);
  EXPECT_EQ(d(2, 0), 3);
  EXPECT_EQ(d(1, 1), 0);
  const std::vector<Distance> radii(d.candidate_radii().begin(), d.candidate_radii().end());
  EXPECT_EQ(radii, (std::vector<Distance>{0, 1, 2, 3}));
  EXPECT_EQ(d.eccentricity(1), 2);
}

TEST(Metric, TriangleShortcut) {
  const MetricClosure d(make_instance(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 5}}, {}, {0}, 1));
  EXPECT_EQ(d(0, 2), 2);
}

TEST(Metric, ZeroWeightEdgeGivesPseudometric) {
  const MetricClosure d(make_instance(2, {{0, 1, 0}}, {1}, {0}, 1));
  EXPECT_EQ(d(0, 1), 0);
  EXPECT_EQ(d.candidate_radii().size(), 1u);
}

TEST(Metric, ParallelEdgesTakeMinimum) {
  const MetricClosure d(make_instance(2, {{0, 1, 7}, {1, 0, 3}}, {}, {0}, 1));
  EXPECT_EQ(d(0, 1), 3);
}

TEST(Metric, DisconnectedPairIsUnreachable) {
  const MetricClosure d(make_instance(3, {{0, 1, 2}}, {}, {0}, 1));
  EXPECT_FALSE(d.reachable(0, 2));
  EXPECT_TRUE(d.reachable(0, 1));
}

TEST(Metric, OverflowIsReported) {
  const Distance big = kUnreachable / 2 + 1;
  EXPECT_THROW(MetricClosure(make_instance(3, {{0, 1, big}, {1, 2, big}}, {}, {0}, 1)),
               std::overflow_error);
}

TEST(Metric, SymmetricAndTriangle) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 20; ++round) {
    const int n = 2 + static_cast<int>(rng() % 29);
    const Instance inst = testing::random_connected(rng, n, 0, 20, 1, 0.1);
    const MetricClosure d(inst);
    for (int u = 0; u < n; ++u) {
      EXPECT_EQ(d(u, u), 0);
      for (int v = 0; v < n; ++v) {
        ASSERT_EQ(d(u, v), d(v, u));
        for (int w = 0; w < n; ++w) ASSERT_LE(d(u, w), d(u, v) + d(v, w));
      }
    }
  }
}

TEST(Ball, Examples) {
  const Instance colocated = make_instance(2, {{0, 1, 0}}, {1}, {0}, 1);
  const MetricClosure dz(colocated);
  EXPECT_EQ(ball(dz, colocated.clients, 0, 0), std::vector<VertexId>{1});

  const Instance p = path_abc();
  const MetricClosure d(p);
  EXPECT_EQ(ball(d, p.clients, 1, 1), std::vector<VertexId>{0});
  EXPECT_EQ(ball(d, p.clients, 0, 3), (std::vector<VertexId>{0, 2}));
}

TEST(Ball, MonotoneInRadius) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    const Instance inst = testing::random_connected(rng, 8, 0, 6, 1);
    const MetricClosure d(inst);
    for (VertexId f = 0; f < inst.vertex_count; ++f) {
      std::vector<VertexId> previous;
      for (Distance r : d.candidate_radii()) {
        const auto now = ball(d, inst.clients, f, r);
        EXPECT_TRUE(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
        previous = now;
      }
    }
  }
}

TEST(Cost, SolutionCostExamples) {
  EXPECT_EQ(solution_cost(Solution{}, CostFunction::identity()), 0);
  EXPECT_EQ(solution_cost(Solution{{{0, 3}, {1, 0}, {2, 4}}}, CostFunction::identity()), 7);
  EXPECT_EQ(solution_cost(Solution{{{0, 3}, {1, 4}}}, CostFunction::power(2)), 25);
}

TEST(Cost, TableVariant) {
  const CostFunction g = CostFunction::table({{0, 0.5}, {1, 1.5}, {3, 10}});
  EXPECT_DOUBLE_EQ(g(1), 1.5);
  EXPECT_THROW(g(2), std::out_of_range);
  const std::vector<Distance> ok{0, 1, 3};
  EXPECT_NO_THROW(g.validate_for(ok));
  const std::vector<Distance> missing{0, 2};
  EXPECT_THROW(g.validate_for(missing), InputError);
  const CostFunction decreasing = CostFunction::table({{0, 2}, {1, 1}});
  const std::vector<Distance> both{0, 1};
  EXPECT_THROW(decreasing.validate_for(both), InputError);
}

TEST(Cost, PowerOverflow) {
  EXPECT_THROW(CostFunction::power(3)(Distance{1} << 20), std::overflow_error);
  EXPECT_THROW(CostFunction::power(0), InputError);
}

TEST(Cost, FromFlag) {
  EXPECT_EQ(CostFunction::from_flag("identity"), CostFunction::identity());
  EXPECT_EQ(CostFunction::from_flag("power:2"), CostFunction::power(2));
  EXPECT_THROW(CostFunction::from_flag("power:x"), InputError);
  EXPECT_THROW(CostFunction::from_flag("cubic"), InputError);
}

TEST(Cost, MonotoneUnderLargerRadius) {
  const Instance p = path_abc();
  const MetricClosure d(p);
  for (const CostFunction& g : {CostFunction::identity(), CostFunction::power(2)}) {
    Solution s{{{1, 1}, {0, 0}}};
    const Cost base = solution_cost(s, g);
    for (Distance r : d.candidate_radii()) {
      if (r <= 1) continue;
      Solution bigger = s;
      bigger.opened[0].radius = r;
      EXPECT_GE(solution_cost(bigger, g), base);
    }
  }
}

TEST(Covering, Examples) {
  const Instance empty = make_instance(1, {}, {}, {0}, 1);
  EXPECT_TRUE(is_covering_global(Solution{}, empty, MetricClosure(empty)));

  const Instance single = make_instance(1, {}, {0}, {0}, 1);
  EXPECT_TRUE(is_covering_global(Solution{{{0, 0}}}, single, MetricClosure(single)));

  const Instance edge = make_instance(2, {{0, 1, 2}}, {1}, {0}, 1);
  const MetricClosure d(edge);
  EXPECT_FALSE(is_covering_global(Solution{{{0, 1}}}, edge, d));
  EXPECT_TRUE(is_covering_global(Solution{{{0, 1}, {0, 2}}}, edge, d));
}

TEST(Covering, MonotoneUnderAddingBalls) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 50; ++round) {
    const Instance inst = testing::random_connected(rng, 6, 0, 5, 2);
    const MetricClosure d(inst);
    Solution s;
    bool was = is_covering_global(s, inst, d);
    for (int step = 0; step < 4; ++step) {
      const VertexId f = inst.facilities[rng() % inst.facilities.size()];
      const auto radii = d.candidate_radii();
      s.opened.push_back({f, radii[rng() % radii.size()]});
      const bool now = is_covering_global(s, inst, d);
      EXPECT_TRUE(!was || now);
      was = now;
    }
  }
}

TEST(InstanceJson, RoundTrip) {
  const Instance inst =
      make_instance(4, {{0, 1, 3}, {1, 2, 0}, {2, 3, 5}}, {0, 3}, {1, 2}, 2, CostFunction::power(2));
  const std::string text = instance_to_json(inst);
  const Instance back = instance_from_json(text);
  EXPECT_EQ(back, inst);
  EXPECT_EQ(instance_to_json(back), text);
}

TEST(InstanceJson, TableCostRoundTrip) {
  const Instance inst = make_instance(2, {{0, 1, 1}}, {1}, {0}, 1,
                                      CostFunction::table({{0, 0}, {1, 2.5}}));
  EXPECT_EQ(instance_from_json(instance_to_json(inst)), inst);
}

TEST(InstanceJson, Rejections) {
  EXPECT_THROW(instance_from_json("{"), InputError);
  EXPECT_THROW(instance_from_json("[]"), InputError);
  EXPECT_THROW(instance_from_json(R"({"vertices":2,"clients":[],"facilities":[0],"edges":[]})"),
               InputError);
  EXPECT_THROW(instance_from_json(
                   R"({"vertices":2,"clients":[],"facilities":[0],"edges":[[0,1,-1]],"k":1})"),
               InputError);
  EXPECT_THROW(instance_from_json(
                   R"({"vertices":2,"clients":[5],"facilities":[0],"edges":[],"k":1})"),
               InputError);
  EXPECT_THROW(instance_from_json(
                   R"({"vertices":2,"clients":[],"facilities":[0],"edges":[[0,0,1]],"k":1})"),
               InputError);
  EXPECT_THROW(instance_from_json(
                   R"({"vertices":2,"clients":[],"facilities":[0],"edges":[],"k":1,"extra":0})"),
               InputError);
  EXPECT_THROW(instance_from_json(
                   R"({"vertices":2,"clients":[],"facilities":[0],"edges":[],"k":-1})"),
               InputError);
}

TEST(InstanceJson, DuplicateRolesAreNormalized) {
  const Instance inst = instance_from_json(
      R"({"vertices":3,"clients":[2,0,2],"facilities":[1],"edges":[[0,1,1],[1,2,1]],"k":1})");
  EXPECT_EQ(inst.clients, (std::vector<VertexId>{0, 2}));
  EXPECT_EQ(inst.cost, CostFunction::identity());
}

TEST(Outcome, JsonSchema) {
  SolveOutcome empty;
  empty.status = SolveStatus::kOptimal;
  EXPECT_EQ(outcome_to_json(empty), "{\"status\":\"optimal\",\"cost\":0,\"opened\":[]}");
  SolveOutcome some;
  some.status = SolveStatus::kOptimal;
  some.cost = 4;
  some.solution.opened = {{2, 3}, {0, 1}};
  const SolveOutcome back = outcome_from_json(outcome_to_json(some));
  EXPECT_EQ(back.cost, 4);
  EXPECT_EQ(back.solution.opened, some.solution.opened);
  const SolveOutcome infeasible = outcome_from_json(outcome_to_json(SolveOutcome{}));
  EXPECT_EQ(infeasible.status, SolveStatus::kInfeasible);
}

TEST(Outcome, FormatCost) {
  EXPECT_EQ(format_cost(3), "3");
  EXPECT_EQ(format_cost(2.5), "2.5");
}

}  // namespace
}  // namespace msrdc
