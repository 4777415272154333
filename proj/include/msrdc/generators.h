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
#include <utility>

#include "msrdc/instance.h"
#include "msrdc/oracle.h"
#include "msrdc/tree_decomposition.h"

namespace msrdc {

struct WeightRange {
  Distance lo = 1;
  Distance hi = 10;
};

/// Each vertex independently becomes a client / a facility with these
/// probabilities; if no facility is drawn one vertex is promoted.
struct RoleSampling {
  double client_probability = 0.5;
  double facility_probability = 0.5;
};

/// Literal x_i is vertex 2(i-1), its negation 2(i-1)+1, the gadget vertex
/// y_i is 2n+(i-1) and clause j is 3n+(j-1). Edges touching x_i or its
/// negation weigh 2^(i-1). Facilities are the literals, every vertex is a
/// client, k = 2n and the cost is the identity. Throws std::overflow_error
/// when the distances would not fit.
Instance sat_to_msra(const CnfFormula& cnf);

/// Random recursive tree: vertex i attaches to a uniform earlier vertex.
Instance gen_random_tree(int n, WeightRange weights, RoleSampling roles, int k,
                         std::uint64_t seed);

/// Random tree plus each remaining vertex pair as an extra edge with
/// probability `extra_edge_probability`. Always connected.
Instance gen_random_graph(int n, double extra_edge_probability, WeightRange weights,
                          RoleSampling roles, int k, std::uint64_t seed);

/// Partial k-tree of the given width and the decomposition of its
/// construction. Non-spanning-tree edges survive with `edge_keep_probability`.
std::pair<Instance, TreeDecomposition> gen_partial_ktree(
    int n, int width_target, double edge_keep_probability, WeightRange weights,
    RoleSampling roles, int k, std::uint64_t seed);

/// m clauses over min(n, 3) distinct variables each with uniform signs, or
/// all-positive signs when `all_positive` is set.
CnfFormula gen_random_3sat(int n, int m, std::uint64_t seed, bool all_positive = false);

}  // namespace msrdc
