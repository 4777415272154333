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

#include "msrdc/generators.h"

#include <algorithm>
#include <bit>
#include <random>
#include <set>
#include <stdexcept>

namespace msrdc {

namespace {

// Draws are reduced by modulo so that outputs do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  Distance weight(const WeightRange& w) {
    return w.lo + static_cast<Distance>(below(static_cast<std::uint64_t>(w.hi - w.lo + 1)));
  }

 private:
  std::mt19937_64 engine_;
};

void check_weights(const WeightRange& w) {
  if (w.lo < 0 || w.hi < w.lo) throw std::invalid_argument("bad weight range");
}

void assign_roles(Instance& instance, const RoleSampling& roles, Rng& rng) {
  for (VertexId v = 0; v < instance.vertex_count; ++v) {
    if (rng.chance(roles.client_probability)) instance.clients.push_back(v);
    if (rng.chance(roles.facility_probability)) instance.facilities.push_back(v);
  }
  if (instance.facilities.empty()) {
    instance.facilities.push_back(static_cast<VertexId>(rng.below(instance.vertex_count)));
  }
}

}  // namespace

Instance sat_to_msra(const CnfFormula& cnf) {
  validate_cnf(cnf);
  const int n = cnf.num_vars;
  const int m = static_cast<int>(cnf.clauses.size());
  if (n < 1) throw InputError("reduction needs at least one variable");
  // Every distance is a sum of at most |V| edge weights of at most 2^(n-1).
  const int exponent_budget = 52 - static_cast<int>(std::bit_width(static_cast<unsigned>(3 * n + m)));
  if (n - 1 > exponent_budget) {
    throw std::overflow_error("reduction weights 2^(i-1) overflow for n = " + std::to_string(n));
  }
  Instance instance;
  instance.vertex_count = 3 * n + m;
  auto literal_vertex = [](int lit) {
    const int i = std::abs(lit);
    return static_cast<VertexId>(2 * (i - 1) + (lit < 0 ? 1 : 0));
  };
  for (int i = 1; i <= n; ++i) {
    const Distance w = Distance{1} << (i - 1);
    const VertexId y = 2 * n + (i - 1);
    instance.edges.push_back({2 * (i - 1), y, w});
    instance.edges.push_back({2 * (i - 1) + 1, y, w});
  }
  for (int j = 0; j < m; ++j) {
    std::set<int> literals(cnf.clauses[j].begin(), cnf.clauses[j].end());
    for (int lit : literals) {
      instance.edges.push_back(
          {literal_vertex(lit), 3 * n + j, Distance{1} << (std::abs(lit) - 1)});
    }
  }
  for (VertexId v = 0; v < instance.vertex_count; ++v) instance.clients.push_back(v);
  for (VertexId v = 0; v < 2 * n; ++v) instance.facilities.push_back(v);
  instance.k = 2 * n;
  instance.cost = CostFunction::identity();
  return instance;
}

Instance gen_random_tree(int n, WeightRange weights, RoleSampling roles, int k,
                         std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("tree needs at least one vertex");
  check_weights(weights);
  Rng rng(seed);
  Instance instance;
  instance.vertex_count = n;
  instance.k = k;
  for (VertexId v = 1; v < n; ++v) {
    const auto parent = static_cast<VertexId>(rng.below(v));
    instance.edges.push_back({parent, v, rng.weight(weights)});
  }
  assign_roles(instance, roles, rng);
  validate_instance(instance);
  return instance;
}

Instance gen_random_graph(int n, double extra_edge_probability, WeightRange weights,
                          RoleSampling roles, int k, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  check_weights(weights);
  Rng rng(seed);
  Instance instance;
  instance.vertex_count = n;
  instance.k = k;
  std::vector<VertexId> parent(n, -1);
  for (VertexId v = 1; v < n; ++v) {
    parent[v] = static_cast<VertexId>(rng.below(v));
    instance.edges.push_back({parent[v], v, rng.weight(weights)});
  }
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (parent[v] == u) continue;
      if (rng.chance(extra_edge_probability)) instance.edges.push_back({u, v, rng.weight(weights)});
    }
  }
  assign_roles(instance, roles, rng);
  validate_instance(instance);
  return instance;
}

std::pair<Instance, TreeDecomposition> gen_partial_ktree(
    int n, int width_target, double edge_keep_probability, WeightRange weights,
    RoleSampling roles, int k, std::uint64_t seed) {
  if (width_target < 1 || n <= width_target) {
    throw std::invalid_argument("partial k-tree needs width >= 1 and n > width");
  }
  check_weights(weights);
  Rng rng(seed);
  Instance instance;
  instance.vertex_count = n;
  instance.k = k;
  TreeDecomposition td;

  // Initial (w+1)-clique; the path 0-1-...-w is always kept.
  std::vector<VertexId> first(width_target + 1);
  for (int i = 0; i <= width_target; ++i) first[i] = i;
  td.bags.push_back(first);
  for (VertexId u = 0; u <= width_target; ++u) {
    for (VertexId v = u + 1; v <= width_target; ++v) {
      const Distance w = rng.weight(weights);
      if (v == u + 1 || rng.chance(edge_keep_probability)) instance.edges.push_back({u, v, w});
    }
  }

  // Each new vertex is made adjacent to a w-clique inside an existing bag.
  for (VertexId v = width_target + 1; v < n; ++v) {
    const auto host = static_cast<int>(rng.below(td.bags.size()));
    std::vector<VertexId> clique = td.bags[host];
    clique.erase(clique.begin() + static_cast<std::ptrdiff_t>(rng.below(clique.size())));
    const auto anchor = rng.below(clique.size());
    for (std::size_t i = 0; i < clique.size(); ++i) {
      const Distance w = rng.weight(weights);
      if (i == anchor || rng.chance(edge_keep_probability)) {
        instance.edges.push_back({clique[i], v, w});
      }
    }
    clique.push_back(v);
    std::sort(clique.begin(), clique.end());
    td.tree_edges.emplace_back(host, static_cast<int>(td.bags.size()));
    td.bags.push_back(std::move(clique));
  }
  assign_roles(instance, roles, rng);
  validate_instance(instance);
  return {std::move(instance), std::move(td)};
}

CnfFormula gen_random_3sat(int n, int m, std::uint64_t seed, bool all_positive) {
  if (n < 1 || m < 1) throw std::invalid_argument("3-SAT generator needs n >= 1 and m >= 1");
  Rng rng(seed);
  CnfFormula cnf;
  cnf.num_vars = n;
  const int width = std::min(n, 3);
  std::vector<int> vars(n);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) vars[i] = i + 1;
    std::vector<int> clause;
    for (int i = 0; i < width; ++i) {
      const auto pick = i + static_cast<int>(rng.below(n - i));
      std::swap(vars[i], vars[pick]);
      const bool negate = !all_positive && rng.below(2) == 1;
      clause.push_back(negate ? -vars[i] : vars[i]);
    }
    cnf.clauses.push_back(std::move(clause));
  }
  return cnf;
}

}  // namespace msrdc
