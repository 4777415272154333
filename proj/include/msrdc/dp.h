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

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msrdc/instance.h"
#include "msrdc/metric.h"
#include "msrdc/solution.h"
#include "msrdc/tree_decomposition.h"
#include "msrdc/types.h"

namespace msrdc {

enum class Direction : std::uint8_t { kUp, kDown };

/// DP index (t, c, dirs, k'). `c` and `dirs` follow the order of the node's
/// sorted bag.
struct TupleKey {
  int node = 0;
  std::vector<VertexId> c;
  std::vector<Direction> dirs;
  int budget = 0;

  bool operator==(const TupleKey&) const = default;
};

/// Excess coverage of a bag vertex; negative infinity for an empty maximum.
class ExcessValue {
 public:
  constexpr ExcessValue() = default;
  constexpr explicit ExcessValue(Distance value) : value_(value) {}

  static constexpr ExcessValue neg_infinity() { return ExcessValue(); }

  constexpr bool is_neg_infinity() const { return value_ == kNegInfinity; }
  constexpr Distance value() const { return value_; }

  constexpr auto operator<=>(const ExcessValue&) const = default;

 private:
  static constexpr Distance kNegInfinity = std::numeric_limits<Distance>::min();
  Distance value_ = kNegInfinity;
};

/// A stored DP value: a solution and its cost, or NIL with infinite cost.
struct DpEntry {
  std::optional<Solution> solution;
  Cost value = std::numeric_limits<Cost>::infinity();

  bool is_nil() const { return !solution.has_value(); }
};

/// Read-only data shared by the DP predicates and the engine: the instance,
/// its metric, the nice decomposition, per-node client/facility sets and
/// precomputed ball masks.
class DpContext {
 public:
  DpContext(const Instance& instance, const MetricClosure& closure,
            const NiceTreeDecomposition& ntd);

  const Instance& instance() const { return *instance_; }
  const MetricClosure& closure() const { return *closure_; }
  const NiceTreeDecomposition& ntd() const { return *ntd_; }

  bool is_client(VertexId v) const { return clients_[v]; }
  bool is_facility(VertexId v) const { return facilities_[v]; }
  const Bitset& clients() const { return clients_; }

  /// C_t and F_t.
  const Bitset& node_clients(int node) const { return node_clients_[node]; }
  const Bitset& node_facilities(int node) const { return node_facilities_[node]; }

  /// Clients within `radius` of `center`; `radius` must be a finite distance
  /// from `center` (an element of closure().radii_from(center)).
  const Bitset& ball_mask(VertexId center, Distance radius) const;
  const Bitset& ball_mask_at(VertexId center, int radius_index) const {
    return balls_[center][radius_index];
  }

  /// Index of the largest distance from `v` that is <= `value`; -1 if none.
  int round_down(VertexId v, Distance value) const;

  /// Throws std::invalid_argument unless `key` fits its node's bag, every
  /// c_v is reachable from v and the budget is within [0, k].
  void check_key(const TupleKey& key) const;

 private:
  const Instance* instance_;
  const MetricClosure* closure_;
  const NiceTreeDecomposition* ntd_;
  Bitset clients_;
  Bitset facilities_;
  std::vector<Bitset> node_clients_;
  std::vector<Bitset> node_facilities_;
  std::vector<std::vector<Bitset>> balls_;
};

// Predicates evaluated directly from their definitions. The engine uses
// precomputed equivalents; these are the reference versions.

/// C_t minus the balls B(v, d(v, c_v)) of the DOWN bag vertices.
std::vector<VertexId> remaining_clients(const DpContext& ctx, const TupleKey& key);

/// max{ r_f - d(f,v) over opened f, d(w,c_w) - d(w,v) over DOWN w }.
ExcessValue excess_coverage(const DpContext& ctx, const TupleKey& key,
                            VertexId v, const Solution& solution);

/// Farthest q in C u F with d(v,q) <= e_v, smallest id on ties. Throws
/// std::logic_error when e_v < 0.
VertexId border_vertex(const DpContext& ctx, const TupleKey& key, VertexId v,
                       const Solution& solution);

struct ContributorSets {
  std::vector<VertexId> facilities;    // F_v
  std::vector<VertexId> bag_vertices;  // C_v
};

/// The achievers of the maximum in e_v, split into opened facilities and
/// DOWN bag vertices. Both are empty when e_v is negative infinity.
ContributorSets contributor_sets(const DpContext& ctx, const TupleKey& key,
                                 VertexId v, const Solution& solution);

/// Covering for the key and every bag vertex has e_v >= d(v, c_v). Throws
/// std::invalid_argument if a facility lies outside F_t or the solution
/// exceeds the key's budget.
bool is_feasible_for(const DpContext& ctx, const Solution& solution,
                     const TupleKey& key);

// ---------------------------------------------------------------------------

struct DpOptions {
  /// Fill the full table D[t, c, dirs, k'] at every node. Otherwise only
  /// the per-node candidate lists are kept and entries are resolved on
  /// demand; both give identical entry values.
  bool materialize_tables = false;

  /// Keep finished child nodes after their parent is processed, so that
  /// entry() works on every node.
  bool retain_nodes = true;

  /// Drop partial solutions costing more than this. Entries whose optimum
  /// is within the ceiling stay exact.
  std::optional<Cost> cost_ceiling;

  /// Also drop partial solutions that cannot be completed into a cover of
  /// all clients (within the ceiling, using a lower bound on the cost of
  /// the balls still missing). The root entry stays exact; entries of
  /// other keys may become NIL or more expensive.
  bool root_pruning = false;

  std::optional<std::chrono::steady_clock::time_point> deadline;

  /// Hard limit on materialized keys per node.
  std::int64_t max_table_size = std::int64_t{1} << 28;
};

struct NodeStats {
  int node = 0;
  NodeKind kind = NodeKind::kLeaf;
  int bag_size = 0;
  std::int64_t entries = 0;
  std::int64_t candidates = 0;
  std::int64_t feasibility_checks = 0;
};

struct DpStats {
  std::int64_t node_count = 0;
  std::int64_t entry_count = 0;
  std::int64_t candidate_count = 0;
  std::int64_t feasibility_checks = 0;
  std::vector<NodeStats> nodes;

  std::string to_json() const;
};

class DpTimeout : public std::runtime_error {
 public:
  DpTimeout() : std::runtime_error("dynamic program exceeded its deadline") {}
};

/// Bottom-up dynamic program over a nice tree decomposition.
class DpEngine {
 public:
  explicit DpEngine(const DpContext& ctx, DpOptions options = {});

  void handle_leaf(int node);
  void handle_introduce(int node);
  void handle_forget(int node);
  void handle_join(int node);

  /// Dispatches on the node kind.
  void process(int node);

  /// Processes every node in post-order.
  void run();

  bool done(int node) const { return nodes_[node].done; }

  DpEntry entry(const TupleKey& key) const;
  DpEntry root_entry() const;

  /// Visits every key of a materialized node with its entry.
  void for_each_entry(
      int node,
      const std::function<void(const TupleKey&, const DpEntry&)>& visit) const;

  /// Number of distinct partial solutions kept for `node`.
  std::size_t candidate_count(int node) const { return nodes_[node].candidates.size(); }

  const DpStats& stats() const { return stats_; }
  const DpContext& context() const { return *ctx_; }

 private:
  struct Candidate {
    Solution solution;
    Cost cost = 0;
    Bitset covered;               // clients inside some opened ball
    std::vector<Distance> reach;  // max r_f - d(f,u) per vertex u
  };

  // Precomputed view of one (c, dirs) pair at a node.
  struct KeyView {
    bool valid = true;
    Bitset must_cover;                  // C_t minus the DOWN balls
    std::vector<Distance> incoming;     // DOWN excess at each bag position
    std::vector<Distance> requirement;  // d(v, c_v) at each bag position
    std::vector<bool> up;
  };

  struct NodeState {
    std::vector<Candidate> candidates;
    std::vector<std::int32_t> table;  // index into candidates; -1 NIL, -2 invalid
    bool done = false;
  };

  class CandidatePool;

  void require_ready(int node, NodeKind kind) const;
  void finalize(int node, CandidatePool& pool);
  void fill_table(int node);
  void compact(int node);
  void release_child(int child);
  void check_deadline();

  KeyView make_view(int node, std::span<const VertexId> c,
                    std::span<const Direction> dirs) const;
  bool feasible(const Candidate& cand, const KeyView& view, int node) const;

  std::int64_t table_size(int node) const;
  std::int64_t key_index(int node, std::span<const VertexId> c,
                         std::span<const Direction> dirs, int budget) const;

  // Root pruning: lower bounds on the cost of covering one or two clients
  // with balls that can still be opened above `node`.
  void prepare_bounds(int node);
  bool admissible(const Candidate& cand) const;
  bool admissible(Cost cost, std::size_t size, const Bitset& covered) const;
  CandidatePool make_pool(int node) const;

  Candidate empty_candidate() const;
  Candidate extend(const Candidate& base, VertexId facility, Distance radius) const;
  Candidate combine(const Candidate& a, const Candidate& b) const;
  DpEntry to_entry(const Candidate& cand) const;

  const DpContext* ctx_;
  DpOptions options_;
  std::vector<NodeState> nodes_;
  std::vector<Cost> client_bound_;
  std::vector<Cost> pair_bound_;  // |V| x |V|: cheapest single ball over both
  std::vector<VertexId> bound_order_;  // clients by decreasing bound
  Cost ceiling_ = std::numeric_limits<Cost>::infinity();
  mutable DpStats stats_;
  std::uint64_t ops_ = 0;
};

struct SolveResult {
  SolveOutcome outcome;
  DpStats stats;
  int width = -1;
};

/// Runs the DP and reads the optimum off the root entry D[r, (), (), k].
/// Without materialized tables this uses root pruning under a doubling
/// cost ceiling, rerunning until the root entry is found; stats describe
/// the final run.
SolveResult solve(const Instance& instance, const NiceTreeDecomposition& ntd,
                  const MetricClosure& closure, DpOptions options = {});

/// Same, with a min-fill decomposition built internally.
SolveResult solve(const Instance& instance, DpOptions options = {});

}  // namespace msrdc
