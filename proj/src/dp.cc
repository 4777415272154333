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

#include "msrdc/dp.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace msrdc {

namespace {

constexpr Distance kNoReach = std::numeric_limits<Distance>::min();

int bag_position(const std::vector<VertexId>& bag, VertexId v) {
  auto it = std::lower_bound(bag.begin(), bag.end(), v);
  if (it == bag.end() || *it != v) return -1;
  return static_cast<int>(it - bag.begin());
}

bool precedes(Cost cost_a, const Solution& a, Cost cost_b, const Solution& b) {
  if (cost_a != cost_b) return cost_a < cost_b;
  return a < b;
}

// Steps (c, dirs) to the next key in table order; false after the last one.
bool advance(std::vector<VertexId>& c, std::vector<Direction>& dirs, int vertex_count) {
  for (std::size_t i = c.size(); i > 0; --i) {
    if (dirs[i - 1] == Direction::kUp) {
      dirs[i - 1] = Direction::kDown;
      return true;
    }
    dirs[i - 1] = Direction::kUp;
    if (++c[i - 1] < vertex_count) return true;
    c[i - 1] = 0;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// DpContext

DpContext::DpContext(const Instance& instance, const MetricClosure& closure,
                     const NiceTreeDecomposition& ntd)
    : instance_(&instance),
      closure_(&closure),
      ntd_(&ntd),
      clients_(client_mask(instance)),
      facilities_(facility_mask(instance)) {
  if (closure.vertex_count() != instance.vertex_count ||
      ntd.vertex_count() != instance.vertex_count) {
    throw std::invalid_argument("instance, metric and decomposition disagree on |V|");
  }
  node_clients_.reserve(ntd.size());
  node_facilities_.reserve(ntd.size());
  for (int t = 0; t < ntd.size(); ++t) {
    node_clients_.push_back(clients_ & ntd.subtree_vertices(t));
    node_facilities_.push_back(facilities_ & ntd.subtree_vertices(t));
  }
  const int n = instance.vertex_count;
  balls_.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    const auto radii = closure.radii_from(v);
    balls_[v].assign(radii.size(), Bitset(n));
    // Clients sorted by distance from v fill the nested balls incrementally.
    std::vector<std::pair<Distance, VertexId>> by_distance;
    for (VertexId c : instance.clients) {
      if (closure.reachable(v, c)) by_distance.emplace_back(closure(v, c), c);
    }
    std::sort(by_distance.begin(), by_distance.end());
    Bitset acc(n);
    std::size_t next = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      while (next < by_distance.size() && by_distance[next].first <= radii[i]) {
        acc.set(by_distance[next++].second);
      }
      balls_[v][i] = acc;
    }
  }
}

const Bitset& DpContext::ball_mask(VertexId center, Distance radius) const {
  const auto radii = closure_->radii_from(center);
  auto it = std::lower_bound(radii.begin(), radii.end(), radius);
  if (it == radii.end() || *it != radius) {
    throw std::invalid_argument("radius " + std::to_string(radius) +
                                " is not a distance from vertex " + std::to_string(center));
  }
  return balls_[center][it - radii.begin()];
}

int DpContext::round_down(VertexId v, Distance value) const {
  const auto radii = closure_->radii_from(v);
  return static_cast<int>(std::upper_bound(radii.begin(), radii.end(), value) - radii.begin()) - 1;
}

void DpContext::check_key(const TupleKey& key) const {
  if (key.node < 0 || key.node >= ntd_->size()) throw std::invalid_argument("key node out of range");
  const auto& bag = ntd_->node(key.node).bag;
  if (key.c.size() != bag.size() || key.dirs.size() != bag.size()) {
    throw std::invalid_argument("key vectors do not match the bag size");
  }
  if (key.budget < 0 || key.budget > instance_->k) {
    throw std::invalid_argument("key budget outside [0, k]");
  }
  for (std::size_t i = 0; i < bag.size(); ++i) {
    if (key.c[i] < 0 || key.c[i] >= instance_->vertex_count) {
      throw std::invalid_argument("key vertex out of range");
    }
    if (!closure_->reachable(bag[i], key.c[i])) {
      throw std::invalid_argument("key vertex unreachable from its bag vertex");
    }
  }
}

// ---------------------------------------------------------------------------
// Reference predicates

std::vector<VertexId> remaining_clients(const DpContext& ctx, const TupleKey& key) {
  ctx.check_key(key);
  const auto& bag = ctx.ntd().node(key.node).bag;
  const auto& d = ctx.closure();
  std::vector<VertexId> out;
  const Bitset& clients = ctx.node_clients(key.node);
  for (auto c = clients.find_first(); c != Bitset::npos; c = clients.find_next(c)) {
    const auto client = static_cast<VertexId>(c);
    bool inside = false;
    for (std::size_t i = 0; i < bag.size() && !inside; ++i) {
      if (key.dirs[i] != Direction::kDown) continue;
      inside = d.reachable(bag[i], client) && d(bag[i], client) <= d(bag[i], key.c[i]);
    }
    if (!inside) out.push_back(client);
  }
  return out;
}

ExcessValue excess_coverage(const DpContext& ctx, const TupleKey& key, VertexId v,
                            const Solution& solution) {
  ctx.check_key(key);
  const auto& bag = ctx.ntd().node(key.node).bag;
  if (bag_position(bag, v) < 0) throw std::invalid_argument("vertex is not in the key's bag");
  const auto& d = ctx.closure();
  ExcessValue best;
  for (const OpenedBall& b : solution.opened) {
    if (d.reachable(b.facility, v)) best = std::max(best, ExcessValue(b.radius - d(b.facility, v)));
  }
  for (std::size_t i = 0; i < bag.size(); ++i) {
    if (key.dirs[i] != Direction::kDown || !d.reachable(bag[i], v)) continue;
    best = std::max(best, ExcessValue(d(bag[i], key.c[i]) - d(bag[i], v)));
  }
  return best;
}

VertexId border_vertex(const DpContext& ctx, const TupleKey& key, VertexId v,
                       const Solution& solution) {
  const ExcessValue excess = excess_coverage(ctx, key, v, solution);
  if (excess.is_neg_infinity() || excess.value() < 0) {
    throw std::logic_error("border vertex requested for negative excess coverage");
  }
  const auto& d = ctx.closure();
  VertexId best = v;
  Distance best_distance = 0;
  for (VertexId q = 0; q < ctx.instance().vertex_count; ++q) {
    if (!ctx.is_client(q) && !ctx.is_facility(q)) continue;
    if (!d.reachable(v, q) || d(v, q) > excess.value()) continue;
    if (d(v, q) > best_distance || (d(v, q) == best_distance && q < best)) {
      best = q;
      best_distance = d(v, q);
    }
  }
  return best;
}

ContributorSets contributor_sets(const DpContext& ctx, const TupleKey& key, VertexId v,
                                 const Solution& solution) {
  const ExcessValue excess = excess_coverage(ctx, key, v, solution);
  ContributorSets out;
  if (excess.is_neg_infinity()) return out;
  const auto& bag = ctx.ntd().node(key.node).bag;
  const auto& d = ctx.closure();
  for (const OpenedBall& b : solution.opened) {
    if (d.reachable(b.facility, v) && b.radius - d(b.facility, v) == excess.value()) {
      out.facilities.push_back(b.facility);
    }
  }
  std::sort(out.facilities.begin(), out.facilities.end());
  out.facilities.erase(std::unique(out.facilities.begin(), out.facilities.end()),
                       out.facilities.end());
  for (std::size_t i = 0; i < bag.size(); ++i) {
    if (key.dirs[i] != Direction::kDown || !d.reachable(bag[i], v)) continue;
    if (d(bag[i], key.c[i]) - d(bag[i], v) == excess.value()) out.bag_vertices.push_back(bag[i]);
  }
  return out;
}

bool is_feasible_for(const DpContext& ctx, const Solution& solution, const TupleKey& key) {
  ctx.check_key(key);
  const Bitset& allowed = ctx.node_facilities(key.node);
  for (const OpenedBall& b : solution.opened) {
    if (b.facility < 0 || b.facility >= ctx.instance().vertex_count || !allowed[b.facility]) {
      throw std::invalid_argument("solution opens a facility outside F_t");
    }
  }
  if (static_cast<int>(solution.size()) > key.budget) {
    throw std::invalid_argument("solution exceeds the key's budget");
  }
  const auto& d = ctx.closure();
  for (VertexId c : remaining_clients(ctx, key)) {
    const bool covered =
        std::any_of(solution.opened.begin(), solution.opened.end(), [&](const OpenedBall& b) {
          return d.reachable(b.facility, c) && d(b.facility, c) <= b.radius;
        });
    if (!covered) return false;
  }
  const auto& bag = ctx.ntd().node(key.node).bag;
  for (std::size_t i = 0; i < bag.size(); ++i) {
    if (excess_coverage(ctx, key, bag[i], solution) < ExcessValue(d(bag[i], key.c[i]))) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Stats

std::string DpStats::to_json() const {
  nlohmann::ordered_json out;
  out["node_count"] = node_count;
  out["entry_count"] = entry_count;
  out["candidate_count"] = candidate_count;
  out["feasibility_checks"] = feasibility_checks;
  auto list = nlohmann::ordered_json::array();
  for (const NodeStats& s : nodes) {
    nlohmann::ordered_json item;
    item["node"] = s.node;
    item["kind"] = to_string(s.kind);
    item["bag_size"] = s.bag_size;
    item["entries"] = s.entries;
    item["candidates"] = s.candidates;
    item["feasibility_checks"] = s.feasibility_checks;
    list.push_back(std::move(item));
  }
  out["nodes"] = std::move(list);
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Candidate pool
//
// Partial solutions produced for one node. A candidate is dropped when an
// earlier one in (cost, solution) order uses no more facilities, covers a
// superset of the node's clients and reaches at least as far past every
// bag vertex. Reach at a bag vertex x is rounded down to the thresholds
// given for x: every distance from x when all keys must stay exact (the
// dropped candidate is then never the first feasible one for any key), or
// only the distances from x to clients outside the subtree under root
// pruning (all a later ball could be asked to cover through x).

class DpEngine::CandidatePool {
 public:
  CandidatePool(const Bitset& clients, std::vector<std::vector<Distance>> thresholds,
                const std::vector<VertexId>& bag)
      : clients_(clients),
        thresholds_(std::move(thresholds)),
        bag_(bag),
        words_(clients.num_blocks()) {}

  void add(Candidate cand) {
    std::vector<std::uint64_t> signature;
    signature.reserve(words_ + bag_.size());
    const Bitset covered = cand.covered & clients_;
    boost::to_block_range(covered, std::back_inserter(signature));
    for (std::size_t j = 0; j < bag_.size(); ++j) {
      const auto& t = thresholds_[j];
      const auto level = std::upper_bound(t.begin(), t.end(), cand.reach[bag_[j]]) - t.begin();
      signature.push_back(static_cast<std::uint64_t>(level));
    }
    auto& group = groups_[signature];
    for (std::size_t i = 0; i < group.size();) {
      const Candidate& other = *slots_[group[i]].cand;
      const bool other_first = precedes(other.cost, other.solution, cand.cost, cand.solution);
      if (other_first && other.solution.size() <= cand.solution.size()) return;
      if (!other_first && cand.solution.size() <= other.solution.size()) {
        slots_[group[i]].cand.reset();
        group[i] = group.back();
        group.pop_back();
        continue;
      }
      ++i;
    }
    group.push_back(slots_.size());
    slots_.push_back({std::move(cand), std::move(signature)});
  }

  std::vector<Candidate> finish();

 private:
  struct Slot {
    std::optional<Candidate> cand;
    std::vector<std::uint64_t> signature;  // covered words, then reach levels
  };
  struct SignatureHash {
    std::size_t operator()(const std::vector<std::uint64_t>& words) const {
      std::uint64_t h = 1469598103934665603ull;
      for (std::uint64_t w : words) h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  const Bitset& clients_;
  std::vector<std::vector<Distance>> thresholds_;
  const std::vector<VertexId>& bag_;
  std::size_t words_;
  std::vector<Slot> slots_;
  std::unordered_map<std::vector<std::uint64_t>, std::vector<std::size_t>, SignatureHash> groups_;
};

std::vector<DpEngine::Candidate> DpEngine::CandidatePool::finish() {
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].cand) alive.push_back(i);
  }
  std::sort(alive.begin(), alive.end(), [&](std::size_t a, std::size_t b) {
    return precedes(slots_[a].cand->cost, slots_[a].cand->solution, slots_[b].cand->cost,
                    slots_[b].cand->solution);
  });
  // Kept profiles in flat arrays, one row of `width` words per candidate.
  const std::size_t m = bag_.size();
  const std::size_t width = words_ + m;
  std::vector<std::uint64_t> rows;
  std::vector<std::size_t> sizes;
  std::vector<Candidate> out;
  for (std::size_t idx : alive) {
    const auto* sig = slots_[idx].signature.data();
    const std::size_t size = slots_[idx].cand->solution.size();
    bool dominated = false;
    for (std::size_t p = 0; p < sizes.size() && !dominated; ++p) {
      if (sizes[p] > size) continue;
      const auto* row = rows.data() + p * width;
      bool ok = true;
      for (std::size_t w = 0; w < words_ && ok; ++w) ok = (sig[w] & ~row[w]) == 0;
      for (std::size_t j = words_; j < width && ok; ++j) ok = row[j] >= sig[j];
      dominated = ok;
    }
    if (dominated) continue;
    rows.insert(rows.end(), sig, sig + width);
    sizes.push_back(size);
    out.push_back(std::move(*slots_[idx].cand));
  }
  return out;
}

// ---------------------------------------------------------------------------
// DpEngine

DpEngine::DpEngine(const DpContext& ctx, DpOptions options)
    : ctx_(&ctx),
      options_(options),
      nodes_(ctx.ntd().size()),
      ceiling_(options.cost_ceiling.value_or(std::numeric_limits<Cost>::infinity())) {
  stats_.node_count = ctx.ntd().size();
  stats_.nodes.resize(ctx.ntd().size());
  for (int t = 0; t < ctx.ntd().size(); ++t) {
    stats_.nodes[t].node = t;
    stats_.nodes[t].kind = ctx.ntd().node(t).kind;
    stats_.nodes[t].bag_size = static_cast<int>(ctx.ntd().node(t).bag.size());
  }
  ctx.instance().cost.validate_for(ctx.closure().candidate_radii());
}

void DpEngine::check_deadline() {
  if (!options_.deadline || (++ops_ & 0x3ff) != 0) return;
  if (std::chrono::steady_clock::now() > *options_.deadline) throw DpTimeout();
}

void DpEngine::require_ready(int node, NodeKind kind) const {
  const NiceNode& n = ctx_->ntd().node(node);
  if (n.kind != kind) {
    throw std::logic_error(std::string("node ") + std::to_string(node) + " is a " +
                           to_string(n.kind) + " node, not " + to_string(kind));
  }
  if (kind == NodeKind::kLeaf && !n.bag.empty()) throw std::logic_error("leaf bag is not empty");
  for (int child : n.children) {
    if (child >= 0 && !nodes_[child].done) {
      throw std::logic_error("child " + std::to_string(child) + " has not been processed");
    }
    if (child >= 0 && !options_.retain_nodes && nodes_[child].candidates.empty() &&
        nodes_[child].table.empty()) {
      throw std::logic_error("child " + std::to_string(child) + " was released");
    }
  }
}

void DpEngine::prepare_bounds(int node) {
  if (!options_.root_pruning) return;
  const auto& bag = ctx_->ntd().node(node).bag;
  Bitset forgotten = ctx_->ntd().subtree_vertices(node);
  for (VertexId v : bag) forgotten.reset(v);
  const auto& d = ctx_->closure();
  const auto& inst = ctx_->instance();
  const auto n = static_cast<std::size_t>(inst.vertex_count);
  constexpr Cost kInf = std::numeric_limits<Cost>::infinity();
  client_bound_.assign(n, kInf);
  pair_bound_.assign(n * n, kInf);
  for (VertexId f : inst.facilities) {
    if (forgotten[f]) continue;
    for (VertexId u : inst.clients) {
      if (!d.reachable(f, u)) continue;
      client_bound_[u] = std::min(client_bound_[u], inst.cost(d(f, u)));
      for (VertexId w : inst.clients) {
        if (!d.reachable(f, w)) continue;
        Cost& both = pair_bound_[u * n + w];
        both = std::min(both, inst.cost(std::max(d(f, u), d(f, w))));
      }
    }
  }
  bound_order_ = inst.clients;
  std::stable_sort(bound_order_.begin(), bound_order_.end(),
                   [&](VertexId u, VertexId w) { return client_bound_[u] > client_bound_[w]; });
}

bool DpEngine::admissible(const Candidate& cand) const {
  return admissible(cand.cost, cand.solution.size(), cand.covered);
}

bool DpEngine::admissible(Cost cost, std::size_t size, const Bitset& covered) const {
  if (cost > ceiling_) return false;
  if (!options_.root_pruning) return true;
  const Bitset missing = ctx_->clients() - covered;
  if (missing.none()) return true;
  const int spare = ctx_->instance().k - static_cast<int>(size);
  if (spare <= 0) return false;
  // Every further ball costs at most `slack`. Missing clients that no such
  // ball covers together need one ball each.
  const auto n = static_cast<std::size_t>(ctx_->instance().vertex_count);
  const Cost slack = ceiling_ - cost;
  Cost needed = 0;
  int apart = 0;
  std::array<VertexId, 64> chosen;
  for (VertexId u : bound_order_) {
    if (!missing[u]) continue;
    if (client_bound_[u] > slack) return false;
    bool separate = true;
    for (int i = 0; i < apart && separate; ++i) separate = pair_bound_[u * n + chosen[i]] > slack;
    if (!separate) continue;
    needed += client_bound_[u];
    if (needed > slack || ++apart > spare) return false;
    if (apart == static_cast<int>(chosen.size())) break;
    chosen[apart - 1] = u;
  }
  return true;
}

DpEngine::CandidatePool DpEngine::make_pool(int node) const {
  const auto& bag = ctx_->ntd().node(node).bag;
  const auto& d = ctx_->closure();
  std::vector<std::vector<Distance>> thresholds;
  thresholds.reserve(bag.size());
  for (VertexId x : bag) {
    if (!options_.root_pruning) {
      const auto radii = d.radii_from(x);
      thresholds.emplace_back(radii.begin(), radii.end());
      continue;
    }
    std::vector<Distance> t;
    const Bitset& inside = ctx_->ntd().subtree_vertices(node);
    for (VertexId u : ctx_->instance().clients) {
      if (!inside[u] && d.reachable(x, u)) t.push_back(d(x, u));
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    thresholds.push_back(std::move(t));
  }
  return CandidatePool(ctx_->node_clients(node), std::move(thresholds), bag);
}

DpEngine::Candidate DpEngine::empty_candidate() const {
  const int n = ctx_->instance().vertex_count;
  Candidate c;
  c.covered.resize(n);
  c.reach.assign(n, kNoReach);
  return c;
}

DpEngine::Candidate DpEngine::extend(const Candidate& base, VertexId facility,
                                     Distance radius) const {
  Candidate c = base;
  c.solution.opened.insert(
      std::upper_bound(c.solution.opened.begin(), c.solution.opened.end(),
                       OpenedBall{facility, radius}),
      OpenedBall{facility, radius});
  c.cost += ctx_->instance().cost(radius);
  c.covered |= ctx_->ball_mask(facility, radius);
  const auto& d = ctx_->closure();
  for (VertexId u = 0; u < ctx_->instance().vertex_count; ++u) {
    if (d.reachable(facility, u)) c.reach[u] = std::max(c.reach[u], radius - d(facility, u));
  }
  return c;
}

DpEngine::Candidate DpEngine::combine(const Candidate& a, const Candidate& b) const {
  Candidate c;
  c.solution.opened.reserve(a.solution.size() + b.solution.size());
  std::merge(a.solution.opened.begin(), a.solution.opened.end(), b.solution.opened.begin(),
             b.solution.opened.end(), std::back_inserter(c.solution.opened));
  c.covered = a.covered | b.covered;
  c.reach.resize(a.reach.size());
  for (std::size_t u = 0; u < a.reach.size(); ++u) c.reach[u] = std::max(a.reach[u], b.reach[u]);
  if (options_.root_pruning) {
    // A bag facility opened on both sides keeps only its larger ball.
    auto& opened = c.solution.opened;
    c.cost = a.cost + b.cost;
    std::size_t out = 0;
    for (std::size_t i = 0; i < opened.size(); ++i) {
      if (i + 1 < opened.size() && opened[i + 1].facility == opened[i].facility) {
        c.cost -= ctx_->instance().cost(opened[i].radius);
        continue;
      }
      opened[out++] = opened[i];
    }
    opened.resize(out);
  } else {
    c.cost = a.cost + b.cost;
  }
  return c;
}

DpEntry DpEngine::to_entry(const Candidate& cand) const {
  DpEntry e;
  e.solution = cand.solution;
  e.value = cand.cost;
  return e;
}

void DpEngine::handle_leaf(int node) {
  require_ready(node, NodeKind::kLeaf);
  prepare_bounds(node);
  CandidatePool pool = make_pool(node);
  Candidate empty = empty_candidate();
  if (admissible(empty)) pool.add(std::move(empty));
  finalize(node, pool);
}

void DpEngine::handle_introduce(int node) {
  require_ready(node, NodeKind::kIntroduce);
  const NiceNode& n = ctx_->ntd().node(node);
  const VertexId v = n.vertex;
  const int k = ctx_->instance().k;
  prepare_bounds(node);
  CandidatePool pool = make_pool(node);
  for (const Candidate& base : nodes_[n.children[0]].candidates) {
    check_deadline();
    if (admissible(base)) pool.add(base);
    if (!ctx_->is_facility(v) || static_cast<int>(base.solution.size()) >= k) continue;
    for (Distance r : ctx_->closure().radii_from(v)) {
      if (base.cost + ctx_->instance().cost(r) > ceiling_) break;
      Candidate next = extend(base, v, r);
      if (admissible(next)) pool.add(std::move(next));
    }
  }
  finalize(node, pool);
  release_child(n.children[0]);
}

void DpEngine::handle_forget(int node) {
  require_ready(node, NodeKind::kForget);
  const NiceNode& n = ctx_->ntd().node(node);
  const int child = n.children[0];
  if (!options_.materialize_tables) {
    prepare_bounds(node);
    CandidatePool pool = make_pool(node);
    for (const Candidate& c : nodes_[child].candidates) {
      check_deadline();
      if (admissible(c)) pool.add(c);
    }
    finalize(node, pool);
    release_child(child);
    return;
  }

  // Copy D[t', c', o', k'] with the forgotten coordinate fixed to (v, UP)
  // when v still needs covering under the parent key and (v, DOWN) otherwise.
  NodeState& state = nodes_[node];
  state.candidates = nodes_[child].candidates;
  const auto& bag = n.bag;
  const auto& child_bag = ctx_->ntd().node(child).bag;
  const int forgotten_at = bag_position(child_bag, n.vertex);
  const int k = ctx_->instance().k;
  const int vcount = ctx_->instance().vertex_count;
  const std::int64_t size = table_size(node);
  state.table.assign(static_cast<std::size_t>(size), -1);
  const std::size_t m = bag.size();
  std::vector<VertexId> c(m, 0);
  std::vector<Direction> dirs(m, Direction::kUp);
  std::vector<VertexId> child_c(m + 1);
  std::vector<Direction> child_dirs(m + 1);
  std::int64_t valid_entries = 0;
  while (true) {
    check_deadline();
    const KeyView view = make_view(node, c, dirs);
    if (view.valid) {
      const bool uncovered = ctx_->is_client(n.vertex) && view.must_cover.test(n.vertex);
      for (std::size_t i = 0, j = 0; i <= m; ++i) {
        if (static_cast<int>(i) == forgotten_at) {
          child_c[i] = n.vertex;
          child_dirs[i] = uncovered ? Direction::kUp : Direction::kDown;
        } else {
          child_c[i] = c[j];
          child_dirs[i] = dirs[j];
          ++j;
        }
      }
      for (int b = 0; b <= k; ++b) {
        state.table[key_index(node, c, dirs, b)] =
            nodes_[child].table[key_index(child, child_c, child_dirs, b)];
      }
      valid_entries += k + 1;
    } else {
      for (int b = 0; b <= k; ++b) state.table[key_index(node, c, dirs, b)] = -2;
    }
    if (!advance(c, dirs, vcount)) break;
  }
  stats_.nodes[node].entries = valid_entries;
  stats_.entry_count += valid_entries;
  compact(node);
  stats_.nodes[node].candidates = static_cast<std::int64_t>(state.candidates.size());
  stats_.candidate_count += stats_.nodes[node].candidates;
  state.done = true;
  release_child(child);
}

void DpEngine::handle_join(int node) {
  require_ready(node, NodeKind::kJoin);
  const NiceNode& n = ctx_->ntd().node(node);
  const int k = ctx_->instance().k;
  prepare_bounds(node);
  CandidatePool pool = make_pool(node);
  Bitset scratch;
  const auto& left = nodes_[n.children[0]].candidates;
  const auto& right = nodes_[n.children[1]].candidates;
  for (const Candidate& a : left) {
    for (const Candidate& b : right) {
      check_deadline();
      if (a.solution.size() + b.solution.size() > static_cast<std::size_t>(k)) continue;
      // Candidates are in cost order, so the rest of `right` is dearer.
      if (a.cost + b.cost > ceiling_) break;
      if (options_.root_pruning) {
        // Screen the pair before building it.
        Cost cost = a.cost + b.cost;
        std::size_t size = a.solution.size() + b.solution.size();
        for (std::size_t i = 0, j = 0; i < a.solution.size() && j < b.solution.size();) {
          const OpenedBall& x = a.solution.opened[i];
          const OpenedBall& y = b.solution.opened[j];
          if (x.facility < y.facility) {
            ++i;
          } else if (y.facility < x.facility) {
            ++j;
          } else {
            cost -= ctx_->instance().cost(std::min(x.radius, y.radius));
            --size;
            ++i;
            ++j;
          }
        }
        scratch = a.covered;
        scratch |= b.covered;
        if (!admissible(cost, size, scratch)) continue;
      }
      Candidate both = combine(a, b);
      if (admissible(both)) pool.add(std::move(both));
    }
  }
  finalize(node, pool);
  release_child(n.children[0]);
  release_child(n.children[1]);
}

void DpEngine::process(int node) {
  switch (ctx_->ntd().node(node).kind) {
    case NodeKind::kLeaf: handle_leaf(node); break;
    case NodeKind::kIntroduce: handle_introduce(node); break;
    case NodeKind::kForget: handle_forget(node); break;
    case NodeKind::kJoin: handle_join(node); break;
  }
}

void DpEngine::run() {
  for (int t = 0; t < ctx_->ntd().size(); ++t) {
    if (!nodes_[t].done) process(t);
  }
}

void DpEngine::finalize(int node, CandidatePool& pool) {
  NodeState& state = nodes_[node];
  state.candidates = pool.finish();
  if (options_.materialize_tables) {
    fill_table(node);
    compact(node);
  }
  stats_.nodes[node].candidates = static_cast<std::int64_t>(state.candidates.size());
  stats_.candidate_count += stats_.nodes[node].candidates;
  state.done = true;
}

void DpEngine::release_child(int child) {
  if (options_.retain_nodes) return;
  nodes_[child].candidates = {};
  nodes_[child].table = {};
}

std::int64_t DpEngine::table_size(int node) const {
  const auto m = ctx_->ntd().node(node).bag.size();
  const std::int64_t radix = 2 * static_cast<std::int64_t>(ctx_->instance().vertex_count);
  std::int64_t size = ctx_->instance().k + 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (size > options_.max_table_size / radix) {
      throw std::length_error("DP table for node " + std::to_string(node) +
                              " exceeds the configured size limit");
    }
    size *= radix;
  }
  return size;
}

std::int64_t DpEngine::key_index(int node, std::span<const VertexId> c,
                                 std::span<const Direction> dirs, int budget) const {
  (void)node;
  const std::int64_t radix = 2 * static_cast<std::int64_t>(ctx_->instance().vertex_count);
  std::int64_t index = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    index = index * radix + 2 * c[i] + (dirs[i] == Direction::kDown ? 1 : 0);
  }
  return index * (ctx_->instance().k + 1) + budget;
}

DpEngine::KeyView DpEngine::make_view(int node, std::span<const VertexId> c,
                                      std::span<const Direction> dirs) const {
  const auto& bag = ctx_->ntd().node(node).bag;
  const auto& d = ctx_->closure();
  const std::size_t m = bag.size();
  KeyView view;
  for (std::size_t i = 0; i < m; ++i) {
    if (!d.reachable(bag[i], c[i])) {
      view.valid = false;
      return view;
    }
  }
  view.must_cover = ctx_->node_clients(node);
  view.incoming.assign(m, kNoReach);
  view.requirement.resize(m);
  view.up.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    view.requirement[i] = d(bag[i], c[i]);
    view.up[i] = dirs[i] == Direction::kUp;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (view.up[i]) continue;
    const Distance promised = view.requirement[i];
    view.must_cover -= ctx_->ball_mask(bag[i], promised);
    for (std::size_t j = 0; j < m; ++j) {
      if (d.reachable(bag[i], bag[j])) {
        view.incoming[j] = std::max(view.incoming[j], promised - d(bag[i], bag[j]));
      }
    }
  }
  return view;
}

bool DpEngine::feasible(const Candidate& cand, const KeyView& view, int node) const {
  ++stats_.feasibility_checks;
  ++stats_.nodes[node].feasibility_checks;
  if (!view.must_cover.is_subset_of(cand.covered)) return false;
  const auto& bag = ctx_->ntd().node(node).bag;
  for (std::size_t i = 0; i < bag.size(); ++i) {
    if (!view.up[i]) continue;
    if (std::max(cand.reach[bag[i]], view.incoming[i]) < view.requirement[i]) return false;
  }
  return true;
}

void DpEngine::fill_table(int node) {
  NodeState& state = nodes_[node];
  const auto& bag = ctx_->ntd().node(node).bag;
  const std::size_t m = bag.size();
  const int k = ctx_->instance().k;
  const int vcount = ctx_->instance().vertex_count;
  state.table.assign(static_cast<std::size_t>(table_size(node)), -1);
  std::vector<VertexId> c(m, 0);
  std::vector<Direction> dirs(m, Direction::kUp);
  std::int64_t valid_entries = 0;
  while (true) {
    check_deadline();
    const KeyView view = make_view(node, c, dirs);
    const std::int64_t base = key_index(node, c, dirs, 0);
    if (!view.valid) {
      for (int b = 0; b <= k; ++b) state.table[base + b] = -2;
    } else {
      valid_entries += k + 1;
      // First feasible candidate per budget; a candidate with s facilities
      // answers every budget >= s not already taken by an earlier one.
      int open_below = k + 1;
      for (std::size_t idx = 0; idx < state.candidates.size() && open_below > 0; ++idx) {
        const int s = static_cast<int>(state.candidates[idx].solution.size());
        if (s >= open_below) continue;
        if (!feasible(state.candidates[idx], view, node)) continue;
        for (int b = s; b < open_below; ++b) state.table[base + b] = static_cast<std::int32_t>(idx);
        open_below = s;
      }
    }
    if (!advance(c, dirs, vcount)) break;
  }
  stats_.nodes[node].entries = valid_entries;
  stats_.entry_count += valid_entries;
}

void DpEngine::compact(int node) {
  NodeState& state = nodes_[node];
  std::vector<std::int32_t> remap(state.candidates.size(), -1);
  for (std::int32_t idx : state.table) {
    if (idx >= 0) remap[idx] = 0;
  }
  std::vector<Candidate> kept;
  for (std::size_t i = 0; i < state.candidates.size(); ++i) {
    if (remap[i] < 0) continue;
    remap[i] = static_cast<std::int32_t>(kept.size());
    kept.push_back(std::move(state.candidates[i]));
  }
  for (std::int32_t& idx : state.table) {
    if (idx >= 0) idx = remap[idx];
  }
  state.candidates = std::move(kept);
}

DpEntry DpEngine::entry(const TupleKey& key) const {
  ctx_->check_key(key);
  const NodeState& state = nodes_[key.node];
  if (!state.done) throw std::logic_error("node has not been processed");
  if (options_.materialize_tables) {
    if (state.table.empty()) throw std::logic_error("node was released");
    const std::int32_t idx = state.table[key_index(key.node, key.c, key.dirs, key.budget)];
    return idx >= 0 ? to_entry(state.candidates[idx]) : DpEntry{};
  }
  const KeyView view = make_view(key.node, key.c, key.dirs);
  for (const Candidate& cand : state.candidates) {
    if (static_cast<int>(cand.solution.size()) > key.budget) continue;
    if (feasible(cand, view, key.node)) return to_entry(cand);
  }
  return DpEntry{};
}

DpEntry DpEngine::root_entry() const {
  TupleKey key;
  key.node = ctx_->ntd().root();
  key.budget = ctx_->instance().k;
  return entry(key);
}

void DpEngine::for_each_entry(
    int node, const std::function<void(const TupleKey&, const DpEntry&)>& visit) const {
  if (!options_.materialize_tables) {
    throw std::logic_error("for_each_entry needs materialized tables");
  }
  const NodeState& state = nodes_[node];
  if (!state.done || state.table.empty()) throw std::logic_error("node table unavailable");
  const auto& bag = ctx_->ntd().node(node).bag;
  const std::size_t m = bag.size();
  const int k = ctx_->instance().k;
  const std::int64_t radix = 2 * static_cast<std::int64_t>(ctx_->instance().vertex_count);
  TupleKey key;
  key.node = node;
  key.c.resize(m);
  key.dirs.resize(m);
  for (std::int64_t index = 0; index < static_cast<std::int64_t>(state.table.size()); ++index) {
    const std::int32_t slot = state.table[index];
    if (slot == -2) continue;
    key.budget = static_cast<int>(index % (k + 1));
    std::int64_t rest = index / (k + 1);
    for (std::size_t i = m; i > 0; --i) {
      const std::int64_t coord = rest % radix;
      rest /= radix;
      key.c[i - 1] = static_cast<VertexId>(coord / 2);
      key.dirs[i - 1] = coord % 2 ? Direction::kDown : Direction::kUp;
    }
    visit(key, slot >= 0 ? to_entry(state.candidates[slot]) : DpEntry{});
  }
}

// ---------------------------------------------------------------------------

namespace {

// Every cover pays at least the cheapest ball reaching its worst-served
// client, and at most k balls of the largest radius.
std::pair<Cost, Cost> cost_bounds(const Instance& instance, const MetricClosure& closure) {
  Cost lower = 0;
  for (VertexId u : instance.clients) {
    Cost best = std::numeric_limits<Cost>::infinity();
    for (VertexId f : instance.facilities) {
      if (closure.reachable(f, u)) best = std::min(best, instance.cost(closure(f, u)));
    }
    lower = std::max(lower, best);
  }
  const auto radii = closure.candidate_radii();
  const Cost upper = instance.k * instance.cost(radii.back());
  return {lower, upper};
}

Cost smallest_positive_cost(const Instance& instance, const MetricClosure& closure) {
  for (Distance r : closure.candidate_radii()) {
    if (instance.cost(r) > 0) return instance.cost(r);
  }
  return std::numeric_limits<Cost>::infinity();
}

}  // namespace

SolveResult solve(const Instance& instance, const NiceTreeDecomposition& ntd,
                  const MetricClosure& closure, DpOptions options) {
  DpContext ctx(instance, closure, ntd);
  SolveResult result;
  result.width = ntd.width();

  std::vector<Cost> ceilings;
  if (options.materialize_tables || options.cost_ceiling) {
    ceilings.push_back(options.cost_ceiling.value_or(std::numeric_limits<Cost>::infinity()));
  } else {
    options.root_pruning = true;
    const auto [lower, upper] = cost_bounds(instance, closure);
    if (lower == std::numeric_limits<Cost>::infinity()) {
      ceilings.push_back(0);  // some client is unreachable from every facility
    } else {
      Cost c = std::max(lower, smallest_positive_cost(instance, closure));
      for (; c < upper; c *= 2) ceilings.push_back(c);
      ceilings.push_back(std::numeric_limits<Cost>::infinity());
    }
  }

  for (Cost ceiling : ceilings) {
    options.cost_ceiling = ceiling;
    DpEngine engine(ctx, options);
    engine.run();
    const DpEntry root = engine.root_entry();
    result.stats = engine.stats();
    if (!root.is_nil()) {
      result.outcome.status = SolveStatus::kOptimal;
      result.outcome.cost = root.value;
      result.outcome.solution = *root.solution;
      break;
    }
  }
  return result;
}

SolveResult solve(const Instance& instance, DpOptions options) {
  const MetricClosure closure(instance);
  const NiceTreeDecomposition ntd = nicify(min_fill_heuristic(instance), instance);
  return solve(instance, ntd, closure, options);
}

}  // namespace msrdc
