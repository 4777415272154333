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

#include "msrdc/tree_decomposition.h"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace msrdc {

int TreeDecomposition::width() const {
  std::size_t largest = 0;
  for (const auto& bag : bags) largest = std::max(largest, bag.size());
  return static_cast<int>(largest) - 1;
}

namespace {

TdViolation malformed(std::string message) {
  TdViolation v;
  v.kind = TdViolation::Kind::kMalformed;
  v.message = std::move(message);
  return v;
}

std::vector<std::vector<int>> tree_adjacency(const TreeDecomposition& td) {
  std::vector<std::vector<int>> adj(td.bags.size());
  for (auto [a, b] : td.tree_edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

}  // namespace

std::optional<TdViolation> validate_td(const TreeDecomposition& td, const Instance& instance) {
  const int n = instance.vertex_count;
  const int bag_count = static_cast<int>(td.bags.size());

  for (int b = 0; b < bag_count; ++b) {
    std::vector<VertexId> sorted = td.bags[b];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      return malformed("bag " + std::to_string(b) + " repeats a vertex");
    }
    for (VertexId v : sorted) {
      if (v < 0 || v >= n) return malformed("bag " + std::to_string(b) + " has vertex out of range");
    }
  }
  for (auto [a, b] : td.tree_edges) {
    if (a < 0 || b < 0 || a >= bag_count || b >= bag_count || a == b) {
      return malformed("tree edge references an invalid bag");
    }
  }
  if (bag_count > 0) {
    if (static_cast<int>(td.tree_edges.size()) != bag_count - 1) {
      return malformed("bag graph has " + std::to_string(td.tree_edges.size()) +
                       " edges; a tree on " + std::to_string(bag_count) + " bags needs " +
                       std::to_string(bag_count - 1));
    }
    const auto adj = tree_adjacency(td);
    std::vector<bool> seen(bag_count, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
      int b = stack.back();
      stack.pop_back();
      for (int nb : adj[b]) {
        if (!seen[nb]) {
          seen[nb] = true;
          ++reached;
          stack.push_back(nb);
        }
      }
    }
    if (reached != bag_count) return malformed("bag graph is not connected");
  }

  std::vector<std::vector<int>> bags_of(n);
  for (int b = 0; b < bag_count; ++b) {
    for (VertexId v : td.bags[b]) bags_of[v].push_back(b);
  }
  for (VertexId v = 0; v < n; ++v) {
    if (bags_of[v].empty()) {
      TdViolation out;
      out.kind = TdViolation::Kind::kVertexNotCovered;
      out.vertex = v;
      out.message = "vertex " + std::to_string(v) + " is in no bag";
      return out;
    }
  }

  std::vector<Bitset> bag_sets(bag_count, Bitset(n));
  for (int b = 0; b < bag_count; ++b) {
    for (VertexId v : td.bags[b]) bag_sets[b].set(v);
  }
  for (const Edge& e : instance.edges) {
    const bool covered = std::any_of(bags_of[e.u].begin(), bags_of[e.u].end(),
                                     [&](int b) { return bag_sets[b].test(e.v); });
    if (!covered) {
      TdViolation out;
      out.kind = TdViolation::Kind::kEdgeNotCovered;
      out.edge = e;
      out.message = "edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                    " has no bag with both endpoints";
      return out;
    }
  }

  const auto adj = tree_adjacency(td);
  for (VertexId v = 0; v < n; ++v) {
    const auto& holding = bags_of[v];
    std::vector<bool> seen(bag_count, false);
    std::vector<int> stack{holding.front()};
    seen[holding.front()] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      int b = stack.back();
      stack.pop_back();
      for (int nb : adj[b]) {
        if (!seen[nb] && bag_sets[nb].test(v)) {
          seen[nb] = true;
          ++reached;
          stack.push_back(nb);
        }
      }
    }
    if (reached != holding.size()) {
      TdViolation out;
      out.kind = TdViolation::Kind::kVertexNotConnected;
      out.vertex = v;
      out.message = "bags containing vertex " + std::to_string(v) + " are not connected";
      return out;
    }
  }
  return std::nullopt;
}

TreeDecomposition min_fill_heuristic(const Instance& instance) {
  const int n = instance.vertex_count;
  std::vector<Bitset> adj(n, Bitset(n));
  for (const Edge& e : instance.edges) {
    adj[e.u].set(e.v);
    adj[e.v].set(e.u);
  }

  std::vector<bool> eliminated(n, false);
  std::vector<int> position(n, 0);
  std::vector<std::vector<VertexId>> bag_of(n);
  std::vector<VertexId> order;
  order.reserve(n);

  auto fill_in = [&](VertexId v) {
    std::int64_t missing = 0;
    for (auto a = adj[v].find_first(); a != Bitset::npos; a = adj[v].find_next(a)) {
      Bitset others = adj[v] - adj[a];
      others.reset(a);
      for (auto b = others.find_next(a); b != Bitset::npos; b = others.find_next(b)) ++missing;
    }
    return missing;
  };

  for (int step = 0; step < n; ++step) {
    VertexId best = -1;
    std::int64_t best_fill = 0;
    std::size_t best_degree = 0;
    for (VertexId v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      const std::int64_t fill = fill_in(v);
      const std::size_t degree = adj[v].count();
      if (best < 0 || fill < best_fill || (fill == best_fill && degree < best_degree)) {
        best = v;
        best_fill = fill;
        best_degree = degree;
      }
    }
    const Bitset neighbours = adj[best];
    bag_of[best].push_back(best);
    for (auto a = neighbours.find_first(); a != Bitset::npos; a = neighbours.find_next(a)) {
      bag_of[best].push_back(static_cast<VertexId>(a));
      adj[a] |= neighbours;
      adj[a].reset(a);
      adj[a].reset(best);
    }
    std::sort(bag_of[best].begin(), bag_of[best].end());
    adj[best].reset();
    eliminated[best] = true;
    position[best] = step;
    order.push_back(best);
  }

  // Bag i belongs to order[i]; its parent is the bag of the earliest
  // eliminated later neighbour. Component roots are chained together.
  std::vector<int> parent(n, -1);
  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    const VertexId v = order[i];
    int best = -1;
    for (VertexId u : bag_of[v]) {
      if (u != v && (best < 0 || position[u] < best)) best = position[u];
    }
    if (best < 0) {
      roots.push_back(i);
    } else {
      parent[i] = best;
    }
  }
  for (std::size_t r = 1; r < roots.size(); ++r) parent[roots[r - 1]] = roots[r];

  // Contract bags contained in their parent (or containing it).
  std::vector<std::vector<VertexId>> bags(n);
  for (int i = 0; i < n; ++i) bags[i] = bag_of[order[i]];
  std::vector<int> alias(n);
  std::iota(alias.begin(), alias.end(), 0);
  auto find = [&](int x) {
    while (alias[x] != x) x = alias[x] = alias[alias[x]];
    return x;
  };
  // Parents always have larger indices, so one forward pass sees every
  // child before its parent.
  for (int i = 0; i < n; ++i) {
    if (parent[i] < 0) continue;
    const int p = find(parent[i]);
    const int self = find(i);
    if (std::includes(bags[p].begin(), bags[p].end(), bags[self].begin(), bags[self].end())) {
      alias[self] = p;
    } else if (std::includes(bags[self].begin(), bags[self].end(), bags[p].begin(),
                             bags[p].end())) {
      bags[p] = bags[self];
      alias[self] = p;
    }
  }
  std::vector<int> index(n, -1);
  TreeDecomposition td;
  for (int i = 0; i < n; ++i) {
    if (find(i) == i) {
      index[i] = static_cast<int>(td.bags.size());
      td.bags.push_back(bags[i]);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (find(i) != i || parent[i] < 0) continue;
    td.tree_edges.emplace_back(index[i], index[find(parent[i])]);
  }
  return td;
}

std::string td_to_pace(const TreeDecomposition& td, int vertex_count) {
  std::ostringstream out;
  out << "s td " << td.bags.size() << ' ' << td.width() + 1 << ' ' << vertex_count << '\n';
  for (std::size_t b = 0; b < td.bags.size(); ++b) {
    out << "b " << b + 1;
    for (VertexId v : td.bags[b]) out << ' ' << v + 1;
    out << '\n';
  }
  for (auto [a, b] : td.tree_edges) out << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

TreeDecomposition td_from_pace(std::string_view text, int* vertex_count) {
  std::istringstream in{std::string(text)};
  std::string line;
  TreeDecomposition td;
  bool have_header = false;
  std::size_t declared_bags = 0;
  int declared_size = 0;
  int vertices = 0;
  std::vector<bool> bag_seen;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw InputError(".td line " + std::to_string(line_no) + ": " + why);
  };
  auto read_int = [&](std::istringstream& ls, long long& value) {
    return static_cast<bool>(ls >> value);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head == "c") continue;
    if (head == "s") {
      std::string td_tag;
      long long bags = 0, size = 0, n = 0;
      if (have_header) fail("duplicate header");
      if (!(ls >> td_tag) || td_tag != "td" || !read_int(ls, bags) || !read_int(ls, size) ||
          !read_int(ls, n) || bags < 0 || size < 0 || n < 0) {
        fail("expected 's td <bags> <max bag size> <vertices>'");
      }
      have_header = true;
      declared_bags = static_cast<std::size_t>(bags);
      declared_size = static_cast<int>(size);
      vertices = static_cast<int>(n);
      td.bags.assign(declared_bags, {});
      bag_seen.assign(declared_bags, false);
      continue;
    }
    if (!have_header) fail("content before the 's td' header");
    if (head == "b") {
      long long id = 0;
      if (!read_int(ls, id) || id < 1 || static_cast<std::size_t>(id) > declared_bags) {
        fail("bad bag id");
      }
      if (bag_seen[id - 1]) fail("bag listed twice");
      bag_seen[id - 1] = true;
      long long v = 0;
      while (read_int(ls, v)) {
        if (v < 1 || v > vertices) fail("bag vertex out of range");
        td.bags[id - 1].push_back(static_cast<VertexId>(v - 1));
      }
      if (!ls.eof()) fail("trailing garbage in bag line");
      std::sort(td.bags[id - 1].begin(), td.bags[id - 1].end());
      continue;
    }
    long long a = 0, b = 0;
    std::istringstream edge_line(line);
    if (!read_int(edge_line, a) || !read_int(edge_line, b) || a < 1 || b < 1 ||
        static_cast<std::size_t>(a) > declared_bags ||
        static_cast<std::size_t>(b) > declared_bags) {
      fail("bad tree edge");
    }
    std::string rest;
    if (edge_line >> rest) fail("trailing garbage in edge line");
    td.tree_edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
  }
  if (!have_header) throw InputError(".td file has no 's td' header");
  if (std::find(bag_seen.begin(), bag_seen.end(), false) != bag_seen.end()) {
    throw InputError(".td file declares more bags than it lists");
  }
  if (!td.bags.empty() && td.width() + 1 != declared_size) {
    throw InputError(".td header declares max bag size " + std::to_string(declared_size) +
                     " but the largest bag has " + std::to_string(td.width() + 1));
  }
  if (vertex_count != nullptr) *vertex_count = vertices;
  return td;
}

// ---------------------------------------------------------------------------

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kLeaf: return "leaf";
    case NodeKind::kIntroduce: return "introduce";
    case NodeKind::kForget: return "forget";
    case NodeKind::kJoin: return "join";
  }
  return "?";
}

std::optional<std::string> check_nice(const std::vector<NiceNode>& nodes, int vertex_count) {
  if (nodes.empty()) return "no nodes";
  const int size = static_cast<int>(nodes.size());
  std::vector<int> parents(size, 0);
  for (int id = 0; id < size; ++id) {
    const NiceNode& node = nodes[id];
    const std::string where = "node " + std::to_string(id) + " (" + to_string(node.kind) + ")";
    if (!std::is_sorted(node.bag.begin(), node.bag.end()) ||
        std::adjacent_find(node.bag.begin(), node.bag.end()) != node.bag.end()) {
      return where + ": bag not sorted and duplicate-free";
    }
    for (VertexId v : node.bag) {
      if (v < 0 || v >= vertex_count) return where + ": bag vertex out of range";
    }
    const int expected_children = node.kind == NodeKind::kLeaf   ? 0
                                  : node.kind == NodeKind::kJoin ? 2
                                                                 : 1;
    for (int i = 0; i < 2; ++i) {
      const int child = node.children[i];
      if (i < expected_children) {
        if (child < 0 || child >= id) return where + ": children must precede their parent";
        ++parents[child];
      } else if (child != -1) {
        return where + ": unexpected child";
      }
    }
    switch (node.kind) {
      case NodeKind::kLeaf:
        if (!node.bag.empty()) return where + ": leaf bag must be empty";
        break;
      case NodeKind::kIntroduce: {
        const auto& below = nodes[node.children[0]].bag;
        if (std::binary_search(below.begin(), below.end(), node.vertex)) {
          return where + ": introduced vertex already in child bag";
        }
        std::vector<VertexId> expected = below;
        expected.insert(std::upper_bound(expected.begin(), expected.end(), node.vertex),
                        node.vertex);
        if (expected != node.bag) return where + ": bag is not child bag plus the vertex";
        break;
      }
      case NodeKind::kForget: {
        const auto& below = nodes[node.children[0]].bag;
        if (!std::binary_search(below.begin(), below.end(), node.vertex)) {
          return where + ": forgotten vertex not in child bag";
        }
        std::vector<VertexId> expected = below;
        expected.erase(std::find(expected.begin(), expected.end(), node.vertex));
        if (expected != node.bag) return where + ": bag is not child bag minus the vertex";
        break;
      }
      case NodeKind::kJoin:
        if (nodes[node.children[0]].bag != node.bag || nodes[node.children[1]].bag != node.bag) {
          return where + ": join children must have the same bag";
        }
        break;
    }
  }
  for (int id = 0; id + 1 < size; ++id) {
    if (parents[id] != 1) return "node " + std::to_string(id) + " must have exactly one parent";
  }
  if (parents[size - 1] != 0) return "root must not have a parent";
  if (!nodes.back().bag.empty()) return "root bag must be empty";
  return std::nullopt;
}

std::optional<std::string> check_nice(const NiceTreeDecomposition& ntd) {
  return check_nice(ntd.nodes(), ntd.vertex_count());
}

NiceTreeDecomposition::NiceTreeDecomposition(std::vector<NiceNode> nodes, int vertex_count)
    : nodes_(std::move(nodes)), vertex_count_(vertex_count) {
  if (auto problem = check_nice(nodes_, vertex_count_)) {
    throw std::invalid_argument("not a nice tree decomposition: " + *problem);
  }
  const int count = size();
  subtree_.assign(count, Bitset(vertex_count_));
  parent_.assign(count, -1);
  std::size_t largest = 0;
  for (int id = 0; id < count; ++id) {
    const NiceNode& node = nodes_[id];
    largest = std::max(largest, node.bag.size());
    for (VertexId v : node.bag) subtree_[id].set(v);
    for (int child : node.children) {
      if (child < 0) continue;
      subtree_[id] |= subtree_[child];
      parent_[child] = id;
    }
  }
  width_ = static_cast<int>(largest) - 1;
  if (static_cast<int>(subtree_.back().count()) != vertex_count_) {
    throw std::invalid_argument("not a nice tree decomposition: some vertex is in no bag");
  }
}

std::vector<VertexId> NiceTreeDecomposition::subtree_vertex_list(int id) const {
  std::vector<VertexId> out;
  const Bitset& set = subtree_[id];
  for (auto v = set.find_first(); v != Bitset::npos; v = set.find_next(v)) {
    out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

NiceTreeDecomposition nicify(const TreeDecomposition& td, const Instance& instance) {
  if (auto violation = validate_td(td, instance)) {
    throw std::invalid_argument("cannot nicify an invalid decomposition: " + violation->message);
  }
  const int bag_count = static_cast<int>(td.bags.size());
  const auto adj = tree_adjacency(td);

  // Root the decomposition at bag 0 and order bags so children come first.
  std::vector<int> parent(bag_count, -1);
  std::vector<int> order;
  order.reserve(bag_count);
  std::vector<bool> seen(bag_count, false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int b = stack.back();
    stack.pop_back();
    order.push_back(b);
    for (int nb : adj[b]) {
      if (!seen[nb]) {
        seen[nb] = true;
        parent[nb] = b;
        stack.push_back(nb);
      }
    }
  }
  std::vector<std::vector<int>> children(bag_count);
  for (int b : order) {
    if (parent[b] >= 0) children[parent[b]].push_back(b);
  }

  std::vector<NiceNode> built;
  auto add = [&](NiceNode node) {
    built.push_back(std::move(node));
    return static_cast<int>(built.size()) - 1;
  };
  auto sorted_bag = [&](int b) {
    std::vector<VertexId> bag = td.bags[b];
    std::sort(bag.begin(), bag.end());
    return bag;
  };
  // Walks from a node holding `from` to one holding `to`: forget, then introduce.
  auto transition = [&](int node, const std::vector<VertexId>& from,
                        const std::vector<VertexId>& to) {
    std::vector<VertexId> bag = from;
    for (VertexId v : from) {
      if (std::binary_search(to.begin(), to.end(), v)) continue;
      bag.erase(std::find(bag.begin(), bag.end(), v));
      node = add({NodeKind::kForget, v, bag, {node, -1}});
    }
    for (VertexId v : to) {
      if (std::binary_search(bag.begin(), bag.end(), v)) continue;
      bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
      node = add({NodeKind::kIntroduce, v, bag, {node, -1}});
    }
    return node;
  };

  std::vector<int> top(bag_count, -1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int b = *it;
    const auto bag = sorted_bag(b);
    std::vector<int> branches;
    for (int child : children[b]) branches.push_back(transition(top[child], sorted_bag(child), bag));
    if (branches.empty()) {
      const int leaf = add({NodeKind::kLeaf, -1, {}, {-1, -1}});
      branches.push_back(transition(leaf, {}, bag));
    }
    int joined = branches.front();
    for (std::size_t i = 1; i < branches.size(); ++i) {
      joined = add({NodeKind::kJoin, -1, bag, {joined, branches[i]}});
    }
    top[b] = joined;
  }
  const int root = transition(top[0], sorted_bag(0), {});

  // Renumber in depth-first post-order.
  std::vector<int> renumber(built.size(), -1);
  std::vector<NiceNode> nodes;
  nodes.reserve(built.size());
  std::vector<std::pair<int, int>> dfs{{root, 0}};
  while (!dfs.empty()) {
    auto& [id, next] = dfs.back();
    const NiceNode& node = built[id];
    if (next < 2 && node.children[next] >= 0) {
      const int child = node.children[next++];
      dfs.emplace_back(child, 0);
      continue;
    }
    NiceNode copy = node;
    for (int& c : copy.children) {
      if (c >= 0) c = renumber[c];
    }
    renumber[id] = static_cast<int>(nodes.size());
    nodes.push_back(std::move(copy));
    dfs.pop_back();
  }
  return NiceTreeDecomposition(std::move(nodes), instance.vertex_count);
}

TreeDecomposition as_tree_decomposition(const NiceTreeDecomposition& ntd) {
  TreeDecomposition td;
  for (const NiceNode& node : ntd.nodes()) td.bags.push_back(node.bag);
  for (int id = 0; id < ntd.size(); ++id) {
    for (int child : ntd.node(id).children) {
      if (child >= 0) td.tree_edges.emplace_back(child, id);
    }
  }
  return td;
}

}  // namespace msrdc
