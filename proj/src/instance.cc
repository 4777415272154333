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

#include "msrdc/instance.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace msrdc {

using json = nlohmann::ordered_json;

CostFunction CostFunction::identity() { return CostFunction(); }

CostFunction CostFunction::power(int alpha) {
  if (alpha < 1) throw InputError("power cost needs an integer exponent >= 1");
  CostFunction g;
  g.kind_ = Kind::kPower;
  g.alpha_ = alpha;
  return g;
}

CostFunction CostFunction::table(std::map<Distance, Cost> values) {
  for (const auto& [radius, cost] : values) {
    if (radius < 0 || !(cost >= 0) || !std::isfinite(cost)) {
      throw InputError("cost table needs non-negative radii and finite non-negative costs");
    }
  }
  CostFunction g;
  g.kind_ = Kind::kTable;
  g.table_ = std::move(values);
  return g;
}

namespace {

std::map<Distance, Cost> parse_cost_table(const json& object) {
  if (!object.is_object()) throw InputError("cost table must be a JSON object");
  std::map<Distance, Cost> values;
  for (const auto& [key, value] : object.items()) {
    std::size_t used = 0;
    Distance radius = 0;
    try {
      radius = std::stoll(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size()) throw InputError("cost table key is not an integer: " + key);
    if (!value.is_number()) throw InputError("cost table value is not a number");
    values[radius] = value.get<double>();
  }
  return values;
}

}  // namespace

CostFunction CostFunction::from_flag(std::string_view flag) {
  if (flag == "identity") return identity();
  if (flag.starts_with("power:")) {
    const std::string digits(flag.substr(6));
    std::size_t used = 0;
    int alpha = 0;
    try {
      alpha = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != digits.size()) throw InputError("bad power exponent: " + digits);
    return power(alpha);
  }
  if (flag.starts_with("table:")) {
    const std::string path(flag.substr(6));
    json object;
    try {
      object = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
      throw InputError("cannot parse cost table " + path + ": " + e.what());
    }
    return table(parse_cost_table(object));
  }
  throw InputError("unknown cost flag '" + std::string(flag) +
                   "' (expected identity, power:A or table:PATH)");
}

Cost CostFunction::operator()(Distance radius) const {
  switch (kind_) {
    case Kind::kIdentity:
      return static_cast<Cost>(radius);
    case Kind::kPower: {
      Cost result = 1;
      for (int i = 0; i < alpha_; ++i) {
        result *= static_cast<Cost>(radius);
        if (result > kMaxExactCost) throw std::overflow_error("power cost exceeds 2^53");
      }
      return result;
    }
    case Kind::kTable: {
      auto it = table_.find(radius);
      if (it == table_.end()) {
        throw std::out_of_range("cost table has no entry for radius " + std::to_string(radius));
      }
      return it->second;
    }
  }
  return 0;
}

void CostFunction::validate_for(std::span<const Distance> sorted_radii) const {
  if (kind_ != Kind::kTable) return;
  Cost previous = 0;
  bool first = true;
  for (Distance radius : sorted_radii) {
    auto it = table_.find(radius);
    if (it == table_.end()) {
      throw InputError("cost table is missing candidate radius " + std::to_string(radius));
    }
    if (!first && it->second < previous) {
      throw InputError("cost table decreases at radius " + std::to_string(radius));
    }
    previous = it->second;
    first = false;
  }
}

void normalize(Instance& instance) {
  for (auto* roles : {&instance.clients, &instance.facilities}) {
    std::sort(roles->begin(), roles->end());
    roles->erase(std::unique(roles->begin(), roles->end()), roles->end());
  }
}

void validate_instance(const Instance& instance) {
  const int n = instance.vertex_count;
  if (n < 1) throw InputError("instance needs at least one vertex");
  auto in_range = [n](VertexId v) { return v >= 0 && v < n; };
  for (const Edge& e : instance.edges) {
    if (!in_range(e.u) || !in_range(e.v)) {
      throw InputError("edge endpoint out of range: " + std::to_string(e.u) + "-" +
                       std::to_string(e.v));
    }
    if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
    if (e.weight < 0) throw InputError("negative edge weight");
  }
  for (const auto* roles : {&instance.clients, &instance.facilities}) {
    for (std::size_t i = 0; i < roles->size(); ++i) {
      if (!in_range((*roles)[i])) {
        throw InputError("role vertex out of range: " + std::to_string((*roles)[i]));
      }
      if (i > 0 && (*roles)[i - 1] >= (*roles)[i]) {
        throw InputError("client/facility lists must be sorted and duplicate-free");
      }
    }
  }
  if (instance.k < 0) throw InputError("budget k must be non-negative");
}

bool is_connected(const Instance& instance) {
  const int n = instance.vertex_count;
  if (n <= 1) return true;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n;
  for (const Edge& e : instance.edges) {
    int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

Bitset client_mask(const Instance& instance) {
  Bitset mask(instance.vertex_count);
  for (VertexId c : instance.clients) mask.set(c);
  return mask;
}

Bitset facility_mask(const Instance& instance) {
  Bitset mask(instance.vertex_count);
  for (VertexId f : instance.facilities) mask.set(f);
  return mask;
}

namespace {

json cost_to_json(const CostFunction& cost) {
  json out;
  switch (cost.kind()) {
    case CostFunction::Kind::kIdentity:
      out["variant"] = "identity";
      break;
    case CostFunction::Kind::kPower:
      out["variant"] = "power";
      out["alpha"] = cost.alpha();
      break;
    case CostFunction::Kind::kTable: {
      out["variant"] = "table";
      json table = json::object();
      for (const auto& [radius, value] : cost.values()) {
        if (value == std::floor(value) && std::abs(value) < kMaxExactCost) {
          table[std::to_string(radius)] = static_cast<std::int64_t>(value);
        } else {
          table[std::to_string(radius)] = value;
        }
      }
      out["table"] = std::move(table);
      break;
    }
  }
  return out;
}

void reject_unknown(const json& object, std::initializer_list<const char*> allowed,
                    const char* where) {
  for (const auto& item : object.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* name) { return item.key() == name; })) {
      throw InputError(std::string("unknown field '") + item.key() + "' in " + where);
    }
  }
}

template <typename T>
T get_integer(const json& value, const char* what) {
  if (!value.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return value.get<T>();
}

CostFunction cost_from_json(const json& object) {
  if (!object.is_object()) throw InputError("cost must be an object");
  reject_unknown(object, {"variant", "alpha", "table"}, "cost");
  if (!object.contains("variant") || !object["variant"].is_string()) {
    throw InputError("cost.variant missing");
  }
  const std::string variant = object["variant"];
  if (variant == "identity") return CostFunction::identity();
  if (variant == "power") {
    if (!object.contains("alpha")) throw InputError("power cost needs alpha");
    return CostFunction::power(get_integer<int>(object["alpha"], "cost.alpha"));
  }
  if (variant == "table") {
    if (!object.contains("table")) throw InputError("table cost needs table");
    return CostFunction::table(parse_cost_table(object["table"]));
  }
  throw InputError("unknown cost variant '" + variant + "'");
}

}  // namespace

std::string instance_to_json(const Instance& instance) {
  json out;
  out["vertices"] = instance.vertex_count;
  out["clients"] = instance.clients;
  out["facilities"] = instance.facilities;
  json edges = json::array();
  for (const Edge& e : instance.edges) edges.push_back({e.u, e.v, e.weight});
  out["edges"] = std::move(edges);
  out["k"] = instance.k;
  out["cost"] = cost_to_json(instance.cost);
  return out.dump() + "\n";
}

Instance instance_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed instance JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("instance JSON must be an object");
  reject_unknown(doc, {"vertices", "clients", "facilities", "edges", "k", "cost"}, "instance");
  for (const char* required : {"vertices", "clients", "facilities", "edges", "k"}) {
    if (!doc.contains(required)) throw InputError(std::string("missing field '") + required + "'");
  }
  Instance instance;
  instance.vertex_count = get_integer<int>(doc["vertices"], "vertices");
  for (const char* field : {"clients", "facilities"}) {
    if (!doc[field].is_array()) throw InputError(std::string(field) + " must be an array");
    auto& target = std::string_view(field) == "clients" ? instance.clients : instance.facilities;
    for (const auto& v : doc[field]) target.push_back(get_integer<VertexId>(v, field));
  }
  if (!doc["edges"].is_array()) throw InputError("edges must be an array");
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 3) throw InputError("each edge must be [u, v, w]");
    instance.edges.push_back({get_integer<VertexId>(e[0], "edge endpoint"),
                              get_integer<VertexId>(e[1], "edge endpoint"),
                              get_integer<Distance>(e[2], "edge weight")});
  }
  instance.k = get_integer<int>(doc["k"], "k");
  instance.cost = doc.contains("cost") ? cost_from_json(doc["cost"]) : CostFunction::identity();
  normalize(instance);
  validate_instance(instance);
  return instance;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << contents;
}

Instance read_instance_file(const std::string& path) {
  return instance_from_json(read_text_file(path));
}

}  // namespace msrdc
