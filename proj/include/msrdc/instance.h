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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "msrdc/types.h"

namespace msrdc {

/// Radius-dependent cluster cost g. Every variant is non-decreasing in the
/// radius; table variants are checked against the candidate radii.
class CostFunction {
 public:
  enum class Kind { kIdentity, kPower, kTable };

  CostFunction() = default;

  static CostFunction identity();
  static CostFunction power(int alpha);
  static CostFunction table(std::map<Distance, Cost> values);

  /// Parses `identity`, `power:A` or `table:PATH` (PATH holds a JSON object
  /// mapping radius to cost).
  static CostFunction from_flag(std::string_view flag);

  Kind kind() const { return kind_; }
  int alpha() const { return alpha_; }
  const std::map<Distance, Cost>& values() const { return table_; }

  /// Throws std::out_of_range for a radius missing from a table and
  /// std::overflow_error when a power leaves the exact integer range.
  Cost operator()(Distance radius) const;

  /// Table variant: every radius must be present and costs non-decreasing
  /// over the sorted radii. Throws InputError otherwise.
  void validate_for(std::span<const Distance> sorted_radii) const;

  bool operator==(const CostFunction&) const = default;

 private:
  Kind kind_ = Kind::kIdentity;
  int alpha_ = 1;
  std::map<Distance, Cost> table_;
};

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  Distance weight = 0;

  bool operator==(const Edge&) const = default;
};

/// An MSRDC instance: a weighted graph, client and facility sets, the
/// budget k and the cost function. Clients and facilities are kept sorted
/// and duplicate-free (see normalize()).
struct Instance {
  int vertex_count = 0;
  std::vector<Edge> edges;
  std::vector<VertexId> clients;
  std::vector<VertexId> facilities;
  int k = 0;
  CostFunction cost = CostFunction::identity();

  bool operator==(const Instance&) const = default;
};

/// Sorts and deduplicates the role lists.
void normalize(Instance& instance);

/// Throws InputError unless ids are in range, there are no self-loops,
/// weights are non-negative, k >= 0 and role lists are sorted and unique.
void validate_instance(const Instance& instance);

bool is_connected(const Instance& instance);

/// Membership masks over all vertices.
Bitset client_mask(const Instance& instance);
Bitset facility_mask(const Instance& instance);

/// JSON in the canonical field order:
/// {"vertices","clients","facilities","edges","k","cost"}.
std::string instance_to_json(const Instance& instance);

/// Rejects unknown fields and invalid instances with InputError.
Instance instance_from_json(std::string_view text);

Instance read_instance_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);
std::string read_text_file(const std::string& path);

}  // namespace msrdc
