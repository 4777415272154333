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

#include <span>
#include <vector>

#include "msrdc/instance.h"
#include "msrdc/types.h"

namespace msrdc {

/// All-pairs shortest-path distances of an instance plus the candidate
/// radii. Distances between components are kUnreachable; they never appear
/// among the candidate radii.
class MetricClosure {
 public:
  MetricClosure() = default;

  /// Throws std::overflow_error if a path length leaves the Distance range.
  explicit MetricClosure(const Instance& instance);

  int vertex_count() const { return n_; }

  Distance operator()(VertexId u, VertexId v) const {
    return dist_[static_cast<std::size_t>(u) * n_ + v];
  }
  bool reachable(VertexId u, VertexId v) const {
    return (*this)(u, v) != kUnreachable;
  }

  /// Sorted, deduplicated {d(u,v) : u,v in V, finite}.
  std::span<const Distance> candidate_radii() const { return radii_; }

  /// Sorted, deduplicated finite distances from `v`.
  std::span<const Distance> radii_from(VertexId v) const { return radii_from_[v]; }

  /// Largest finite distance from `v` to any vertex.
  Distance eccentricity(VertexId v) const { return radii_from_[v].back(); }

 private:
  int n_ = 0;
  std::vector<Distance> dist_;
  std::vector<Distance> radii_;
  std::vector<std::vector<Distance>> radii_from_;
};

MetricClosure metric_closure(const Instance& instance);

/// B(center, radius): the clients at distance at most `radius`.
std::vector<VertexId> ball(const MetricClosure& closure,
                           std::span<const VertexId> clients, VertexId center,
                           Distance radius);

}  // namespace msrdc
