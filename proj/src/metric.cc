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

#include "msrdc/metric.h"

#include <algorithm>
#include <stdexcept>

namespace msrdc {

MetricClosure::MetricClosure(const Instance& instance) : n_(instance.vertex_count) {
  const auto n = static_cast<std::size_t>(n_);
  dist_.assign(n * n, kUnreachable);
  for (std::size_t v = 0; v < n; ++v) dist_[v * n + v] = 0;
  for (const Edge& e : instance.edges) {
    auto& uv = dist_[static_cast<std::size_t>(e.u) * n + e.v];
    auto& vu = dist_[static_cast<std::size_t>(e.v) * n + e.u];
    uv = std::min(uv, e.weight);
    vu = std::min(vu, e.weight);
  }
  // Floyd-Warshall.
  for (std::size_t mid = 0; mid < n; ++mid) {
    for (std::size_t i = 0; i < n; ++i) {
      const Distance left = dist_[i * n + mid];
      if (left == kUnreachable) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const Distance right = dist_[mid * n + j];
        if (right == kUnreachable) continue;
        Distance through = 0;
        if (__builtin_add_overflow(left, right, &through) || through == kUnreachable) {
          throw std::overflow_error("shortest-path distance overflows the distance type");
        }
        if (through < dist_[i * n + j]) dist_[i * n + j] = through;
      }
    }
  }

  radii_from_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto& from = radii_from_[v];
    for (std::size_t u = 0; u < n; ++u) {
      if (dist_[v * n + u] != kUnreachable) from.push_back(dist_[v * n + u]);
    }
    std::sort(from.begin(), from.end());
    from.erase(std::unique(from.begin(), from.end()), from.end());
    radii_.insert(radii_.end(), from.begin(), from.end());
  }
  std::sort(radii_.begin(), radii_.end());
  radii_.erase(std::unique(radii_.begin(), radii_.end()), radii_.end());
}

MetricClosure metric_closure(const Instance& instance) { return MetricClosure(instance); }

std::vector<VertexId> ball(const MetricClosure& closure, std::span<const VertexId> clients,
                           VertexId center, Distance radius) {
  std::vector<VertexId> inside;
  for (VertexId c : clients) {
    const Distance d = closure(c, center);
    if (d != kUnreachable && d <= radius) inside.push_back(c);
  }
  return inside;
}

}  // namespace msrdc
