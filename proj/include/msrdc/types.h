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
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/dynamic_bitset.hpp>

namespace msrdc {

/// Dense vertex index in [0, vertex_count).
using VertexId = std::int32_t;

/// Edge weights, shortest-path distances and radii are exact integers.
using Distance = std::int64_t;

/// Solution cost. Integer-valued cost functions stay exact below 2^53.
using Cost = double;

/// Distance between vertices of different connected components.
inline constexpr Distance kUnreachable = std::numeric_limits<Distance>::max();

/// Largest integer a Cost represents exactly.
inline constexpr Cost kMaxExactCost = 9007199254740992.0;  // 2^53

using Bitset = boost::dynamic_bitset<std::uint64_t>;

/// Malformed or invalid user input (files, parameters, instances).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace msrdc
