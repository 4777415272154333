# Copyright 2026 The msrdc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact min-sum-radii clustering with radius-dependent costs."""

from ._core import (
    CostFunction,
    Instance,
    InputError,
    Timeout,
    WorkLimitExceeded,
    brute_force,
    brute_force_sat,
    random_3sat,
    random_graph,
    random_tree,
    sat_to_msra,
    solve,
    treewidth_upper_bound,
)

__all__ = [
    "CostFunction",
    "Instance",
    "InputError",
    "Timeout",
    "WorkLimitExceeded",
    "brute_force",
    "brute_force_sat",
    "random_3sat",
    "random_graph",
    "random_tree",
    "sat_to_msra",
    "solve",
    "treewidth_upper_bound",
]
