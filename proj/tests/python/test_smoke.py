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

import json

import pytest

import msrdc


def path_instance(k=1):
    return msrdc.Instance(3, [(0, 1, 1), (1, 2, 2)], clients=[1, 2], facilities=[0], k=k)


def test_solve_path():
    r = msrdc.solve(path_instance())
    assert r["status"] == "optimal"
    assert r["cost"] == 3
    assert r["opened"] == [(0, 3)]
    assert r["width"] == 1


def test_tables_and_oracle_agree():
    for seed in range(10):
        inst = msrdc.random_graph(6, k=2, seed=seed, wmin=0, wmax=5)
        want = msrdc.brute_force(inst)
        assert msrdc.solve(inst)["cost"] == want["cost"]


def test_infeasible():
    r = msrdc.solve(path_instance(k=0))
    assert r["status"] == "infeasible"
    assert r["cost"] is None


def test_cost_function():
    inst = msrdc.Instance(3, [(0, 1, 2), (1, 2, 2)], [0, 1, 2], [0, 2], 2,
                          msrdc.CostFunction.power(2))
    assert msrdc.solve(inst, tables=True)["cost"] == 4
    assert msrdc.CostFunction.from_flag("power:3")(2) == 8


def test_json_round_trip():
    inst = path_instance()
    text = inst.to_json()
    assert json.loads(text)["k"] == 1
    assert msrdc.Instance.from_json(text) == inst
    with pytest.raises(msrdc.InputError):
        msrdc.Instance.from_json("{}")


def test_reduction():
    assert msrdc.brute_force_sat(1, [[1], [-1]]) is False
    assert msrdc.solve(msrdc.sat_to_msra(1, [[1], [-1]]))["cost"] == 2
    n, clauses = msrdc.random_3sat(3, 4, seed=2, all_positive=True)
    assert msrdc.solve(msrdc.sat_to_msra(n, clauses))["cost"] == 2 ** n - 1


def test_work_limit():
    with pytest.raises(msrdc.WorkLimitExceeded):
        msrdc.brute_force(path_instance(), work_limit=1)


def test_tree_width():
    assert msrdc.treewidth_upper_bound(msrdc.random_tree(12, k=2, seed=4)) == 1
