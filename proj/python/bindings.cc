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

#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <chrono>

#include "msrdc/dp.h"
#include "msrdc/generators.h"
#include "msrdc/oracle.h"
#include "msrdc/tree_decomposition.h"

namespace py = pybind11;
using namespace msrdc;

namespace {

py::dict outcome_dict(const SolveOutcome& o) {
  py::dict d;
  const bool optimal = o.status == SolveStatus::kOptimal;
  d["status"] = optimal ? "optimal" : "infeasible";
  d["cost"] = optimal ? py::object(py::float_(o.cost)) : py::object(py::none());
  py::list opened;
  for (const OpenedBall& b : o.solution.opened) opened.append(py::make_tuple(b.facility, b.radius));
  d["opened"] = opened;
  return d;
}

Instance prepared(Instance inst) {
  normalize(inst);
  validate_instance(inst);
  return inst;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact min-sum-radii clustering over tree decompositions";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<WorkLimitExceeded>(m, "WorkLimitExceeded", PyExc_RuntimeError);
  py::register_exception<DpTimeout>(m, "Timeout", PyExc_TimeoutError);

  py::class_<CostFunction>(m, "CostFunction")
      .def_static("identity", &CostFunction::identity)
      .def_static("power", &CostFunction::power, py::arg("alpha"))
      .def_static("table", &CostFunction::table, py::arg("values"))
      .def_static("from_flag", [](const std::string& flag) { return CostFunction::from_flag(flag); })
      .def("__call__", &CostFunction::operator())
      .def(py::self == py::self);

  py::class_<Instance>(m, "Instance")
      .def(py::init([](int vertices, const std::vector<std::tuple<VertexId, VertexId, Distance>>& edges,
                       std::vector<VertexId> clients, std::vector<VertexId> facilities, int k,
                       CostFunction cost) {
             Instance inst;
             inst.vertex_count = vertices;
             for (const auto& [u, v, w] : edges) inst.edges.push_back({u, v, w});
             inst.clients = std::move(clients);
             inst.facilities = std::move(facilities);
             inst.k = k;
             inst.cost = std::move(cost);
             return prepared(std::move(inst));
           }),
           py::arg("vertices"), py::arg("edges"), py::arg("clients"), py::arg("facilities"),
           py::arg("k"), py::arg("cost") = CostFunction::identity())
      .def_static("from_json", [](const std::string& text) { return instance_from_json(text); })
      .def("to_json", &instance_to_json)
      .def_readonly("vertices", &Instance::vertex_count)
      .def_readonly("clients", &Instance::clients)
      .def_readonly("facilities", &Instance::facilities)
      .def_readwrite("k", &Instance::k)
      .def_property_readonly("edges", [](const Instance& inst) {
        std::vector<std::tuple<VertexId, VertexId, Distance>> out;
        for (const Edge& e : inst.edges) out.emplace_back(e.u, e.v, e.weight);
        return out;
      })
      .def(py::self == py::self);

  m.def(
      "solve",
      [](const Instance& inst, bool tables, std::optional<double> timeout) {
        DpOptions options;
        options.materialize_tables = tables;
        if (timeout) {
          options.deadline = std::chrono::steady_clock::now() +
                             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(*timeout));
        }
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(inst, options);
        }
        py::dict d = outcome_dict(r.outcome);
        d["width"] = r.width;
        d["entry_count"] = r.stats.entry_count;
        return d;
      },
      py::arg("instance"), py::arg("tables") = false, py::arg("timeout") = py::none(),
      "Optimal cover via the tree-decomposition DP.");

  m.def(
      "brute_force",
      [](const Instance& inst, std::int64_t work_limit) {
        SolveOutcome o;
        {
          py::gil_scoped_release release;
          o = brute_force_msrdc(inst, MetricClosure(inst), work_limit);
        }
        return outcome_dict(o);
      },
      py::arg("instance"), py::arg("work_limit") = 50'000'000);

  m.def("treewidth_upper_bound", [](const Instance& inst) { return min_fill_heuristic(inst).width(); });

  m.def(
      "sat_to_msra",
      [](int num_vars, std::vector<std::vector<int>> clauses) {
        return sat_to_msra({num_vars, std::move(clauses)});
      },
      py::arg("num_vars"), py::arg("clauses"));
  m.def(
      "brute_force_sat",
      [](int num_vars, std::vector<std::vector<int>> clauses) {
        return brute_force_sat({num_vars, std::move(clauses)});
      },
      py::arg("num_vars"), py::arg("clauses"));
  m.def(
      "random_3sat",
      [](int n, int m, std::uint64_t seed, bool all_positive) {
        const CnfFormula cnf = gen_random_3sat(n, m, seed, all_positive);
        return py::make_tuple(cnf.num_vars, cnf.clauses);
      },
      py::arg("n"), py::arg("m"), py::arg("seed"), py::arg("all_positive") = false);

  m.def(
      "random_tree",
      [](int n, int k, std::uint64_t seed, Distance wmin, Distance wmax, double client_probability,
         double facility_probability) {
        return gen_random_tree(n, {wmin, wmax}, {client_probability, facility_probability}, k, seed);
      },
      py::arg("n"), py::arg("k"), py::arg("seed"), py::arg("wmin") = 1, py::arg("wmax") = 10,
      py::arg("client_probability") = 0.5, py::arg("facility_probability") = 0.5);
  m.def(
      "random_graph",
      [](int n, int k, std::uint64_t seed, double edge_probability, Distance wmin, Distance wmax,
         double client_probability, double facility_probability) {
        return gen_random_graph(n, edge_probability, {wmin, wmax},
                                {client_probability, facility_probability}, k, seed);
      },
      py::arg("n"), py::arg("k"), py::arg("seed"), py::arg("edge_probability") = 0.2,
      py::arg("wmin") = 1, py::arg("wmax") = 10, py::arg("client_probability") = 0.5,
      py::arg("facility_probability") = 0.5);
}
