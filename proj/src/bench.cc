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

#include "msrdc/bench.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "msrdc/dp.h"
#include "msrdc/generators.h"

namespace msrdc {

namespace {

constexpr double kGraphExtraEdgeProbability = 0.15;

std::pair<Instance, TreeDecomposition> make_instance(const std::string& family, int n, int width,
                                                     int k, std::uint64_t seed) {
  const WeightRange weights{1, 10};
  const RoleSampling roles{0.5, 0.5};
  if (family == "tree") {
    Instance inst = gen_random_tree(n, weights, roles, k, seed);
    TreeDecomposition td = min_fill_heuristic(inst);
    return {std::move(inst), std::move(td)};
  }
  if (family == "graph") {
    Instance inst = gen_random_graph(n, kGraphExtraEdgeProbability, weights, roles, k, seed);
    TreeDecomposition td = min_fill_heuristic(inst);
    return {std::move(inst), std::move(td)};
  }
  if (family == "ktree") return gen_partial_ktree(n, width, 0.7, weights, roles, k, seed);
  throw std::invalid_argument("unknown bench family '" + family + "'");
}

double slope(const std::vector<std::pair<double, double>>& points) {
  const double count = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  return denom == 0 ? 0.0 : (count * sxy - sx * sy) / denom;
}

}  // namespace

std::vector<BenchRow> run_scaling(const BenchConfig& config) {
  if (config.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  const std::vector<int> tree_width{1};
  const auto& widths = config.family == "ktree" ? config.widths : tree_width;
  std::vector<BenchRow> rows;
  for (int width : widths) {
    for (int k : config.ks) {
      for (int n : config.sizes) {
        const std::uint64_t seed = config.seed * 1000003ull + static_cast<std::uint64_t>(n) * 131ull +
                                   static_cast<std::uint64_t>(width) * 17ull + static_cast<std::uint64_t>(k);
        const auto [instance, td] = make_instance(config.family, n, width, k, seed);
        const MetricClosure closure(instance);
        const NiceTreeDecomposition ntd = nicify(td, instance);
        for (int rep = 0; rep < config.repetitions; ++rep) {
          BenchRow row;
          row.family = config.family;
          row.vertices = n;
          row.width = ntd.width();
          row.k = k;
          DpOptions options;
          options.materialize_tables = config.materialize_tables;
          options.retain_nodes = false;
          const auto start = std::chrono::steady_clock::now();
          options.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                         std::chrono::duration<double>(config.timeout_seconds));
          const DpContext ctx(instance, closure, ntd);
          DpEngine engine(ctx, options);
          try {
            engine.run();
            const DpEntry root = engine.root_entry();
            row.wall_time =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (!root.is_nil()) row.cost = root.value;
          } catch (const DpTimeout&) {
            row.wall_time.reset();
          }
          row.node_count = engine.stats().node_count;
          row.entry_count = engine.stats().entry_count;
          row.feasibility_checks = engine.stats().feasibility_checks;
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

std::string bench_to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "family,|V|,width,k,node_count,entry_count,feasibility_checks,wall_time\n";
  for (const BenchRow& r : rows) {
    out << r.family << ',' << r.vertices << ',' << r.width << ',' << r.k << ',' << r.node_count
        << ',' << r.entry_count << ',' << r.feasibility_checks << ',';
    if (r.wall_time) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", *r.wall_time);
      out << buf;
    } else {
      out << "timeout";
    }
    out << '\n';
  }
  return out.str();
}

std::vector<SlopeSummary> summarize_slopes(const std::vector<BenchRow>& rows) {
  // Completed runs only; repetitions of one size share their counters.
  std::map<std::tuple<std::string, int, int>, std::map<int, std::pair<double, double>>> groups;
  for (const BenchRow& r : rows) {
    if (!r.wall_time || r.entry_count <= 0) continue;
    groups[{r.family, r.width, r.k}][r.vertices] = {
        static_cast<double>(r.entry_count), static_cast<double>(std::max<std::int64_t>(r.feasibility_checks, 1))};
  }
  std::vector<SlopeSummary> out;
  for (const auto& [key, by_size] : groups) {
    std::vector<std::pair<double, double>> entries, checks;
    for (const auto& [n, counters] : by_size) {
      entries.emplace_back(std::log(n), std::log(counters.first));
      checks.emplace_back(std::log(n), std::log(counters.second));
    }
    SlopeSummary s;
    std::tie(s.family, s.width, s.k) = key;
    s.points = static_cast<int>(by_size.size());
    s.entry_slope = slope(entries);
    s.check_slope = slope(checks);
    out.push_back(s);
  }
  return out;
}

std::string slopes_to_text(const std::vector<SlopeSummary>& slopes) {
  std::ostringstream out;
  for (const SlopeSummary& s : slopes) {
    const double ceiling = 3.0 * s.width + 2.5;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "family=%s width=%d k=%d points=%d entry_slope=%.3f check_slope=%.3f "
                  "ceiling=%.1f %s\n",
                  s.family.c_str(), s.width, s.k, s.points, s.entry_slope, s.check_slope, ceiling,
                  s.points < 2 ? "insufficient" : (s.entry_slope <= ceiling ? "ok" : "above"));
    out << buf;
  }
  return out.str();
}

}  // namespace msrdc
