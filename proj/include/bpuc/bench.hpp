// Copyright 2026 The BPUC Authors
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

// Benchmark rows and per-group aggregation, written as comma-separated text.
//
// Methods: cp, cp+cg, oracle (solvers) and lb1, lp1, arcflow, colgen (root
// bounds only). The gap of a row is 100 * (best - bound) / best, where best
// is the oracle optimum for small instances and otherwise the best
// objective any solver row found for that instance.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "bpuc/arcflow.hpp"
#include "bpuc/bounds.hpp"
#include "bpuc/colgen.hpp"
#include "bpuc/instance.hpp"
#include "bpuc/lp.hpp"
#include "bpuc/oracle.hpp"
#include "bpuc/solver.hpp"

namespace bpuc {

inline const std::vector<std::string>& bench_methods() {
  static const std::vector<std::string> kMethods = {"cp", "cp+cg", "oracle", "lb1", "lp1", "arcflow", "colgen"};
  return kMethods;
}

inline bool is_solver_method(const std::string& m) { return m == "cp" || m == "cp+cg" || m == "oracle"; }

struct BenchRow {
  std::string instance;  // file name
  std::string group;     // n<n>_m<m>_x<X>
  std::string method;
  std::string status;    // solver status, BOUND, or ERROR
  std::optional<Rational> objective;
  std::optional<double> bound;
  std::optional<double> gap;
  std::int64_t nodes = 0;
  double seconds = 0.0;
  std::string message;   // ERROR rows only
  int num_items = 0;
  std::optional<Rational> reference;  // oracle optimum, small instances only
};

// The oracle reference is computed when n <= 12 and m^n stays below this.
inline constexpr double kReferenceEnumerationLimit = 1e9;

/// Group label: taken from a generator file name when it has one,
/// otherwise n<n>_m<m>_x? from the instance.
inline std::string group_label(const std::string& file_name, const Instance* instance) {
  static const std::regex kName(R"(bpuc_n(\d+)_m(\d+)_x(\d+)_s\d+_\d+\.txt)");
  std::smatch mt;
  if (std::regex_match(file_name, mt, kName))
    return "n" + mt[1].str() + "_m" + mt[2].str() + "_x" + mt[3].str();
  if (!instance) return "unknown";
  return "n" + std::to_string(instance->num_items()) + "_m" + std::to_string(instance->num_bins()) + "_x?";
}

/// Root bound of `method` on a tightened copy (lb1 uses the raw instance).
inline std::optional<double> root_bound(const Instance& instance, const std::string& method) {
  if (method == "lb1") {
    auto lb = lb1(instance);
    if (!lb) return std::nullopt;
    return to_double(lb->value);
  }
  Instance t = tighten_capacities(instance);
  if (method == "lp1") {
    LpResult r = solve_lp(build_model1_lp(t));
    if (r.status != LpStatus::kOptimal) return std::nullopt;
    return r.objective;
  }
  if (method == "arcflow") {
    LpBound b = solve_z3(t);
    if (b.status != LpStatus::kOptimal) return std::nullopt;
    return b.value;
  }
  if (method == "colgen") {
    Z2Result z = solve_z2(t);
    if (!z.feasible || z.lp_status != LpStatus::kOptimal) return std::nullopt;
    return z.bound;
  }
  throw std::invalid_argument("unknown bound method '" + method + "'");
}

/// Runs one (instance file, method) job. Never throws: failures become
/// ERROR rows.
inline BenchRow run_bench_job(const std::string& path, const std::string& method, double time_limit) {
  BenchRow row;
  row.instance = path.substr(path.find_last_of('/') + 1);
  row.method = method;
  try {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file");
    Instance inst = parse_instance(in);
    row.group = group_label(row.instance, &inst);
    row.num_items = inst.num_items();
    if (inst.num_items() <= kOracleMaxItems &&
        std::pow(static_cast<double>(inst.num_bins()), inst.num_items()) <= kReferenceEnumerationLimit) {
      Solution ref = brute_force(inst);
      if (ref.status == Status::kOptimal) row.reference = ref.objective;
    }
    const auto start = std::chrono::steady_clock::now();
    if (method == "cp" || method == "cp+cg") {
      SolverConfig cfg;
      cfg.time_limit = time_limit;
      cfg.use_colgen_bound = method == "cp+cg";
      SolveResult r = solve(inst, cfg);
      row.status = to_string(r.solution.status);
      if (r.stats.best) row.objective = r.solution.objective;
      if (r.stats.root_bound) row.bound = to_double(*r.stats.root_bound);
      row.nodes = r.stats.nodes;
    } else if (method == "oracle") {
      Solution s = brute_force(inst);
      row.status = to_string(s.status);
      if (s.status == Status::kOptimal) row.objective = s.objective;
    } else {
      row.status = "BOUND";
      row.bound = root_bound(inst, method);
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  } catch (const std::exception& e) {
    row.status = "ERROR";
    row.message = e.what();
    if (row.group.empty()) row.group = group_label(row.instance, nullptr);
  }
  return row;
}

/// Fills the gap column. Rows of one instance share the best-known value.
inline void fill_gaps(std::vector<BenchRow>& rows) {
  std::map<std::string, std::optional<Rational>> best;
  for (const BenchRow& r : rows)
    if (r.reference) best[r.instance] = r.reference;
  for (const BenchRow& r : rows) {
    if (!r.objective || !is_solver_method(r.method)) continue;
    bool exact = std::any_of(rows.begin(), rows.end(),
                             [&](const BenchRow& o) { return o.instance == r.instance && o.reference; });
    if (exact) continue;
    auto& b = best[r.instance];
    if (!b || *r.objective < *b) b = r.objective;
  }
  for (BenchRow& r : rows) {
    auto it = best.find(r.instance);
    if (it == best.end() || !it->second || !r.bound) continue;
    const double ref = to_double(*it->second);
    r.gap = ref == 0.0 ? 0.0 : 100.0 * (ref - *r.bound) / ref;
  }
}

inline void write_rows(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "instance,group,method,status,objective,root_bound,gap_pct,nodes,seconds\n";
  out.setf(std::ios::fixed);
  for (const BenchRow& r : rows) {
    out << r.instance << ',' << r.group << ',' << r.method << ',' << r.status << ',';
    if (r.objective) out << format_fixed(*r.objective, 6);
    out << ',';
    if (r.bound) out << std::setprecision(6) << *r.bound;
    out << ',';
    if (r.gap) out << std::setprecision(3) << *r.gap;
    out << ',' << r.nodes << ',' << std::setprecision(3) << r.seconds;
    if (r.status == "ERROR") out << ",\"" << r.message << '"';
    out << '\n';
  }
}

/// Per (group, method): gap, #solved, cpu and nodes averages.
inline void write_groups(std::ostream& out, const std::vector<BenchRow>& rows,
                         const std::vector<std::string>& methods) {
  out << "group,method,instances,avg_gap_pct,solved,avg_cpu,avg_nodes\n";
  std::vector<std::string> groups;
  for (const BenchRow& r : rows)
    if (std::find(groups.begin(), groups.end(), r.group) == groups.end()) groups.push_back(r.group);
  std::sort(groups.begin(), groups.end());
  out.setf(std::ios::fixed);
  for (const std::string& g : groups) {
    for (const std::string& m : methods) {
      int count = 0, solved = 0, gaps = 0;
      double gap = 0, cpu = 0, nodes = 0;
      for (const BenchRow& r : rows) {
        if (r.group != g || r.method != m) continue;
        ++count;
        if (r.status == "OPTIMAL") ++solved;
        if (r.gap) {
          gap += *r.gap;
          ++gaps;
        }
        cpu += r.seconds;
        nodes += static_cast<double>(r.nodes);
      }
      if (count == 0) continue;
      out << g << ',' << m << ',' << count << ',';
      if (gaps) out << std::setprecision(3) << gap / gaps;
      out << ',' << solved << ',' << std::setprecision(3) << cpu / count << ',' << std::setprecision(1)
          << nodes / count << '\n';
    }
  }
}

}  // namespace bpuc
