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

// Arc-flow formulation. Nodes are the load values 0..C_max plus a final
// node F; an item arc (a, a + w) uses one item of size w, and a bin arc
// (a, F, j) closes bin j at load a with cost f_j + a * c_j (0 when a = 0).
// A packing is m unit paths from 0 to F, one per bin.
//
// Only nodes that are subset sums of the item sizes are kept. Every path
// of a real packing visits partial sums of a subset of S, so no integral
// packing is lost.
//
// Graph size guideline: the dense LP below is meant for graphs up to a few
// thousand arcs; build_graph refuses more than 10^6 arcs.

#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "bpuc/instance.hpp"
#include "bpuc/lp.hpp"

namespace bpuc {

inline constexpr std::size_t kMaxArcs = 1000000;

struct ItemArc {
  std::int64_t from = 0;
  std::int64_t to = 0;
  int group = 0;  // size group d, so to - from == w'_d
};

struct BinArc {
  std::int64_t from = 0;
  int bin = 0;
  Rational cost;
};

struct FlowGraph {
  std::int64_t max_capacity = 0;
  std::vector<std::int64_t> nodes;  // reachable loads, ascending, nodes[0] == 0
  std::vector<ItemArc> item_arcs;
  std::vector<BinArc> bin_arcs;

  // Lookup tables, indexed by load value.
  std::vector<int> node_at;                  // -1 when the load is not a node
  std::vector<std::vector<int>> item_arc_at;  // [load][group] -> arc or -1
  std::vector<std::vector<int>> bin_arc_at;   // [load][bin] -> arc or -1

  int item_arc(std::int64_t from, int group) const {
    if (from < 0 || from > max_capacity) return -1;
    return item_arc_at[static_cast<std::size_t>(from)][static_cast<std::size_t>(group)];
  }
  int bin_arc(std::int64_t from, int bin) const {
    if (from < 0 || from > max_capacity) return -1;
    return bin_arc_at[static_cast<std::size_t>(from)][static_cast<std::size_t>(bin)];
  }
};

inline FlowGraph build_graph(const Instance& instance) {
  FlowGraph g;
  g.max_capacity = instance.max_capacity();
  const auto cap = static_cast<std::size_t>(g.max_capacity);
  const auto& groups = instance.groups();
  auto reach = reachable_sums(instance.sizes(), g.max_capacity);
  g.node_at.assign(cap + 1, -1);
  g.item_arc_at.assign(cap + 1, std::vector<int>(groups.size(), -1));
  g.bin_arc_at.assign(cap + 1, std::vector<int>(static_cast<std::size_t>(instance.num_bins()), -1));
  for (std::int64_t a = 0; a <= g.max_capacity; ++a) {
    if (!reach[static_cast<std::size_t>(a)]) continue;
    g.node_at[static_cast<std::size_t>(a)] = static_cast<int>(g.nodes.size());
    g.nodes.push_back(a);
  }
  for (std::int64_t a : g.nodes) {
    for (std::size_t d = 0; d < groups.size(); ++d) {
      const std::int64_t b = a + groups[d].size;
      if (b > g.max_capacity || !reach[static_cast<std::size_t>(b)]) continue;
      g.item_arc_at[static_cast<std::size_t>(a)][d] = static_cast<int>(g.item_arcs.size());
      g.item_arcs.push_back({a, b, static_cast<int>(d)});
    }
    for (int j = 0; j < instance.num_bins(); ++j) {
      const BinSpec& bin = instance.bin(j);
      if (a > bin.capacity) continue;
      g.bin_arc_at[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] =
          static_cast<int>(g.bin_arcs.size());
      Rational cost = a == 0 ? Rational(0) : Rational(bin.fixed_cost + bin.unit_cost * a);
      g.bin_arcs.push_back({a, j, cost});
    }
    if (g.item_arcs.size() + g.bin_arcs.size() > kMaxArcs)
      throw std::length_error("arc-flow graph exceeds 10^6 arcs");
  }
  return g;
}

/// Line-oriented dump: "arc <a> <b> item 0" and "arc <a> F bin<j> <cost>".
inline void dump_graph(std::ostream& out, const FlowGraph& g) {
  for (const ItemArc& a : g.item_arcs) out << "arc " << a.from << ' ' << a.to << " item 0\n";
  for (const BinArc& a : g.bin_arcs)
    out << "arc " << a.from << " F bin" << a.bin + 1 << ' ' << format_exact(a.cost) << '\n';
}

struct ArcFlowLp {
  LinearProgram lp;
  int first_bin_var = 0;  // item arcs come first, then bin arcs
};

inline ArcFlowLp build_arcflow_lp(const Instance& instance, const FlowGraph& g) {
  ArcFlowLp out;
  LinearProgram& lp = out.lp;
  const int m = instance.num_bins();
  for (std::size_t k = 0; k < g.item_arcs.size(); ++k) lp.add_variable(0.0, kInfinity, 0.0);
  out.first_bin_var = lp.num_variables();
  for (const BinArc& a : g.bin_arcs) lp.add_variable(0.0, 1.0, to_double(a.cost));

  std::vector<std::vector<std::pair<int, double>>> conservation(g.nodes.size());
  for (std::size_t k = 0; k < g.item_arcs.size(); ++k) {
    const ItemArc& a = g.item_arcs[k];
    conservation[static_cast<std::size_t>(g.node_at[static_cast<std::size_t>(a.to)])].emplace_back(
        static_cast<int>(k), 1.0);
    conservation[static_cast<std::size_t>(g.node_at[static_cast<std::size_t>(a.from)])].emplace_back(
        static_cast<int>(k), -1.0);
  }
  for (std::size_t k = 0; k < g.bin_arcs.size(); ++k)
    conservation[static_cast<std::size_t>(g.node_at[static_cast<std::size_t>(g.bin_arcs[k].from)])]
        .emplace_back(out.first_bin_var + static_cast<int>(k), -1.0);
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    lp.add_row(std::move(conservation[v]), Relation::kEqual, v == 0 ? -static_cast<double>(m) : 0.0);

  std::vector<std::vector<std::pair<int, double>>> convexity(static_cast<std::size_t>(m));
  for (std::size_t k = 0; k < g.bin_arcs.size(); ++k)
    convexity[static_cast<std::size_t>(g.bin_arcs[k].bin)].emplace_back(
        out.first_bin_var + static_cast<int>(k), 1.0);
  for (int j = 0; j < m; ++j)
    lp.add_row(std::move(convexity[static_cast<std::size_t>(j)]), Relation::kEqual, 1.0);

  const auto& groups = instance.groups();
  std::vector<std::vector<std::pair<int, double>>> demand(groups.size());
  for (std::size_t k = 0; k < g.item_arcs.size(); ++k)
    demand[static_cast<std::size_t>(g.item_arcs[k].group)].emplace_back(static_cast<int>(k), 1.0);
  for (std::size_t d = 0; d < groups.size(); ++d)
    lp.add_row(std::move(demand[d]), Relation::kEqual, static_cast<double>(groups[d].count));
  return out;
}

struct LpBound {
  LpStatus status = LpStatus::kNumerical;
  double value = 0.0;
};

/// LP relaxation of the arc-flow model.
inline LpBound solve_z3(const Instance& instance) {
  FlowGraph g = build_graph(instance);
  ArcFlowLp model = build_arcflow_lp(instance, g);
  const double cells = static_cast<double>(model.lp.num_rows()) *
                       static_cast<double>(model.lp.num_variables() + 2 * model.lp.num_rows());
  if (cells > 2e8) throw std::length_error("arc-flow LP too large for the dense simplex");
  LpResult r = solve_lp(model.lp);
  return {r.status, r.objective};
}

/// Integral flow of a packing: one unit path per bin.
struct IntegralFlow {
  std::vector<std::int64_t> item_flow;  // per item arc
  std::vector<std::int64_t> bin_flow;   // per bin arc
  Rational cost;
};

/// Maps each bin of a feasible packing to a path: its items in
/// non-increasing size order, then the bin arc at the bin's load.
inline IntegralFlow encode_packing(const Instance& instance, const FlowGraph& g,
                                   const Solution& solution) {
  Solution check = evaluate(instance, solution.assignment);
  if (check.status != Status::kFeasible) throw std::invalid_argument("packing violates a capacity");
  IntegralFlow flow;
  flow.item_flow.assign(g.item_arcs.size(), 0);
  flow.bin_flow.assign(g.bin_arcs.size(), 0);
  flow.cost = 0;
  std::vector<std::vector<int>> content(static_cast<std::size_t>(instance.num_bins()));
  for (int i = 0; i < instance.num_items(); ++i)
    content[static_cast<std::size_t>(solution.assignment[static_cast<std::size_t>(i)])].push_back(i);
  for (int j = 0; j < instance.num_bins(); ++j) {
    auto& items = content[static_cast<std::size_t>(j)];
    std::sort(items.begin(), items.end(), [&](int a, int b) {
      return instance.size(a) != instance.size(b) ? instance.size(a) > instance.size(b) : a < b;
    });
    std::int64_t at = 0;
    for (int i : items) {
      const int arc = g.item_arc(at, instance.group_of(i));
      if (arc < 0) throw std::logic_error("packing path leaves the reduced graph");
      ++flow.item_flow[static_cast<std::size_t>(arc)];
      at += instance.size(i);
    }
    const int arc = g.bin_arc(at, j);
    if (arc < 0) throw std::logic_error("bin arc missing for a feasible load");
    ++flow.bin_flow[static_cast<std::size_t>(arc)];
    flow.cost += g.bin_arcs[static_cast<std::size_t>(arc)].cost;
  }
  return flow;
}

inline IntegralFlow encode_packing(const Instance& instance, const Solution& solution) {
  return encode_packing(instance, build_graph(instance), solution);
}

}  // namespace bpuc
