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

// Cutting-stock bound z2 by column generation.
//
// Master (LP relaxation):
//   min  sum_j sum_p cost_jp * p_jp
//   s.t. sum_j sum_p g_djp * p_jp = q_d    for every distinct size d   (pi_d)
//        sum_p p_jp = 1                    for every bin j             (lambda_j)
//        0 <= p_jp <= 1
// A pattern g for bin j holds at most q_d items of size w'_d and fits C_j.
// Pricing is a bounded knapsack solved by dynamic programming over the
// capacity, with a greedy fill tried first.
//
// The same routine runs under search-time restrictions: committed items
// shrink capacities, open bins drop their fixed cost into a constant, and
// each bin may only use the items whose domain still contains it.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "bpuc/instance.hpp"
#include "bpuc/lp.hpp"

namespace bpuc {

inline constexpr double kReducedCostTol = 1e-7;

/// A cutting pattern: counts[d] items of size group d in bin `bin`.
struct Column {
  int bin = 0;
  std::vector<std::int64_t> counts;
  Rational cost;  // f_j + load * c_j, or 0 for the empty pattern

  std::int64_t load(const Instance& instance) const {
    std::int64_t l = 0;
    for (std::size_t d = 0; d < counts.size(); ++d)
      l += counts[d] * instance.groups()[d].size;
    return l;
  }
  bool empty() const {
    return std::all_of(counts.begin(), counts.end(), [](std::int64_t g) { return g == 0; });
  }
  friend bool operator==(const Column& a, const Column& b) {
    return a.bin == b.bin && a.counts == b.counts;
  }
};

inline Column make_column(const Instance& instance, int bin, std::vector<std::int64_t> counts) {
  Column c{bin, std::move(counts), 0};
  const std::int64_t l = c.load(instance);
  const BinSpec& b = instance.bin(bin);
  c.cost = l > 0 ? Rational(b.fixed_cost + b.unit_cost * l) : Rational(0);
  return c;
}

struct BinRestriction {
  std::int64_t capacity = 0;          // space left after committed items
  bool forced_open = false;           // fixed cost already paid
  std::vector<std::int64_t> usable;   // per size group
};

struct Restrictions {
  std::vector<BinRestriction> bins;
  std::vector<std::int64_t> remaining;  // per size group
  Rational constant;                    // cost of committed loads and open bins

  /// No search decisions: full capacities, all items usable everywhere.
  static Restrictions root(const Instance& instance) {
    Restrictions r;
    for (const auto& g : instance.groups()) r.remaining.push_back(g.count);
    for (const BinSpec& b : instance.bins()) r.bins.push_back({b.capacity, false, r.remaining});
    r.constant = 0;
    return r;
  }

  bool admits(const Instance& instance, const Column& col) const {
    const BinRestriction& br = bins[static_cast<std::size_t>(col.bin)];
    if (col.counts.size() != remaining.size()) return false;
    for (std::size_t d = 0; d < col.counts.size(); ++d)
      if (col.counts[d] > br.usable[d] || col.counts[d] > remaining[d]) return false;
    return col.load(instance) <= br.capacity;
  }

  /// Cost of a column in the master under these restrictions.
  Rational master_cost(const Instance& instance, const Column& col) const {
    if (col.empty()) return 0;
    const BinSpec& b = instance.bin(col.bin);
    Rational c = b.unit_cost * col.load(instance);
    if (!bins[static_cast<std::size_t>(col.bin)].forced_open) c += b.fixed_cost;
    return c;
  }
};

struct Duals {
  std::vector<double> demand;     // pi_d
  std::vector<double> convexity;  // lambda_j
};

namespace detail {

inline double reduced_cost(const Instance& instance, const Restrictions& r, const Duals& duals,
                           const Column& col, bool feasibility_phase) {
  double rc = feasibility_phase ? 0.0 : to_double(r.master_cost(instance, col));
  for (std::size_t d = 0; d < col.counts.size(); ++d)
    rc -= duals.demand[d] * static_cast<double>(col.counts[d]);
  return rc - duals.convexity[static_cast<std::size_t>(col.bin)];
}

inline double item_value(const Instance& instance, int j, const Duals& duals, std::size_t d,
                         bool feasibility_phase) {
  const double w = static_cast<double>(instance.groups()[d].size);
  return duals.demand[d] - (feasibility_phase ? 0.0 : w * to_double(instance.bin(j).unit_cost));
}

inline double fixed_part(const Instance& instance, int j, const Restrictions& r, bool feasibility_phase) {
  if (feasibility_phase || r.bins[static_cast<std::size_t>(j)].forced_open) return 0.0;
  return to_double(instance.bin(j).fixed_cost);
}

}  // namespace detail

/// Exact pricing for bin j: the pattern of most negative reduced cost over
/// all bounded-count fillings, the empty pattern included. nullopt when no
/// reduced cost is below -1e-7.
inline std::optional<Column> price_bin(const Instance& instance, int j, const Duals& duals,
                                       const Restrictions& r, bool feasibility_phase = false) {
  const auto& groups = instance.groups();
  const BinRestriction& br = r.bins[static_cast<std::size_t>(j)];
  std::vector<int> copy_group;
  std::int64_t total = 0;
  for (std::size_t d = 0; d < groups.size(); ++d) {
    const std::int64_t u = std::min(br.usable[d], r.remaining[d]);
    for (std::int64_t k = 0; k < u; ++k) {
      copy_group.push_back(static_cast<int>(d));
      total += groups[d].size;
    }
  }
  const std::int64_t cap = std::min(br.capacity, total);
  const double kNeg = -std::numeric_limits<double>::infinity();
  const auto width = static_cast<std::size_t>(std::max<std::int64_t>(cap, 0) + 1);
  std::vector<double> best(width, kNeg);
  best[0] = 0.0;
  std::vector<std::vector<char>> took(copy_group.size(), std::vector<char>(width, 0));
  std::int64_t hi = 0;
  for (std::size_t k = 0; k < copy_group.size(); ++k) {
    const auto d = static_cast<std::size_t>(copy_group[k]);
    const std::int64_t w = groups[d].size;
    const double v = detail::item_value(instance, j, duals, d, feasibility_phase);
    for (std::int64_t c = std::min(hi + w, cap); c >= w; --c) {
      const double prev = best[static_cast<std::size_t>(c - w)];
      if (prev == kNeg) continue;
      if (prev + v > best[static_cast<std::size_t>(c)] + 1e-12) {
        best[static_cast<std::size_t>(c)] = prev + v;
        took[k][static_cast<std::size_t>(c)] = 1;
      }
    }
    hi = std::min(hi + w, cap);
  }
  const double lambda = duals.convexity[static_cast<std::size_t>(j)];
  const double fixed = detail::fixed_part(instance, j, r, feasibility_phase);
  double best_rc = -lambda;  // empty pattern
  std::int64_t best_load = 0;
  for (std::int64_t c = 1; c <= cap; ++c) {
    const double v = best[static_cast<std::size_t>(c)];
    if (v == kNeg) continue;
    const double rc = fixed - v - lambda;
    if (rc < best_rc - 1e-12) {
      best_rc = rc;
      best_load = c;
    }
  }
  if (best_rc >= -kReducedCostTol) return std::nullopt;
  std::vector<std::int64_t> counts(groups.size(), 0);
  std::int64_t c = best_load;
  for (std::size_t k = copy_group.size(); k-- > 0 && c > 0;) {
    if (!took[k][static_cast<std::size_t>(c)]) continue;
    const auto d = static_cast<std::size_t>(copy_group[k]);
    ++counts[d];
    c -= groups[d].size;
  }
  return make_column(instance, j, std::move(counts));
}

/// Greedy pricing: fill by decreasing value per unit of size, keeping only
/// profitable items. Returns the pattern only if its reduced cost is below
/// -1e-7; nullopt says nothing about optimality.
inline std::optional<Column> greedy_price(const Instance& instance, int j, const Duals& duals,
                                          const Restrictions& r, bool feasibility_phase = false) {
  const auto& groups = instance.groups();
  const BinRestriction& br = r.bins[static_cast<std::size_t>(j)];
  if (br.capacity <= 0) return std::nullopt;
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t d = 0; d < groups.size(); ++d) {
    const double v = detail::item_value(instance, j, duals, d, feasibility_phase);
    if (v > 0 && std::min(br.usable[d], r.remaining[d]) > 0)
      order.emplace_back(v / static_cast<double>(groups[d].size), d);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::int64_t> counts(groups.size(), 0);
  std::int64_t room = br.capacity;
  double value = 0.0;
  for (const auto& [ratio, d] : order) {
    const std::int64_t w = groups[d].size;
    const std::int64_t take = std::min(std::min(br.usable[d], r.remaining[d]), room / w);
    counts[d] = take;
    room -= take * w;
    value += static_cast<double>(take) * detail::item_value(instance, j, duals, d, feasibility_phase);
  }
  if (value <= 0) return std::nullopt;
  const double rc = detail::fixed_part(instance, j, r, feasibility_phase) - value -
                    duals.convexity[static_cast<std::size_t>(j)];
  if (rc >= -kReducedCostTol) return std::nullopt;
  return make_column(instance, j, std::move(counts));
}

struct Z2Result {
  bool feasible = false;
  double bound = 0.0;               // includes restrictions.constant
  std::vector<Column> columns;      // final pool
  std::vector<double> values;       // master value per pool column
  Duals duals;
  int master_solves = 0;            // optimality-phase master solves
  LpStatus lp_status = LpStatus::kOptimal;
};

namespace detail {

inline std::vector<Column> first_fit_decreasing(const Instance& instance, const Restrictions& r) {
  const auto& groups = instance.groups();
  const int m = instance.num_bins();
  std::vector<std::vector<std::int64_t>> counts(static_cast<std::size_t>(m),
                                                std::vector<std::int64_t>(groups.size(), 0));
  std::vector<std::int64_t> load(static_cast<std::size_t>(m), 0);
  for (std::size_t d = groups.size(); d-- > 0;) {
    for (std::int64_t k = 0; k < r.remaining[d]; ++k) {
      bool placed = false;
      for (int j = 0; j < m && !placed; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        const BinRestriction& br = r.bins[uj];
        if (counts[uj][d] < br.usable[d] && load[uj] + groups[d].size <= br.capacity) {
          ++counts[uj][d];
          load[uj] += groups[d].size;
          placed = true;
        }
      }
      if (!placed) return {};
    }
  }
  std::vector<Column> cols;
  for (int j = 0; j < m; ++j)
    if (load[static_cast<std::size_t>(j)] > 0)
      cols.push_back(make_column(instance, j, counts[static_cast<std::size_t>(j)]));
  return cols;
}

}  // namespace detail

/// z2 under `restrictions`, seeded with the still-valid `warm` columns.
inline Z2Result solve_z2(const Instance& instance, const Restrictions& restrictions,
                         const std::vector<Column>& warm = {}) {
  const auto& groups = instance.groups();
  const int m = instance.num_bins();
  const std::size_t nd = groups.size();
  Z2Result res;
  std::vector<Column> pool;
  std::set<std::pair<int, std::vector<std::int64_t>>> seen;
  auto add = [&](const Column& c) {
    if (!restrictions.admits(instance, c)) return false;
    if (!seen.insert({c.bin, c.counts}).second) return false;
    pool.push_back(c);
    return true;
  };
  for (int j = 0; j < m; ++j) add(make_column(instance, j, std::vector<std::int64_t>(nd, 0)));
  for (const Column& c : warm) add(c);
  for (const Column& c : detail::first_fit_decreasing(instance, restrictions)) add(c);

  SimplexSolver solver;
  bool feasibility_phase = true;
  const int max_rounds = 10000;
  for (int round = 0; round < max_rounds; ++round) {
    LinearProgram lp;
    for (const Column& c : pool)
      lp.add_variable(0.0, 1.0, feasibility_phase ? 0.0 : to_double(restrictions.master_cost(instance, c)));
    const int first_art = lp.num_variables();
    for (std::size_t d = 0; d < nd; ++d)
      lp.add_variable(0.0, feasibility_phase ? kInfinity : 0.0, feasibility_phase ? 1.0 : 0.0);
    std::vector<std::vector<std::pair<int, double>>> demand(nd);
    std::vector<std::vector<std::pair<int, double>>> convex(static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < pool.size(); ++k) {
      for (std::size_t d = 0; d < nd; ++d)
        if (pool[k].counts[d] != 0)
          demand[d].emplace_back(static_cast<int>(k), static_cast<double>(pool[k].counts[d]));
      convex[static_cast<std::size_t>(pool[k].bin)].emplace_back(static_cast<int>(k), 1.0);
    }
    for (std::size_t d = 0; d < nd; ++d) {
      demand[d].emplace_back(first_art + static_cast<int>(d), 1.0);
      lp.add_row(std::move(demand[d]), Relation::kEqual, static_cast<double>(restrictions.remaining[d]));
    }
    for (int j = 0; j < m; ++j)
      lp.add_row(std::move(convex[static_cast<std::size_t>(j)]), Relation::kEqual, 1.0);

    LpResult lr = solver.solve(lp);
    if (lr.status != LpStatus::kOptimal) {
      res.lp_status = lr.status;
      res.columns = pool;
      return res;
    }
    if (!feasibility_phase) ++res.master_solves;
    Duals duals;
    duals.demand.assign(lr.dual.begin(), lr.dual.begin() + static_cast<std::ptrdiff_t>(nd));
    duals.convexity.assign(lr.dual.begin() + static_cast<std::ptrdiff_t>(nd), lr.dual.end());

    if (feasibility_phase && lr.objective <= 1e-9) {
      feasibility_phase = false;
      continue;
    }

    bool added = false;
    for (int j = 0; j < m; ++j) {
      auto col = greedy_price(instance, j, duals, restrictions, feasibility_phase);
      if (col && add(*col)) {
        added = true;
        continue;
      }
      col = price_bin(instance, j, duals, restrictions, feasibility_phase);
      if (col && add(*col)) added = true;
    }
    if (added) continue;

    res.columns = pool;
    res.duals = std::move(duals);
    if (feasibility_phase) return res;  // no pattern set covers the demand
    res.feasible = true;
    res.bound = lr.objective + to_double(restrictions.constant);
    res.values.assign(lr.primal.begin(), lr.primal.begin() + static_cast<std::ptrdiff_t>(pool.size()));
    return res;
  }
  res.lp_status = LpStatus::kNumerical;
  res.columns = pool;
  return res;
}

inline Z2Result solve_z2(const Instance& instance) {
  return solve_z2(instance, Restrictions::root(instance));
}

}  // namespace bpuc
