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

// Depth-first branch and bound over the propagator.
//
// Phase 1 decides the open state of every bin, cheapest unit-space ratio
// first (open, then closed). Phase 2 fills the open bins, cheapest unit
// cost first, choosing the item that takes part in a fullest packing of
// the bin. A refuted x_i = k removes k from every ungrounded item of the
// same size: those items are interchangeable.
//
// Each incumbent lowers z_hi to (incumbent - 1/D), D the common cost
// denominator. No cheaper packing is lost since all packing costs are
// multiples of 1/D.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bpuc/bounds.hpp"
#include "bpuc/instance.hpp"
#include "bpuc/propagation.hpp"

namespace bpuc {

struct SolverConfig {
  double time_limit = 600.0;  // seconds, > 0
  bool use_dp_filter = false;
  bool use_colgen_bound = false;
  std::optional<Rational> initial_ub;  // inclusive: only packings of cost <= ub
  std::ostream* trace = nullptr;       // propagation log, if set
  // Bin dominance and item symmetry. Off only for cross-checking.
  bool use_symmetry_rules = true;
};

struct SearchStats {
  std::int64_t nodes = 0;
  std::optional<Solution> best;
  bool proved_optimal = false;  // search completed (optimum or infeasibility)
  double elapsed = 0.0;
  std::optional<Rational> root_bound;  // z_lo after the root fixpoint
  std::vector<Rational> incumbents;    // in discovery order
};

struct SolveResult {
  Solution solution;
  SearchStats stats;
};

/// Item to branch on for open bin k: the largest item taking part in some
/// subset of candidates that reaches the maximum achievable load of k,
/// lowest index on ties. nullopt when no candidate fits.
inline std::optional<int> perfect_packing_item(int k, const DomainStore& s, const Instance& instance) {
  std::int64_t packed = 0;
  std::vector<int> free_items;
  for (int i = 0; i < s.num_items; ++i) {
    if (!s.allows(i, k)) continue;
    if (s.grounded(i))
      packed += instance.size(i);
    else
      free_items.push_back(i);
  }
  const std::int64_t room = s.hi(k) - packed;
  if (room <= 0 || free_items.empty()) return std::nullopt;
  std::vector<std::int64_t> sizes;
  for (int i : free_items) sizes.push_back(instance.size(i));
  auto reach = reachable_sums(sizes, room);
  std::int64_t best = room;
  while (best > 0 && !reach[static_cast<std::size_t>(best)]) --best;
  if (best == 0) return std::nullopt;

  // Sizes are non-decreasing in item order; scan distinct sizes downwards.
  for (std::size_t p = sizes.size(); p-- > 0;) {
    const std::int64_t w = sizes[p];
    if (p + 1 < sizes.size() && sizes[p + 1] == w) continue;
    if (w > best) continue;
    std::vector<std::int64_t> rest = sizes;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(p));
    auto r = reachable_sums(rest, best - w);
    if (!r[static_cast<std::size_t>(best - w)]) continue;
    std::size_t first = p;
    while (first > 0 && sizes[first - 1] == w) --first;
    return free_items[first];
  }
  return std::nullopt;
}

namespace detail {

class Search {
 public:
  Search(const Instance& original, const SolverConfig& config)
      : original_(original), config_(config), instance_(tighten_capacities(original)) {
    step_ = Rational(1) / Rational(instance_.cost_denominator());
    auto ranked = rank_bins(instance_.bins());
    y_order_ = ranked.order;
    // Zero-capacity bins are not ranked; decide them last.
    for (int j = 0; j < instance_.num_bins(); ++j)
      if (std::find(y_order_.begin(), y_order_.end(), j) == y_order_.end()) y_order_.push_back(j);
    prop_.dp_filter = config.use_dp_filter;
    prop_.colgen_bound = config.use_colgen_bound;
  }

  SolveResult run() {
    start_ = std::chrono::steady_clock::now();
    DomainStore root = DomainStore::create(instance_);
    root.trace = config_.trace;
    if (config_.use_symmetry_rules) {
      root.dominance = dominance_pairs(instance_);
      root.open_bin_dominance = true;
    }
    if (config_.initial_ub) root.lower_z_hi(*config_.initial_ub, "ub");
    node(std::move(root), true);

    SolveResult out;
    out.stats = std::move(stats_);
    out.stats.elapsed = seconds();
    out.stats.proved_optimal = !timed_out_;
    if (best_) {
      out.solution = evaluate(original_, *best_);
      out.solution.status = timed_out_ ? Status::kUnknown : Status::kOptimal;
      out.stats.best = out.solution;
    } else {
      out.solution.status = timed_out_ ? Status::kUnknown : Status::kInfeasible;
    }
    return out;
  }

 private:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  bool out_of_time() {
    if (!timed_out_ && (stats_.nodes & 15) == 1 && seconds() > config_.time_limit) timed_out_ = true;
    return timed_out_;
  }

  void node(DomainStore s, bool root = false) {
    ++stats_.nodes;
    if (out_of_time()) return;
    if (incumbent_) s.lower_z_hi(*incumbent_ - step_, "incumbent");
    for (;;) {
      fixpoint(s, instance_, prop_, config_.use_colgen_bound ? &cache_ : nullptr);
      if (root) {
        if (!s.failed) stats_.root_bound = s.z_lo;
        root = false;
      }
      if (s.failed) return;

      // Phase 1: open states.
      for (int j : y_order_) {
        if (s.state(j) != OpenState::kUnknown) continue;
        DomainStore left = s;
        left.set_open(j, "branch");
        node(std::move(left));
        if (timed_out_) return;
        DomainStore right = std::move(s);
        if (incumbent_) right.lower_z_hi(*incumbent_ - step_, "incumbent");
        right.set_closed(j, "branch");
        for (int i = 0; i < right.num_items && !right.failed; ++i) right.remove(i, j, "branch");
        node(std::move(right));
        return;
      }

      if (s.all_grounded()) {
        leaf(s);
        return;
      }

      // Phase 2: cheapest open bin that still has candidates.
      int k = -1;
      for (int j = 0; j < s.num_bins; ++j) {
        if (!s.is_open(j)) continue;
        bool has = false;
        for (int i = 0; i < s.num_items && !has; ++i) has = !s.grounded(i) && s.allows(i, j);
        if (!has) continue;
        if (k < 0 || instance_.bin(j).unit_cost < instance_.bin(k).unit_cost) k = j;
      }
      if (k < 0) {
        s.failed = true;  // ungrounded items but no open bin can take them
        return;
      }
      auto item = perfect_packing_item(k, s, instance_);
      if (!item) {
        // Nothing else fits: bin k is complete.
        for (int i = 0; i < s.num_items && !s.failed; ++i)
          if (!s.grounded(i)) s.remove(i, k, "close-out");
        continue;
      }
      const int i = *item;
      DomainStore left = s;
      left.assign(i, k, "branch");
      node(std::move(left));
      if (timed_out_) return;
      DomainStore right = std::move(s);
      if (incumbent_) right.lower_z_hi(*incumbent_ - step_, "incumbent");
      right.remove(i, k, "branch");
      if (config_.use_symmetry_rules) {
        for (int t = 0; t < right.num_items && !right.failed; ++t)
          if (t != i && !right.grounded(t) && instance_.size(t) == instance_.size(i))
            right.remove(t, k, "symmetry");
      }
      node(std::move(right));
      return;
    }
  }

  void leaf(const DomainStore& s) {
    std::vector<int> assignment(static_cast<std::size_t>(s.num_items));
    for (int i = 0; i < s.num_items; ++i) assignment[static_cast<std::size_t>(i)] = s.assigned_bin(i);
    Solution sol = evaluate(instance_, assignment);
    if (sol.status != Status::kFeasible) return;
    if (config_.initial_ub && sol.objective > *config_.initial_ub) return;
    if (incumbent_ && sol.objective >= *incumbent_) return;
    incumbent_ = sol.objective;
    best_ = assignment;
    stats_.incumbents.push_back(sol.objective);
  }

  const Instance& original_;
  SolverConfig config_;
  Instance instance_;  // capacities tightened
  Rational step_;
  std::vector<int> y_order_;
  PropagationConfig prop_;
  ColumnCache cache_;
  std::chrono::steady_clock::time_point start_;
  SearchStats stats_;
  std::optional<Rational> incumbent_;
  std::optional<std::vector<int>> best_;
  bool timed_out_ = false;
};

}  // namespace detail

/// Exact solve. On timeout the best packing found so far is returned with
/// status UNKNOWN.
inline SolveResult solve(const Instance& instance, const SolverConfig& config = {}) {
  if (!(config.time_limit > 0)) throw std::invalid_argument("time limit must be positive");
  return detail::Search(instance, config).run();
}

/// `nodes=<n> time=<s> status=<S> objective=<v>`
inline std::string stats_line(const SolveResult& r) {
  std::ostringstream out;
  out << "nodes=" << r.stats.nodes << " time=";
  out.setf(std::ios::fixed);
  out.precision(3);
  out << r.stats.elapsed << " status=" << to_string(r.solution.status) << " objective=";
  if (r.stats.best)
    out << format_fixed(r.solution.objective, 6);
  else
    out << "none";
  return out.str();
}

}  // namespace bpuc
