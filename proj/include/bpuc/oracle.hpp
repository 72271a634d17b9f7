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

// Exhaustive search used as ground truth in tests. Shares nothing with the
// propagation-based solver beyond the Instance type.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "bpuc/instance.hpp"

namespace bpuc {

inline constexpr int kOracleMaxItems = 12;

namespace detail {

struct OracleSearch {
  const Instance& inst;
  std::vector<int> assign;
  std::vector<std::int64_t> load;
  std::optional<Rational> best;
  std::vector<int> best_assign;

  void dfs(int i, const Rational& cost) {
    // Lexicographic DFS: the first assignment reaching a cost is the
    // smallest one, so ties are pruned only after an incumbent exists.
    if (best && cost >= *best) return;
    if (i == inst.num_items()) {
      best = cost;
      best_assign = assign;
      return;
    }
    const std::int64_t w = inst.size(i);
    for (int j = 0; j < inst.num_bins(); ++j) {
      const BinSpec& b = inst.bin(j);
      auto& l = load[static_cast<std::size_t>(j)];
      if (l + w > b.capacity) continue;
      Rational next = cost + b.unit_cost * w;
      if (l == 0) next += b.fixed_cost;
      l += w;
      assign[static_cast<std::size_t>(i)] = j;
      dfs(i + 1, next);
      l -= w;
    }
  }
};

}  // namespace detail

/// Optimal packing by enumeration with capacity and partial-cost pruning.
/// Returns the lexicographically smallest optimal assignment, or an
/// INFEASIBLE solution with an empty assignment.
inline Solution brute_force(const Instance& instance) {
  if (instance.num_items() > kOracleMaxItems)
    throw std::invalid_argument("brute_force is limited to 12 items");
  detail::OracleSearch s{instance,
                         std::vector<int>(static_cast<std::size_t>(instance.num_items()), -1),
                         std::vector<std::int64_t>(static_cast<std::size_t>(instance.num_bins()), 0),
                         std::nullopt,
                         {}};
  s.dfs(0, Rational(0));
  if (!s.best) {
    Solution sol;
    sol.status = Status::kInfeasible;
    return sol;
  }
  Solution sol = evaluate(instance, s.best_assign);
  sol.status = Status::kOptimal;
  return sol;
}

}  // namespace bpuc
