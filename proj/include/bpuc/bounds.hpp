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

// The closed-form bound Lb1. Each bin gets a unit-space ratio
// r_j = f_j / C_j + c_j, the cost of one unit of space when the bin is full.
// Spreading the total load W over the cheapest ratios first gives a bound
// that equals the linear relaxation of the assignment model.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bpuc/instance.hpp"
#include "bpuc/rational.hpp"

namespace bpuc {

/// Bins sorted by ratio, with the support loads of a particular W.
/// Positions p = 0..size()-1 refer to order[p]; zero-capacity bins are left
/// out. Ties in ratio keep ascending bin index.
struct RankedBins {
  std::vector<int> order;
  std::vector<Rational> ratio;
  std::vector<std::int64_t> capacity;
  int critical = -1;                  // position k, -1 when nothing is ranked
  std::vector<std::int64_t> support;  // L_p

  int size() const { return static_cast<int>(order.size()); }
  /// Position of bin j, or -1 if it is not ranked.
  int position_of(int bin) const {
    for (int p = 0; p < size(); ++p)
      if (order[static_cast<std::size_t>(p)] == bin) return p;
    return -1;
  }
};

inline RankedBins rank_bins(const std::vector<BinSpec>& bins) {
  RankedBins rb;
  std::vector<int> idx;
  std::vector<Rational> r(bins.size());
  for (std::size_t j = 0; j < bins.size(); ++j) {
    if (bins[j].capacity <= 0) continue;
    r[j] = bins[j].fixed_cost / Rational(bins[j].capacity) + bins[j].unit_cost;
    idx.push_back(static_cast<int>(j));
  }
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return r[static_cast<std::size_t>(a)] < r[static_cast<std::size_t>(b)];
  });
  rb.order = idx;
  for (int j : idx) {
    rb.ratio.push_back(r[static_cast<std::size_t>(j)]);
    rb.capacity.push_back(bins[static_cast<std::size_t>(j)].capacity);
  }
  return rb;
}

struct Lb1Result {
  Rational value;
  RankedBins ranking;
};

/// Lb1(W, B) with its certificate, or nullopt when W exceeds the total
/// capacity (the bound is then +infinity). W < 0 is a caller bug.
inline std::optional<Lb1Result> lb1(std::int64_t load, const std::vector<BinSpec>& bins) {
  if (load < 0) throw std::invalid_argument("lb1: negative load");
  Lb1Result res;
  res.ranking = rank_bins(bins);
  RankedBins& rb = res.ranking;
  rb.support.assign(rb.order.size(), 0);
  res.value = 0;
  std::int64_t remaining = load;
  for (int p = 0; p < rb.size(); ++p) {
    const auto up = static_cast<std::size_t>(p);
    const std::int64_t take = std::min(remaining, rb.capacity[up]);
    rb.support[up] = take;
    res.value += rb.ratio[up] * take;
    remaining -= take;
    if (remaining == 0) {
      rb.critical = p;
      break;
    }
  }
  if (remaining > 0) return std::nullopt;
  return res;
}

inline std::optional<Lb1Result> lb1(const Instance& instance) {
  return lb1(instance.total_load(), instance.bins());
}

}  // namespace bpuc
