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

// Bin packing constraint with usage costs.
//
// Variables: x_i (bin of item i), l_j (load of bin j), y_j (bin j open),
// b (number of open bins) and z (total cost, z = sum_j f_j y_j + c_j l_j).
//
// Cost reasoning works on the residual problem B' left by the current load
// bounds: bin j keeps C'_j = hi_j - lo_j free space, pays f'_j = f_j only
// while its open state is unknown, and W' = W - sum_j lo_j units remain to
// be placed. Lb1' = sum_j (lo_j c_j + [open_j] f_j) + Lb1(W', B') bounds z
// from below, and gap = z_hi - Lb1' is the cost increase still allowed.
// Moving load out of (or into) a ranked bin raises the bound at a known
// rate, which yields new load bounds.
//
// All cost arithmetic is exact.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bpuc/bounds.hpp"
#include "bpuc/colgen.hpp"
#include "bpuc/instance.hpp"
#include "bpuc/rational.hpp"

namespace bpuc {

enum class OpenState : std::int8_t { kUnknown, kOpen, kClosed };

/// Domains of one search node. Value type: copy it to branch.
struct DomainStore {
  int num_items = 0;
  int num_bins = 0;
  std::vector<char> candidates;     // [i * num_bins + j]
  std::vector<int> candidate_count;
  std::vector<std::int64_t> load_lo, load_hi;
  std::vector<OpenState> open;
  std::int64_t bins_lo = 0, bins_hi = 0;
  Rational z_lo;
  std::optional<Rational> z_hi;  // nullopt: +infinity
  // Bin dominance: (i, j) means l_j <= l_i and y_j <= y_i.
  std::vector<std::pair<int, int>> dominance;
  // Among open bins, enforce l_i >= l_j whenever c_i <= c_j and C_i >= C_j.
  bool open_bin_dominance = false;
  bool failed = false;
  std::ostream* trace = nullptr;

  static DomainStore create(const Instance& instance) {
    DomainStore s;
    s.num_items = instance.num_items();
    s.num_bins = instance.num_bins();
    s.candidates.assign(static_cast<std::size_t>(s.num_items) * static_cast<std::size_t>(s.num_bins), 1);
    s.candidate_count.assign(static_cast<std::size_t>(s.num_items), s.num_bins);
    s.load_lo.assign(static_cast<std::size_t>(s.num_bins), 0);
    s.load_hi.resize(static_cast<std::size_t>(s.num_bins));
    for (int j = 0; j < s.num_bins; ++j) s.load_hi[static_cast<std::size_t>(j)] = instance.bin(j).capacity;
    s.open.assign(static_cast<std::size_t>(s.num_bins), OpenState::kUnknown);
    s.bins_lo = 0;
    s.bins_hi = s.num_bins;
    s.z_lo = 0;
    if (s.num_items > 0 && s.num_bins == 0) s.failed = true;
    return s;
  }

  std::int64_t lo(int j) const { return load_lo[static_cast<std::size_t>(j)]; }
  std::int64_t hi(int j) const { return load_hi[static_cast<std::size_t>(j)]; }
  OpenState state(int j) const { return open[static_cast<std::size_t>(j)]; }
  bool is_open(int j) const { return state(j) == OpenState::kOpen; }
  bool is_closed(int j) const { return state(j) == OpenState::kClosed; }
  bool allows(int i, int j) const {
    return candidates[static_cast<std::size_t>(i) * static_cast<std::size_t>(num_bins) +
                      static_cast<std::size_t>(j)] != 0;
  }
  bool grounded(int i) const { return candidate_count[static_cast<std::size_t>(i)] == 1; }
  int assigned_bin(int i) const {
    if (!grounded(i)) return -1;
    for (int j = 0; j < num_bins; ++j)
      if (allows(i, j)) return j;
    return -1;
  }
  bool all_grounded() const {
    return std::all_of(candidate_count.begin(), candidate_count.end(), [](int c) { return c == 1; });
  }

  // ---- Mutators. Each returns true when a domain shrank and sets `failed`
  // on a wipe-out. Load and open-state mutators also apply channelling.

  bool remove(int i, int j, const char* rule) {
    auto& c = candidates[static_cast<std::size_t>(i) * static_cast<std::size_t>(num_bins) +
                         static_cast<std::size_t>(j)];
    if (!c) return false;
    std::string before = trace ? item_domain(i) : std::string();
    c = 0;
    if (--candidate_count[static_cast<std::size_t>(i)] == 0) failed = true;
    if (trace) log(rule, "x" + std::to_string(i + 1), before, item_domain(i));
    return true;
  }

  bool assign(int i, int j, const char* rule) {
    if (!allows(i, j)) {
      failed = true;
      return true;
    }
    if (grounded(i)) return false;
    std::string before = trace ? item_domain(i) : std::string();
    for (int k = 0; k < num_bins; ++k)
      candidates[static_cast<std::size_t>(i) * static_cast<std::size_t>(num_bins) +
                 static_cast<std::size_t>(k)] = k == j;
    candidate_count[static_cast<std::size_t>(i)] = 1;
    if (trace) log(rule, "x" + std::to_string(i + 1), before, item_domain(i));
    return true;
  }

  bool raise_lo(int j, std::int64_t v, const char* rule) {
    auto& l = load_lo[static_cast<std::size_t>(j)];
    if (v <= l) return false;
    if (trace) log(rule, "l" + std::to_string(j + 1), interval(l, hi(j)), interval(v, hi(j)));
    l = v;
    if (l > hi(j)) failed = true;
    if (l > 0) set_open(j, "channel");
    return true;
  }

  bool lower_hi(int j, std::int64_t v, const char* rule) {
    auto& h = load_hi[static_cast<std::size_t>(j)];
    if (v >= h) return false;
    if (trace) log(rule, "l" + std::to_string(j + 1), interval(lo(j), h), interval(lo(j), v));
    h = v;
    if (lo(j) > h) failed = true;
    return true;
  }

  bool set_open(int j, const char* rule) {
    auto& s = open[static_cast<std::size_t>(j)];
    if (s == OpenState::kOpen) return false;
    if (s == OpenState::kClosed) {
      failed = true;
      return true;
    }
    if (trace) log(rule, "y" + std::to_string(j + 1), "[0,1]", "[1,1]");
    s = OpenState::kOpen;
    return true;
  }

  bool set_closed(int j, const char* rule) {
    auto& s = open[static_cast<std::size_t>(j)];
    if (s == OpenState::kClosed) return false;
    if (s == OpenState::kOpen) {
      failed = true;
      return true;
    }
    if (trace) log(rule, "y" + std::to_string(j + 1), "[0,1]", "[0,0]");
    s = OpenState::kClosed;
    lower_hi(j, 0, "channel");
    return true;
  }

  bool raise_z_lo(const Rational& v, const char* rule) {
    if (v <= z_lo) return false;
    if (trace) log(rule, "z", z_interval(z_lo), z_interval(v));
    z_lo = v;
    if (z_hi && z_lo > *z_hi) failed = true;
    return true;
  }

  bool lower_z_hi(const Rational& v, const char* rule) {
    if (z_hi && v >= *z_hi) return false;
    if (trace) {
      std::string before = z_interval(z_lo);
      z_hi = v;
      log(rule, "z", before, z_interval(z_lo));
    }
    z_hi = v;
    if (z_lo > *z_hi) failed = true;
    return true;
  }

 private:
  static std::string interval(std::int64_t a, std::int64_t b) {
    return "[" + std::to_string(a) + "," + std::to_string(b) + "]";
  }
  std::string z_interval(const Rational& low) const {
    return "[" + format_fixed(low, 6) + "," + (z_hi ? format_fixed(*z_hi, 6) : std::string("inf")) + "]";
  }
  std::string item_domain(int i) const {
    std::string s = "{";
    bool first = true;
    for (int j = 0; j < num_bins; ++j) {
      if (!allows(i, j)) continue;
      if (!first) s += ",";
      s += std::to_string(j + 1);
      first = false;
    }
    return s + "}";
  }
  void log(const char* rule, const std::string& var, const std::string& before,
           const std::string& after) const {
    *trace << "rule " << rule << " var " << var << " old " << before << " new " << after << '\n';
  }
};

// ---------- Residual problem ----------

/// B', W' and the cost already committed by the load lower bounds and the
/// open bins. Closed bins keep capacity 0 and so drop out of the ranking.
struct ResidualProblem {
  std::vector<BinSpec> bins;
  std::int64_t load = 0;
  Rational committed;
  std::vector<std::int64_t> lower;  // lo_j snapshot

  /// B'': the residual bins with the space supporting Lb1(W', B') removed.
  /// With `clear_critical`, the critical bin loses all of its space.
  std::vector<BinSpec> without_support(const RankedBins& rb, bool clear_critical) const {
    std::vector<BinSpec> out = bins;
    for (int p = 0; p < rb.size(); ++p) {
      auto& b = out[static_cast<std::size_t>(rb.order[static_cast<std::size_t>(p)])];
      if (p < rb.critical || (p == rb.critical && clear_critical))
        b.capacity = 0;
      else if (p == rb.critical)
        b.capacity -= rb.support[static_cast<std::size_t>(p)];
    }
    return out;
  }
};

inline ResidualProblem residual(const DomainStore& store, const Instance& instance) {
  ResidualProblem r;
  r.load = instance.total_load();
  r.committed = 0;
  for (int j = 0; j < store.num_bins; ++j) {
    const BinSpec& b = instance.bin(j);
    BinSpec rb;
    rb.unit_cost = b.unit_cost;
    rb.fixed_cost = store.is_open(j) ? Rational(0) : b.fixed_cost;
    rb.capacity = store.is_closed(j) ? 0 : store.hi(j) - store.lo(j);
    r.bins.push_back(rb);
    r.load -= store.lo(j);
    r.lower.push_back(store.lo(j));
    r.committed += b.unit_cost * store.lo(j);
    if (store.is_open(j)) r.committed += b.fixed_cost;
  }
  return r;
}

// ---------- Load bounds from the ranked residual bins ----------

/// Smallest load of ranked bin at position j <= k: the most that can leave
/// it, moved to the cheapest free space after the support, without the
/// cost increase exceeding `gap`. `lower` is the current lo of that bin.
inline std::int64_t min_load_bound(const RankedBins& rb, int j, const Rational& gap, std::int64_t lower) {
  const int k = rb.critical;
  const auto uj = static_cast<std::size_t>(j);
  const std::int64_t support = rb.support[uj];
  Rational cost_inc = 0;
  std::int64_t q = 0;
  int b = j == k ? k + 1 : k;
  while (q < support && b < rb.size()) {
    const auto ub = static_cast<std::size_t>(b);
    const std::int64_t load_add = std::min(support - q, rb.capacity[ub] - rb.support[ub]);
    const Rational slope = rb.ratio[ub] - rb.ratio[uj];
    const Rational inc = slope * load_add;
    if (inc + cost_inc > gap) {
      q += to_int64(floor_of((gap - cost_inc) / slope));
      return lower + support - q;
    }
    cost_inc += inc;
    q += load_add;
    ++b;
  }
  return lower;
}

/// Largest load of ranked bin at position j >= k: load pulled from the
/// support (most expensive first) until the cost increase exceeds `gap`.
inline std::int64_t max_load_bound(const RankedBins& rb, int j, const Rational& gap, std::int64_t lower,
                                   std::int64_t upper) {
  const int k = rb.critical;
  const auto uj = static_cast<std::size_t>(j);
  const std::int64_t room = rb.capacity[uj];
  Rational cost_inc = 0;
  std::int64_t q = 0;
  int b = k;
  if (j == k) {
    q = rb.support[static_cast<std::size_t>(k)];
    b = k - 1;
  }
  while (q < room && b >= 0) {
    const auto ub = static_cast<std::size_t>(b);
    const std::int64_t load_add = std::min(rb.support[ub], room - q);
    const Rational slope = rb.ratio[uj] - rb.ratio[ub];
    const Rational inc = slope * load_add;
    if (inc + cost_inc > gap) {
      q += to_int64(floor_of((gap - cost_inc) / slope));
      return lower + q;
    }
    cost_inc += inc;
    q += load_add;
    --b;
  }
  return upper;
}

// ---------- Rules ----------

struct PropagationConfig {
  bool dp_filter = false;
  bool colgen_bound = false;
};

/// Columns kept between successive z2 propagations.
struct ColumnCache {
  std::vector<Column> columns;
  int calls = 0;
  int last_master_solves = 0;
};

/// Result of the cost bound on the current store.
struct CostBound {
  bool feasible = false;
  Rational value;                 // Lb1'
  std::optional<Rational> gap;    // nullopt when z_hi is infinite
  ResidualProblem residual;
  RankedBins ranking;
};

/// y closed => l = 0; l > 0 => y open.
inline bool channel(DomainStore& s) {
  bool changed = false;
  for (int j = 0; j < s.num_bins && !s.failed; ++j) {
    if (s.is_closed(j)) changed |= s.lower_hi(j, 0, "channel");
    if (s.lo(j) > 0) changed |= s.set_open(j, "channel");
  }
  return changed;
}

/// Item/load consistency: packed and candidate sums bound each load, the
/// loads sum to W, and an item leaves a bin it would overflow or is
/// committed to a bin that cannot reach its minimum without it.
inline bool item_load_channel(DomainStore& s, const Instance& instance) {
  const int n = s.num_items, m = s.num_bins;
  bool any = false;
  for (bool changed = true; changed && !s.failed;) {
    changed = false;
    std::vector<std::int64_t> packed(static_cast<std::size_t>(m), 0), possible(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < n; ++i) {
      const int j = s.assigned_bin(i);
      if (j >= 0) {
        packed[static_cast<std::size_t>(j)] += instance.size(i);
        continue;
      }
      for (int k = 0; k < m; ++k)
        if (s.allows(i, k)) possible[static_cast<std::size_t>(k)] += instance.size(i);
    }
    for (int j = 0; j < m && !s.failed; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (packed[uj] > s.hi(j)) {
        s.failed = true;
        return true;
      }
      changed |= s.raise_lo(j, packed[uj], "pack");
      changed |= s.lower_hi(j, packed[uj] + possible[uj], "pack");
    }
    if (s.failed) return true;
    std::int64_t sum_lo = 0, sum_hi = 0;
    for (int j = 0; j < m; ++j) {
      sum_lo += s.lo(j);
      sum_hi += s.hi(j);
    }
    const std::int64_t total = instance.total_load();
    if (sum_lo > total || sum_hi < total) {
      s.failed = true;
      return true;
    }
    for (int j = 0; j < m && !s.failed; ++j) {
      changed |= s.raise_lo(j, total - (sum_hi - s.hi(j)), "load-sum");
      changed |= s.lower_hi(j, total - (sum_lo - s.lo(j)), "load-sum");
    }
    for (int i = 0; i < n && !s.failed; ++i) {
      if (s.grounded(i)) continue;
      const std::int64_t w = instance.size(i);
      for (int j = 0; j < m && !s.failed; ++j) {
        if (!s.allows(i, j)) continue;
        const auto uj = static_cast<std::size_t>(j);
        if (packed[uj] + w > s.hi(j)) {
          changed |= s.remove(i, j, "pack");
        } else if (packed[uj] + possible[uj] - w < s.lo(j)) {
          changed |= s.assign(i, j, "pack");
          break;
        }
      }
    }
    any |= changed;
    // Packed/possible sums are stale after an item update; recompute.
  }
  return any;
}

/// Static dominance pairs and, when enabled, the open-bin load ordering.
inline bool dominance_rule(DomainStore& s, const Instance& instance) {
  bool changed = false;
  auto order = [&](int i, int j) {  // l_i >= l_j
    changed |= s.raise_lo(i, s.lo(j), "dominance");
    changed |= s.lower_hi(j, s.hi(i), "dominance");
  };
  for (const auto& [i, j] : s.dominance) {
    if (s.failed) return true;
    if (s.is_open(j)) changed |= s.set_open(i, "dominance");
    if (s.is_closed(i)) changed |= s.set_closed(j, "dominance");
    order(i, j);
  }
  if (!s.open_bin_dominance) return changed;
  for (int i = 0; i < s.num_bins && !s.failed; ++i) {
    if (!s.is_open(i)) continue;
    for (int j = 0; j < s.num_bins && !s.failed; ++j) {
      if (i == j || !s.is_open(j)) continue;
      const BinSpec& a = instance.bin(i);
      const BinSpec& b = instance.bin(j);
      if (a.unit_cost > b.unit_cost || a.capacity < b.capacity) continue;
      if (a.unit_cost == b.unit_cost && a.capacity == b.capacity &&
          !(a.fixed_cost < b.fixed_cost || (a.fixed_cost == b.fixed_cost && i < j)))
        continue;
      order(i, j);
    }
  }
  return changed;
}

/// Lb1' = committed + Lb1(W', B'); raises z_lo and reports the gap.
inline CostBound lower_bound_z(DomainStore& s, const Instance& instance) {
  CostBound cb;
  if (s.failed) return cb;
  cb.residual = residual(s, instance);
  if (cb.residual.load < 0) {
    s.failed = true;
    return cb;
  }
  auto lb = lb1(cb.residual.load, cb.residual.bins);
  if (!lb) {
    s.failed = true;
    return cb;
  }
  cb.feasible = true;
  cb.value = cb.residual.committed + lb->value;
  cb.ranking = std::move(lb->ranking);
  s.raise_z_lo(cb.value, "lb1");
  if (s.z_hi) {
    cb.gap = *s.z_hi - cb.value;
    if (*cb.gap < 0) s.failed = true;
  }
  return cb;
}

/// New lower bound of the bin at ranked position j (j <= k).
inline std::int64_t update_min_load(const CostBound& cb, int j) {
  const int bin = cb.ranking.order[static_cast<std::size_t>(j)];
  const std::int64_t lower = cb.residual.lower[static_cast<std::size_t>(bin)];
  if (!cb.gap) return lower;
  return min_load_bound(cb.ranking, j, *cb.gap, lower);
}

/// New upper bound of the bin at ranked position j (j >= k).
inline std::int64_t update_max_load(const CostBound& cb, int j, std::int64_t upper) {
  const int bin = cb.ranking.order[static_cast<std::size_t>(j)];
  const std::int64_t lower = cb.residual.lower[static_cast<std::size_t>(bin)];
  if (!cb.gap) return upper;
  return max_load_bound(cb.ranking, j, *cb.gap, lower, upper);
}

/// Applies both load rules over the ranking of `cb`.
inline bool load_bound_rules(DomainStore& s, const CostBound& cb) {
  if (!cb.feasible || !cb.gap || s.failed) return false;
  bool changed = false;
  const int k = cb.ranking.critical;
  for (int p = 0; p < cb.ranking.size() && !s.failed; ++p) {
    const int bin = cb.ranking.order[static_cast<std::size_t>(p)];
    if (p <= k) changed |= s.raise_lo(bin, update_min_load(cb, p), "min-load");
    if (p >= k && !s.failed) changed |= s.lower_hi(bin, update_max_load(cb, p, s.hi(bin)), "max-load");
  }
  return changed;
}

/// Closes every bin whose opening alone pushes Lb1' above z_hi.
inline bool filter_open_vars(DomainStore& s, const Instance& instance, const CostBound& cb) {
  if (!cb.feasible || !cb.gap || s.failed) return false;
  bool changed = false;
  for (int j = 0; j < s.num_bins && !s.failed; ++j) {
    if (s.state(j) != OpenState::kUnknown) continue;
    const Rational& fixed = instance.bin(j).fixed_cost;
    if (fixed == 0) continue;
    std::vector<BinSpec> bins = cb.residual.bins;
    bins[static_cast<std::size_t>(j)].fixed_cost = 0;
    auto lb = lb1(cb.residual.load, bins);
    if (!lb) continue;
    const Rational opened = cb.residual.committed + fixed + lb->value;
    if (opened > *s.z_hi) changed |= s.set_closed(j, "open-cost");
  }
  return changed;
}

/// Snaps lo_j / hi_j to the nearest loads reachable from the items packed
/// in bin j plus any subset of its remaining candidates.
inline bool dp_load_filter(DomainStore& s, const Instance& instance, int j) {
  if (s.failed) return false;
  std::int64_t packed = 0;
  std::vector<std::int64_t> free_sizes;
  for (int i = 0; i < s.num_items; ++i) {
    if (!s.allows(i, j)) continue;
    if (s.grounded(i))
      packed += instance.size(i);
    else
      free_sizes.push_back(instance.size(i));
  }
  const std::int64_t hi = s.hi(j);
  if (packed > hi) {
    s.failed = true;
    return true;
  }
  auto reach = reachable_sums(free_sizes, hi - packed);
  std::int64_t new_lo = -1, new_hi = -1;
  for (std::int64_t v = std::max(s.lo(j), packed); v <= hi; ++v)
    if (reach[static_cast<std::size_t>(v - packed)]) {
      new_lo = v;
      break;
    }
  for (std::int64_t v = hi; v >= std::max(s.lo(j), packed); --v)
    if (reach[static_cast<std::size_t>(v - packed)]) {
      new_hi = v;
      break;
    }
  if (new_lo < 0) {
    s.failed = true;
    return true;
  }
  bool changed = s.raise_lo(j, new_lo, "dp-load");
  changed |= s.lower_hi(j, new_hi, "dp-load");
  return changed;
}

/// Column-generation restrictions implied by the store.
inline Restrictions restrictions_from(const DomainStore& s, const Instance& instance) {
  Restrictions r;
  const auto& groups = instance.groups();
  r.remaining.assign(groups.size(), 0);
  r.bins.assign(static_cast<std::size_t>(s.num_bins), BinRestriction{});
  for (auto& b : r.bins) b.usable.assign(groups.size(), 0);
  std::vector<std::int64_t> packed(static_cast<std::size_t>(s.num_bins), 0);
  for (int i = 0; i < s.num_items; ++i) {
    const auto d = static_cast<std::size_t>(instance.group_of(i));
    const int j = s.assigned_bin(i);
    if (j >= 0) {
      packed[static_cast<std::size_t>(j)] += instance.size(i);
      continue;
    }
    ++r.remaining[d];
    for (int k = 0; k < s.num_bins; ++k)
      if (s.allows(i, k)) ++r.bins[static_cast<std::size_t>(k)].usable[d];
  }
  r.constant = 0;
  for (int j = 0; j < s.num_bins; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const BinSpec& b = instance.bin(j);
    r.bins[uj].forced_open = s.is_open(j);
    r.bins[uj].capacity = s.is_closed(j) ? 0 : std::max<std::int64_t>(0, s.hi(j) - packed[uj]);
    r.constant += b.unit_cost * packed[uj];
    if (s.is_open(j)) r.constant += b.fixed_cost;
  }
  return r;
}

/// Safe rounding for LP values used to prune.
inline Rational safe_lower(double value) {
  const double v = value - 1e-6 * (1.0 + (value < 0 ? -value : value));
  return Rational(v);
}

/// Raises z_lo to the (safely rounded) z2 of the restricted problem.
inline bool propagate_z2(DomainStore& s, const Instance& instance, ColumnCache& cache) {
  if (s.failed) return false;
  Restrictions r = restrictions_from(s, instance);
  Z2Result z = solve_z2(instance, r, cache.columns);
  ++cache.calls;
  cache.last_master_solves = z.master_solves;
  if (z.lp_status != LpStatus::kOptimal) return false;  // no bound, no pruning
  cache.columns = std::move(z.columns);
  if (!z.feasible) {
    s.failed = true;
    return true;
  }
  return s.raise_z_lo(safe_lower(z.bound), "z2");
}

/// One pass of every cheap rule; returns whether a domain shrank.
/// `bound` receives the cost bound computed during the pass.
inline bool sweep(DomainStore& s, const Instance& instance, const PropagationConfig& config,
                  CostBound* bound = nullptr) {
  bool changed = channel(s);
  if (!s.failed) changed |= item_load_channel(s, instance);
  if (!s.failed) changed |= dominance_rule(s, instance);
  if (s.failed) return true;
  CostBound cb = lower_bound_z(s, instance);
  if (s.failed) return true;
  changed |= load_bound_rules(s, cb);
  if (!s.failed) changed |= channel(s);
  if (!s.failed) changed |= filter_open_vars(s, instance, cb);
  if (config.dp_filter)
    for (int j = 0; j < s.num_bins && !s.failed; ++j) changed |= dp_load_filter(s, instance, j);
  if (bound) *bound = std::move(cb);
  return changed || s.failed;
}

/// Runs every rule until nothing changes. Returns false on failure.
inline bool fixpoint(DomainStore& s, const Instance& instance, const PropagationConfig& config,
                     ColumnCache* cache = nullptr) {
  if (s.failed) return false;
  s.bins_lo = std::max<std::int64_t>(s.bins_lo, instance.total_load() > 0 ? 1 : 0);
  while (sweep(s, instance, config)) {
    if (s.failed) return false;
  }
  // Open-bin counting for b.
  std::int64_t opened = 0, closed = 0;
  for (int j = 0; j < s.num_bins; ++j) {
    opened += s.is_open(j);
    closed += s.is_closed(j);
  }
  s.bins_lo = std::max(s.bins_lo, opened);
  s.bins_hi = std::min<std::int64_t>(s.bins_hi, s.num_bins - closed);
  if (s.bins_lo > s.bins_hi) s.failed = true;
  if (!s.failed && config.colgen_bound && cache) propagate_z2(s, instance, *cache);
  return !s.failed;
}

}  // namespace bpuc
