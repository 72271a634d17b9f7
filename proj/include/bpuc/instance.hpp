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

// Problem data for bin packing with linear usage costs: each bin j has a
// capacity C_j, a fixed opening cost f_j and a cost c_j per unit of load.
// A used bin with load l_j costs f_j + c_j * l_j; an empty bin costs nothing.
//
// Bin and item indices are 0-based in this API and 1-based in every text
// format (files, CLI output).

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bpuc/random.hpp"
#include "bpuc/rational.hpp"

namespace bpuc {

enum class Status { kOptimal, kFeasible, kInfeasible, kUnknown };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "OPTIMAL";
    case Status::kFeasible: return "FEASIBLE";
    case Status::kInfeasible: return "INFEASIBLE";
    case Status::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

struct BinSpec {
  std::int64_t capacity = 0;
  Rational fixed_cost;
  Rational unit_cost;

  friend bool operator==(const BinSpec& a, const BinSpec& b) {
    return a.capacity == b.capacity && a.fixed_cost == b.fixed_cost &&
           a.unit_cost == b.unit_cost;
  }
};

struct SizeGroup {
  std::int64_t size = 0;
  std::int64_t count = 0;
  friend bool operator==(const SizeGroup&, const SizeGroup&) = default;
};

inline std::vector<SizeGroup> group_sizes(const std::vector<std::int64_t>& sorted_sizes) {
  std::vector<SizeGroup> groups;
  for (std::int64_t w : sorted_sizes) {
    if (!groups.empty() && groups.back().size == w)
      ++groups.back().count;
    else
      groups.push_back({w, 1});
  }
  return groups;
}

/// Immutable, validated problem instance. Sizes are kept sorted
/// non-decreasing; the constructor sorts them.
class Instance {
 public:
  Instance() = default;

  Instance(std::vector<BinSpec> bins, std::vector<std::int64_t> sizes)
      : bins_(std::move(bins)), sizes_(std::move(sizes)) {
    for (const BinSpec& b : bins_) {
      if (b.capacity < 0 || b.fixed_cost < 0 || b.unit_cost < 0)
        throw std::invalid_argument("bin capacity and costs must be non-negative");
    }
    for (std::int64_t w : sizes_)
      if (w <= 0) throw std::invalid_argument("item sizes must be positive");
    std::sort(sizes_.begin(), sizes_.end());
    total_load_ = std::accumulate(sizes_.begin(), sizes_.end(), std::int64_t{0});
    for (const BinSpec& b : bins_) max_capacity_ = std::max(max_capacity_, b.capacity);
    groups_ = bpuc::group_sizes(sizes_);
    mpz_class den = 1;
    for (const BinSpec& b : bins_) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), b.fixed_cost.get_den_mpz_t());
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), b.unit_cost.get_den_mpz_t());
    }
    cost_denominator_ = den;
  }

  const std::vector<BinSpec>& bins() const { return bins_; }
  const BinSpec& bin(int j) const { return bins_[static_cast<std::size_t>(j)]; }
  const std::vector<std::int64_t>& sizes() const { return sizes_; }
  std::int64_t size(int i) const { return sizes_[static_cast<std::size_t>(i)]; }
  int num_items() const { return static_cast<int>(sizes_.size()); }
  int num_bins() const { return static_cast<int>(bins_.size()); }
  std::int64_t total_load() const { return total_load_; }
  std::int64_t max_capacity() const { return max_capacity_; }
  std::int64_t total_capacity() const {
    std::int64_t s = 0;
    for (const BinSpec& b : bins_) s += b.capacity;
    return s;
  }
  /// Distinct sizes w'_1 < ... < w'_n' with multiplicities q_d.
  const std::vector<SizeGroup>& groups() const { return groups_; }
  /// Index of the size group that item i belongs to.
  int group_of(int i) const {
    const std::int64_t w = size(i);
    auto it = std::lower_bound(groups_.begin(), groups_.end(), w,
                               [](const SizeGroup& g, std::int64_t v) { return g.size < v; });
    return static_cast<int>(it - groups_.begin());
  }
  /// Every packing cost is an integer multiple of 1 / cost_denominator().
  const mpz_class& cost_denominator() const { return cost_denominator_; }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.bins_ == b.bins_ && a.sizes_ == b.sizes_;
  }

 private:
  std::vector<BinSpec> bins_;
  std::vector<std::int64_t> sizes_;
  std::int64_t total_load_ = 0;
  std::int64_t max_capacity_ = 0;
  std::vector<SizeGroup> groups_;
  mpz_class cost_denominator_ = 1;
};

inline std::vector<SizeGroup> group_sizes(const Instance& instance) { return instance.groups(); }

struct Solution {
  std::vector<int> assignment;  // bin of each item
  std::vector<std::int64_t> loads;
  Rational objective;
  Status status = Status::kUnknown;
};

/// Loads and exact objective of an assignment. Zero-load bins cost nothing.
/// Status is FEASIBLE when every load fits its capacity, INFEASIBLE otherwise.
inline Solution evaluate(const Instance& instance, const std::vector<int>& assignment) {
  if (static_cast<int>(assignment.size()) != instance.num_items())
    throw std::invalid_argument("assignment length differs from item count");
  Solution sol;
  sol.assignment = assignment;
  sol.loads.assign(static_cast<std::size_t>(instance.num_bins()), 0);
  for (int i = 0; i < instance.num_items(); ++i) {
    const int j = assignment[static_cast<std::size_t>(i)];
    if (j < 0 || j >= instance.num_bins())
      throw std::out_of_range("bin index " + std::to_string(j + 1) + " out of range for item " +
                              std::to_string(i + 1));
    sol.loads[static_cast<std::size_t>(j)] += instance.size(i);
  }
  bool fits = true;
  sol.objective = 0;
  for (int j = 0; j < instance.num_bins(); ++j) {
    const std::int64_t l = sol.loads[static_cast<std::size_t>(j)];
    const BinSpec& b = instance.bin(j);
    if (l > b.capacity) fits = false;
    if (l > 0) sol.objective += b.fixed_cost + b.unit_cost * l;
  }
  sol.status = fits ? Status::kFeasible : Status::kInfeasible;
  return sol;
}

// ---------- Text formats ----------

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline bool is_skippable(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

inline std::int64_t parse_int(const std::string& tok, int line, const char* what) {
  auto r = parse_rational(tok);
  if (!r || r->get_den() != 1) throw ParseError(line, std::string("malformed ") + what + " '" + tok + "'");
  if (*r < 0) throw ParseError(line, std::string("negative ") + what + " '" + tok + "'");
  if (abs(r->get_num()) > mpz_class("1000000000000")) throw ParseError(line, std::string(what) + " too large");
  return to_int64(r->get_num());
}

inline Rational parse_cost(const std::string& tok, int line, const char* what) {
  auto r = parse_rational(tok);
  if (!r) throw ParseError(line, std::string("malformed ") + what + " '" + tok + "'");
  if (*r < 0) throw ParseError(line, std::string("negative ") + what + " '" + tok + "'");
  return *r;
}

}  // namespace detail

/// Reads the instance text format:
///   line 1:        m n
///   next m lines:  C_j f_j c_j      (costs: integers, decimals or p/q)
///   remaining:     n item sizes, whitespace separated, any number of lines
/// Lines starting with '#' are comments.
inline Instance parse_instance(std::istream& in) {
  std::string line;
  int lineno = 0;
  int m = -1, n = -1;
  std::vector<BinSpec> bins;
  std::vector<std::int64_t> sizes;
  int last_line = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_skippable(line)) continue;
    last_line = lineno;
    auto toks = detail::split_ws(line);
    if (m < 0) {
      if (toks.size() != 2) throw ParseError(lineno, "header must be 'm n'");
      m = static_cast<int>(detail::parse_int(toks[0], lineno, "bin count"));
      n = static_cast<int>(detail::parse_int(toks[1], lineno, "item count"));
      continue;
    }
    if (static_cast<int>(bins.size()) < m) {
      if (toks.size() != 3) throw ParseError(lineno, "bin line must be 'C f c'");
      BinSpec b;
      b.capacity = detail::parse_int(toks[0], lineno, "capacity");
      b.fixed_cost = detail::parse_cost(toks[1], lineno, "fixed cost");
      b.unit_cost = detail::parse_cost(toks[2], lineno, "unit cost");
      bins.push_back(std::move(b));
      continue;
    }
    for (const auto& tok : toks) {
      std::int64_t w = detail::parse_int(tok, lineno, "item size");
      if (w == 0) throw ParseError(lineno, "item size must be positive");
      sizes.push_back(w);
    }
    if (static_cast<int>(sizes.size()) > n)
      throw ParseError(lineno, "more item sizes than the declared " + std::to_string(n));
  }
  if (m < 0) throw ParseError(lineno, "missing header");
  if (static_cast<int>(bins.size()) < m)
    throw ParseError(lineno, "expected " + std::to_string(m) + " bin lines, found " +
                                 std::to_string(bins.size()));
  if (static_cast<int>(sizes.size()) != n)
    throw ParseError(last_line, "expected " + std::to_string(n) + " item sizes, found " +
                                    std::to_string(sizes.size()));
  return Instance(std::move(bins), std::move(sizes));
}

inline Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline void write_instance(std::ostream& out, const Instance& instance) {
  out << instance.num_bins() << ' ' << instance.num_items() << '\n';
  for (const BinSpec& b : instance.bins())
    out << b.capacity << ' ' << format_exact(b.fixed_cost) << ' ' << format_exact(b.unit_cost)
        << '\n';
  for (int i = 0; i < instance.num_items(); ++i) out << (i ? " " : "") << instance.size(i);
  out << '\n';
}

inline std::string to_text(const Instance& instance) {
  std::ostringstream out;
  write_instance(out, instance);
  return out.str();
}

/// status <S> / objective <v> / item <i> bin <j> ... / load <j> <l> ...
inline void write_solution(std::ostream& out, const Solution& sol) {
  out << "status " << to_string(sol.status) << '\n';
  const bool has_packing = !sol.assignment.empty() || !sol.loads.empty();
  if (sol.status == Status::kInfeasible && !has_packing) return;
  if (sol.status == Status::kUnknown && !has_packing) return;
  out << "objective " << format_fixed(sol.objective, 6) << '\n';
  for (std::size_t i = 0; i < sol.assignment.size(); ++i)
    out << "item " << i + 1 << " bin " << sol.assignment[i] + 1 << '\n';
  for (std::size_t j = 0; j < sol.loads.size(); ++j)
    out << "load " << j + 1 << ' ' << sol.loads[j] << '\n';
}

/// Reads the assignment back from the solution format. Objective and loads
/// are recomputed by the caller through evaluate().
inline std::vector<int> parse_assignment(std::istream& in, int num_items) {
  std::vector<int> assignment(static_cast<std::size_t>(num_items), -1);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_skippable(line)) continue;
    auto toks = detail::split_ws(line);
    if (toks[0] != "item") continue;
    if (toks.size() != 4 || toks[2] != "bin") throw ParseError(lineno, "expected 'item <i> bin <j>'");
    auto i = detail::parse_int(toks[1], lineno, "item index");
    auto j = detail::parse_int(toks[3], lineno, "bin index");
    if (i < 1 || i > num_items) throw ParseError(lineno, "item index out of range");
    if (j < 1) throw ParseError(lineno, "bin index out of range");
    assignment[static_cast<std::size_t>(i - 1)] = static_cast<int>(j - 1);
  }
  for (int i = 0; i < num_items; ++i)
    if (assignment[static_cast<std::size_t>(i)] < 0)
      throw ParseError(lineno, "no bin given for item " + std::to_string(i + 1));
  return assignment;
}

// ---------- Preprocessing ----------

/// Subset sums of `sizes` reachable up to `limit` (inclusive), as a bitmap.
inline std::vector<char> reachable_sums(const std::vector<std::int64_t>& sizes, std::int64_t limit) {
  std::vector<char> reach(static_cast<std::size_t>(limit + 1), 0);
  reach[0] = 1;
  std::int64_t hi = 0;
  for (std::int64_t w : sizes) {
    if (w > limit) continue;
    for (std::int64_t s = std::min(hi, limit - w); s >= 0; --s)
      if (reach[static_cast<std::size_t>(s)]) reach[static_cast<std::size_t>(s + w)] = 1;
    hi = std::min(limit, hi + w);
  }
  return reach;
}

/// Replaces each capacity by the largest subset sum of the item sizes that
/// does not exceed it. Costs are unchanged.
inline Instance tighten_capacities(const Instance& instance) {
  auto reach = reachable_sums(instance.sizes(), instance.max_capacity());
  std::vector<BinSpec> bins = instance.bins();
  for (BinSpec& b : bins) {
    std::int64_t c = b.capacity;
    while (c > 0 && !reach[static_cast<std::size_t>(c)]) --c;
    b.capacity = c;
  }
  return Instance(std::move(bins), instance.sizes());
}

/// Ordered pairs (i, j) where bin i dominates bin j: f_i <= f_j, c_i <= c_j
/// and C_i >= C_j. Identical bins only yield the pair with i < j.
inline std::vector<std::pair<int, int>> dominance_pairs(const Instance& instance) {
  std::vector<std::pair<int, int>> pairs;
  const int m = instance.num_bins();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const BinSpec& a = instance.bin(i);
      const BinSpec& b = instance.bin(j);
      if (!(a.fixed_cost <= b.fixed_cost && a.unit_cost <= b.unit_cost && a.capacity >= b.capacity))
        continue;
      const bool identical = a == b;
      if (identical && i > j) continue;
      pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

// ---------- Random generation ----------

enum class Scale { kSmall, kLarge };

struct GeneratorParams {
  int n = 15;
  int m = 10;
  int size_class = 1;  // 1: [1,100], 2: [20,100], 3: [50,100]
  Scale scale = Scale::kSmall;
  std::uint64_t seed = 1;
};

/// Draw order from one SplitMix64 stream: n sizes, then m capacities
/// (redrawn as a whole vector until total capacity covers the load), then
/// m unit costs k / 10^6 with k uniform in [0, 10^6]. Fixed cost = capacity.
inline Instance generate(const GeneratorParams& p) {
  if (p.n < 1 || p.m < 1) throw std::invalid_argument("generate requires n, m >= 1");
  if (p.size_class < 1 || p.size_class > 3) throw std::invalid_argument("size class must be 1, 2 or 3");
  static constexpr std::int64_t kLow[3] = {1, 20, 50};
  static constexpr std::int64_t kSmallCaps[6] = {80, 100, 120, 150, 200, 250};
  static constexpr std::int64_t kLargeCaps[6] = {800, 1000, 1200, 1500, 2000, 2500};
  SplitMix64 rng(p.seed);
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(p.n));
  std::int64_t total = 0;
  for (auto& w : sizes) {
    w = rng.uniform(kLow[p.size_class - 1], 100);
    total += w;
  }
  const std::int64_t* caps = p.scale == Scale::kSmall ? kSmallCaps : kLargeCaps;
  std::vector<std::int64_t> capacity(static_cast<std::size_t>(p.m));
  for (;;) {
    std::int64_t sum = 0;
    for (auto& c : capacity) {
      c = caps[rng.uniform(0, 5)];
      sum += c;
    }
    if (sum >= total) break;
  }
  std::vector<BinSpec> bins(static_cast<std::size_t>(p.m));
  for (std::size_t j = 0; j < bins.size(); ++j) {
    bins[j].capacity = capacity[j];
    bins[j].fixed_cost = Rational(capacity[j]);
    bins[j].unit_cost = make_rational(rng.uniform(0, 1000000), 1000000);
  }
  return Instance(std::move(bins), std::move(sizes));
}

}  // namespace bpuc
