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

#include <gtest/gtest.h>

#include <random>
#include <regex>
#include <sstream>

#include "bpuc/oracle.hpp"
#include "bpuc/propagation.hpp"
#include "test_support.hpp"

namespace bpuc {
namespace {

using testing::load_data;

DomainStore with_ub(const Instance& inst, const Rational& ub) {
  DomainStore s = DomainStore::create(inst);
  s.z_hi = ub;
  return s;
}

bool contains(const DomainStore& s, const std::vector<int>& a, const Instance& inst) {
  Solution sol = evaluate(inst, a);
  for (int i = 0; i < s.num_items; ++i)
    if (!s.allows(i, a[static_cast<std::size_t>(i)])) return false;
  for (int j = 0; j < s.num_bins; ++j) {
    const auto l = sol.loads[static_cast<std::size_t>(j)];
    if (l < s.lo(j) || l > s.hi(j)) return false;
    if (l > 0 && s.is_closed(j)) return false;
  }
  return true;
}

// ---------- Second example: cost-based load filtering ----------

TEST(SecondExampleTest, RootBoundAndGap) {
  Instance inst = load_data("example2.txt");
  DomainStore s = with_ub(inst, 130);
  CostBound cb = lower_bound_z(s, inst);
  EXPECT_EQ(cb.value, 99);
  EXPECT_EQ(*cb.gap, 31);
  EXPECT_EQ(s.z_lo, 99);
}

TEST(SecondExampleTest, FirstSweep) {
  Instance inst = load_data("example2.txt");
  DomainStore s = with_ub(inst, 130);
  sweep(s, inst, {});
  ASSERT_FALSE(s.failed);
  EXPECT_EQ(s.lo(0), 1);
  EXPECT_EQ(s.lo(2), 1);
  EXPECT_EQ(s.hi(4), 6);
  EXPECT_TRUE(s.is_open(0));
  EXPECT_TRUE(s.is_open(2));
  EXPECT_EQ(s.state(1), OpenState::kUnknown);
  EXPECT_EQ(s.state(3), OpenState::kUnknown);
  EXPECT_EQ(s.state(4), OpenState::kUnknown);
  CostBound cb = lower_bound_z(s, inst);
  EXPECT_EQ(cb.value, make_rational(299, 3));  // 23 + 8 + 68.67
  EXPECT_GE(to_double(cb.value), 99.66);
  EXPECT_LE(to_double(cb.value), 99.67);
  // Bins 3 and 1 are open now: r'_3 = 3 < r'_1 = 5 < r_2 = 16/3.
  EXPECT_EQ(cb.ranking.order[0], 2);
  EXPECT_EQ(cb.ranking.ratio[0], 3);
  EXPECT_EQ(cb.ranking.order[1], 0);
  EXPECT_EQ(cb.ranking.ratio[1], 5);
  EXPECT_EQ(cb.ranking.order[2], 1);
  EXPECT_EQ(cb.ranking.ratio[2], make_rational(16, 3));
}

TEST(SecondExampleTest, IndividualLoadRules) {
  Instance inst = load_data("example2.txt");
  DomainStore s = with_ub(inst, 130);
  CostBound cb = lower_bound_z(s, inst);
  const RankedBins& rb = cb.ranking;
  EXPECT_EQ(update_min_load(cb, rb.position_of(2)), 1);
  EXPECT_EQ(update_min_load(cb, rb.position_of(0)), 1);
  EXPECT_EQ(update_min_load(cb, rb.position_of(1)), 0);
  EXPECT_EQ(update_max_load(cb, rb.position_of(4), 12), 6);
  EXPECT_EQ(update_max_load(cb, rb.position_of(3), 5), 5);
  EXPECT_EQ(update_max_load(cb, rb.position_of(0), 9), 9);
}

TEST(SecondExampleTest, FixpointWithoutDp) {
  Instance inst = load_data("example2.txt");
  DomainStore s = with_ub(inst, 130);
  ASSERT_TRUE(fixpoint(s, inst, {}));
  EXPECT_EQ(s.lo(0), 3);
  EXPECT_EQ(s.lo(2), 3);
  EXPECT_EQ(s.hi(4), 3);
  for (int i = 1; i < 4; ++i) EXPECT_FALSE(s.allows(i, 4)) << "size-5 item " << i;
  EXPECT_TRUE(s.allows(0, 4));
}

TEST(SecondExampleTest, DpFilteringRootBound) {
  Instance inst = load_data("example2.txt");
  PropagationConfig cfg;
  cfg.dp_filter = true;
  for (const Instance& in : {inst, tighten_capacities(inst)}) {
    DomainStore s = with_ub(in, 130);
    ASSERT_TRUE(fixpoint(s, in, cfg));
    EXPECT_GE(to_double(s.z_lo), 119.65);
    EXPECT_LE(to_double(s.z_lo), 119.67);
  }
}

TEST(SecondExampleTest, TraceLines) {
  Instance inst = load_data("example2.txt");
  DomainStore s = with_ub(inst, 130);
  std::ostringstream log;
  s.trace = &log;
  sweep(s, inst, {});
  const std::string text = log.str();
  EXPECT_NE(text.find("rule min-load var l3 old [0,7] new [1,7]\n"), std::string::npos);
  EXPECT_NE(text.find("rule min-load var l1 old [0,9] new [1,9]\n"), std::string::npos);
  EXPECT_NE(text.find("rule max-load var l5 old [0,12] new [0,6]\n"), std::string::npos);
  EXPECT_NE(text.find("rule channel var y1 old [0,1] new [1,1]\n"), std::string::npos);
  const std::regex line(R"(rule [a-z0-9-]+ var [xlyzb]\d* old \S+ new \S+)");
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) EXPECT_TRUE(std::regex_match(l, line)) << l;
}

// ---------- Individual rules ----------

TEST(ChannelTest, ClosedAndPositiveLoads) {
  Instance inst = parse_instance("2 1\n5 1 1\n5 1 1\n1\n");
  DomainStore s = DomainStore::create(inst);
  s.set_closed(0, "test");
  EXPECT_EQ(s.hi(0), 0);
  s.load_lo[1] = 1;
  channel(s);
  EXPECT_TRUE(s.is_open(1));
  DomainStore t = DomainStore::create(inst);
  t.open[0] = OpenState::kClosed;
  t.load_lo[0] = 2;
  channel(t);
  EXPECT_TRUE(t.failed);
}

TEST(ItemLoadTest, PackedSumsAndOverflow) {
  Instance inst = parse_instance("2 2\n10 1 1\n10 1 1\n3 5\n");
  DomainStore s = DomainStore::create(inst);
  s.assign(0, 0, "test");
  s.assign(1, 0, "test");
  item_load_channel(s, inst);
  EXPECT_EQ(s.lo(0), 8);
  EXPECT_EQ(s.hi(1), 0);

  Instance one = parse_instance("1 1\n10 1 1\n5\n");
  DomainStore t = DomainStore::create(one);
  t.load_hi[0] = 4;
  item_load_channel(t, one);
  EXPECT_TRUE(t.failed);
}

TEST(ItemLoadTest, CommitsItemNeededForMinimumLoad) {
  Instance inst = parse_instance("2 2\n10 1 1\n10 1 1\n3 5\n");
  DomainStore s = DomainStore::create(inst);
  s.load_lo[1] = 4;  // only the size-5 item can reach 4
  item_load_channel(s, inst);
  EXPECT_TRUE(s.grounded(1));
  EXPECT_EQ(s.assigned_bin(1), 1);
}

TEST(FilterOpenTest, ExpensiveIdleBinIsClosed) {
  // Bin 2 costs 50 to open and Lb1 puts no load on it.
  Instance inst = parse_instance("2 1\n5 0 1\n5 50 0\n3\n");
  DomainStore s = with_ub(inst, 10);
  CostBound cb = lower_bound_z(s, inst);
  EXPECT_EQ(cb.value, 3);
  filter_open_vars(s, inst, cb);
  EXPECT_TRUE(s.is_closed(1));
  EXPECT_EQ(s.state(0), OpenState::kUnknown);  // f = 0 never closed
}

TEST(DpLoadTest, SnapsToReachableLoads) {
  Instance inst = load_data("example2.txt");
  DomainStore s = DomainStore::create(inst);
  dp_load_filter(s, inst, 2);
  EXPECT_EQ(s.hi(2), 5);  // reachable within 7: 0, 3, 5
  Instance one = parse_instance("1 1\n7 1 1\n4\n");
  DomainStore t = DomainStore::create(one);
  t.load_lo[0] = 1;
  dp_load_filter(t, one, 0);
  EXPECT_EQ(t.lo(0), 4);
  EXPECT_EQ(t.hi(0), 4);
  t.load_lo[0] = 5;
  t.load_hi[0] = 7;
  dp_load_filter(t, one, 0);
  EXPECT_TRUE(t.failed);
}

TEST(LowerBoundTest, UpperBoundBelowLb1Fails) {
  Instance inst = load_data("example2.txt");
  DomainStore s = with_ub(inst, 98);
  EXPECT_FALSE(fixpoint(s, inst, {}));
}

TEST(LowerBoundTest, GroundedStoreGivesExactCost) {
  Instance inst = load_data("example2.txt");
  DomainStore s = with_ub(inst, 1000);
  const std::vector<int> a = {0, 0, 2, 3};
  for (int i = 0; i < 4; ++i) s.assign(i, a[static_cast<std::size_t>(i)], "test");
  for (int j : {1, 4}) s.set_closed(j, "test");
  ASSERT_TRUE(fixpoint(s, inst, {}));
  CostBound cb = lower_bound_z(s, inst);
  EXPECT_EQ(cb.value, evaluate(inst, a).objective);
  EXPECT_EQ(*cb.gap, 1000 - evaluate(inst, a).objective);
}

TEST(Z2PropagationTest, SeparationRoot) {
  Instance inst = load_data("separation.txt");
  DomainStore s = with_ub(inst, 12);
  ColumnCache cache;
  PropagationConfig cfg;
  cfg.colgen_bound = true;
  ASSERT_TRUE(fixpoint(s, inst, cfg, &cache));
  EXPECT_GE(to_double(s.z_lo), 10 - 1e-4);
  EXPECT_FALSE(cache.columns.empty());
}

TEST(Z2PropagationTest, GroundedStoreGivesExactCost) {
  Instance inst = load_data("example2.txt");
  DomainStore s = with_ub(inst, 1000);
  const std::vector<int> a = {0, 0, 2, 3};
  for (int i = 0; i < 4; ++i) s.assign(i, a[static_cast<std::size_t>(i)], "test");
  ColumnCache cache;
  ASSERT_TRUE(fixpoint(s, inst, {}));
  propagate_z2(s, inst, cache);
  EXPECT_NEAR(to_double(s.z_lo), to_double(evaluate(inst, a).objective), 1e-4);
}

TEST(Z2PropagationTest, WarmCacheConvergesInOneSolve) {
  Instance inst = load_data("example2.txt");
  DomainStore s = with_ub(inst, 130);
  ColumnCache cache;
  propagate_z2(s, inst, cache);
  DomainStore again = with_ub(inst, 130);
  propagate_z2(again, inst, cache);
  EXPECT_EQ(cache.last_master_solves, 1);
}

// ---------- Load rules against their definitions ----------

// Lb1 over an explicit bin list, +infinity when the load does not fit.
std::optional<Rational> lb1_or_inf(std::int64_t w, const std::vector<BinSpec>& bins) {
  auto lb = lb1(w, bins);
  if (!lb) return std::nullopt;
  return lb->value;
}

TEST(LoadRuleTest, MatchDefinitionOnRandomResiduals) {
  std::mt19937_64 rng(91);
  std::uniform_int_distribution<int> gap_num(0, 60);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    testing::SmallParams p;
    p.max_bins = 5;
    Instance inst = testing::random_small(rng, p);
    DomainStore s = DomainStore::create(inst);
    auto lb = lb1(inst);
    if (!lb) continue;
    s.z_hi = lb->value + make_rational(gap_num(rng), 4);
    CostBound cb = lower_bound_z(s, inst);
    ASSERT_TRUE(cb.feasible);
    const RankedBins& rb = cb.ranking;
    const int k = rb.critical;
    const Rational& gap = *cb.gap;
    for (int j = 0; j < rb.size(); ++j) {
      const int bin = rb.order[j];
      const std::int64_t lower = s.lo(bin), upper = s.hi(bin);
      if (j <= k) {
        // Largest q in [0, L_j] with Lb1(q, B'') - q r_j <= gap. The space
        // left in B'' keeps the unit-space ratio of its bin in B'.
        auto reduced = cb.residual.without_support(rb, j == k);
        for (std::size_t b = 0; b < reduced.size(); ++b) {
          const BinSpec& full = cb.residual.bins[b];
          if (full.capacity > 0) reduced[b].unit_cost = full.fixed_cost / Rational(full.capacity) + full.unit_cost;
          reduced[b].fixed_cost = 0;
        }
        std::int64_t room = 0;
        for (const auto& b : reduced) room += b.capacity;
        std::int64_t best = 0;
        for (std::int64_t q = 0; q <= rb.support[j]; ++q) {
          auto v = lb1_or_inf(q, reduced);
          if (v && *v - rb.ratio[j] * q <= gap) best = q;
        }
        const std::int64_t got = update_min_load(cb, j);
        if (best < std::min(rb.support[j], room))
          EXPECT_EQ(got, lower + rb.support[j] - best);
        else
          EXPECT_EQ(got, lower);
        EXPECT_GE(got, lower);
        EXPECT_LE(got, upper);
        ++checked;
      }
      if (j >= k) {
        // Largest q in [0, C'_j] with q r_j - (Lb1(W') - Lb1(W' - q)) <= gap.
        const std::int64_t w = cb.residual.load;
        const Rational base = lb1(w, cb.residual.bins)->value;
        const std::int64_t limit = std::min(rb.capacity[j], w);
        std::int64_t best = 0;
        for (std::int64_t q = 0; q <= limit; ++q) {
          const Rational inc = rb.ratio[j] * q - (base - lb1(w - q, cb.residual.bins)->value);
          if (inc <= gap) best = q;
          else break;
        }
        const std::int64_t got = update_max_load(cb, j, upper);
        if (best < limit)
          EXPECT_EQ(got, lower + best);
        else
          EXPECT_EQ(got, upper);
        EXPECT_GE(got, lower);
        EXPECT_LE(got, upper);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 500);
}

// ---------- Soundness, idempotence, monotonicity ----------

TEST(FixpointTest, SoundIdempotentAndMonotone) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 100; ++t) {
    Instance inst = testing::random_feasible(rng);
    const Rational opt = brute_force(inst).objective;
    for (int dp = 0; dp < 2; ++dp) {
      PropagationConfig cfg;
      cfg.dp_filter = dp == 1;
      DomainStore s = with_ub(inst, opt);
      DomainStore before = s;
      ASSERT_TRUE(fixpoint(s, inst, cfg)) << to_text(inst);
      for (int j = 0; j < s.num_bins; ++j) {
        EXPECT_GE(s.lo(j), before.lo(j));
        EXPECT_LE(s.hi(j), before.hi(j));
      }
      testing::for_each_assignment(inst, [&](const std::vector<int>& a) {
        Solution sol = evaluate(inst, a);
        if (sol.status == Status::kFeasible && sol.objective <= opt) {
          EXPECT_TRUE(contains(s, a, inst)) << to_text(inst);
        }
      });
      DomainStore again = s;
      fixpoint(again, inst, cfg);
      EXPECT_EQ(again.candidates, s.candidates);
      EXPECT_EQ(again.load_lo, s.load_lo);
      EXPECT_EQ(again.load_hi, s.load_hi);
      EXPECT_EQ(again.open, s.open);
      EXPECT_EQ(again.z_lo, s.z_lo);
      // z_lo dominates Lb1' of the final store.
      DomainStore probe = s;
      CostBound cb = lower_bound_z(probe, inst);
      EXPECT_GE(s.z_lo, cb.value);
      // bin count bookkeeping
      std::int64_t opened = 0;
      for (int j = 0; j < s.num_bins; ++j) opened += s.is_open(j);
      EXPECT_GE(s.bins_lo, opened);
      EXPECT_LE(opened, s.bins_hi);
    }
  }
}

}  // namespace
}  // namespace bpuc
