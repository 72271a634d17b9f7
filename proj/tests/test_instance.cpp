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
#include <sstream>

#include "bpuc/instance.hpp"
#include "bpuc/random.hpp"
#include "bpuc/rational.hpp"
#include "test_support.hpp"

namespace bpuc {
namespace {

using testing::load_data;

// P1 = {{2,2,2,2},{3},{3},{3},{}} and P2 = {{3,3,3},{2},{2},{2},{2}}.
// Sizes are stored sorted: items 0..3 have size 2, items 4..6 size 3.
const std::vector<int> kP1 = {0, 0, 0, 0, 1, 2, 3};
const std::vector<int> kP2 = {1, 2, 3, 4, 0, 0, 0};

TEST(RationalTest, ParsesIntegersDecimalsAndFractions) {
  EXPECT_EQ(*parse_rational("7"), Rational(7));
  EXPECT_EQ(*parse_rational("0.5"), make_rational(1, 2));
  EXPECT_EQ(*parse_rational("-1.25"), make_rational(-5, 4));
  EXPECT_EQ(*parse_rational("16/3"), make_rational(16, 3));
  EXPECT_EQ(*parse_rational(".5"), make_rational(1, 2));
  // Leading zeros are decimal, not octal.
  EXPECT_EQ(*parse_rational("0.75"), make_rational(3, 4));
  EXPECT_EQ(*parse_rational("010"), Rational(10));
  EXPECT_EQ(*parse_rational("08/09"), make_rational(8, 9));
  EXPECT_FALSE(parse_rational(""));
  EXPECT_FALSE(parse_rational("1/0"));
  EXPECT_FALSE(parse_rational("1e3"));
  EXPECT_FALSE(parse_rational("abc"));
}

TEST(RationalTest, FixedFormatRoundsHalfToEven) {
  EXPECT_EQ(format_fixed(make_rational(299, 3)), "99.666667");
  EXPECT_EQ(format_fixed(Rational(25)), "25.000000");
  EXPECT_EQ(format_fixed(make_rational(1, 2), 0), "0");
  EXPECT_EQ(format_fixed(make_rational(3, 2), 0), "2");
  EXPECT_EQ(format_fixed(make_rational(-1, 3), 2), "-0.33");
  EXPECT_EQ(format_exact(make_rational(1, 4)), "0.25");
  EXPECT_EQ(format_exact(make_rational(1, 3)), "1/3");
}

TEST(InstanceTest, ParsesFirstExample) {
  Instance inst = load_data("example1.txt");
  EXPECT_EQ(inst.num_bins(), 5);
  EXPECT_EQ(inst.num_items(), 7);
  EXPECT_EQ(inst.total_load(), 17);
  EXPECT_EQ(inst.bin(0).capacity, 9);
  EXPECT_EQ(inst.bin(0).unit_cost, 1);
  EXPECT_EQ(inst.bin(4).unit_cost, 2);
  EXPECT_EQ(inst.sizes(), (std::vector<std::int64_t>{2, 2, 2, 2, 3, 3, 3}));
}

TEST(InstanceTest, ParsesEmptyItemSet) {
  Instance inst = parse_instance("1 0\n5 1 1\n\n");
  EXPECT_EQ(inst.num_items(), 0);
  EXPECT_EQ(inst.total_load(), 0);
}

TEST(InstanceTest, DecimalCostIsExact) {
  Instance inst = parse_instance("1 1\n4 1 0.5\n3\n");
  EXPECT_EQ(inst.bin(0).unit_cost, make_rational(1, 2));
}

TEST(InstanceTest, CommentsAndWrappedItemLines) {
  Instance inst = parse_instance("# header next\n2 3\n4 1 1\n# a comment\n5 2 1\n1 2\n3\n");
  EXPECT_EQ(inst.num_items(), 3);
  EXPECT_EQ(inst.num_bins(), 2);
}

TEST(InstanceTest, ReportsLineOfMalformedInput) {
  try {
    parse_instance("2 2\n4 1 1\n4 x 1\n1 2\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_instance("1 3\n4 1 1\n1 2\n"), ParseError);    // too few sizes
  EXPECT_THROW(parse_instance("1 1\n4 1 1\n1 2\n"), ParseError);    // too many sizes
  EXPECT_THROW(parse_instance("1 1\n4 1 -1\n1\n"), ParseError);     // negative cost
  EXPECT_THROW(parse_instance("1 1\n4 1 1\n0\n"), ParseError);      // zero size
  EXPECT_THROW(parse_instance("2 1\n4 1 1\n"), ParseError);         // missing bin line
  EXPECT_THROW(parse_instance(""), ParseError);
}

TEST(InstanceTest, RejectsInvalidConstruction) {
  EXPECT_THROW(Instance({{-1, 0, 0}}, {1}), std::invalid_argument);
  EXPECT_THROW(Instance({{1, 0, 0}}, {0}), std::invalid_argument);
}

TEST(InstanceTest, TextRoundTripIsIdentity) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    Instance inst = testing::random_small(rng);
    EXPECT_EQ(parse_instance(to_text(inst)), inst);
  }
}

TEST(EvaluateTest, FirstExamplePackings) {
  Instance inst = load_data("example1.txt");
  Solution p1 = evaluate(inst, kP1);
  EXPECT_EQ(p1.objective, 26);
  EXPECT_EQ(p1.status, Status::kFeasible);
  EXPECT_EQ(p1.loads, (std::vector<std::int64_t>{8, 3, 3, 3, 0}));
  EXPECT_EQ(evaluate(inst, kP2).objective, 25);
  Instance changed = load_data("example1_c5.txt");
  EXPECT_EQ(evaluate(changed, kP2).objective, 27);
  EXPECT_EQ(evaluate(changed, kP1).objective, 26);
}

TEST(EvaluateTest, PerBinCosts) {
  Instance inst = load_data("arcflow_small.txt");
  // sizes sorted: 2 2 3 5 -> {3} | {2,2} | {5}
  Solution s = evaluate(inst, {1, 1, 0, 2});
  EXPECT_EQ(s.loads, (std::vector<std::int64_t>{3, 4, 5}));
  EXPECT_EQ(s.objective, 32);  // 7 + 7 + 18
}

TEST(EvaluateTest, OverloadAndBadIndex) {
  Instance inst = load_data("example1.txt");
  EXPECT_EQ(evaluate(inst, {1, 1, 1, 1, 0, 0, 0}).status, Status::kInfeasible);
  EXPECT_THROW(evaluate(inst, {5, 0, 0, 0, 0, 0, 0}), std::out_of_range);
  EXPECT_THROW(evaluate(inst, {0}), std::invalid_argument);
}

TEST(EvaluateTest, ZeroLoadBinIsFree) {
  Instance inst = parse_instance("2 1\n5 100 1\n5 3 1\n2\n");
  EXPECT_EQ(evaluate(inst, {1}).objective, 5);
}

TEST(GroupSizesTest, Examples) {
  EXPECT_EQ(group_sizes(load_data("example2.txt")), (std::vector<SizeGroup>{{3, 1}, {5, 3}}));
  EXPECT_EQ(group_sizes(load_data("separation.txt")), (std::vector<SizeGroup>{{1, 2}, {2, 1}}));
  EXPECT_TRUE(group_sizes(std::vector<std::int64_t>{}).empty());
}

TEST(TightenTest, LargestReachableSum) {
  EXPECT_EQ(tighten_capacities(Instance({{12, 0, 0}}, {3, 5, 5, 5})).bin(0).capacity, 10);
  EXPECT_EQ(tighten_capacities(Instance({{7, 0, 0}}, {2, 2, 3, 5})).bin(0).capacity, 7);
  EXPECT_EQ(tighten_capacities(Instance({{0, 0, 0}}, {2})).bin(0).capacity, 0);
  Instance t = tighten_capacities(load_data("example2.txt"));
  std::vector<std::int64_t> caps;
  for (const auto& b : t.bins()) caps.push_back(b.capacity);
  EXPECT_EQ(caps, (std::vector<std::int64_t>{8, 3, 5, 5, 10}));
}

TEST(TightenTest, KeepsEveryFeasibleAssignment) {
  std::mt19937_64 rng(5);
  testing::SmallParams p;
  p.max_items = 5;
  p.max_bins = 3;
  for (int t = 0; t < 100; ++t) {
    Instance inst = testing::random_small(rng, p);
    Instance tight = tighten_capacities(inst);
    testing::for_each_assignment(inst, [&](const std::vector<int>& a) {
      Solution s = evaluate(inst, a);
      Solution u = evaluate(tight, a);
      ASSERT_EQ(s.status, u.status);
      ASSERT_EQ(s.objective, u.objective);
    });
  }
}

TEST(DominanceTest, PairsAndIdenticalBins) {
  Instance inst = parse_instance("3 1\n5 1 1\n5 1 1\n4 2 1\n1\n");
  auto pairs = dominance_pairs(inst);
  EXPECT_EQ(pairs, (std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}));
  // No bin of the second example is both cheaper and larger than another.
  EXPECT_TRUE(dominance_pairs(load_data("example2.txt")).empty());
}

TEST(SolutionFormatTest, RoundTrip) {
  Instance inst = load_data("example1.txt");
  Solution s = evaluate(inst, kP2);
  s.status = Status::kOptimal;
  std::ostringstream out;
  write_solution(out, s);
  EXPECT_NE(out.str().find("objective 25.000000"), std::string::npos);
  std::istringstream in(out.str());
  EXPECT_EQ(parse_assignment(in, inst.num_items()), kP2);
}

TEST(SplitMix64Test, ReferenceOutputs) {
  // First outputs for seed 1234567, from the published reference code.
  SplitMix64 g(1234567);
  EXPECT_EQ(g.next(), 6457827717110365317ULL);
  EXPECT_EQ(g.next(), 3203168211198807973ULL);
  EXPECT_EQ(g.next(), 9817491932198370423ULL);
}

TEST(GeneratorTest, DeterministicAndInRange) {
  for (int x = 1; x <= 3; ++x) {
    GeneratorParams p;
    p.n = 25;
    p.m = 15;
    p.size_class = x;
    p.seed = 99;
    Instance a = generate(p), b = generate(p);
    EXPECT_EQ(a, b);
    const std::int64_t lo = x == 1 ? 1 : x == 2 ? 20 : 50;
    for (auto w : a.sizes()) {
      EXPECT_GE(w, lo);
      EXPECT_LE(w, 100);
    }
    EXPECT_GE(a.total_capacity(), a.total_load());
    for (const auto& bin : a.bins()) {
      EXPECT_EQ(bin.fixed_cost, bin.capacity);
      EXPECT_GE(bin.unit_cost, 0);
      EXPECT_LE(bin.unit_cost, 1);
    }
  }
  GeneratorParams p;
  p.seed = 1;
  GeneratorParams q = p;
  q.seed = 2;
  EXPECT_FALSE(generate(p) == generate(q));
  p.scale = Scale::kLarge;
  for (const auto& bin : generate(p).bins()) EXPECT_GE(bin.capacity, 800);
}

}  // namespace
}  // namespace bpuc
