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

#include <sstream>

#include "bpuc/bench.hpp"
#include "test_support.hpp"

namespace bpuc {
namespace {

std::string data_path(const std::string& name) { return std::string(BPUC_DATA_DIR) + "/" + name; }

TEST(GroupLabelTest, FromFileNameOrInstance) {
  EXPECT_EQ(group_label("bpuc_n15_m10_x2_s7_3.txt", nullptr), "n15_m10_x2");
  Instance inst = testing::load_data("example2.txt");
  EXPECT_EQ(group_label("example2.txt", &inst), "n4_m5_x?");
  EXPECT_EQ(group_label("whatever.txt", nullptr), "unknown");
}

TEST(RootBoundTest, Methods) {
  Instance inst = testing::load_data("example2.txt");
  EXPECT_NEAR(*root_bound(inst, "lb1"), 99.0, 1e-9);
  EXPECT_NEAR(*root_bound(inst, "lp1"), 114.4, 1e-6);
  EXPECT_NEAR(*root_bound(inst, "arcflow"), 129.0, 1e-6);
  EXPECT_NEAR(*root_bound(inst, "colgen"), 129.0, 1e-6);
  EXPECT_THROW(root_bound(inst, "nope"), std::invalid_argument);
  EXPECT_FALSE(root_bound(parse_instance("1 2\n3 1 1\n2 2\n"), "lb1"));
}

TEST(BenchJobTest, SolverAndBoundRows) {
  BenchRow cp = run_bench_job(data_path("example2.txt"), "cp", 10);
  EXPECT_EQ(cp.status, "OPTIMAL");
  EXPECT_EQ(*cp.objective, 129);
  EXPECT_EQ(*cp.reference, 129);
  EXPECT_GT(cp.nodes, 0);
  BenchRow lb = run_bench_job(data_path("example2.txt"), "lb1", 10);
  EXPECT_EQ(lb.status, "BOUND");
  BenchRow missing = run_bench_job(data_path("no_such_file.txt"), "cp", 10);
  EXPECT_EQ(missing.status, "ERROR");
  EXPECT_FALSE(missing.message.empty());
}

TEST(BenchJobTest, GapsAgainstReference) {
  std::vector<BenchRow> rows;
  for (const char* m : {"cp", "lb1", "colgen"}) rows.push_back(run_bench_job(data_path("example2.txt"), m, 10));
  fill_gaps(rows);
  ASSERT_TRUE(rows[1].gap);
  EXPECT_NEAR(*rows[1].gap, 100.0 * 30.0 / 129.0, 1e-9);
  EXPECT_NEAR(*rows[2].gap, 0.0, 1e-6);
}

TEST(BenchOutputTest, Formats) {
  std::vector<BenchRow> rows;
  for (const char* m : {"cp", "lb1"}) rows.push_back(run_bench_job(data_path("separation.txt"), m, 10));
  fill_gaps(rows);
  std::ostringstream out;
  write_rows(out, rows);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "instance,group,method,status,objective,root_bound,gap_pct,nodes,seconds");
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("separation.txt,n3_m2_x?,cp,OPTIMAL,12.000000,", 0), 0u) << line;
  std::ostringstream groups;
  write_groups(groups, rows, {"cp", "lb1"});
  EXPECT_EQ(groups.str().rfind("group,method,instances,avg_gap_pct,solved,avg_cpu,avg_nodes\n", 0), 0u);
  EXPECT_NE(groups.str().find("n3_m2_x?,cp,1,"), std::string::npos);
}

TEST(BenchOutputTest, EmptyInputHeadersOnly) {
  std::vector<BenchRow> rows;
  fill_gaps(rows);
  std::ostringstream out;
  write_rows(out, rows);
  write_groups(out, rows, bench_methods());
  EXPECT_EQ(out.str(),
            "instance,group,method,status,objective,root_bound,gap_pct,nodes,seconds\n"
            "group,method,instances,avg_gap_pct,solved,avg_cpu,avg_nodes\n");
}

}  // namespace
}  // namespace bpuc
