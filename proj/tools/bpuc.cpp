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

// bpuc: solve, bound, generate, verify and bench bin packing instances with
// usage costs.
//
// Exit codes: 0 solved (OPTIMAL or FEASIBLE), 1 parse or I/O error,
// 2 INFEASIBLE, 3 UNKNOWN, 4 internal error.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bpuc/arcflow.hpp"
#include "bpuc/bench.hpp"
#include "bpuc/bounds.hpp"
#include "bpuc/colgen.hpp"
#include "bpuc/instance.hpp"
#include "bpuc/lp.hpp"
#include "bpuc/oracle.hpp"
#include "bpuc/random.hpp"
#include "bpuc/solver.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitInternal = 4;

bpuc::Instance load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return bpuc::parse_instance(in);
}

int exit_code(bpuc::Status s) {
  switch (s) {
    case bpuc::Status::kOptimal:
    case bpuc::Status::kFeasible:
      return kExitSolved;
    case bpuc::Status::kInfeasible:
      return kExitInfeasible;
    case bpuc::Status::kUnknown:
      return kExitUnknown;
  }
  return kExitInternal;
}

struct SolveArgs {
  std::string file;
  std::string method = "cp";
  double time_limit = 600.0;
  std::string ub;
  bool dp_filter = false;
  bool trace = false;
  bool verify = false;
};

int run_solve(const SolveArgs& a) {
  bpuc::Instance inst = load(a.file);
  bpuc::Solution sol;
  std::string stats;
  if (a.method == "oracle") {
    sol = bpuc::brute_force(inst);
    if (!a.ub.empty() && sol.status == bpuc::Status::kOptimal) {
      auto ub = bpuc::parse_rational(a.ub);
      if (sol.objective > *ub) sol = bpuc::Solution{{}, {}, 0, bpuc::Status::kInfeasible};
    }
  } else {
    bpuc::SolverConfig cfg;
    cfg.time_limit = a.time_limit;
    cfg.use_colgen_bound = a.method == "cp+cg";
    cfg.use_dp_filter = a.dp_filter;
    if (!a.ub.empty()) cfg.initial_ub = *bpuc::parse_rational(a.ub);
    if (a.trace) cfg.trace = &std::cerr;
    bpuc::SolveResult r = bpuc::solve(inst, cfg);
    sol = r.solution;
    stats = bpuc::stats_line(r);
  }
  // Every emitted packing is re-checked before printing.
  if (!sol.assignment.empty() || (inst.num_items() == 0 && sol.status == bpuc::Status::kOptimal)) {
    bpuc::Solution check = bpuc::evaluate(inst, sol.assignment);
    if (check.status != bpuc::Status::kFeasible || check.objective != sol.objective) {
      std::cerr << "internal error: solution does not re-evaluate to its objective\n";
      return kExitInternal;
    }
  }
  bpuc::write_solution(std::cout, sol);
  if (!stats.empty()) std::cout << stats << '\n';
  if (a.verify) std::cout << "verify ok\n";
  return exit_code(sol.status);
}

int run_bound(const std::string& file, const std::string& method, const std::string& dump) {
  bpuc::Instance inst = load(file);
  if (!dump.empty()) {
    std::ofstream out(dump);
    if (!out) throw std::runtime_error("cannot write '" + dump + "'");
    bpuc::dump_graph(out, bpuc::build_graph(bpuc::tighten_capacities(inst)));
  }
  auto value = bpuc::root_bound(inst, method);
  if (!value) {
    std::cout << "bound infeasible\n";
    return kExitInfeasible;
  }
  std::cout << "bound " << bpuc::format_fixed(bpuc::Rational(*value), 6) << '\n';
  return kExitSolved;
}

struct GenerateArgs {
  int n = 15;
  int m = 10;
  int x = 1;
  std::string scale = "small";
  std::uint64_t seed = 1;
  std::string out = ".";
  int count = 10;
};

int run_generate(const GenerateArgs& a) {
  fs::create_directories(a.out);
  // Instance i draws from the seed given by the i-th output of a stream
  // seeded with --seed, so files are independent of --count.
  bpuc::SplitMix64 seeds(a.seed);
  for (int i = 1; i <= a.count; ++i) {
    bpuc::GeneratorParams p;
    p.n = a.n;
    p.m = a.m;
    p.size_class = a.x;
    p.scale = a.scale == "large" ? bpuc::Scale::kLarge : bpuc::Scale::kSmall;
    p.seed = seeds.next();
    const std::string name = "bpuc_n" + std::to_string(a.n) + "_m" + std::to_string(a.m) + "_x" +
                             std::to_string(a.x) + "_s" + std::to_string(a.seed) + "_" + std::to_string(i) +
                             ".txt";
    std::ofstream out(fs::path(a.out) / name);
    if (!out) throw std::runtime_error("cannot write '" + (fs::path(a.out) / name).string() + "'");
    bpuc::write_instance(out, bpuc::generate(p));
    std::cout << (fs::path(a.out) / name).string() << '\n';
  }
  return kExitSolved;
}

int run_verify(const std::string& instance_file, const std::string& solution_file) {
  bpuc::Instance inst = load(instance_file);
  std::ifstream in(solution_file);
  if (!in) throw std::runtime_error("cannot open '" + solution_file + "'");
  std::vector<int> assignment = bpuc::parse_assignment(in, inst.num_items());
  for (int j : assignment)
    if (j >= inst.num_bins()) throw bpuc::ParseError(0, "bin index out of range");
  bpuc::Solution sol = bpuc::evaluate(inst, assignment);
  bpuc::write_solution(std::cout, sol);
  return sol.status == bpuc::Status::kFeasible ? kExitSolved : kExitInfeasible;
}

int run_bench(const std::string& dir, const std::string& method_list, double time_limit, int jobs) {
  std::vector<std::string> methods;
  for (std::size_t pos = 0; pos <= method_list.size();) {
    std::size_t next = method_list.find(',', pos);
    if (next == std::string::npos) next = method_list.size();
    std::string m = method_list.substr(pos, next - pos);
    if (!m.empty()) {
      const auto& known = bpuc::bench_methods();
      if (std::find(known.begin(), known.end(), m) == known.end())
        throw std::invalid_argument("unknown method '" + m + "'");
      methods.push_back(m);
    }
    pos = next + 1;
  }
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: '" + dir + "'");
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path().string());
  std::sort(files.begin(), files.end());

  struct Job {
    std::string file, method;
  };
  std::vector<Job> queue;
  for (const auto& f : files)
    for (const auto& m : methods) queue.push_back({f, m});
  std::vector<bpuc::BenchRow> rows(queue.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < queue.size();)
      rows[k] = bpuc::run_bench_job(queue[k].file, queue[k].method, time_limit);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  bpuc::fill_gaps(rows);
  bpuc::write_rows(std::cout, rows);
  std::cout << '\n';
  bpuc::write_groups(std::cout, rows, methods);
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bin packing with usage costs"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve an instance exactly");
  solve->add_option("file", solve_args.file, "Instance file")->required();
  solve->add_option("--method", solve_args.method, "cp, cp+cg or oracle")
      ->check(CLI::IsMember({"cp", "cp+cg", "oracle"}));
  solve->add_option("--time-limit", solve_args.time_limit, "Seconds")->check(CLI::PositiveNumber);
  solve->add_option("--ub", solve_args.ub, "Only accept packings of cost <= ub");
  solve->add_flag("--dp-filter", solve_args.dp_filter, "Snap load bounds to reachable sums");
  solve->add_flag("--trace", solve_args.trace, "Log propagation events to stderr");
  solve->add_flag("--verify", solve_args.verify, "Report the re-evaluation check");

  std::string bound_file, bound_method = "lb1", dump;
  auto* bound = app.add_subcommand("bound", "Root lower bound");
  bound->add_option("file", bound_file, "Instance file")->required();
  bound->add_option("--method", bound_method, "lb1, lp1, arcflow or colgen")
      ->check(CLI::IsMember({"lb1", "lp1", "arcflow", "colgen"}));
  bound->add_option("--dump-graph", dump, "Write the arc-flow graph to this file");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write random instances");
  generate->add_option("--n", gen.n, "Items")->check(CLI::PositiveNumber);
  generate->add_option("--m", gen.m, "Bins")->check(CLI::PositiveNumber);
  generate->add_option("--x", gen.x, "Size class: 1 [1,100], 2 [20,100], 3 [50,100]")->check(CLI::Range(1, 3));
  generate->add_option("--scale", gen.scale, "small or large capacities")
      ->check(CLI::IsMember({"small", "large"}));
  generate->add_option("--seed", gen.seed, "Seed");
  generate->add_option("--out", gen.out, "Output directory");
  generate->add_option("--count", gen.count, "Number of files")->check(CLI::NonNegativeNumber);

  std::string inst_file, sol_file;
  auto* verify = app.add_subcommand("verify", "Check a packing against an instance");
  verify->add_option("instance", inst_file, "Instance file")->required();
  verify->add_option("solution", sol_file, "Solution file")->required();

  std::string bench_dir, bench_methods = "cp,cp+cg";
  double bench_limit = 600.0;
  int bench_jobs = 1;
  auto* bench = app.add_subcommand("bench", "Run methods over a directory of instances");
  bench->add_option("--dir", bench_dir, "Instance directory")->required();
  bench->add_option("--methods", bench_methods, "Comma-separated: cp,cp+cg,oracle,lb1,lp1,arcflow,colgen");
  bench->add_option("--time-limit", bench_limit, "Seconds per solve")->check(CLI::PositiveNumber);
  bench->add_option("--jobs", bench_jobs, "Parallel jobs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  try {
    if (*solve) {
      if (!solve_args.ub.empty() && !bpuc::parse_rational(solve_args.ub))
        throw std::invalid_argument("malformed --ub '" + solve_args.ub + "'");
      return run_solve(solve_args);
    }
    if (*bound) return run_bound(bound_file, bound_method, dump);
    if (*generate) return run_generate(gen);
    if (*verify) return run_verify(inst_file, sol_file);
    if (*bench) return run_bench(bench_dir, bench_methods, bench_limit, bench_jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
