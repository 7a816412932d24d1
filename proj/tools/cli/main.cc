// Copyright 2026 The treebargain Authors.
//
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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.h"

int main(int argc, char** argv) {
  using namespace treebargain::cli;

  CLI::App app{"Revenue-sharing fixed points on trade trees"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "treebargain 0.1.0");

  SolveOptions solve;
  std::string solve_out;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve an instance and write a JSON result");
  solve_cmd->add_option("instance", solve.instance, "Instance file")->required();
  solve_cmd->add_option("--eps", solve.eps, "Binary-search tolerance (relative to the top bid)")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--out", solve_out, "Output file (default: stdout)");

  ReduceOptions reduce;
  CLI::App* reduce_cmd = app.add_subcommand("reduce", "Print the equivalent path instance");
  reduce_cmd->add_option("instance", reduce.instance, "Instance file")->required();

  DynamicsOptions dynamics;
  std::string trace_out;
  std::size_t threads = 0;
  CLI::App* dynamics_cmd =
      app.add_subcommand("dynamics", "Run the asynchronous renegotiation experiment");
  dynamics_cmd->add_option("--config", dynamics.config, "JSON experiment config")->required();
  dynamics_cmd->add_option("--out", dynamics.out, "Aggregate CSV output")->required();
  dynamics_cmd->add_option("--trace", trace_out, "Per-round distance CSV output");
  dynamics_cmd->add_option("--threads", threads,
                           std::string("Worker threads (default: config, then $") +
                               kThreadsEnvVar + ", then 1)")
      ->check(CLI::PositiveNumber);

  AnalyzeOptions analyze;
  std::string analyze_out;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Cooperative-game checks; all of them when no flag is given");
  analyze_cmd->add_option("instance", analyze.instance, "Instance file")->required();
  analyze_cmd->add_flag("--core", analyze.core, "Fixed-point payoffs lie in the core");
  analyze_cmd->add_flag("--shapley", analyze.shapley, "Shapley value and its core check");
  analyze_cmd->add_flag("--nash", analyze.nash, "Per-edge Nash bargaining variant");
  analyze_cmd->add_flag("--monotonicity", analyze.monotonicity,
                        "Payoffs rise strictly with outside options");
  analyze_cmd->add_option("--samples", analyze.shapley_samples,
                          "Orders sampled for Shapley values above 10 nodes");
  analyze_cmd->add_option("--out", analyze_out, "Also write a JSON report here");

  GenerateOptions generate;
  std::string generate_out;
  CLI::App* generate_cmd = app.add_subcommand("generate", "Emit a seeded random instance");
  generate_cmd->add_option("--kind", generate.kind, "balanced-binary or random")
      ->check(CLI::IsMember({"balanced-binary", "random"}));
  generate_cmd->add_option("--depth", generate.depth, "Tree depth")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--seed", generate.seed, "Random seed");
  generate_cmd->add_option("--out", generate_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? kExitOk : kExitParse;
  }

  if (*solve_cmd) {
    if (!solve_out.empty()) solve.out = solve_out;
    return RunSolve(solve, std::cout, std::cerr);
  }
  if (*reduce_cmd) return RunReduce(reduce, std::cout, std::cerr);
  if (*dynamics_cmd) {
    if (!trace_out.empty()) dynamics.trace = trace_out;
    if (threads > 0) dynamics.threads = threads;
    return RunDynamics(dynamics, std::cout, std::cerr);
  }
  if (*analyze_cmd) {
    if (!analyze_out.empty()) analyze.out = analyze_out;
    return RunAnalyze(analyze, std::cout, std::cerr);
  }
  if (!generate_out.empty()) generate.out = generate_out;
  return RunGenerate(generate, std::cout, std::cerr);
}
