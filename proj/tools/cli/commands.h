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

#ifndef TREEBARGAIN_TOOLS_CLI_COMMANDS_H_
#define TREEBARGAIN_TOOLS_CLI_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "treebargain/dynamics.h"
#include "treebargain/path_solver.h"

namespace treebargain::cli {

// Stable process exit statuses.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // anything not covered below
  kExitParse = 2,
  kExitEmpty = 3,
  kExitNonConvergence = 4,
  kExitPropertyFailure = 5,
};

inline constexpr const char* kThreadsEnvVar = "TREEBARGAIN_THREADS";

// TREEBARGAIN_THREADS if set to a positive integer, else 1.
std::size_t DefaultThreads();

struct SolveOptions {
  std::filesystem::path instance;
  double eps = kDefaultSearchTolerance;
  // stdout when empty.
  std::optional<std::filesystem::path> out;
};

struct ReduceOptions {
  std::filesystem::path instance;
};

struct DynamicsOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::filesystem::path> trace;
  // Overrides the config file and the environment.
  std::optional<std::size_t> threads;
};

struct AnalyzeOptions {
  std::filesystem::path instance;
  bool core = false;
  bool shapley = false;
  bool nash = false;
  bool monotonicity = false;
  std::size_t shapley_samples = 20000;
  std::optional<std::filesystem::path> out;
};

struct GenerateOptions {
  std::string kind = "balanced-binary";
  std::size_t depth = 8;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> out;
};

int RunSolve(const SolveOptions& options, std::ostream& out, std::ostream& err);
int RunReduce(const ReduceOptions& options, std::ostream& out, std::ostream& err);
int RunDynamics(const DynamicsOptions& options, std::ostream& out, std::ostream& err);
int RunAnalyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err);
int RunGenerate(const GenerateOptions& options, std::ostream& out, std::ostream& err);

// Relative "instance" paths resolve against `base_dir`. Throws
// Error(kInvalidConfig) on unknown keys or bad values.
DynamicsConfig ParseDynamicsConfig(const nlohmann::json& document,
                                   const std::filesystem::path& base_dir);

}  // namespace treebargain::cli

#endif  // TREEBARGAIN_TOOLS_CLI_COMMANDS_H_
