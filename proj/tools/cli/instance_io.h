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

// Line-oriented instance files:
//
//   # comment
//   name fixture-c
//   seed 7
//   node 0 root
//   node 1 parent 0
//   node 2 parent 0 value 3
//
// See docs/instance_format.md.

#ifndef TREEBARGAIN_TOOLS_CLI_INSTANCE_IO_H_
#define TREEBARGAIN_TOOLS_CLI_INSTANCE_IO_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "treebargain/tree.h"

namespace treebargain::cli {

// Malformed text. Structural problems (two roots, cycles) surface as
// Error(kInvalidTree) from TreeInstance::FromSpecs instead.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct InstanceFile {
  std::string name;
  std::optional<std::uint64_t> seed;
  std::vector<NodeSpec> nodes;
};

InstanceFile ParseInstance(std::istream& in);
InstanceFile ReadInstanceFile(const std::filesystem::path& path);

// Parses and builds the (unpruned) tree.
TreeInstance LoadTree(const std::filesystem::path& path, InstanceFile* metadata = nullptr);

void WriteInstance(std::ostream& out, const TreeInstance& tree, const std::string& name,
                   std::optional<std::uint64_t> seed);

}  // namespace treebargain::cli

#endif  // TREEBARGAIN_TOOLS_CLI_INSTANCE_IO_H_
