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

#include "cli/instance_io.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "treebargain/format.h"

namespace treebargain::cli {
namespace {

std::vector<std::string> Tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  return tokens;
}

template <typename T>
T ParseInteger(const std::string& text, std::size_t line, const char* what) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + text + "'");
  }
  return value;
}

double ParseValue(const std::string& text, std::size_t line) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) {
    throw ParseError(line, "bad value '" + text + "'");
  }
  return value;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

InstanceFile ParseInstance(std::istream& in) {
  InstanceFile file;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    if (const std::size_t hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::vector<std::string> t = Tokens(raw);
    if (t.empty()) continue;

    if (t[0] == "name") {
      if (t.size() < 2) throw ParseError(line, "name needs a value");
      // Names may contain spaces; keep the rest of the line verbatim.
      const std::size_t start = raw.find(t[1]);
      file.name = raw.substr(start);
      while (!file.name.empty() && std::isspace(static_cast<unsigned char>(file.name.back()))) {
        file.name.pop_back();
      }
    } else if (t[0] == "seed") {
      if (t.size() != 2) throw ParseError(line, "expected 'seed <n>'");
      file.seed = ParseInteger<std::uint64_t>(t[1], line, "seed");
    } else if (t[0] == "node") {
      if (t.size() < 3) throw ParseError(line, "expected 'node <id> root|parent <pid>'");
      NodeSpec spec;
      spec.id = NodeId{ParseInteger<std::int64_t>(t[1], line, "node id")};
      std::size_t k = 2;
      if (t[k] == "root") {
        ++k;
      } else if (t[k] == "parent") {
        if (k + 1 >= t.size()) throw ParseError(line, "parent needs an id");
        spec.parent = NodeId{ParseInteger<std::int64_t>(t[k + 1], line, "parent id")};
        k += 2;
      } else {
        throw ParseError(line, "expected 'root' or 'parent', got '" + t[k] + "'");
      }
      if (k < t.size()) {
        if (t[k] != "value" || k + 2 != t.size()) {
          throw ParseError(line, "trailing tokens; only 'value <v>' may follow");
        }
        spec.value = ParseValue(t[k + 1], line);
      }
      file.nodes.push_back(spec);
    } else {
      throw ParseError(line, "unknown directive '" + t[0] + "'");
    }
  }
  if (file.nodes.empty()) throw ParseError(0, "no nodes");
  return file;
}

InstanceFile ReadInstanceFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return ParseInstance(in);
}

TreeInstance LoadTree(const std::filesystem::path& path, InstanceFile* metadata) {
  InstanceFile file = ReadInstanceFile(path);
  TreeInstance tree = TreeInstance::FromSpecs(file.nodes);
  if (metadata) *metadata = std::move(file);
  return tree;
}

void WriteInstance(std::ostream& out, const TreeInstance& tree, const std::string& name,
                   std::optional<std::uint64_t> seed) {
  if (!name.empty()) out << "name " << name << '\n';
  if (seed) out << "seed " << *seed << '\n';
  for (NodeIndex i = 0; i < tree.size(); ++i) {
    out << "node " << tree.id(i).value;
    if (i == tree.root()) {
      out << " root";
    } else {
      out << " parent " << tree.id(tree.parent(i)).value;
    }
    if (tree.is_leaf(i)) out << " value " << FormatDouble(tree.value(i));
    out << '\n';
  }
}

}  // namespace treebargain::cli
