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

#include "cli/commands.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include "cli/instance_io.h"
#include "treebargain/error.h"
#include "treebargain/flow.h"
#include "treebargain/format.h"
#include "treebargain/game_analysis.h"
#include "treebargain/generators.h"
#include "treebargain/random.h"
#include "treebargain/reduction.h"
#include "treebargain/tree.h"

namespace treebargain::cli {
namespace {

using Json = nlohmann::ordered_json;

// Runs `body`, mapping failures to exit statuses and a one-line message.
int Guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const Error& e) {
    err << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::kInvalidTree:
      case ErrorCode::kInvalidConfig:
        return kExitParse;
      case ErrorCode::kEmptyAfterPrune:
        return kExitEmpty;
      default:
        return kExitFailure;
    }
  } catch (const nlohmann::json::exception& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

std::int64_t IdOf(const TreeInstance& tree, NodeIndex node) { return tree.id(node).value; }

Json Ids(const TreeInstance& tree, const std::vector<NodeIndex>& nodes) {
  Json list = Json::array();
  for (NodeIndex n : nodes) list.push_back(IdOf(tree, n));
  return list;
}

std::string IdList(const TreeInstance& tree, const std::vector<NodeIndex>& nodes) {
  std::string text = "{";
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    text += (k ? ", " : "") + std::to_string(IdOf(tree, nodes[k]));
  }
  return text + "}";
}

std::string NumberList(std::span<const double> values) {
  std::string text = "[";
  for (std::size_t k = 0; k < values.size(); ++k) {
    text += (k ? ", " : "") + FormatDouble(values[k]);
  }
  return text + "]";
}

// Ids present in `full` but dropped by pruning.
std::vector<std::int64_t> PrunedIds(const TreeInstance& full, const TreeInstance& pruned) {
  std::vector<std::int64_t> ids;
  for (NodeIndex i = 0; i < full.size(); ++i) {
    if (!pruned.Find(full.id(i))) ids.push_back(full.id(i).value);
  }
  return ids;
}

void WriteText(const std::optional<std::filesystem::path>& path, const std::string& text,
               std::ostream& fallback) {
  if (!path) {
    fallback << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path->string());
  file << text;
}

Json SolveDocument(const std::string& name, const TreeInstance& full, const TreeInstance& tree,
                   const TreeSolution& solution) {
  const Outcome outcome = ComputeFlow(tree, solution.shares);
  const double residual = MaxResidual(TreeResiduals(tree, solution.shares));
  const double best = tree.max_leaf_value();

  Json doc;
  doc["instance"] = name;
  doc["pruned_nodes"] = PrunedIds(full, tree);
  doc["winning_leaf"] = IdOf(tree, outcome.winning_leaf);
  doc["winning_value"] = tree.value(outcome.winning_leaf);
  std::vector<NodeIndex> root_first(outcome.winning_path.rbegin(), outcome.winning_path.rend());
  doc["winning_path"] = Ids(tree, root_first);

  Json shares = Json::array();
  Json payoffs = Json::array();
  for (NodeIndex i = 0; i < tree.size(); ++i) {
    if (i != tree.root()) {
      shares.push_back(
          {{"child", IdOf(tree, i)}, {"parent", IdOf(tree, tree.parent(i))}, {"share", solution.shares[i]}});
    }
    payoffs.push_back({{"node", IdOf(tree, i)}, {"payoff", outcome.payoffs[i]}});
  }
  doc["shares"] = std::move(shares);
  doc["payoffs"] = std::move(payoffs);
  doc["max_residual"] = residual;
  doc["max_relative_residual"] = residual / best;

  const FixedPointSolution& path = solution.path_solution;
  doc["gamma"] = path.diagnostics.gamma;
  doc["iterations"] = path.iterations;
  doc["search_interval_width"] = path.diagnostics.binary_search_interval_width;
  doc["refined"] = path.diagnostics.refined;

  const ReductionMapping& mapping = solution.reduction.mapping;
  Json reduction;
  reduction["d"] = std::vector<double>(solution.reduction.path.values().begin(),
                                       solution.reduction.path.values().end());
  reduction["path"] = Ids(tree, mapping.path_nodes);
  reduction["off_path_edges"] = Ids(tree, mapping.off_path_edges);
  doc["reduction"] = std::move(reduction);
  return doc;
}

std::optional<std::size_t> PositiveInteger(const char* text) {
  if (!text || !*text) return std::nullopt;
  std::size_t value = 0;
  const char* end = text + std::char_traits<char>::length(text);
  const auto [ptr, ec] = std::from_chars(text, end, value);
  if (ec != std::errc{} || ptr != end || value == 0) return std::nullopt;
  return value;
}

}  // namespace

std::size_t DefaultThreads() {
  return PositiveInteger(std::getenv(kThreadsEnvVar)).value_or(1);
}

int RunSolve(const SolveOptions& options, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    InstanceFile meta;
    const TreeInstance full = LoadTree(options.instance, &meta);
    const TreeInstance tree = Prune(full);
    const TreeSolution solution = SolveTree(tree, options.eps);
    const std::string name = meta.name.empty() ? options.instance.stem().string() : meta.name;
    WriteText(options.out, SolveDocument(name, full, tree, solution).dump(2) + "\n", out);
    return kExitOk;
  });
}

int RunReduce(const ReduceOptions& options, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const TreeInstance tree = Prune(LoadTree(options.instance));
    const Reduction r = ReduceToPath(tree);
    out << "d = " << NumberList(r.path.values()) << '\n';
    out << "n = " << r.path.edges() << '\n';
    out << "collapsed = " << IdOf(tree, r.mapping.collapsed_subtree_root) << '\n';
    std::string path = "[";
    for (std::size_t k = 0; k < r.mapping.path_nodes.size(); ++k) {
      path += (k ? ", " : "") + std::to_string(IdOf(tree, r.mapping.path_nodes[k]));
    }
    out << "path = " << path << "]\n";
    std::string off = "[";
    for (std::size_t k = 0; k < r.mapping.off_path_edges.size(); ++k) {
      const NodeIndex child = r.mapping.off_path_edges[k];
      off += (k ? ", " : "") + std::to_string(IdOf(tree, child)) + "-" +
             std::to_string(IdOf(tree, tree.parent(child)));
    }
    out << "off_path_edges = " << off << "]\n";
    return kExitOk;
  });
}

DynamicsConfig ParseDynamicsConfig(const nlohmann::json& document,
                                   const std::filesystem::path& base_dir) {
  auto invalid = [](const std::string& message) {
    throw Error(ErrorCode::kInvalidConfig, message);
  };
  if (!document.is_object()) invalid("config must be a JSON object");
  static const std::set<std::string> kKeys = {
      "depth", "instance", "bids", "tries", "init_share", "per_edge_tolerance",
      "max_rounds", "accuracies", "seed", "threads"};
  for (const auto& [key, value] : document.items()) {
    if (!kKeys.count(key)) invalid("unknown key '" + key + "'");
  }
  DynamicsConfig config;
  auto count = [&](const char* key, std::size_t& field) {
    if (!document.contains(key)) return;
    if (!document[key].is_number_unsigned()) invalid(std::string(key) + " must be a non-negative integer");
    field = document[key].get<std::size_t>();
  };
  auto real = [&](const char* key, double& field) {
    if (!document.contains(key)) return;
    if (!document[key].is_number()) invalid(std::string(key) + " must be a number");
    field = document[key].get<double>();
  };
  count("depth", config.depth);
  count("tries", config.tries);
  count("max_rounds", config.max_rounds);
  count("threads", config.threads);
  real("init_share", config.init_share);
  real("per_edge_tolerance", config.per_edge_tolerance);
  if (document.contains("seed")) {
    if (!document["seed"].is_number_unsigned()) invalid("seed must be a non-negative integer");
    config.seed = document["seed"].get<std::uint64_t>();
  }
  if (document.contains("accuracies")) {
    const nlohmann::json& list = document["accuracies"];
    if (!list.is_array()) invalid("accuracies must be an array");
    config.target_accuracies.clear();
    for (const nlohmann::json& a : list) {
      if (!a.is_number()) invalid("accuracies must be numbers");
      config.target_accuracies.push_back(a.get<double>());
    }
  }
  if (document.contains("bids")) {
    const std::string bids = document["bids"].get<std::string>();
    if (bids == "lognormal") {
      config.bids = BidDistribution::kLognormal;
    } else if (bids == "fixed") {
      config.bids = BidDistribution::kFixed;
    } else {
      invalid("bids must be 'lognormal' or 'fixed'");
    }
  }
  if (document.contains("instance")) {
    std::filesystem::path instance = document["instance"].get<std::string>();
    if (instance.is_relative()) instance = base_dir / instance;
    config.tree = LoadTree(instance);
  }
  config.Validate();
  return config;
}

int RunDynamics(const DynamicsOptions& options, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    std::ifstream in(options.config);
    if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot open " + options.config.string());
    const nlohmann::json document = nlohmann::json::parse(in);
    DynamicsConfig config = ParseDynamicsConfig(document, options.config.parent_path());
    if (options.threads) {
      config.threads = *options.threads;
    } else if (!document.contains("threads")) {
      config.threads = DefaultThreads();
    }

    const ExperimentResult result = RunExperiment(config);
    std::ostringstream csv;
    WriteExperimentCsv(result, csv);
    WriteText(options.out, csv.str(), out);
    if (options.trace) {
      std::ostringstream trace;
      WriteTraceCsv(result, trace);
      WriteText(options.trace, trace.str(), out);
    }

    const std::size_t failed = static_cast<std::size_t>(
        std::count_if(result.traces.begin(), result.traces.end(),
                      [](const DynamicsTrace& t) { return !t.converged; }));
    if (failed > 0) {
      err << "NON-CONVERGENCE: " << failed << " of " << result.traces.size()
          << " tries did not reach " << FormatDouble(result.accuracies.back()) << " within "
          << config.max_rounds << " rounds\n";
      return kExitNonConvergence;
    }
    out << "all " << result.traces.size() << " tries converged (" << result.edges
        << " edges)\n";
    return kExitOk;
  });
}

int RunAnalyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    InstanceFile meta;
    const TreeInstance tree = Prune(LoadTree(options.instance, &meta));
    const bool all = !options.core && !options.shapley && !options.nash && !options.monotonicity;
    const CoalitionGame game(tree);
    bool passed = true;
    Json doc;
    doc["instance"] = meta.name.empty() ? options.instance.stem().string() : meta.name;

    if (all || options.core) {
      const TreeSolution solution = SolveTree(tree);
      const std::vector<double> u = ComputeFlow(tree, solution.shares).payoffs;
      const CoreVerdict paths = CheckCore(game, u, CoreCheckMode::kPaths);
      const bool brute_ok = tree.size() <= kMaxBruteForcePlayers;
      const CoreVerdict verdict =
          brute_ok ? CheckCore(game, u, CoreCheckMode::kBruteForce) : paths;
      const bool agree = paths.in_core == verdict.in_core;
      const bool ok = verdict.in_core && agree;
      passed = passed && ok;
      out << "core: " << (ok ? "pass" : "FAIL") << " ("
          << (brute_ok ? "all coalitions" : "path constraints") << ", " << tree.size()
          << " nodes)";
      if (!verdict.in_core) {
        out << "; coalition " << IdList(tree, verdict.witness) << " worth "
            << FormatDouble(verdict.coalition_value) << " receives "
            << FormatDouble(verdict.coalition_payoff);
      }
      if (!agree) out << "; path and brute-force modes disagree";
      out << '\n';
      doc["core"] = {{"passed", ok},
                     {"mode", brute_ok ? "brute_force" : "paths"},
                     {"in_core", verdict.in_core},
                     {"modes_agree", agree},
                     {"witness", Ids(tree, verdict.witness)},
                     {"coalition_value", verdict.coalition_value},
                     {"coalition_payoff", verdict.coalition_payoff}};
    }

    if (all || options.shapley) {
      std::optional<ShapleyResult> shapley;
      std::string method;
      if (tree.size() <= kMaxExactShapleyPlayers) {
        shapley = Shapley(game);
        method = "exact";
      } else if (tree.size() <= kMaxSampledShapleyPlayers) {
        Rng rng(meta.seed.value_or(0));
        shapley = SampledShapley(game, options.shapley_samples, rng);
        method = "sampled";
      }
      if (!shapley) {
        out << "shapley: skipped (" << tree.size() << " nodes exceeds "
            << kMaxSampledShapleyPlayers << ")\n";
        doc["shapley"] = {{"method", "skipped"}};
      } else {
        const CoreVerdict verdict = CheckCore(game, shapley->values, CoreCheckMode::kPaths,
                                              method == "exact" ? 1e-9 : 1e-6 * game.GrandValue());
        out << "shapley (" << method << "): " << NumberList(shapley->values);
        if (verdict.in_core) {
          out << "; in core\n";
        } else {
          out << "; not in core: coalition " << IdList(tree, verdict.witness) << " worth "
              << FormatDouble(verdict.coalition_value) << " receives "
              << FormatDouble(verdict.coalition_payoff) << '\n';
        }
        Json values = Json::array();
        for (NodeIndex i = 0; i < tree.size(); ++i) {
          values.push_back({{"node", IdOf(tree, i)}, {"value", shapley->values[i]},
                            {"standard_error", shapley->standard_errors[i]}});
        }
        doc["shapley"] = {{"method", method},
                          {"values", std::move(values)},
                          {"in_core", verdict.in_core},
                          {"witness", Ids(tree, verdict.witness)},
                          {"coalition_value", verdict.coalition_value},
                          {"coalition_payoff", verdict.coalition_payoff}};
      }
    }

    if (all || options.nash) {
      const NashVariantResult nash = NashVariantSolve(tree);
      const NodeIndex winner = nash.outcome.winning_leaf;
      const bool efficient = tree.value(winner) == tree.max_leaf_value();
      NodeIndex best = kNoNode;
      for (NodeIndex leaf : tree.leaves()) {
        if (best == kNoNode || tree.value(leaf) > tree.value(best)) best = leaf;
      }
      out << "nash variant: winner " << IdOf(tree, winner) << " (value "
          << FormatDouble(tree.value(winner)) << ")";
      if (efficient) {
        out << "; efficient\n";
      } else {
        out << " != max-value leaf " << IdOf(tree, best) << " (value "
            << FormatDouble(tree.value(best)) << "); inefficient\n";
      }
      doc["nash"] = {{"winning_leaf", IdOf(tree, winner)},
                     {"winning_value", tree.value(winner)},
                     {"max_value_leaf", IdOf(tree, best)},
                     {"max_value", tree.value(best)},
                     {"efficient", efficient},
                     {"seller_payoff", nash.outcome.payoffs[tree.root()]}};
    }

    if (all || options.monotonicity) {
      const PathInstance path = ReduceToPath(tree).path;
      Json probes = Json::array();
      bool ok = true;
      for (std::size_t i = 1; i <= path.edges(); ++i) {
        const double delta = 0.5 * (path.best_value() - path[i]);
        const MonotonicityProbe probe = ProbeMonotonicity(path, i, delta);
        ok = ok && probe.strictly_increased();
        probes.push_back({{"index", i},
                          {"delta", delta},
                          {"payoff_before", probe.payoff_before},
                          {"payoff_after", probe.payoff_after},
                          {"strictly_increased", probe.strictly_increased()}});
      }
      passed = passed && ok;
      out << "monotonicity: " << (ok ? "pass" : "FAIL") << " (" << path.edges()
          << (path.edges() == 1 ? " probe)\n" : " probes)\n");
      doc["monotonicity"] = {{"passed", ok}, {"probes", std::move(probes)}};
    }

    doc["passed"] = passed;
    if (options.out) WriteText(options.out, doc.dump(2) + "\n", out);
    return passed ? kExitOk : kExitPropertyFailure;
  });
}

int RunGenerate(const GenerateOptions& options, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    Rng rng(options.seed);
    std::optional<TreeInstance> tree;
    if (options.kind == "balanced-binary") {
      tree = BalancedBinaryTree(options.depth, rng, ValueDistribution::kLognormal);
    } else if (options.kind == "random") {
      tree = RandomDepthTree(rng, options.depth, ValueDistribution::kLognormal);
    } else {
      throw Error(ErrorCode::kInvalidConfig, "unknown kind '" + options.kind + "'");
    }
    std::ostringstream text;
    text << "# " << tree->leaves().size() << " leaves, " << tree->edge_count() << " edges\n";
    WriteInstance(text, *tree,
                  options.kind + "-d" + std::to_string(options.depth) + "-s" +
                      std::to_string(options.seed),
                  options.seed);
    WriteText(options.out, text.str(), out);
    return kExitOk;
  });
}

}  // namespace treebargain::cli
