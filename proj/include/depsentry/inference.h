// Copyright 2026 The depsentry Authors
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

#ifndef DEPSENTRY_INFERENCE_H_
#define DEPSENTRY_INFERENCE_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "depsentry/change_analyzer.h"
#include "depsentry/graph.h"
#include "depsentry/make_adapter.h"
#include "depsentry/tracer.h"

namespace depsentry {

// Shared context for one commit's inference passes. The mutable members
// accumulate diagnostics that the caller folds into the final report.
struct ResolverContext {
  std::string project_root;
  std::string commit;
  const DeclaredGraph* declared = nullptr;
  const InternalDb* db = nullptr;
  const RecipeSnapshot* recipes = nullptr;  // fresh snapshot at this commit
  const SuffixConfig* suffixes = nullptr;
  std::map<std::string, std::string> renames;  // old path -> new path

  std::vector<std::string> warnings;
  std::set<std::string> unresolved_includes;
  std::vector<std::string> uncovered_sources;  // added sources with no rule
};

// Structural consequences of added/deleted/renamed files, expressed as a
// delta against the historical graph. Renames are rewritten here; a deleted
// source takes with it every node it was the only source of; an added source
// gets a fresh node for whichever object the declared rules say it feeds.
// Populates ctx.renames as a side effect.
GraphDelta InferFileUpdates(const DependencyGraph& historical,
                            const CommitDelta& delta, ResolverContext& ctx);

// Recomputes the dependencies of every untraced node a directive change can
// reach: source deps stay, the header set is re-derived from the sources'
// include closure, and non-C/C++ deps pass through untouched. The delta is
// phrased in post-rename names so it composes after InferFileUpdates.
GraphDelta InferDirectiveUpdates(const DependencyGraph& historical,
                                 const std::vector<DirectiveChange>& changes,
                                 ResolverContext& ctx);

enum class RebuildReason { kRecipeChanged, kNewSourceUncovered };

struct RebuildEntry {
  std::string target;  // make goal; the source path for uncovered sources
  RebuildReason reason = RebuildReason::kRecipeChanged;
};

struct RebuildPlan {
  std::vector<RebuildEntry> entries;
};

// Targets whose recipe changed but that the incremental build did not touch,
// restricted to currently declared real targets, plus carried-over sources
// the file pass could not map to an object.
RebuildPlan PlanRebuilds(const std::set<std::string>& recipe_diff,
                         const DependencyGraph& incremental,
                         const std::vector<std::string>& uncovered_sources,
                         const DeclaredGraph& declared);

struct RebuildExecution {
  std::string project_root;
  std::vector<std::string> make_args;
  TraceMode mode = TraceMode::kReplay;
  std::string replay_dir;  // replay: directory holding target-*.trace files
  std::string shim_path;   // live only
  std::string trace_dir;   // live only: where captured traces are kept
  std::string commit;
};

struct RebuildResult {
  DependencyGraph graph;  // union of the selective-rebuild graphs
  size_t failed = 0;
  size_t externals_dropped = 0;
  std::vector<std::string> warnings;
};

// Runs `make <target>` per entry, traced, and unions the resulting graphs.
// Build failures and missing replay traces degrade to warnings; they never
// abort the commit.
RebuildResult ExecuteRebuilds(const RebuildPlan& plan,
                              const RebuildExecution& exec);

// Replay-trace file name for a selective rebuild of `target`.
std::string RebuildTraceName(const std::string& commit,
                             const std::string& target);

struct MergeInputs {
  const DependencyGraph* historical = nullptr;
  const DependencyGraph* incremental = nullptr;
  const RebuildResult* rebuilds = nullptr;  // may be null
  const GraphDelta* file_delta = nullptr;
  const GraphDelta* directive_delta = nullptr;
  // Post-rename paths whose preprocessor directives changed this commit.
  const std::set<std::string>* directive_files = nullptr;
  const DeclaredGraph* declared = nullptr;
  // Recipe hashes stored at the previous commit; a node that was a target
  // then and is declared nowhere now is stale and gets pruned.
  const std::map<std::string, std::string>* previous_recipes = nullptr;
};

// Folds one commit's evidence into the historical graph. Trace evidence wins
// over inference; inference deltas only touch untraced nodes. Stale nodes
// are pruned entry-only, which keeps edges pointing at them alive as the
// record of what consumers were last seen to read.
DependencyGraph Merge(const MergeInputs& in, ResolverContext& ctx);

}  // namespace depsentry

#endif  // DEPSENTRY_INFERENCE_H_
