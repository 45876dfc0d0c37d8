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

#ifndef DEPSENTRY_TESTS_SUPPORT_FIXTURES_H_
#define DEPSENTRY_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace depsentry {
namespace testing {

// ---------------------------------------------------------------------------
// Trace fabrication
// ---------------------------------------------------------------------------

// One recipe process for a fabricated trace: what it execs, reads, creates.
struct ProcSpec {
  std::string command;
  std::vector<std::string> reads;
  std::vector<std::string> writes;
  // Paths deleted before being (re)created; rendered as D events ahead of
  // the create. Used for `ln -sf`-style recipes.
  std::vector<std::string> deletes;
};

// Renders a replayable build trace: a root `make` process that reads the
// makefile, then one child process per ProcSpec. All event paths are
// root-relative so the trace replays from any checkout location.
std::string RenderTrace(const std::vector<ProcSpec>& procs,
                        const std::string& makefile = "Makefile");

// ---------------------------------------------------------------------------
// Unified diffs
// ---------------------------------------------------------------------------

// Git-style unified diff between two file maps. Changed files are emitted as
// one whole-file hunk (all old lines removed, all new lines added), which is
// a valid diff and exactly what directive extraction needs. `renames` lists
// (old_path, new_path) pairs; renamed content may also differ.
std::string MakeGitDiff(
    const std::map<std::string, std::string>& before,
    const std::map<std::string, std::string>& after,
    const std::vector<std::pair<std::string, std::string>>& renames = {});

// ---------------------------------------------------------------------------
// Make simulation
// ---------------------------------------------------------------------------

// One makefile rule plus the ground truth of what its recipe really touches.
struct SimRule {
  enum class Kind { kCompile, kLink, kGen, kNone };

  std::string target;
  std::vector<std::string> prereqs;
  std::vector<std::string> order_only;
  std::vector<std::string> recipe;  // literal recipe lines, untabbed
  bool phony = false;

  Kind kind = Kind::kNone;
  std::string source;                    // kCompile: the translation unit
  std::vector<std::string> true_inputs;  // kLink/kGen: files really read
  std::vector<std::string> side_outputs; // kGen: extra files written
  std::string command;                   // exec line recorded in the trace
};

struct SimProject {
  std::map<std::string, std::string> files;  // committed files, no makefile
  // Build-generated files (never committed, never diffed) that include
  // resolution must still be able to hit.
  std::map<std::string, std::string> generated;
  std::vector<std::string> makefile_prelude; // variable assignments etc.
  std::vector<SimRule> rules;                // rules[0] is the default goal
  std::vector<std::string> phony_names;
  std::vector<std::string> include_dirs;     // -I dirs used by compiles
  std::string makefile_name = "Makefile";

  std::string RenderMakefile() const;
  // Full tree including the rendered makefile.
  std::map<std::string, std::string> Tree() const;
  SimRule* FindRule(const std::string& target);
};

// Include closure of a source file over the project file map. This is an
// independent re-implementation of the compiler's quoted/angled include
// search (includer dir first for quoted includes, then -I dirs), kept
// separate from the production scanner on purpose: it is the oracle.
std::set<std::string> SimCloseIncludes(
    const std::string& source, const std::map<std::string, std::string>& files,
    const std::vector<std::string>& include_dirs);

// Replays GNU make's mtime algorithm over the declared rules while emitting
// the processes a traced build would show. Timestamps are a virtual integer
// clock; every file write bumps it.
class MakeSimulator {
 public:
  explicit MakeSimulator(SimProject* project);

  // Registers commit-time file-system effects: content writes/additions,
  // deletions, renames. Call after mutating project->files.
  void NoteWrite(const std::string& path);
  void NoteDelete(const std::string& path);
  void NoteRename(const std::string& old_path, const std::string& new_path);

  // Incremental `make` of the default goal; advances target mtimes.
  std::vector<ProcSpec> IncrementalBuild();
  // Incremental `make <goal>`; advances target mtimes.
  std::vector<ProcSpec> GoalBuild(const std::string& goal);
  // Forced build of everything (`make -B`), advancing target mtimes. Used
  // for the initial clean build, which leaves the tree built.
  std::vector<ProcSpec> ForcedBuild();
  // What a fresh forced build of the default goal would run; no state change.
  std::vector<ProcSpec> CleanBuildProcs() const;

 private:
  struct BuildCtx;
  void BuildGoal(const std::string& goal, BuildCtx& ctx) const;
  ProcSpec RunRule(const SimRule& rule) const;

  SimProject* project_;
  std::map<std::string, int64_t> mtime_;
  int64_t clock_ = 0;
};

// ---------------------------------------------------------------------------
// Replay fixtures
// ---------------------------------------------------------------------------

struct ReplayCommit {
  std::string id;
  std::string diff;
  std::map<std::string, std::string> tree;  // full tree after the commit
  std::string incremental_trace;
  // Extra replay traces keyed by file name (selective-rebuild traces).
  std::map<std::string, std::string> extra_traces;
  // Fresh forced-build trace of this commit's tree: the equivalence oracle.
  std::string clean_trace;
};

struct ReplayFixture {
  std::string name;
  std::string root_commit;
  std::map<std::string, std::string> base_tree;
  std::string clean_trace;
  std::vector<ReplayCommit> commits;
};

// The worked-example fixture: six actual dependencies for src/fzy.o, four
// declared, and a build-command-change commit whose rebuild trace reads only
// the two changed files.
ReplayFixture FzyFixture();

// Five scripted projects (>= 10 commits each) mixing directive edits, file
// adds/deletes/renames, recipe edits, no-ops, injected missing/redundant
// dependencies and hidden generated headers.
std::vector<ReplayFixture> EquivalenceFixtures();

// Version-bump soft-link fixture; `force_flag` selects `ln -sf` over `ln -s`.
ReplayFixture CjsonFixture(bool force_flag);

// ---------------------------------------------------------------------------
// Live fixtures
// ---------------------------------------------------------------------------

// Pattern-rule project whose rules declare only the sources. `manifest`
// receives the expected missing-dependency pairs (object, header).
std::map<std::string, std::string> ClibTree(
    std::vector<std::pair<std::string, std::string>>* manifest);

// all -> build -> app phony chain with one genuine missing dependency.
std::map<std::string, std::string> PhonyTree();

// `count` compile targets plus a link rule, for the efficiency check.
std::map<std::string, std::string> PerfTree(int count);

// ---------------------------------------------------------------------------
// Harness helpers
// ---------------------------------------------------------------------------

// Clears `root` (keeping `.depsentry`) and writes `tree`.
void MaterializeTree(const std::string& root,
                     const std::map<std::string, std::string>& tree);

}  // namespace testing
}  // namespace depsentry

#endif  // DEPSENTRY_TESTS_SUPPORT_FIXTURES_H_
