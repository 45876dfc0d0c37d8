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

#ifndef DEPSENTRY_MAKE_ADAPTER_H_
#define DEPSENTRY_MAKE_ADAPTER_H_

#include <map>
#include <set>
#include <string>
#include <vector>

namespace depsentry {

// One file rule from make's internal database (`make -pn`). Recipe lines are
// stored raw (unexpanded, with @/-/+ prefixes intact).
struct DeclaredRule {
  std::string target;
  std::vector<std::string> prereqs;      // normal prerequisites, in order
  std::vector<std::string> order_only;   // after `|`
  std::vector<std::string> recipe_lines;
  bool phony = false;
};

// User-defined pattern rule (`%.o: %.c`), used to name expected objects for
// newly added sources. Built-in rules are not retained.
struct PatternRule {
  std::string target_pattern;
  std::vector<std::string> prereq_patterns;
  std::vector<std::string> recipe_lines;
};

struct InternalDb {
  std::map<std::string, DeclaredRule> rules;  // file targets only
  std::set<std::string> phony;
  std::vector<PatternRule> pattern_rules;
};

// Parses `make -pn` output. Only the database section is consulted; echoed
// recipe lines before it are ignored. Special dot-targets (.PHONY, .SUFFIXES,
// ...) and `# Not a target:` entries are skipped; phony targets are collected
// from both the .PHONY entry and per-entry annotations.
InternalDb ParseInternalDb(const std::string& text);

// Declared graph after phony expansion: phony targets disappear as nodes and
// every phony prerequisite of a real target is transitively replaced by the
// phony's own prerequisites. Throws Error(kCycleError) on phony cycles.
struct DeclaredGraph {
  std::map<std::string, DeclaredRule> targets;

  bool HasTarget(const std::string& name) const {
    return targets.find(name) != targets.end();
  }
};

DeclaredGraph ExpandPhony(const InternalDb& db);

// Expanded per-target recipe text, canonicalized: trailing whitespace
// stripped per line, leading @/-/+ prefixes dropped, lines joined with \n.
struct RecipeEntry {
  std::string text;
  std::string sha256;
};

struct RecipeSnapshot {
  std::string commit;
  std::map<std::string, RecipeEntry> entries;
};

// Canonicalizes recipe lines (either the raw internal-db form or dry-run
// echoes) into the hashable text form.
std::string CanonicalizeRecipe(const std::vector<std::string>& lines);

// Parses `make -n -B --debug=basic` output: commands are attributed to the
// most recent "Must remake target 'X'." line; make's own progress lines are
// filtered. Targets remade with no commands get an empty-text entry.
RecipeSnapshot ParseDryRun(const std::string& text, const std::string& commit);

// Targets whose canonical recipe hash differs between the stored hashes and
// a fresh snapshot, plus targets present in exactly one of the two.
std::set<std::string> DiffRecipes(
    const std::map<std::string, std::string>& old_hashes,
    const RecipeSnapshot& fresh);

// recipes.v1 wire format: header `#depsentry-recipes v1 commit=<id>`, then
// sorted `target<TAB>sha256hex` lines. Only hashes are persisted.
std::string SerializeRecipes(const RecipeSnapshot& snapshot);
std::map<std::string, std::string> ParseRecipes(const std::string& text,
                                                std::string* commit_out);

// Live queries; throw Error(kBuildFailed) when make exits nonzero.
std::string QueryInternalDb(const std::string& project_root,
                            const std::vector<std::string>& make_args);
std::string QueryDryRun(const std::string& project_root,
                        const std::vector<std::string>& make_args);

// True when the canonical recipe text invokes `ln` with -s/--symbolic but
// without -f/--force: such recipes silently skip link flips and are a known
// source of stale-version false positives.
bool RecipeCreatesBareSymlink(const std::string& canonical_text);

// -I include directories mentioned in a recipe text, in first-use order.
std::vector<std::string> ExtractIncludeDirs(const std::string& recipe_text);

}  // namespace depsentry

#endif  // DEPSENTRY_MAKE_ADAPTER_H_
