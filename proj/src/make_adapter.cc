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

#include "depsentry/make_adapter.h"

#include <algorithm>

#include "depsentry/error.h"
#include "depsentry/subprocess.h"
#include "depsentry/util.h"

namespace depsentry {

namespace {

// Splits a prerequisite list on whitespace; `|` separates order-only.
void ParsePrereqList(const std::string& text, std::vector<std::string>* normal,
                     std::vector<std::string>* order_only) {
  std::vector<std::string>* sink = normal;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i >= text.size()) break;
    size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    std::string token = text.substr(i, j - i);
    if (token == "|") {
      sink = order_only;
    } else {
      sink->push_back(token);
    }
    i = j;
  }
}

// A database "rule line": starts at column 0 and has a ':' separating the
// target from its prerequisites. `%`-patterns and special targets are
// resolved by the caller.
bool SplitRuleLine(const std::string& line, std::string* target,
                   std::string* rest) {
  if (line.empty() || line[0] == '#' || line[0] == '\t' || line[0] == ' ') {
    return false;
  }
  size_t colon = line.find(':');
  if (colon == std::string::npos) return false;
  // Skip `:=`-style variable assignments.
  if (colon + 1 < line.size() && line[colon + 1] == '=') return false;
  *target = TrimWhitespace(line.substr(0, colon));
  size_t rest_begin = colon + 1;
  // Tolerate double-colon rules.
  if (rest_begin < line.size() && line[rest_begin] == ':') ++rest_begin;
  *rest = line.substr(rest_begin);
  return !target->empty() && target->find(' ') == std::string::npos;
}

bool IsSpecialDotTarget(const std::string& target) {
  return !target.empty() && target[0] == '.' &&
         target.find('/') == std::string::npos;
}

}  // namespace

InternalDb ParseInternalDb(const std::string& text) {
  InternalDb db;
  std::vector<std::string> lines = SplitLines(text);

  enum class Section { kPreamble, kOther, kImplicitRules, kFiles, kDone };
  Section section = Section::kPreamble;

  bool pending_not_a_target = false;
  DeclaredRule* current_rule = nullptr;
  PatternRule* current_pattern = nullptr;
  bool in_recipe = false;

  auto end_entry = [&] {
    current_rule = nullptr;
    current_pattern = nullptr;
    in_recipe = false;
  };

  for (const std::string& line : lines) {
    if (section == Section::kPreamble) {
      if (StartsWith(line, "# Make data base")) section = Section::kOther;
      continue;
    }
    if (StartsWith(line, "# Finished Make data base")) {
      section = Section::kDone;
      break;
    }
    if (line == "# Implicit Rules") {
      section = Section::kImplicitRules;
      end_entry();
      continue;
    }
    if (line == "# Files") {
      section = Section::kFiles;
      end_entry();
      continue;
    }
    if (line == "# Variables" || line == "# Directories" ||
        line == "# Pattern-specific Variable Values" ||
        line == "# VPATH Search Paths" ||
        StartsWith(line, "# files hash-table stats")) {
      section = Section::kOther;
      end_entry();
      continue;
    }
    if (section != Section::kFiles && section != Section::kImplicitRules) {
      continue;
    }

    if (line.empty()) {
      pending_not_a_target = false;
      end_entry();
      continue;
    }

    if (line[0] == '\t') {
      if (in_recipe) {
        std::string recipe_line = line.substr(1);
        if (current_rule != nullptr) {
          current_rule->recipe_lines.push_back(recipe_line);
        } else if (current_pattern != nullptr) {
          current_pattern->recipe_lines.push_back(recipe_line);
        }
      }
      continue;
    }

    if (line[0] == '#') {
      if (StartsWith(line, "# Not a target:")) {
        pending_not_a_target = true;
      } else if (StartsWith(line, "#  Phony target")) {
        if (current_rule != nullptr) {
          current_rule->phony = true;
          db.phony.insert(current_rule->target);
        }
      } else if (StartsWith(line, "#  recipe to execute")) {
        // Only user-written recipes carry a makefile location; built-in
        // pattern recipes are annotated "(built-in)".
        bool from_makefile = line.find("(from '") != std::string::npos;
        if (current_pattern != nullptr && !from_makefile) {
          // Forget built-in pattern rules entirely.
          db.pattern_rules.pop_back();
          current_pattern = nullptr;
          in_recipe = false;
        } else {
          in_recipe = true;
        }
      }
      continue;
    }

    std::string target;
    std::string rest;
    if (!SplitRuleLine(line, &target, &rest)) continue;

    if (pending_not_a_target) {
      pending_not_a_target = false;
      end_entry();
      continue;
    }

    if (section == Section::kImplicitRules) {
      if (target.find('%') == std::string::npos) continue;
      PatternRule pattern;
      pattern.target_pattern = target;
      std::vector<std::string> oo;
      ParsePrereqList(rest, &pattern.prereq_patterns, &oo);
      db.pattern_rules.push_back(std::move(pattern));
      current_pattern = &db.pattern_rules.back();
      current_rule = nullptr;
      in_recipe = false;
      continue;
    }

    // Files section.
    if (target == ".PHONY") {
      std::vector<std::string> names;
      std::vector<std::string> oo;
      ParsePrereqList(rest, &names, &oo);
      db.phony.insert(names.begin(), names.end());
      end_entry();
      continue;
    }
    if (IsSpecialDotTarget(target) || target.find('%') != std::string::npos) {
      end_entry();
      continue;
    }

    DeclaredRule rule;
    rule.target = target;
    ParsePrereqList(rest, &rule.prereqs, &rule.order_only);
    auto [it, inserted] = db.rules.emplace(target, std::move(rule));
    if (!inserted) {
      // Repeated entries accumulate prerequisites, mirroring make.
      DeclaredRule& existing = it->second;
      std::vector<std::string> extra_normal;
      std::vector<std::string> extra_oo;
      ParsePrereqList(rest, &extra_normal, &extra_oo);
      for (const std::string& p : extra_normal) {
        if (std::find(existing.prereqs.begin(), existing.prereqs.end(), p) ==
            existing.prereqs.end()) {
          existing.prereqs.push_back(p);
        }
      }
      for (const std::string& p : extra_oo) {
        if (std::find(existing.order_only.begin(), existing.order_only.end(),
                      p) == existing.order_only.end()) {
          existing.order_only.push_back(p);
        }
      }
    }
    current_rule = &it->second;
    current_pattern = nullptr;
    in_recipe = false;
    if (db.phony.count(target) > 0) current_rule->phony = true;
  }

  // The .PHONY entry may appear after the targets it names.
  for (auto& [name, rule] : db.rules) {
    if (db.phony.count(name) > 0) rule.phony = true;
  }
  return db;
}

namespace {

void ExpandPrereq(const InternalDb& db, const std::string& prereq,
                  std::vector<std::string>* out, std::set<std::string>* seen,
                  std::set<std::string>* on_path) {
  if (db.phony.count(prereq) == 0) {
    if (seen->insert(prereq).second) out->push_back(prereq);
    return;
  }
  if (on_path->count(prereq) > 0) {
    throw Error(ErrorKind::kCycleError,
                "phony prerequisite cycle through '" + prereq + "'");
  }
  on_path->insert(prereq);
  auto it = db.rules.find(prereq);
  if (it != db.rules.end()) {
    for (const std::string& sub : it->second.prereqs) {
      ExpandPrereq(db, sub, out, seen, on_path);
    }
  }
  on_path->erase(prereq);
}

}  // namespace

DeclaredGraph ExpandPhony(const InternalDb& db) {
  DeclaredGraph graph;
  for (const auto& [name, rule] : db.rules) {
    if (db.phony.count(name) > 0) continue;
    DeclaredRule expanded;
    expanded.target = name;
    expanded.recipe_lines = rule.recipe_lines;
    expanded.phony = false;
    std::set<std::string> seen;
    for (const std::string& prereq : rule.prereqs) {
      std::set<std::string> on_path;
      ExpandPrereq(db, prereq, &expanded.prereqs, &seen, &on_path);
    }
    std::set<std::string> seen_oo;
    for (const std::string& prereq : rule.order_only) {
      std::set<std::string> on_path;
      ExpandPrereq(db, prereq, &expanded.order_only, &seen_oo, &on_path);
    }
    graph.targets.emplace(name, std::move(expanded));
  }
  return graph;
}

std::string CanonicalizeRecipe(const std::vector<std::string>& lines) {
  std::vector<std::string> canonical;
  for (const std::string& raw : lines) {
    std::string line = raw;
    size_t start = 0;
    while (start < line.size() &&
           (line[start] == '@' || line[start] == '-' || line[start] == '+')) {
      ++start;
    }
    line = line.substr(start);
    size_t end = line.find_last_not_of(" \t\r");
    line = end == std::string::npos ? "" : line.substr(0, end + 1);
    canonical.push_back(line);
  }
  return JoinStrings(canonical, "\n");
}

namespace {

bool IsDryRunNoise(const std::string& line) {
  const std::string trimmed = TrimWhitespace(line);
  static const char* kPrefixes[] = {
      "GNU Make ",
      "Built for ",
      "Copyright (C)",
      "License GPL",
      "This is free software",
      "There is NO WARRANTY",
      "Reading makefiles",
      "Updating makefiles",
      "Updating goal targets",
      "Considering target file",
      "Finished prerequisites of",
      "Prerequisite '",
      "No need to remake target",
      "Pruning file",
      "File '",
      "Must remake target",
      "Successfully remade target",
      "Making '",
      "Shell cwd was reset",
      "waiting for children",
      "make: ",
      "make[",
  };
  for (const char* prefix : kPrefixes) {
    if (StartsWith(trimmed, prefix)) return true;
  }
  return false;
}

// Extracts X from "Must remake target 'X'." (already trimmed).
std::string RemakeTargetName(const std::string& trimmed) {
  size_t first = trimmed.find('\'');
  size_t last = trimmed.rfind('\'');
  if (first == std::string::npos || last <= first) return "";
  return trimmed.substr(first + 1, last - first - 1);
}

}  // namespace

RecipeSnapshot ParseDryRun(const std::string& text,
                           const std::string& commit) {
  RecipeSnapshot snapshot;
  snapshot.commit = commit;
  std::map<std::string, std::vector<std::string>> lines_by_target;
  std::string current;
  for (const std::string& line : SplitLines(text)) {
    const std::string trimmed = TrimWhitespace(line);
    if (StartsWith(trimmed, "Must remake target")) {
      current = RemakeTargetName(trimmed);
      // Materialize the entry: recipe-less targets hash as empty text.
      lines_by_target[current];
      continue;
    }
    if (trimmed.empty() || IsDryRunNoise(line)) continue;
    if (!current.empty()) {
      lines_by_target[current].push_back(line);
    }
  }
  for (auto& [target, lines] : lines_by_target) {
    RecipeEntry entry;
    entry.text = CanonicalizeRecipe(lines);
    entry.sha256 = Sha256Hex(entry.text);
    snapshot.entries.emplace(target, std::move(entry));
  }
  return snapshot;
}

std::set<std::string> DiffRecipes(
    const std::map<std::string, std::string>& old_hashes,
    const RecipeSnapshot& fresh) {
  std::set<std::string> changed;
  for (const auto& [target, hash] : old_hashes) {
    auto it = fresh.entries.find(target);
    if (it == fresh.entries.end() || it->second.sha256 != hash) {
      changed.insert(target);
    }
  }
  for (const auto& [target, entry] : fresh.entries) {
    auto it = old_hashes.find(target);
    if (it == old_hashes.end() || it->second != entry.sha256) {
      changed.insert(target);
    }
  }
  return changed;
}

std::string SerializeRecipes(const RecipeSnapshot& snapshot) {
  std::string out = "#depsentry-recipes v1 commit=" + snapshot.commit + "\n";
  for (const auto& [target, entry] : snapshot.entries) {
    out += target + "\t" + entry.sha256 + "\n";
  }
  return out;
}

std::map<std::string, std::string> ParseRecipes(const std::string& text,
                                                std::string* commit_out) {
  constexpr const char kHeader[] = "#depsentry-recipes v1 commit=";
  std::vector<std::string> lines = SplitLines(text);
  if (lines.empty() || !StartsWith(lines[0], kHeader)) {
    throw Error(ErrorKind::kStateCorrupt, "bad recipes header");
  }
  if (commit_out != nullptr) {
    *commit_out = lines[0].substr(sizeof(kHeader) - 1);
  }
  std::map<std::string, std::string> hashes;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = Split(lines[i], '\t');
    if (fields.size() != 2) {
      throw Error(ErrorKind::kStateCorrupt,
                  "malformed recipes line: " + lines[i]);
    }
    hashes[fields[0]] = fields[1];
  }
  return hashes;
}

namespace {

std::string RunMakeQuery(const std::string& project_root,
                         const std::vector<std::string>& make_args,
                         const std::vector<std::string>& extra) {
  std::vector<std::string> argv = {"make"};
  argv.insert(argv.end(), extra.begin(), extra.end());
  argv.insert(argv.end(), make_args.begin(), make_args.end());
  RunResult run = RunCommand(argv, project_root);
  if (run.exit_code != 0) {
    throw Error(ErrorKind::kBuildFailed,
                "make query failed (exit " + std::to_string(run.exit_code) +
                    "): " + run.output.substr(0, 500));
  }
  return run.output;
}

}  // namespace

std::string QueryInternalDb(const std::string& project_root,
                            const std::vector<std::string>& make_args) {
  return RunMakeQuery(project_root, make_args, {"-pn"});
}

std::string QueryDryRun(const std::string& project_root,
                        const std::vector<std::string>& make_args) {
  return RunMakeQuery(project_root, make_args, {"-n", "-B", "--debug=basic"});
}

bool RecipeCreatesBareSymlink(const std::string& canonical_text) {
  for (const std::string& line : SplitLines(canonical_text)) {
    std::vector<std::string> tokens;
    for (const std::string& tok : Split(line, ' ')) {
      if (!tok.empty()) tokens.push_back(tok);
    }
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i] != "ln") continue;
      bool symbolic = false;
      bool force = false;
      for (size_t j = i + 1; j < tokens.size(); ++j) {
        const std::string& tok = tokens[j];
        if (tok == "--symbolic") {
          symbolic = true;
        } else if (tok == "--force") {
          force = true;
        } else if (tok.size() > 1 && tok[0] == '-' && tok[1] != '-') {
          if (tok.find('s') != std::string::npos) symbolic = true;
          if (tok.find('f') != std::string::npos) force = true;
        }
      }
      if (symbolic && !force) return true;
    }
  }
  return false;
}

std::vector<std::string> ExtractIncludeDirs(const std::string& recipe_text) {
  std::vector<std::string> dirs;
  std::set<std::string> seen;
  for (const std::string& line : SplitLines(recipe_text)) {
    std::vector<std::string> tokens;
    for (const std::string& tok : Split(line, ' ')) {
      if (!tok.empty()) tokens.push_back(tok);
    }
    for (size_t i = 0; i < tokens.size(); ++i) {
      const std::string& tok = tokens[i];
      std::string dir;
      if (tok == "-I" && i + 1 < tokens.size()) {
        dir = tokens[i + 1];
        ++i;
      } else if (StartsWith(tok, "-I") && tok.size() > 2) {
        dir = tok.substr(2);
      } else {
        continue;
      }
      if (seen.insert(dir).second) dirs.push_back(dir);
    }
  }
  return dirs;
}

}  // namespace depsentry
