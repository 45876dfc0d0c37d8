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

#include "depsentry/verifier.h"

#include <stdlib.h>

#include <algorithm>
#include <filesystem>

#include "depsentry/error.h"
#include "depsentry/make_adapter.h"
#include "depsentry/path.h"
#include "depsentry/subprocess.h"
#include "depsentry/util.h"

namespace depsentry {

namespace {

namespace fs = std::filesystem;

constexpr int64_t kMtimeLeapNs = 2000000000;  // 2s, beyond any fs granularity

bool SkippedEntry(const std::string& name) {
  return name == ".git" || name == ".depsentry";
}

int64_t TreeMaxMtimeNs(const std::string& root) {
  int64_t max_ns = 0;
  std::error_code ec;
  fs::recursive_directory_iterator it(
      root, fs::directory_options::skip_permission_denied, ec);
  fs::recursive_directory_iterator end;
  while (!ec && it != end) {
    const fs::directory_entry& entry = *it;
    if (entry.is_directory(ec) && SkippedEntry(entry.path().filename())) {
      it.disable_recursion_pending();
    } else if (entry.is_regular_file(ec)) {
      try {
        max_ns = std::max(max_ns, FileMtimeNs(entry.path().string()));
      } catch (const Error&) {
      }
    }
    it.increment(ec);
  }
  return max_ns;
}

RunResult RunMake(const std::string& cwd,
                  const std::vector<std::string>& make_args,
                  const std::string& target) {
  std::vector<std::string> argv = {"make"};
  argv.insert(argv.end(), make_args.begin(), make_args.end());
  if (!target.empty()) argv.push_back(target);
  return RunCommand(argv, cwd, {});
}

std::string Excerpt(const std::string& text) {
  if (text.size() <= 500) return text;
  return text.substr(0, 500) + "...";
}

struct ScratchDir {
  std::string path;
  ~ScratchDir() {
    if (!path.empty()) {
      std::error_code ec;
      fs::remove_all(path, ec);
    }
  }
};

std::string MakeScratchDir() {
  std::string templ =
      (fs::temp_directory_path() / "depsentry-probe-XXXXXX").string();
  std::vector<char> buf(templ.begin(), templ.end());
  buf.push_back('\0');
  if (mkdtemp(buf.data()) == nullptr) {
    throw Error(ErrorKind::kIoError, "cannot create scratch directory");
  }
  return std::string(buf.data());
}

void CopyTreeFiltered(const std::string& src, const std::string& dst) {
  std::error_code ec;
  for (const fs::directory_entry& entry : fs::directory_iterator(src, ec)) {
    std::string name = entry.path().filename();
    if (SkippedEntry(name)) continue;
    fs::copy(entry.path(), fs::path(dst) / name,
             fs::copy_options::recursive | fs::copy_options::copy_symlinks,
             ec);
    if (ec) {
      throw Error(ErrorKind::kIoError,
                  "cannot copy '" + entry.path().string() + "' to scratch: " +
                      ec.message());
    }
  }
  if (ec) {
    throw Error(ErrorKind::kIoError, "cannot list '" + src + "'");
  }
}

}  // namespace

std::string FilterAutomaticVars(const std::string& line,
                                const std::string& dep) {
  std::string out;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '$' && i + 1 < line.size()) {
      char c = line[i + 1];
      if (c == '^') {
        out += "$(filter-out " + dep + ",$^)";
      } else if (c == '+') {
        out += "$(filter-out " + dep + ",$+)";
      } else if (c == '<') {
        out += "$(firstword $(filter-out " + dep + ",$^))";
      } else {
        out += line[i];
        out += c;
      }
      i += 2;
      continue;
    }
    out += line[i];
    ++i;
  }
  return out;
}

Verdict VerifyMd(const VerifierOptions& opts, const Finding& finding) {
  Verdict verdict;
  verdict.finding = finding;
  verdict.method = ProbeMethod::kTimestampMutation;

  const std::string root = CanonicalProjectRoot(opts.project_root);
  const std::string dep_path = root + "/" + finding.dependency;
  const std::string target_path = root + "/" + finding.target;
  if (!FileExists(dep_path)) {
    throw Error(ErrorKind::kProbeFailed,
                "dependency '" + finding.dependency + "' is not on disk");
  }
  if (!FileExists(target_path)) {
    throw Error(ErrorKind::kProbeFailed,
                "target '" + finding.target +
                    "' is not on disk; run a build first");
  }

  const int64_t orig_dep = FileMtimeNs(dep_path);
  const int64_t orig_target = FileMtimeNs(target_path);
  SetFileMtimeNs(dep_path, TreeMaxMtimeNs(root) + kMtimeLeapNs);

  RunResult result;
  try {
    result = RunMake(root, opts.make_args, finding.target);
  } catch (...) {
    SetFileMtimeNs(dep_path, orig_dep);
    throw;
  }
  if (result.exit_code != 0) {
    SetFileMtimeNs(dep_path, orig_dep);
    throw Error(ErrorKind::kProbeFailed,
                "make exited with status " + std::to_string(result.exit_code) +
                    " during probe: " + Excerpt(result.output));
  }

  verdict.confirmed = FileMtimeNs(target_path) == orig_target;
  SetFileMtimeNs(dep_path, orig_dep);
  return verdict;
}

Verdict VerifyRd(const VerifierOptions& opts, const Finding& finding) {
  Verdict verdict;
  verdict.finding = finding;
  verdict.method = ProbeMethod::kPrerequisiteRemoval;

  const std::string root = CanonicalProjectRoot(opts.project_root);
  ScratchDir scratch;
  scratch.path = MakeScratchDir();
  CopyTreeFiltered(root, scratch.path);

  InternalDb db;
  try {
    db = ParseInternalDb(QueryInternalDb(scratch.path, opts.make_args));
  } catch (const Error& e) {
    throw Error(ErrorKind::kProbeFailed,
                std::string("cannot query scratch makefile: ") + e.what());
  }
  DeclaredGraph declared = ExpandPhony(db);

  auto rule_it = declared.targets.find(finding.target);
  if (rule_it == declared.targets.end()) {
    throw Error(ErrorKind::kRewriteFailed,
                "target '" + finding.target + "' is not declared");
  }
  const DeclaredRule& rule = rule_it->second;

  std::vector<std::string> recipe = rule.recipe_lines;
  if (recipe.empty()) {
    for (const PatternRule& pr : db.pattern_rules) {
      size_t pos = pr.target_pattern.find('%');
      if (pos == std::string::npos) continue;
      std::string prefix = pr.target_pattern.substr(0, pos);
      std::string suffix = pr.target_pattern.substr(pos + 1);
      if (finding.target.size() > prefix.size() + suffix.size() &&
          StartsWith(finding.target, prefix) &&
          EndsWith(finding.target, suffix)) {
        recipe = pr.recipe_lines;
        break;
      }
    }
  }
  if (recipe.empty()) {
    throw Error(ErrorKind::kRewriteFailed,
                "no recipe found for '" + finding.target + "'");
  }

  std::string override_rule = "\n" + finding.target + ":";
  for (const std::string& p : rule.prereqs) {
    if (p != finding.dependency) override_rule += " " + p;
  }
  bool first_order_only = true;
  for (const std::string& p : rule.order_only) {
    if (p == finding.dependency) continue;
    override_rule += first_order_only ? " | " : " ";
    override_rule += p;
    first_order_only = false;
  }
  override_rule += "\n";
  for (const std::string& line : recipe) {
    override_rule += "\t" + FilterAutomaticVars(line, finding.dependency) +
                     "\n";
  }

  std::string makefile;
  for (const char* name : {"GNUmakefile", "makefile", "Makefile"}) {
    std::string cand = scratch.path + "/" + name;
    if (FileExists(cand)) {
      makefile = cand;
      break;
    }
  }
  if (makefile.empty()) {
    throw Error(ErrorKind::kRewriteFailed, "no makefile in project root");
  }
  WriteFile(makefile, ReadFile(makefile) + override_rule);

  // Start from a clean slate so the rewritten rule has to really build.
  for (const auto& [name, decl] : declared.targets) {
    std::error_code ec;
    fs::remove(fs::path(scratch.path) / name, ec);
  }

  RunResult result = RunMake(scratch.path, opts.make_args, finding.target);
  verdict.confirmed = result.exit_code == 0;
  return verdict;
}

std::string RenderVerdictLine(const Verdict& verdict) {
  return std::string(FindingKindName(verdict.finding.kind)) + "\t" +
         verdict.finding.target + "\t" + verdict.finding.dependency + "\t" +
         (verdict.confirmed ? "true" : "false") + "\t" +
         (verdict.method == ProbeMethod::kTimestampMutation
              ? "timestamp-mutation"
              : "prerequisite-removal");
}

}  // namespace depsentry
