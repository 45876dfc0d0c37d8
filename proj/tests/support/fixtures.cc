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

#include "support/fixtures.h"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "depsentry/trace.h"
#include "depsentry/util.h"
#include "support/test_support.h"

namespace fs = std::filesystem;

namespace depsentry {
namespace testing {

namespace {

constexpr char kTraceRoot[] = "/replay/src";

// Lexical cleanup of "." and ".." segments in a relative path.
std::string SimNormalize(const std::string& path) {
  std::vector<std::string> kept;
  std::string seg;
  std::istringstream in(path);
  while (std::getline(in, seg, '/')) {
    if (seg.empty() || seg == ".") continue;
    if (seg == "..") {
      if (!kept.empty()) kept.pop_back();
      continue;
    }
    kept.push_back(seg);
  }
  std::string out;
  for (size_t i = 0; i < kept.size(); ++i) {
    if (i) out += '/';
    out += kept[i];
  }
  return out;
}

std::string SimDirname(const std::string& path) {
  size_t pos = path.rfind('/');
  return pos == std::string::npos ? "" : path.substr(0, pos);
}

std::string SimJoin(const std::string& dir, const std::string& name) {
  return SimNormalize(dir.empty() ? name : dir + "/" + name);
}

// Include directives of a source blob: (angled, name) pairs in order.
std::vector<std::pair<bool, std::string>> SimScanIncludes(
    const std::string& text) {
  std::vector<std::pair<bool, std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t i = line.find_first_not_of(" \t");
    if (i == std::string::npos || line[i] != '#') continue;
    i = line.find_first_not_of(" \t", i + 1);
    if (i == std::string::npos || line.compare(i, 7, "include") != 0) continue;
    i = line.find_first_not_of(" \t", i + 7);
    if (i == std::string::npos) continue;
    char open = line[i];
    char close = open == '"' ? '"' : open == '<' ? '>' : '\0';
    if (close == '\0') continue;
    size_t end = line.find(close, i + 1);
    if (end == std::string::npos) continue;
    out.emplace_back(open == '<', line.substr(i + 1, end - i - 1));
  }
  return out;
}

}  // namespace

std::set<std::string> SimCloseIncludes(
    const std::string& source, const std::map<std::string, std::string>& files,
    const std::vector<std::string>& include_dirs) {
  std::set<std::string> out;
  std::set<std::string> seen = {source};
  std::vector<std::string> work = {source};
  while (!work.empty()) {
    std::string file = work.back();
    work.pop_back();
    auto it = files.find(file);
    if (it == files.end()) continue;
    for (const auto& [angled, name] : SimScanIncludes(it->second)) {
      std::string hit;
      if (!angled) {
        std::string cand = SimJoin(SimDirname(file), name);
        if (files.count(cand)) hit = cand;
      }
      if (hit.empty()) {
        for (const std::string& dir : include_dirs) {
          std::string cand = SimJoin(dir, name);
          if (files.count(cand)) {
            hit = cand;
            break;
          }
        }
      }
      if (hit.empty()) continue;  // external or unresolved: not project files
      if (seen.insert(hit).second) {
        out.insert(hit);
        work.push_back(hit);
      }
    }
  }
  return out;
}

std::string RenderTrace(const std::vector<ProcSpec>& procs,
                        const std::string& makefile) {
  BuildTrace trace;
  trace.root = kTraceRoot;
  uint64_t seq = 0;
  const int make_pid = 100;
  auto add = [&](int pid, int ppid, TraceOp op, const std::string& path,
                 const std::string& path2 = "") {
    trace.events.push_back({++seq, pid, ppid, op, path, path2});
  };
  add(make_pid, 1, TraceOp::kSpawn, kTraceRoot);
  add(make_pid, 1, TraceOp::kExec, "make");
  add(make_pid, 1, TraceOp::kRead, makefile);
  int pid = make_pid;
  for (const ProcSpec& proc : procs) {
    ++pid;
    add(pid, make_pid, TraceOp::kSpawn, kTraceRoot);
    add(pid, make_pid, TraceOp::kExec,
        proc.command.empty() ? "sh" : proc.command);
    for (const std::string& path : proc.deletes) {
      add(pid, make_pid, TraceOp::kDelete, path);
    }
    for (const std::string& path : proc.reads) {
      add(pid, make_pid, TraceOp::kRead, path);
    }
    for (const std::string& path : proc.writes) {
      add(pid, make_pid, TraceOp::kCreate, path);
    }
    add(pid, make_pid, TraceOp::kExit, "-");
  }
  add(make_pid, 1, TraceOp::kExit, "-");
  return SerializeTrace(trace);
}

namespace {

void EmitHunk(std::ostringstream& out, const std::string& old_content,
              const std::string& new_content) {
  std::vector<std::string> old_lines = SplitLines(old_content);
  std::vector<std::string> new_lines = SplitLines(new_content);
  out << "@@ -" << (old_lines.empty() ? 0 : 1) << "," << old_lines.size()
      << " +" << (new_lines.empty() ? 0 : 1) << "," << new_lines.size()
      << " @@\n";
  for (const std::string& line : old_lines) out << "-" << line << "\n";
  for (const std::string& line : new_lines) out << "+" << line << "\n";
}

}  // namespace

std::string MakeGitDiff(
    const std::map<std::string, std::string>& before,
    const std::map<std::string, std::string>& after,
    const std::vector<std::pair<std::string, std::string>>& renames) {
  std::ostringstream out;
  std::set<std::string> renamed_old, renamed_new;
  for (const auto& [old_path, new_path] : renames) {
    renamed_old.insert(old_path);
    renamed_new.insert(new_path);
    out << "diff --git a/" << old_path << " b/" << new_path << "\n";
    out << "similarity index 90%\n";
    out << "rename from " << old_path << "\n";
    out << "rename to " << new_path << "\n";
    const std::string& old_content = before.at(old_path);
    const std::string& new_content = after.at(new_path);
    if (old_content != new_content) {
      out << "--- a/" << old_path << "\n";
      out << "+++ b/" << new_path << "\n";
      EmitHunk(out, old_content, new_content);
    }
  }
  for (const auto& [path, content] : before) {
    if (renamed_old.count(path)) continue;
    auto it = after.find(path);
    if (it == after.end()) {
      out << "diff --git a/" << path << " b/" << path << "\n";
      out << "deleted file mode 100644\n";
      out << "--- a/" << path << "\n";
      out << "+++ /dev/null\n";
      EmitHunk(out, content, "");
    } else if (it->second != content) {
      out << "diff --git a/" << path << " b/" << path << "\n";
      out << "index 1111111..2222222 100644\n";
      out << "--- a/" << path << "\n";
      out << "+++ b/" << path << "\n";
      EmitHunk(out, content, it->second);
    }
  }
  for (const auto& [path, content] : after) {
    if (renamed_new.count(path) || before.count(path)) continue;
    out << "diff --git a/" << path << " b/" << path << "\n";
    out << "new file mode 100644\n";
    out << "--- /dev/null\n";
    out << "+++ b/" << path << "\n";
    EmitHunk(out, "", content);
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// SimProject
// ---------------------------------------------------------------------------

std::string SimProject::RenderMakefile() const {
  std::ostringstream out;
  for (const std::string& line : makefile_prelude) out << line << "\n";
  if (!makefile_prelude.empty()) out << "\n";
  for (const SimRule& rule : rules) {
    out << rule.target << ":";
    for (const std::string& p : rule.prereqs) out << " " << p;
    if (!rule.order_only.empty()) {
      out << " |";
      for (const std::string& p : rule.order_only) out << " " << p;
    }
    out << "\n";
    for (const std::string& line : rule.recipe) out << "\t" << line << "\n";
  }
  if (!phony_names.empty()) {
    out << ".PHONY:";
    for (const std::string& name : phony_names) out << " " << name;
    out << "\n";
  }
  return out.str();
}

std::map<std::string, std::string> SimProject::Tree() const {
  std::map<std::string, std::string> tree = files;
  tree[makefile_name] = RenderMakefile();
  return tree;
}

SimRule* SimProject::FindRule(const std::string& target) {
  for (SimRule& rule : rules) {
    if (rule.target == target) return &rule;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// MakeSimulator
// ---------------------------------------------------------------------------

struct MakeSimulator::BuildCtx {
  std::set<std::string> visited;
  std::vector<ProcSpec> procs;
  std::map<std::string, int64_t>* mtimes = nullptr;
  int64_t* clock = nullptr;
  bool force = false;
  bool update = false;
};

MakeSimulator::MakeSimulator(SimProject* project) : project_(project) {
  for (const auto& [path, content] : project_->files) {
    mtime_[path] = ++clock_;
  }
}

void MakeSimulator::NoteWrite(const std::string& path) {
  mtime_[path] = ++clock_;
}

void MakeSimulator::NoteDelete(const std::string& path) { mtime_.erase(path); }

void MakeSimulator::NoteRename(const std::string& old_path,
                               const std::string& new_path) {
  mtime_.erase(old_path);
  mtime_[new_path] = ++clock_;
}

ProcSpec MakeSimulator::RunRule(const SimRule& rule) const {
  ProcSpec proc;
  proc.command = rule.command;
  switch (rule.kind) {
    case SimRule::Kind::kCompile: {
      std::map<std::string, std::string> all = project_->files;
      all.insert(project_->generated.begin(), project_->generated.end());
      std::set<std::string> closure =
          SimCloseIncludes(rule.source, all, project_->include_dirs);
      proc.reads.push_back(rule.source);
      proc.reads.insert(proc.reads.end(), closure.begin(), closure.end());
      proc.writes.push_back(rule.target);
      if (proc.command.empty()) {
        proc.command = "cc -c -o " + rule.target + " " + rule.source;
      }
      break;
    }
    case SimRule::Kind::kLink:
      proc.reads = rule.true_inputs;
      proc.writes.push_back(rule.target);
      if (proc.command.empty()) {
        proc.command = "cc -o " + rule.target;
      }
      break;
    case SimRule::Kind::kGen:
      proc.reads = rule.true_inputs;
      proc.writes.push_back(rule.target);
      proc.writes.insert(proc.writes.end(), rule.side_outputs.begin(),
                         rule.side_outputs.end());
      if (proc.command.empty()) proc.command = "sh";
      break;
    case SimRule::Kind::kNone:
      if (proc.command.empty()) proc.command = "true";
      break;
  }
  return proc;
}

void MakeSimulator::BuildGoal(const std::string& goal, BuildCtx& ctx) const {
  if (!ctx.visited.insert(goal).second) return;
  SimRule* rule = project_->FindRule(goal);
  if (rule == nullptr) return;  // plain file prerequisite
  for (const std::string& p : rule->prereqs) BuildGoal(p, ctx);
  for (const std::string& p : rule->order_only) BuildGoal(p, ctx);
  bool run = ctx.force || rule->phony;
  if (!run) {
    auto self = ctx.mtimes->find(goal);
    if (self == ctx.mtimes->end()) {
      run = true;
    } else {
      for (const std::string& p : rule->prereqs) {
        auto pm = ctx.mtimes->find(p);
        if (pm != ctx.mtimes->end() && pm->second > self->second) {
          run = true;
          break;
        }
      }
    }
  }
  if (!run || rule->recipe.empty()) return;
  ProcSpec proc = RunRule(*rule);
  ctx.procs.push_back(proc);
  if (ctx.update && !rule->phony) {
    if (rule->kind == SimRule::Kind::kNone) {
      (*ctx.mtimes)[rule->target] = ++*ctx.clock;
    } else {
      for (const std::string& w : proc.writes) {
        (*ctx.mtimes)[w] = ++*ctx.clock;
      }
    }
  }
}

std::vector<ProcSpec> MakeSimulator::IncrementalBuild() {
  return GoalBuild(project_->rules.front().target);
}

std::vector<ProcSpec> MakeSimulator::GoalBuild(const std::string& goal) {
  BuildCtx ctx;
  ctx.mtimes = &mtime_;
  ctx.clock = &clock_;
  ctx.update = true;
  BuildGoal(goal, ctx);
  return ctx.procs;
}

std::vector<ProcSpec> MakeSimulator::ForcedBuild() {
  BuildCtx ctx;
  ctx.mtimes = &mtime_;
  ctx.clock = &clock_;
  ctx.update = true;
  ctx.force = true;
  BuildGoal(project_->rules.front().target, ctx);
  return ctx.procs;
}

std::vector<ProcSpec> MakeSimulator::CleanBuildProcs() const {
  BuildCtx ctx;
  std::map<std::string, int64_t> scratch = mtime_;
  int64_t clock = clock_;
  ctx.mtimes = &scratch;
  ctx.clock = &clock;
  ctx.force = true;
  ctx.update = false;
  BuildGoal(project_->rules.front().target, ctx);
  return ctx.procs;
}

// ---------------------------------------------------------------------------
// Fixture scripting
// ---------------------------------------------------------------------------

namespace {

std::string MangleTarget(const std::string& target) {
  std::string mangled = target;
  std::replace(mangled.begin(), mangled.end(), '/', '_');
  return mangled;
}

// Drives one scripted fixture: mutate the project between commits, then call
// Commit() to snapshot tree, diff and traces.
class FixtureScript {
 public:
  FixtureScript(const std::string& name, const std::string& root_commit,
                SimProject project)
      : project_(std::move(project)), sim_(&project_) {
    fixture_.name = name;
    fixture_.root_commit = root_commit;
    fixture_.base_tree = project_.Tree();
    fixture_.clean_trace =
        RenderTrace(sim_.ForcedBuild(), project_.makefile_name);
    prev_tree_ = fixture_.base_tree;
  }

  SimProject& project() { return project_; }

  void Write(const std::string& path, const std::string& content) {
    project_.files[path] = content;
    sim_.NoteWrite(path);
  }

  void Delete(const std::string& path) {
    project_.files.erase(path);
    sim_.NoteDelete(path);
  }

  void Rename(const std::string& old_path, const std::string& new_path) {
    project_.files[new_path] = project_.files.at(old_path);
    project_.files.erase(old_path);
    sim_.NoteRename(old_path, new_path);
    renames_.emplace_back(old_path, new_path);
  }

  void RemoveRule(const std::string& target) {
    auto& rules = project_.rules;
    rules.erase(std::remove_if(
                    rules.begin(), rules.end(),
                    [&](const SimRule& r) { return r.target == target; }),
                rules.end());
  }

  void Commit(const std::string& id) {
    ReplayCommit commit;
    commit.id = id;
    commit.tree = project_.Tree();
    commit.diff = MakeGitDiff(prev_tree_, commit.tree, renames_);
    commit.incremental_trace =
        RenderTrace(sim_.IncrementalBuild(), project_.makefile_name);
    std::vector<std::string> targets;
    for (const SimRule& rule : project_.rules) {
      if (!rule.phony) targets.push_back(rule.target);
    }
    std::sort(targets.begin(), targets.end());
    for (const std::string& target : targets) {
      commit.extra_traces["target-" + id + "-" + MangleTarget(target) +
                          ".trace"] =
          RenderTrace(sim_.GoalBuild(target), project_.makefile_name);
    }
    commit.clean_trace =
        RenderTrace(sim_.CleanBuildProcs(), project_.makefile_name);
    fixture_.commits.push_back(std::move(commit));
    prev_tree_ = fixture_.commits.back().tree;
    renames_.clear();
  }

  ReplayFixture Take() { return std::move(fixture_); }

 private:
  SimProject project_;
  MakeSimulator sim_;
  ReplayFixture fixture_;
  std::map<std::string, std::string> prev_tree_;
  std::vector<std::pair<std::string, std::string>> renames_;
};

SimRule CompileRule(const std::string& target,
                    const std::vector<std::string>& prereqs,
                    const std::string& source,
                    const std::vector<std::string>& recipe = {
                        "cc $(CFLAGS) -c -o $@ $<"}) {
  SimRule rule;
  rule.target = target;
  rule.prereqs = prereqs;
  rule.recipe = recipe;
  rule.kind = SimRule::Kind::kCompile;
  rule.source = source;
  return rule;
}

SimRule LinkRule(const std::string& target,
                 const std::vector<std::string>& prereqs,
                 const std::vector<std::string>& recipe,
                 const std::vector<std::string>& true_inputs,
                 const std::string& command = "") {
  SimRule rule;
  rule.target = target;
  rule.prereqs = prereqs;
  rule.recipe = recipe;
  rule.kind = SimRule::Kind::kLink;
  rule.true_inputs = true_inputs;
  rule.command = command;
  return rule;
}

std::string Guarded(const std::string& guard, const std::string& body) {
  return "#ifndef " + guard + "\n#define " + guard + "\n" + body + "#endif\n";
}

// ---------------------------------------------------------------------------
// Fixture: calc (explicit rules, injected MD from day one)
// ---------------------------------------------------------------------------

ReplayFixture CalcFixture() {
  SimProject p;
  p.makefile_prelude = {"CFLAGS = -O1"};
  p.files["src/common.h"] = Guarded("COMMON_H", "#define SCALE 2\n");
  p.files["src/add.h"] =
      Guarded("ADD_H", "#include \"common.h\"\nint add(int a, int b);\n");
  p.files["src/mul.h"] = Guarded("MUL_H", "int mul(int a, int b);\n");
  p.files["src/add.c"] =
      "#include \"add.h\"\nint add(int a, int b) { return (a + b) * SCALE / "
      "SCALE; }\n";
  p.files["src/mul.c"] =
      "#include \"mul.h\"\nint mul(int a, int b) { return a * b; }\n";
  p.files["src/main.c"] =
      "#include \"add.h\"\n#include \"mul.h\"\nint main(void) { return "
      "add(2, 3) + mul(0, 3); }\n";
  p.files["README.txt"] = "calc demo\n";
  p.rules.push_back(LinkRule("app", {"src/main.o", "src/add.o", "src/mul.o"},
                             {"cc -o $@ $^"},
                             {"src/main.o", "src/add.o", "src/mul.o"},
                             "cc -o app src/main.o src/add.o src/mul.o"));
  p.rules.push_back(CompileRule(
      "src/main.o", {"src/main.c", "src/add.h", "src/mul.h"}, "src/main.c"));
  p.rules.push_back(
      CompileRule("src/add.o", {"src/add.c", "src/add.h"}, "src/add.c"));
  p.rules.push_back(
      CompileRule("src/mul.o", {"src/mul.c", "src/mul.h"}, "src/mul.c"));

  FixtureScript s("calc", "c0", std::move(p));

  // c1: commit that touches nothing the build cares about.
  s.Write("README.txt", "calc demo\nv2\n");
  s.Commit("c1");

  // c2: directive edit in a declared source; the rebuild traces the new dep.
  s.Write("src/mul.c",
          "#include \"mul.h\"\n#include \"common.h\"\nint mul(int a, int b) "
          "{ return a * b * SCALE / SCALE; }\n");
  s.Commit("c2");

  // c3: body-level change of an undeclared header; nothing rebuilds, the
  // directive pass recomputes consumers and lands on the same edges.
  s.Write("src/common.h", Guarded("COMMON_H", "#define SCALE 3\n"));
  s.Commit("c3");

  // c4: new header pulled in through a nested include.
  s.Write("src/util.h", Guarded("UTIL_H", "#define UTIL_OK 1\n"));
  s.Write("src/add.h",
          Guarded("ADD_H",
                  "#include \"common.h\"\n#include \"util.h\"\nint add(int "
                  "a, int b);\n"));
  s.Commit("c4");

  // c5: source rename with matching rule rename.
  s.Rename("src/mul.c", "src/multiply.c");
  s.RemoveRule("src/mul.o");
  {
    SimRule rule = CompileRule("src/multiply.o",
                               {"src/multiply.c", "src/mul.h"},
                               "src/multiply.c");
    s.project().rules.push_back(rule);
    SimRule* app = s.project().FindRule("app");
    app->prereqs = {"src/main.o", "src/add.o", "src/multiply.o"};
    app->true_inputs = app->prereqs;
    app->command = "cc -o app src/main.o src/add.o src/multiply.o";
  }
  s.Commit("c5");

  // c6: feature removal; the dropped source's object disappears, but the
  // stale mul.h prerequisite is left behind in the main.o rule (redundant).
  s.Delete("src/multiply.c");
  s.RemoveRule("src/multiply.o");
  {
    SimRule* app = s.project().FindRule("app");
    app->prereqs = {"src/main.o", "src/add.o"};
    app->true_inputs = app->prereqs;
    app->command = "cc -o app src/main.o src/add.o";
  }
  s.Write("src/main.c",
          "#include \"add.h\"\nint main(void) { return add(2, 3) - 5; }\n");
  s.Commit("c6");

  // c7: flag-only recipe change; selective rebuilds are no-ops.
  s.project().makefile_prelude = {"CFLAGS = -O2"};
  s.Commit("c7");

  // c8: stray prerequisite injected into the add.o rule.
  s.Write("data/extra.txt", "notes\n");
  s.project().FindRule("src/add.o")->prereqs = {"src/add.c", "src/add.h",
                                                "data/extra.txt"};
  s.Commit("c8");

  // c9: order-only prerequisite nothing ever reads.
  s.Write("docs/notes.txt", "n\n");
  s.project().FindRule("src/main.o")->order_only = {"docs/notes.txt"};
  s.Commit("c9");

  // c10: comment-only source change.
  s.Write("src/add.c",
          "#include \"add.h\"\n/* tuned */\nint add(int a, int b) { return "
          "(a + b) * SCALE / SCALE; }\n");
  s.Commit("c10");

  return s.Take();
}

// ---------------------------------------------------------------------------
// Fixture: gen (generated headers, hidden and declared)
// ---------------------------------------------------------------------------

ReplayFixture GenFixture() {
  SimProject p;
  p.files["version.txt"] = "7\n";
  p.files["gen.sh"] =
      "mkdir -p gen\n"
      "v=$(cat version.txt)\n"
      "printf '#define VERSION %s\\n' \"$v\" > gen/version.h\n"
      "printf '#define CONFIG_OK 1\\n' > gen/config.h\n"
      ": > gen/stamp\n";
  p.files["src/main.c"] =
      "#include \"../gen/version.h\"\nint main(void) { return VERSION > 0 ? "
      "0 : 1; }\n";
  p.files["src/util.c"] =
      "#include \"util.h\"\n#include \"../gen/config.h\"\nint util_ok(void) "
      "{ return CONFIG_OK; }\n";
  p.files["src/util.h"] = Guarded("UTIL_H", "int util_ok(void);\n");
  p.generated["gen/version.h"] = "";
  p.generated["gen/config.h"] = "";

  SimRule all;
  all.target = "all";
  all.prereqs = {"gen/stamp", "app"};
  all.phony = true;
  p.rules.push_back(all);
  p.phony_names = {"all"};

  SimRule gen;
  gen.target = "gen/stamp";
  gen.prereqs = {"version.txt", "gen.sh"};
  gen.recipe = {"sh gen.sh"};
  gen.kind = SimRule::Kind::kGen;
  gen.true_inputs = {"version.txt", "gen.sh"};
  gen.side_outputs = {"gen/version.h", "gen/config.h"};
  gen.command = "sh gen.sh";
  p.rules.push_back(gen);

  p.rules.push_back(LinkRule("app", {"src/main.o", "src/util.o"},
                             {"cc -o $@ $^"}, {"src/main.o", "src/util.o"},
                             "cc -o app src/main.o src/util.o"));
  p.rules.push_back(CompileRule("src/main.o", {"src/main.c"}, "src/main.c",
                                {"cc -c -o $@ $<"}));
  p.rules.push_back(CompileRule("src/util.o", {"src/util.c", "src/util.h"},
                                "src/util.c", {"cc -c -o $@ $<"}));

  FixtureScript s("gen", "g0", std::move(p));

  // g1: regenerate; consumers of the hidden headers are not rebuilt.
  s.Write("version.txt", "8\n");
  s.Commit("g1");

  // g2: unrelated file added.
  s.Write("NOTES.md", "nothing to see\n");
  s.Commit("g2");

  // g3: directive edit in main.c.
  s.Write("src/main.c",
          "#include \"../gen/version.h\"\n#include \"util.h\"\nint "
          "main(void) { return VERSION > 0 && util_ok() ? 0 : 1; }\n");
  s.Commit("g3");

  // g4: cosmetic recipe change; make has nothing to redo.
  s.project().FindRule("gen/stamp")->recipe = {"sh ./gen.sh"};
  s.Commit("g4");

  // g5: new source covered by a new explicit rule.
  s.Write("src/extra.c",
          "#include \"util.h\"\nint extra(void) { return util_ok(); }\n");
  s.project().rules.push_back(CompileRule(
      "src/extra.o", {"src/extra.c", "src/util.h"}, "src/extra.c",
      {"cc -c -o $@ $<"}));
  {
    SimRule* app = s.project().FindRule("app");
    app->prereqs = {"src/main.o", "src/util.o", "src/extra.o"};
    app->true_inputs = app->prereqs;
    app->command = "cc -o app src/main.o src/util.o src/extra.o";
  }
  s.Commit("g5");

  // g6: dead source no rule covers.
  s.Write("src/dead.c", "#include \"util.h\"\nint dead(void) { return 0; }\n");
  s.Commit("g6");

  // g7: dead source removed again.
  s.Delete("src/dead.c");
  s.Commit("g7");

  // g8: rename a consumer of a hidden generated header.
  s.Rename("src/util.c", "src/helper.c");
  s.RemoveRule("src/util.o");
  s.project().rules.push_back(CompileRule("src/helper.o",
                                          {"src/helper.c", "src/util.h"},
                                          "src/helper.c", {"cc -c -o $@ $<"}));
  {
    SimRule* app = s.project().FindRule("app");
    app->prereqs = {"src/main.o", "src/helper.o", "src/extra.o"};
    app->true_inputs = app->prereqs;
    app->command = "cc -o app src/main.o src/helper.o src/extra.o";
  }
  s.Commit("g8");

  // g9: link recipe tweak plus a comment edit.
  s.project().FindRule("app")->recipe = {"cc -s -o $@ $^"};
  s.Write("src/main.c",
          "#include \"../gen/version.h\"\n#include \"util.h\"\n/* entry */\n"
          "int main(void) { return VERSION > 0 && util_ok() ? 0 : 1; }\n");
  s.Commit("g9");

  // g10: regenerate and touch a declared header in the same commit.
  s.Write("version.txt", "9\n");
  s.Write("src/util.h",
          Guarded("UTIL_H", "/* stable */\nint util_ok(void);\n"));
  s.Commit("g10");

  return s.Take();
}

// ---------------------------------------------------------------------------
// Fixture: multidir (-I search, angled includes, directory targets)
// ---------------------------------------------------------------------------

ReplayFixture MultiDirFixture() {
  SimProject p;
  p.makefile_prelude = {"CPPFLAGS = -Iinclude"};
  p.include_dirs = {"include"};
  p.files["src/core.c"] =
      "#include <api.h>\n#include \"core.h\"\nint core(void) { return API + "
      "CORE; }\nint main(void) { return core() - core(); }\n";
  p.files["src/core.h"] = Guarded("CORE_H", "#define CORE 1\n");
  p.files["src/io.c"] =
      "#include <api.h>\n#include <io.h>\nint io(void) { return API; }\n";
  p.files["include/api.h"] =
      Guarded("API_H", "#include <types.h>\n#define API 2\n");
  p.files["include/types.h"] = Guarded("TYPES_H", "typedef int t_num;\n");
  p.files["include/io.h"] = Guarded("IO_H", "int io(void);\n");
  p.files["README.txt"] = "multidir\n";

  p.rules.push_back(LinkRule("app", {"obj/core.o", "obj/io.o"},
                             {"cc -o $@ obj/core.o obj/io.o"},
                             {"obj/core.o", "obj/io.o"},
                             "cc -o app obj/core.o obj/io.o"));
  {
    SimRule rule = CompileRule("obj/core.o", {"src/core.c", "include/api.h"},
                               "src/core.c",
                               {"cc $(CPPFLAGS) -c -o $@ src/core.c"});
    rule.order_only = {"obj"};
    rule.command = "cc -Iinclude -c -o obj/core.o src/core.c";
    p.rules.push_back(rule);
  }
  {
    SimRule rule = CompileRule(
        "obj/io.o", {"src/io.c", "include/api.h", "include/io.h"}, "src/io.c",
        {"cc $(CPPFLAGS) -c -o $@ src/io.c"});
    rule.order_only = {"obj"};
    rule.command = "cc -Iinclude -c -o obj/io.o src/io.c";
    p.rules.push_back(rule);
  }
  {
    SimRule dir;
    dir.target = "obj";
    dir.recipe = {"mkdir -p obj"};
    dir.kind = SimRule::Kind::kNone;
    dir.command = "mkdir -p obj";
    p.rules.push_back(dir);
  }

  FixtureScript s("multidir", "m0", std::move(p));

  // m1: non-build change.
  s.Write("README.txt", "multidir\nupdated\n");
  s.Commit("m1");

  // m2: new private header for io.c.
  s.Write("src/ioimpl.h", Guarded("IOIMPL_H", "#define IOIMPL 3\n"));
  s.Write("src/io.c",
          "#include <api.h>\n#include <io.h>\n#include \"ioimpl.h\"\nint "
          "io(void) { return API + IOIMPL; }\n");
  s.Commit("m2");

  // m3: body edit of an undeclared header.
  s.Write("include/types.h",
          Guarded("TYPES_H", "typedef int t_num; /* numeric */\n"));
  s.Commit("m3");

  // m4: shared header grows a nested angled include.
  s.Write("include/defs.h", Guarded("DEFS_H", "#define DEFS 4\n"));
  s.Write("include/api.h",
          Guarded("API_H",
                  "#include <types.h>\n#include <defs.h>\n#define API 2\n"));
  s.Commit("m4");

  // m5: header rename plus the include-line updates.
  s.Rename("include/types.h", "include/typedefs.h");
  s.Write("include/api.h",
          Guarded("API_H",
                  "#include <typedefs.h>\n#include <defs.h>\n#define API "
                  "2\n"));
  s.Commit("m5");

  // m6: global flag change; every compile recipe differs, no mtimes do.
  s.project().makefile_prelude = {"CPPFLAGS = -Iinclude -DNDEBUG"};
  s.Commit("m6");

  // m7: new module.
  s.Write("src/log.c", "#include <api.h>\nint logit(void) { return API; }\n");
  {
    SimRule rule = CompileRule("obj/log.o", {"src/log.c", "include/api.h"},
                               "src/log.c",
                               {"cc $(CPPFLAGS) -c -o $@ src/log.c"});
    rule.order_only = {"obj"};
    rule.command = "cc -Iinclude -c -o obj/log.o src/log.c";
    s.project().rules.push_back(rule);
    SimRule* app = s.project().FindRule("app");
    app->prereqs = {"obj/core.o", "obj/io.o", "obj/log.o"};
    app->recipe = {"cc -o $@ obj/core.o obj/io.o obj/log.o"};
    app->true_inputs = app->prereqs;
    app->command = "cc -o app obj/core.o obj/io.o obj/log.o";
  }
  s.Commit("m7");

  // m8: stray header prerequisite on io.o.
  s.Write("include/unused.h", Guarded("UNUSED_H", "#define UNUSED 5\n"));
  s.project().FindRule("obj/io.o")->prereqs = {
      "src/io.c", "include/api.h", "include/io.h", "include/unused.h"};
  s.Commit("m8");

  // m9: module removed again; the link keeps its old recipe shape.
  s.Delete("src/log.c");
  s.RemoveRule("obj/log.o");
  {
    SimRule* app = s.project().FindRule("app");
    app->prereqs = {"obj/core.o", "obj/io.o"};
    app->recipe = {"cc -o $@ obj/core.o obj/io.o"};
    app->true_inputs = app->prereqs;
    app->command = "cc -o app obj/core.o obj/io.o";
  }
  s.Commit("m9");

  // m10: comment-only edit.
  s.Write("src/core.c",
          "#include <api.h>\n#include \"core.h\"\n/* hot path */\nint "
          "core(void) { return API + CORE; }\nint main(void) { return "
          "core() - core(); }\n");
  s.Commit("m10");

  return s.Take();
}

// ---------------------------------------------------------------------------
// Fixture: lib (two-stage archive)
// ---------------------------------------------------------------------------

ReplayFixture LibFixture() {
  SimProject p;
  p.files["util.h"] = Guarded("UTIL_H", "#define UTIL 1\n");
  p.files["internal.h"] = Guarded("INTERNAL_H", "#define INTERNAL 2\n");
  p.files["a.c"] =
      "#include \"util.h\"\n#include \"internal.h\"\nint a_fn(void) { return "
      "UTIL + INTERNAL; }\n";
  p.files["b.c"] = "#include \"util.h\"\nint b_fn(void) { return UTIL; }\n";
  p.files["main.c"] =
      "#include \"util.h\"\nint a_fn(void);\nint main(void) { return a_fn() "
      "- a_fn(); }\n";
  p.files["README.txt"] = "lib\n";

  p.rules.push_back(LinkRule("app", {"main.o", "libutil.a"},
                             {"cc -o app main.o libutil.a"},
                             {"main.o", "libutil.a"},
                             "cc -o app main.o libutil.a"));
  p.rules.push_back(LinkRule("libutil.a", {"a.o", "b.o"},
                             {"ar rcs libutil.a a.o b.o"}, {"a.o", "b.o"},
                             "ar rcs libutil.a a.o b.o"));
  p.rules.push_back(CompileRule("main.o", {"main.c", "util.h"}, "main.c",
                                {"cc -c -o $@ $<"}));
  p.rules.push_back(
      CompileRule("a.o", {"a.c", "util.h"}, "a.c", {"cc -c -o $@ $<"}));
  p.rules.push_back(
      CompileRule("b.o", {"b.c", "util.h"}, "b.c", {"cc -c -o $@ $<"}));

  FixtureScript s("lib", "l0", std::move(p));

  // l1: non-build change.
  s.Write("README.txt", "lib\nv2\n");
  s.Commit("l1");

  // l2: undeclared header grows a nested include; consumers are inferred.
  s.Write("deep.h", Guarded("DEEP_H", "#define DEEP 3\n"));
  s.Write("internal.h",
          Guarded("INTERNAL_H", "#include \"deep.h\"\n#define INTERNAL 2\n"));
  s.Commit("l2");

  // l3: b.c starts using the internal header.
  s.Write("b.c",
          "#include \"util.h\"\n#include \"internal.h\"\nint b_fn(void) { "
          "return UTIL + INTERNAL; }\n");
  s.Commit("l3");

  // l4: archive recipe spelling change.
  s.project().FindRule("libutil.a")->recipe = {"ar crs libutil.a a.o b.o"};
  s.Commit("l4");

  // l5: header rename rippling through sources and rules.
  s.Rename("util.h", "common.h");
  s.Write("a.c",
          "#include \"common.h\"\n#include \"internal.h\"\nint a_fn(void) { "
          "return UTIL + INTERNAL; }\n");
  s.Write("b.c",
          "#include \"common.h\"\n#include \"internal.h\"\nint b_fn(void) { "
          "return UTIL + INTERNAL; }\n");
  s.Write("main.c",
          "#include \"common.h\"\nint a_fn(void);\nint main(void) { return "
          "a_fn() - a_fn(); }\n");
  s.project().FindRule("main.o")->prereqs = {"main.c", "common.h"};
  s.project().FindRule("a.o")->prereqs = {"a.c", "common.h"};
  s.project().FindRule("b.o")->prereqs = {"b.c", "common.h"};
  s.Commit("l5");

  // l6: source removal; the archive rule shrinks but is not rebuilt.
  s.Delete("b.c");
  s.RemoveRule("b.o");
  {
    SimRule* lib = s.project().FindRule("libutil.a");
    lib->prereqs = {"a.o"};
    lib->recipe = {"ar crs libutil.a a.o"};
    lib->true_inputs = {"a.o"};
    lib->command = "ar rcs libutil.a a.o";
  }
  s.Commit("l6");

  // l7: new member added to the archive.
  s.Write("c.c", "#include \"common.h\"\nint c_fn(void) { return UTIL; }\n");
  s.project().rules.push_back(
      CompileRule("c.o", {"c.c", "common.h"}, "c.c", {"cc -c -o $@ $<"}));
  {
    SimRule* lib = s.project().FindRule("libutil.a");
    lib->prereqs = {"a.o", "c.o"};
    lib->recipe = {"ar crs libutil.a a.o c.o"};
    lib->true_inputs = {"a.o", "c.o"};
    lib->command = "ar rcs libutil.a a.o c.o";
  }
  s.Commit("l7");

  // l8: stray data file declared as a link prerequisite.
  s.Write("docs.txt", "d\n");
  s.project().FindRule("app")->prereqs = {"main.o", "libutil.a", "docs.txt"};
  s.Commit("l8");

  // l9: main.c starts using the internal header.
  s.Write("main.c",
          "#include \"common.h\"\n#include \"internal.h\"\nint a_fn(void);\n"
          "int main(void) { return a_fn() - a_fn() + INTERNAL - INTERNAL; "
          "}\n");
  s.Commit("l9");

  // l10: comment-only edit.
  s.Write("a.c",
          "#include \"common.h\"\n#include \"internal.h\"\n/* core */\nint "
          "a_fn(void) { return UTIL + INTERNAL; }\n");
  s.Commit("l10");

  return s.Take();
}

// ---------------------------------------------------------------------------
// Fixture: quirks (order-only prerequisites, conditional includes)
// ---------------------------------------------------------------------------

ReplayFixture QuirksFixture() {
  SimProject p;
  p.files["x.c"] =
      "#include \"x.h\"\nint x_fn(void) { return XH; }\nint main(void) { "
      "return 0; }\n";
  p.files["x.h"] = Guarded("X_H", "#define XH 1\n");
  p.files["feat.h"] = Guarded("FEAT_H", "#define FEAT 2\n");
  p.files["y.c"] = "int y_fn(void) { return 0; }\n";
  p.files["docs/readme.txt"] = "r\n";

  {
    SimRule app = LinkRule("app", {"x.o", "y.o"}, {"cc -o $@ x.o y.o"},
                           {"x.o", "y.o"}, "cc -o app x.o y.o");
    app.order_only = {"outdir"};
    p.rules.push_back(app);
  }
  {
    SimRule rule =
        CompileRule("x.o", {"x.c", "x.h"}, "x.c", {"cc -c -o $@ $<"});
    rule.order_only = {"outdir"};
    p.rules.push_back(rule);
  }
  {
    SimRule rule = CompileRule("y.o", {"y.c"}, "y.c", {"cc -c -o $@ $<"});
    rule.order_only = {"docs/readme.txt"};
    p.rules.push_back(rule);
  }
  {
    SimRule dir;
    dir.target = "outdir";
    dir.recipe = {"mkdir -p outdir"};
    dir.kind = SimRule::Kind::kNone;
    dir.command = "mkdir -p outdir";
    p.rules.push_back(dir);
  }

  FixtureScript s("quirks", "q0", std::move(p));

  // q1: order-only file edited; nothing rebuilds.
  s.Write("docs/readme.txt", "r2\n");
  s.Commit("q1");

  // q2: declared header grows an include.
  s.Write("deep.h", Guarded("DEEPQ_H", "#define DEEPQ 4\n"));
  s.Write("x.h", Guarded("X_H", "#include \"deep.h\"\n#define XH 1\n"));
  s.Commit("q2");

  // q3: conditional include switched on.
  s.Write("x.c",
          "#include \"x.h\"\n#define FEATURE 1\n#ifdef FEATURE\n#include "
          "\"feat.h\"\n#endif\nint x_fn(void) { return XH + FEAT; }\nint "
          "main(void) { return 0; }\n");
  s.Commit("q3");

  // q4: recipe flag tweak.
  s.project().FindRule("y.o")->recipe = {"cc -O1 -c -o $@ $<"};
  s.Commit("q4");

  // q5: new module.
  s.Write("z.c", "int z_fn(void) { return 1; }\n");
  {
    SimRule rule = CompileRule("z.o", {"z.c"}, "z.c", {"cc -c -o $@ $<"});
    rule.order_only = {"outdir"};
    s.project().rules.push_back(rule);
    SimRule* app = s.project().FindRule("app");
    app->prereqs = {"x.o", "y.o", "z.o"};
    app->recipe = {"cc -o $@ x.o y.o z.o"};
    app->true_inputs = app->prereqs;
    app->command = "cc -o app x.o y.o z.o";
  }
  s.Commit("q5");

  // q6: source and object rename.
  s.Rename("y.c", "why.c");
  s.RemoveRule("y.o");
  {
    SimRule rule =
        CompileRule("why.o", {"why.c"}, "why.c", {"cc -O1 -c -o $@ $<"});
    rule.order_only = {"docs/readme.txt"};
    s.project().rules.push_back(rule);
    SimRule* app = s.project().FindRule("app");
    app->prereqs = {"x.o", "why.o", "z.o"};
    app->recipe = {"cc -o $@ x.o why.o z.o"};
    app->true_inputs = app->prereqs;
    app->command = "cc -o app x.o why.o z.o";
  }
  s.Commit("q6");

  // q7: comment-only edit.
  s.Write("why.c", "/* renamed */\nint y_fn(void) { return 0; }\n");
  s.Commit("q7");

  // q8: stray prerequisite on x.o.
  s.Write("notes.md", "m\n");
  s.project().FindRule("x.o")->prereqs = {"x.c", "x.h", "notes.md"};
  s.Commit("q8");

  // q9: conditional include removed again.
  s.Write("x.c",
          "#include \"x.h\"\nint x_fn(void) { return XH; }\nint main(void) "
          "{ return 0; }\n");
  s.Commit("q9");

  // q10: module removed; the link rule shrinks without rebuilding.
  s.Delete("z.c");
  s.RemoveRule("z.o");
  {
    SimRule* app = s.project().FindRule("app");
    app->prereqs = {"x.o", "why.o"};
    app->recipe = {"cc -o $@ x.o why.o"};
    app->true_inputs = app->prereqs;
    app->command = "cc -o app x.o why.o";
  }
  s.Commit("q10");

  return s.Take();
}

}  // namespace

std::vector<ReplayFixture> EquivalenceFixtures() {
  std::vector<ReplayFixture> fixtures;
  fixtures.push_back(CalcFixture());
  fixtures.push_back(GenFixture());
  fixtures.push_back(MultiDirFixture());
  fixtures.push_back(LibFixture());
  fixtures.push_back(QuirksFixture());
  return fixtures;
}

// ---------------------------------------------------------------------------
// fzy worked example
// ---------------------------------------------------------------------------

ReplayFixture FzyFixture() {
  ReplayFixture fx;
  fx.name = "fzy";
  fx.root_commit = "28195b3";

  auto makefile = [](const std::string& fzy_flags) {
    return std::string("OBJECTS = src/fzy.o src/match.o src/tty.o "
                       "src/choices.o src/options.o\n") +
           "fzy: $(OBJECTS)\n\tcc -o $@ $(OBJECTS)\n" +
           "src/fzy.o: src/fzy.c src/fzy.h src/choices.h src/options.h\n\tcc " +
           fzy_flags + "-c -o $@ src/fzy.c\n" +
           "src/match.o: src/match.c src/match.h src/fzy.h\n\tcc -c -o $@ "
           "src/match.c\n" +
           "src/tty.o: src/tty.c src/tty.h\n\tcc -c -o $@ src/tty.c\n" +
           "src/choices.o: src/choices.c src/choices.h src/match.h\n\tcc -c "
           "-o $@ src/choices.c\n" +
           "src/options.o: src/options.c src/options.h\n\tcc -c -o $@ "
           "src/options.c\n";
  };

  fx.base_tree["Makefile"] = makefile("");
  fx.base_tree["src/fzy.h"] = Guarded("FZY_H", "int fzy_run(void);\n");
  fx.base_tree["src/match.h"] = Guarded("MATCH_H", "int match(void);\n");
  fx.base_tree["src/tty.h"] = Guarded("TTY_H", "int tty_init(void);\n");
  fx.base_tree["src/choices.h"] = Guarded("CHOICES_H", "int choices(void);\n");
  fx.base_tree["src/options.h"] = Guarded("OPTIONS_H", "int options(void);\n");
  fx.base_tree["src/fzy.c"] =
      "#include \"fzy.h\"\n#include \"match.h\"\n#include \"tty.h\"\n"
      "#include \"choices.h\"\n#include \"options.h\"\nint fzy_run(void) { "
      "return match() + tty_init() + choices() + options(); }\nint "
      "main(void) { return fzy_run(); }\n";
  fx.base_tree["src/match.c"] =
      "#include \"match.h\"\n#include \"fzy.h\"\nint match(void) { return 1; "
      "}\n";
  fx.base_tree["src/tty.c"] =
      "#include \"tty.h\"\nint tty_init(void) { return 2; }\n";
  fx.base_tree["src/choices.c"] =
      "#include \"choices.h\"\n#include \"match.h\"\nint choices(void) { "
      "return 3; }\n";
  fx.base_tree["src/options.c"] =
      "#include \"options.h\"\nint options(void) { return 4; }\n";

  auto compile = [](const std::string& obj, const std::string& src,
                    std::vector<std::string> headers) {
    ProcSpec proc;
    proc.command = "cc -c -o " + obj + " " + src;
    proc.reads.push_back(src);
    for (auto& h : headers) proc.reads.push_back(h);
    proc.writes.push_back(obj);
    return proc;
  };
  ProcSpec link;
  link.command = "cc -o fzy src/fzy.o src/match.o src/tty.o src/choices.o "
                 "src/options.o";
  link.reads = {"src/fzy.o", "src/match.o", "src/tty.o", "src/choices.o",
                "src/options.o"};
  link.writes = {"fzy"};

  std::vector<ProcSpec> clean = {
      compile("src/fzy.o", "src/fzy.c",
              {"src/fzy.h", "src/match.h", "src/tty.h", "src/choices.h",
               "src/options.h"}),
      compile("src/match.o", "src/match.c", {"src/match.h", "src/fzy.h"}),
      compile("src/tty.o", "src/tty.c", {"src/tty.h"}),
      compile("src/choices.o", "src/choices.c",
              {"src/choices.h", "src/match.h"}),
      compile("src/options.o", "src/options.c", {"src/options.h"}),
      link};
  fx.clean_trace = RenderTrace(clean);

  ReplayCommit commit;
  commit.id = "f061893";
  commit.tree = fx.base_tree;
  commit.tree["Makefile"] = makefile("-DDEBUG ");
  commit.tree["src/fzy.c"] =
      "#include \"fzy.h\"\n#include \"match.h\"\n#include \"tty.h\"\n"
      "#include \"choices.h\"\n#include \"options.h\"\n/* trace debug */\n"
      "int fzy_run(void) { return match() + tty_init() + choices() + "
      "options(); }\nint main(void) { return fzy_run(); }\n";
  commit.tree["src/fzy.h"] =
      Guarded("FZY_H", "/* refreshed */\nint fzy_run(void);\n");
  commit.diff = MakeGitDiff(fx.base_tree, commit.tree);

  // The incremental rebuild of src/fzy.o observes reads of only the two
  // files the commit touched; the other four dependencies must be carried
  // over from history by the merge.
  ProcSpec rebuild;
  rebuild.command = "cc -DDEBUG -c -o src/fzy.o src/fzy.c";
  rebuild.reads = {"src/fzy.c", "src/fzy.h"};
  rebuild.writes = {"src/fzy.o"};
  commit.incremental_trace = RenderTrace({rebuild, link});

  std::vector<ProcSpec> fresh = clean;
  fresh[0].command = "cc -DDEBUG -c -o src/fzy.o src/fzy.c";
  commit.clean_trace = RenderTrace(fresh);
  fx.commits.push_back(std::move(commit));
  return fx;
}

// ---------------------------------------------------------------------------
// cjson soft-link fixture
// ---------------------------------------------------------------------------

ReplayFixture CjsonFixture(bool force_flag) {
  ReplayFixture fx;
  fx.name = force_flag ? "cjson-sf" : "cjson";
  fx.root_commit = "v0";

  const std::string ln_line =
      force_flag ? "ln -sf $(SHARED_NAME) $@" : "-ln -s $(SHARED_NAME) $@";
  auto makefile = [&](const std::string& version) {
    return "LIBVERSION = " + version + "\n" +
           "LIBNAME = libcjson\n"
           "SHARED_NAME = $(LIBNAME).so.$(LIBVERSION)\n"
           "SHARED_LINK = $(LIBNAME).so.1\n"
           "all: $(SHARED_NAME) $(SHARED_LINK)\n"
           "$(SHARED_NAME): cjson.o\n\tcc -shared -o $@ cjson.o\n"
           "$(SHARED_LINK): $(SHARED_NAME)\n\t" +
           ln_line +
           "\n"
           "cjson.o: cjson.c cjson.h\n\tcc -fPIC -c -o $@ cjson.c\n"
           ".PHONY: all\n";
  };

  fx.base_tree["Makefile"] = makefile("1.7.09");
  fx.base_tree["cjson.h"] = Guarded("CJSON_H", "int cjson_parse(void);\n");
  fx.base_tree["cjson.c"] =
      "#include \"cjson.h\"\nint cjson_parse(void) { return 0; }\n";

  ProcSpec compile;
  compile.command = "cc -fPIC -c -o cjson.o cjson.c";
  compile.reads = {"cjson.c", "cjson.h"};
  compile.writes = {"cjson.o"};
  ProcSpec shared09;
  shared09.command = "cc -shared -o libcjson.so.1.7.09 cjson.o";
  shared09.reads = {"cjson.o"};
  shared09.writes = {"libcjson.so.1.7.09"};
  ProcSpec link09;
  link09.command = force_flag ? "ln -sf libcjson.so.1.7.09 libcjson.so.1"
                              : "ln -s libcjson.so.1.7.09 libcjson.so.1";
  link09.reads = {"libcjson.so.1.7.09"};
  link09.writes = {"libcjson.so.1"};
  fx.clean_trace = RenderTrace({compile, shared09, link09});

  ReplayCommit bump;
  bump.id = "v1";
  bump.tree = fx.base_tree;
  bump.tree["Makefile"] = makefile("1.7.10");
  bump.diff = MakeGitDiff(fx.base_tree, bump.tree);

  ProcSpec shared10;
  shared10.command = "cc -shared -o libcjson.so.1.7.10 cjson.o";
  shared10.reads = {"cjson.o"};
  shared10.writes = {"libcjson.so.1.7.10"};
  if (force_flag) {
    ProcSpec relink;
    relink.command = "ln -sf libcjson.so.1.7.10 libcjson.so.1";
    relink.deletes = {"libcjson.so.1"};
    relink.reads = {"libcjson.so.1.7.10"};
    relink.writes = {"libcjson.so.1"};
    bump.incremental_trace = RenderTrace({shared10, relink});
  } else {
    // `ln -s` refuses to replace the existing link; the `-` prefix makes
    // make shrug it off, so the stale link survives silently.
    ProcSpec failed;
    failed.command = "ln -s libcjson.so.1.7.10 libcjson.so.1";
    bump.incremental_trace = RenderTrace({shared10, failed});
    bump.extra_traces["target-v1-libcjson.so.1.trace"] = RenderTrace({failed});
  }

  ProcSpec fresh_link;
  fresh_link.command = force_flag ? "ln -sf libcjson.so.1.7.10 libcjson.so.1"
                                  : "ln -s libcjson.so.1.7.10 libcjson.so.1";
  fresh_link.reads = {"libcjson.so.1.7.10"};
  fresh_link.writes = {"libcjson.so.1"};
  bump.clean_trace = RenderTrace({compile, shared10, fresh_link});
  fx.commits.push_back(std::move(bump));
  return fx;
}

// ---------------------------------------------------------------------------
// Live fixtures
// ---------------------------------------------------------------------------

std::map<std::string, std::string> ClibTree(
    std::vector<std::pair<std::string, std::string>>* manifest) {
  std::map<std::string, std::string> tree;
  tree["Makefile"] =
      "CFLAGS = -Ideps\n"
      "app: src/main.o deps/buffer/buffer.o deps/list/list.o\n"
      "\tcc -o $@ $^\n"
      "%.o: %.c\n"
      "\tcc $(CFLAGS) -c -o $@ $<\n";
  tree["src/util.h"] = Guarded("UTIL_H", "#define STEP 1\n");
  tree["deps/buffer/buffer.h"] =
      Guarded("BUFFER_H", "int buffer_size(void);\n");
  tree["deps/buffer/buffer.c"] =
      "#include \"buffer.h\"\nint buffer_size(void) { return 16; }\n";
  tree["deps/list/list.h"] = Guarded("LIST_H", "int list_len(void);\n");
  tree["deps/list/list.c"] =
      "#include \"list.h\"\n#include \"../buffer/buffer.h\"\nint "
      "list_len(void) { return buffer_size(); }\n";
  tree["src/main.c"] =
      "#include \"buffer/buffer.h\"\n#include \"list/list.h\"\n#include "
      "\"util.h\"\nint main(void) { return buffer_size() - list_len() + "
      "STEP - STEP; }\n";
  if (manifest != nullptr) {
    manifest->clear();
    manifest->push_back({"deps/buffer/buffer.o", "deps/buffer/buffer.h"});
    manifest->push_back({"deps/list/list.o", "deps/buffer/buffer.h"});
    manifest->push_back({"deps/list/list.o", "deps/list/list.h"});
    manifest->push_back({"src/main.o", "deps/buffer/buffer.h"});
    manifest->push_back({"src/main.o", "deps/list/list.h"});
    manifest->push_back({"src/main.o", "src/util.h"});
  }
  return tree;
}

std::map<std::string, std::string> PhonyTree() {
  std::map<std::string, std::string> tree;
  tree["Makefile"] =
      "all: build\n"
      "build: app\n"
      "app: main.o util.o\n"
      "\tcc -o $@ $^\n"
      "main.o: main.c\n"
      "\tcc -c -o $@ $<\n"
      "util.o: util.c util.h\n"
      "\tcc -c -o $@ $<\n"
      ".PHONY: all build\n";
  tree["util.h"] = Guarded("UTIL_H", "int util(void);\n");
  tree["util.c"] = "#include \"util.h\"\nint util(void) { return 1; }\n";
  tree["main.c"] =
      "#include \"util.h\"\nint main(void) { return util() - util(); }\n";
  return tree;
}

std::map<std::string, std::string> PerfTree(int count) {
  std::map<std::string, std::string> tree;
  std::ostringstream objects;
  std::ostringstream rules;
  std::ostringstream externs;
  std::ostringstream calls;
  for (int i = 0; i < count; ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "m%03d", i);
    std::string src = std::string("src/") + name + ".c";
    std::string obj = std::string("src/") + name + ".o";
    tree[src] = std::string("int f_") + name + "(void) { return " +
                std::to_string(i) + "; }\n";
    objects << " " << obj;
    rules << obj << ": " << src << "\n\tcc -c -o $@ $<\n";
    externs << "int f_" << name << "(void);\n";
    calls << " + f_" << name << "()";
  }
  tree["src/main.c"] = externs.str() + "int main(void) { return (0" +
                       calls.str() + ") * 0; }\n";
  tree["Makefile"] = "OBJS = src/main.o" + objects.str() +
                     "\n"
                     "app: $(OBJS)\n\tcc -o $@ $(OBJS)\n"
                     "src/main.o: src/main.c\n\tcc -c -o $@ $<\n" +
                     rules.str();
  return tree;
}

void MaterializeTree(const std::string& root,
                     const std::map<std::string, std::string>& tree) {
  fs::create_directories(root);
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.path().filename() == ".depsentry") continue;
    fs::remove_all(entry.path());
  }
  WriteTree(root, tree);
}

}  // namespace testing
}  // namespace depsentry
