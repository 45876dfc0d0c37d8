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

#include "depsentry/commands.h"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <set>

#include "depsentry/change_analyzer.h"
#include "depsentry/config.h"
#include "depsentry/inference.h"
#include "depsentry/make_adapter.h"
#include "depsentry/path.h"
#include "depsentry/store.h"
#include "depsentry/subprocess.h"
#include "depsentry/tracer.h"
#include "depsentry/util.h"
#include "depsentry/verifier.h"
#include "depsentry/version.h"

namespace depsentry {

namespace {

std::string ResolveStoreDir(const CommandOptions& opts, const Config& config,
                            const std::string& root) {
  std::string dir = opts.store;
  if (dir.empty()) {
    const char* env = ::getenv("DEPSENTRY_STORE");
    if (env != nullptr && env[0] != '\0') dir = env;
  }
  if (dir.empty()) dir = config.store;
  if (dir.empty()) dir = ".depsentry";
  if (dir[0] != '/') dir = root + "/" + dir;
  return dir;
}

std::vector<std::string> CombinedMakeArgs(const CommandOptions& opts,
                                          const Config& config) {
  std::vector<std::string> args = config.make_args;
  args.insert(args.end(), opts.make_args.begin(), opts.make_args.end());
  return args;
}

// Tracer shared object: explicit env wins, then next to the executable,
// then the src/ sibling of a build tree.
std::string ResolveShimPath() {
  const char* env = ::getenv("DEPSENTRY_SHIM");
  if (env != nullptr && env[0] != '\0') return env;
  char buf[4096];
  ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n > 0) {
    buf[n] = '\0';
    std::string exe_dir = PathDirname(std::string(buf));
    for (const std::string& cand :
         {exe_dir + "/libdepsentry_trace_shim.so",
          PathDirname(exe_dir) + "/src/libdepsentry_trace_shim.so"}) {
      if (FileExists(cand)) return cand;
    }
  }
  return "";
}

bool IsGitRepo(const std::string& root) {
  std::error_code ec;
  return std::filesystem::exists(root + "/.git", ec);
}

RunResult RunGit(const std::string& root,
                 const std::vector<std::string>& args) {
  std::vector<std::string> argv = {"git", "-C", root};
  argv.insert(argv.end(), args.begin(), args.end());
  return RunCommand(argv, "", {});
}

std::string ResolveCommit(const CommandOptions& opts,
                          const std::string& root) {
  if (!opts.commit.empty()) return opts.commit;
  if (IsGitRepo(root)) {
    RunResult r = RunGit(root, {"rev-parse", "HEAD"});
    if (r.exit_code == 0) return TrimWhitespace(r.output);
  }
  throw Error(ErrorKind::kUsageError,
              "--commit is required outside a git repository");
}

std::string ReplayTracePath(const std::string& replay_dir,
                            const std::string& prefix,
                            const std::string& commit) {
  std::string per_commit = replay_dir + "/" + prefix + "-" + commit + ".trace";
  if (FileExists(per_commit)) return per_commit;
  std::string generic = replay_dir + "/" + prefix + ".trace";
  if (FileExists(generic)) return generic;
  throw Error(ErrorKind::kUsageError,
              "no " + prefix + " trace for commit " + commit + " in " +
                  replay_dir);
}

std::string ReadStdin() {
  std::string text((std::istreambuf_iterator<char>(std::cin)),
                   std::istreambuf_iterator<char>());
  return text;
}

std::string BuildFailureExcerpt(const std::string& output) {
  if (output.size() <= 500) return output;
  return output.substr(output.size() - 500);
}

void PrintReport(const ErrorReport& report, ReportFormat format) {
  std::fputs(RenderReport(report, format).c_str(), stdout);
  std::fflush(stdout);
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kBuildFailed:
    case ErrorKind::kTargetBuildFailed:
    case ErrorKind::kTracerUnavailable:
    case ErrorKind::kProbeFailed:
    case ErrorKind::kRewriteFailed:
    case ErrorKind::kIoError:
      return 2;
    case ErrorKind::kUsageError:
    case ErrorKind::kStateMissing:
    case ErrorKind::kStateCorrupt:
    case ErrorKind::kInvalidPath:
    case ErrorKind::kParseError:
    case ErrorKind::kCycleError:
      return 3;
  }
  return 3;
}

int CmdInit(const CommandOptions& opts) {
  const std::string root = CanonicalProjectRoot(opts.project);
  const Config config = LoadConfig(root);
  Store store(ResolveStoreDir(opts, config, root));
  if (store.Initialized() && !opts.force) {
    throw Error(ErrorKind::kUsageError,
                "store " + store.dir() +
                    " is already initialized (use --force to redo)");
  }
  store.Lock();

  std::string commit = ResolveCommit(opts, root);
  const std::vector<std::string> make_args = CombinedMakeArgs(opts, config);

  TracedBuildRequest req;
  req.project_root = root;
  req.make_args = make_args;
  if (!opts.replay_dir.empty()) {
    req.mode = TraceMode::kReplay;
    req.replay_file = ReplayTracePath(opts.replay_dir, "clean", commit);
  } else {
    req.mode = TraceMode::kLive;
    req.make_args.insert(req.make_args.begin(), "-B");
    req.shim_path = ResolveShimPath();
    std::error_code ec;
    std::filesystem::create_directories(store.traces_dir(), ec);
    req.trace_out = store.traces_dir() + "/clean-" + commit + ".trace";
  }
  TracedBuildResult built = RunTracedBuild(req);
  if (built.make_exit != 0) {
    throw Error(ErrorKind::kBuildFailed,
                "clean build exited with status " +
                    std::to_string(built.make_exit) + "\n" +
                    BuildFailureExcerpt(built.make_output));
  }

  ActualGraphResult actual =
      BuildActualGraph(built.trace, root, commit, Provenance::kCleanTrace);

  InternalDb db = ParseInternalDb(QueryInternalDb(root, make_args));
  DeclaredGraph declared = ExpandPhony(db);
  RecipeSnapshot recipes = ParseDryRun(QueryDryRun(root, make_args), commit);

  DetectOptions dopts;
  dopts.recipes = &recipes;
  ErrorReport report = Detect(actual.graph, declared, commit, dopts);
  report.warnings.insert(report.warnings.begin(), actual.warnings.begin(),
                         actual.warnings.end());
  report.stats.externals_dropped = actual.externals_dropped;

  store.SaveGraph(actual.graph);
  store.SaveRecipes(recipes);
  store.SaveMeta({{"project_root", root},
                  {"root_commit", commit},
                  {"tool_version", kVersion}});
  store.SaveReport(RenderReport(report, ReportFormat::kMachine),
                   SerializeReportAux(report));
  PrintReport(report, opts.format);
  return 0;
}

int CmdCheck(const CommandOptions& opts) {
  const std::string root = CanonicalProjectRoot(opts.project);
  const Config config = LoadConfig(root);
  Store store(ResolveStoreDir(opts, config, root));
  if (!store.Initialized()) {
    throw Error(ErrorKind::kStateMissing,
                "store " + store.dir() +
                    " is not initialized; run 'depsentry init' first");
  }
  store.Lock();

  std::map<std::string, std::string> meta = store.LoadMeta();
  DependencyGraph historical = store.LoadGraph();
  std::string previous_commit;
  std::map<std::string, std::string> previous_recipes =
      store.LoadRecipes(&previous_commit);

  const std::string commit = ResolveCommit(opts, root);
  const std::vector<std::string> make_args = CombinedMakeArgs(opts, config);

  std::vector<std::string> diff_warnings;
  std::string diff_text;
  if (!opts.diff.empty()) {
    diff_text = opts.diff == "-" ? ReadStdin() : ReadFile(opts.diff);
  } else if (IsGitRepo(root)) {
    RunResult checkout = RunGit(root, {"checkout", "--quiet", commit});
    if (checkout.exit_code != 0) {
      throw Error(ErrorKind::kUsageError,
                  "cannot check out commit " + commit + ": " +
                      TrimWhitespace(checkout.output));
    }
    RunResult parent = RunGit(root, {"rev-parse", commit + "^"});
    if (parent.exit_code == 0) {
      RunResult diff =
          RunGit(root, {"diff", "-M", TrimWhitespace(parent.output), commit});
      if (diff.exit_code != 0) {
        throw Error(ErrorKind::kIoError, "git diff failed for " + commit);
      }
      diff_text = diff.output;
    } else {
      diff_warnings.push_back("check: commit " + commit +
                              " has no parent; treating it as a no-op");
    }
  } else {
    diff_warnings.push_back(
        "check: no --diff given and no git repository; treating commit as a "
        "no-op change set");
  }
  CommitDelta delta = ParseDiff(diff_text);

  if (opts.skip_irrelevant) {
    bool relevant = false;
    for (const FileChange& change : delta.changes) {
      if (ClassifyFileKind(change.path, &config.suffixes) != FileKind::kOther ||
          (!change.old_path.empty() &&
           ClassifyFileKind(change.old_path, &config.suffixes) !=
               FileKind::kOther)) {
        relevant = true;
        break;
      }
    }
    if (!relevant) {
      meta["root_commit"] = commit;
      store.SaveMeta(meta);
      std::string machine = store.LoadReportMachine();
      if (opts.format == ReportFormat::kMachine) {
        std::fputs(machine.c_str(), stdout);
      } else {
        ErrorReport stored;
        stored.findings = ParseMachineReport(machine);
        ParseReportAux(store.LoadReportAux(), stored);
        PrintReport(stored, ReportFormat::kHuman);
      }
      std::fflush(stdout);
      return 0;
    }
  }

  std::vector<DirectiveChange> directive_changes =
      ExtractDirectiveChanges(delta, &config.suffixes);

  TracedBuildRequest req;
  req.project_root = root;
  req.make_args = make_args;
  if (!opts.replay_dir.empty()) {
    req.mode = TraceMode::kReplay;
    req.replay_file = ReplayTracePath(opts.replay_dir, "incremental", commit);
  } else {
    req.mode = TraceMode::kLive;
    req.shim_path = ResolveShimPath();
    std::error_code ec;
    std::filesystem::create_directories(store.traces_dir(), ec);
    req.trace_out = store.traces_dir() + "/incremental-" + commit + ".trace";
  }
  TracedBuildResult built = RunTracedBuild(req);
  if (built.make_exit != 0) {
    throw Error(ErrorKind::kBuildFailed,
                "incremental build exited with status " +
                    std::to_string(built.make_exit) + "\n" +
                    BuildFailureExcerpt(built.make_output));
  }
  ActualGraphResult incremental = BuildActualGraph(
      built.trace, root, commit, Provenance::kIncrementalTrace);

  InternalDb db = ParseInternalDb(QueryInternalDb(root, make_args));
  DeclaredGraph declared = ExpandPhony(db);
  RecipeSnapshot fresh = ParseDryRun(QueryDryRun(root, make_args), commit);
  std::set<std::string> recipe_diff = DiffRecipes(previous_recipes, fresh);

  ResolverContext ctx;
  ctx.project_root = root;
  ctx.commit = commit;
  ctx.declared = &declared;
  ctx.db = &db;
  ctx.recipes = &fresh;
  ctx.suffixes = &config.suffixes;

  GraphDelta file_delta = InferFileUpdates(historical, delta, ctx);
  GraphDelta directive_delta =
      InferDirectiveUpdates(historical, directive_changes, ctx);

  RebuildPlan plan = PlanRebuilds(recipe_diff, incremental.graph,
                                  ctx.uncovered_sources, declared);
  RebuildExecution exec;
  exec.project_root = root;
  exec.make_args = make_args;
  exec.mode = opts.replay_dir.empty() ? TraceMode::kLive : TraceMode::kReplay;
  exec.replay_dir = opts.replay_dir;
  exec.shim_path = opts.replay_dir.empty() ? ResolveShimPath() : "";
  exec.trace_dir = store.traces_dir();
  exec.commit = commit;
  RebuildResult rebuilds = ExecuteRebuilds(plan, exec);

  std::set<std::string> directive_files;
  for (const DirectiveChange& c : directive_changes) {
    directive_files.insert(c.file);
  }

  MergeInputs merge_in;
  merge_in.historical = &historical;
  merge_in.incremental = &incremental.graph;
  merge_in.rebuilds = &rebuilds;
  merge_in.file_delta = &file_delta;
  merge_in.directive_delta = &directive_delta;
  merge_in.directive_files = &directive_files;
  merge_in.declared = &declared;
  merge_in.previous_recipes = &previous_recipes;
  DependencyGraph merged = Merge(merge_in, ctx);

  DetectOptions dopts;
  dopts.recipes = &fresh;
  ErrorReport report = Detect(merged, declared, commit, dopts);

  std::vector<std::string> warnings;
  warnings.insert(warnings.end(), diff_warnings.begin(), diff_warnings.end());
  warnings.insert(warnings.end(), incremental.warnings.begin(),
                  incremental.warnings.end());
  warnings.insert(warnings.end(), rebuilds.warnings.begin(),
                  rebuilds.warnings.end());
  warnings.insert(warnings.end(), ctx.warnings.begin(), ctx.warnings.end());
  warnings.insert(warnings.end(), report.warnings.begin(),
                  report.warnings.end());
  report.warnings = std::move(warnings);
  report.stats.externals_dropped =
      incremental.externals_dropped + rebuilds.externals_dropped;
  report.stats.unresolved_includes = ctx.unresolved_includes.size();
  report.stats.failed_rebuilds = rebuilds.failed;

  store.SaveGraph(merged);
  store.SaveRecipes(fresh);
  meta["root_commit"] = commit;
  meta["tool_version"] = kVersion;
  store.SaveMeta(meta);
  store.SaveReport(RenderReport(report, ReportFormat::kMachine),
                   SerializeReportAux(report));
  PrintReport(report, opts.format);
  return 0;
}

int CmdReport(const CommandOptions& opts) {
  const std::string root = CanonicalProjectRoot(opts.project);
  const Config config = LoadConfig(root);
  Store store(ResolveStoreDir(opts, config, root));
  std::string machine = store.LoadReportMachine();
  if (opts.format == ReportFormat::kMachine) {
    std::fputs(machine.c_str(), stdout);
    std::fflush(stdout);
    return 0;
  }
  ErrorReport report;
  report.findings = ParseMachineReport(machine);
  ParseReportAux(store.LoadReportAux(), report);
  PrintReport(report, ReportFormat::kHuman);
  return 0;
}

int CmdVerify(const CommandOptions& opts) {
  const std::string root = CanonicalProjectRoot(opts.project);
  const Config config = LoadConfig(root);
  Store store(ResolveStoreDir(opts, config, root));
  store.Lock();
  std::vector<Finding> findings =
      ParseMachineReport(store.LoadReportMachine());

  const std::vector<std::string> make_args = CombinedMakeArgs(opts, config);

  // The probes need a built tree to compare against.
  std::vector<std::string> argv = {"make"};
  argv.insert(argv.end(), make_args.begin(), make_args.end());
  RunResult base = RunCommand(argv, root, {});
  if (base.exit_code != 0) {
    throw Error(ErrorKind::kBuildFailed,
                "cannot establish a built state (make exited " +
                    std::to_string(base.exit_code) + ")");
  }

  VerifierOptions vopts;
  vopts.project_root = root;
  vopts.make_args = make_args;

  bool all_confirmed = true;
  for (const Finding& finding : findings) {
    Verdict verdict = finding.kind == FindingKind::kMissing
                          ? VerifyMd(vopts, finding)
                          : VerifyRd(vopts, finding);
    std::fputs((RenderVerdictLine(verdict) + "\n").c_str(), stdout);
    if (!verdict.confirmed) all_confirmed = false;
  }
  std::fflush(stdout);
  return all_confirmed ? 0 : 1;
}

}  // namespace depsentry
