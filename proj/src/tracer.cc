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

#include "depsentry/tracer.h"

#include <algorithm>
#include <map>
#include <optional>

#include "depsentry/error.h"
#include "depsentry/path.h"
#include "depsentry/subprocess.h"
#include "depsentry/util.h"

namespace depsentry {

namespace {

// VCS metadata and depsentry's own state never belong in the graph.
bool IsInternalPath(const std::string& project_rel) {
  return project_rel == ".git" || StartsWith(project_rel, ".git/") ||
         project_rel == ".depsentry" || StartsWith(project_rel, ".depsentry/");
}

// Shared first-operation-wins state machine. Used per process by
// ClassifyProcess and per recipe subtree by BuildActualGraph: the only
// difference is which event stream is fed in.
class FileClassifier {
 public:
  explicit FileClassifier(const std::string& root) : root_(root) {}

  void OnEvent(const TraceEvent& ev) {
    switch (ev.op) {
      case TraceOp::kRead: {
        auto p = Normalize(ev.path);
        if (!p) return;
        saw_ops_ = true;
        if (!Classified(*p)) inputs_.insert(*p);
        break;
      }
      case TraceOp::kWrite:
      case TraceOp::kCreate: {
        auto p = Normalize(ev.path);
        if (!p) return;
        saw_ops_ = true;
        if (!Classified(*p)) outputs_.insert(*p);
        break;
      }
      case TraceOp::kDelete: {
        auto p = Normalize(ev.path);
        if (!p) return;
        saw_ops_ = true;
        // A deleted output is scratch; a later create may reclassify it.
        outputs_.erase(*p);
        break;
      }
      case TraceOp::kRename: {
        auto oldp = Normalize(ev.path);
        auto newp = Normalize(ev.path2);
        if (!oldp && !newp) return;
        saw_ops_ = true;
        bool was_input = oldp && inputs_.erase(*oldp) > 0;
        bool was_output = oldp && outputs_.erase(*oldp) > 0;
        if (newp) {
          inputs_.erase(*newp);
          outputs_.erase(*newp);
          if (was_input) {
            inputs_.insert(*newp);
          } else if (was_output) {
            outputs_.insert(*newp);
          } else {
            // Renaming a file this stream never touched still materializes
            // the destination, so it counts as produced.
            outputs_.insert(*newp);
          }
        }
        break;
      }
      case TraceOp::kExec:
      case TraceOp::kSpawn:
      case TraceOp::kExit:
        break;
    }
  }

  const std::set<std::string>& inputs() const { return inputs_; }
  const std::set<std::string>& outputs() const { return outputs_; }
  bool saw_ops() const { return saw_ops_; }

 private:
  bool Classified(const std::string& p) const {
    return inputs_.count(p) > 0 || outputs_.count(p) > 0;
  }

  std::optional<std::string> Normalize(const std::string& raw) const {
    if (raw.empty()) return std::nullopt;
    try {
      NormalizedPath np = NormalizePath(root_, raw);
      if (np.cls != PathClass::kProject) return std::nullopt;
      if (IsInternalPath(np.path)) return std::nullopt;
      return np.path;
    } catch (const Error&) {
      return std::nullopt;  // malformed paths never classify
    }
  }

  std::string root_;
  std::set<std::string> inputs_;
  std::set<std::string> outputs_;
  bool saw_ops_ = false;
};

std::string ExecBasename(const std::string& command_line) {
  size_t end = command_line.find(' ');
  std::string argv0 = end == std::string::npos ? command_line
                                               : command_line.substr(0, end);
  return PathBasename(argv0);
}

bool IsMakeName(const std::string& name) {
  return name == "make" || name == "gmake";
}

struct ProcInfo {
  int pid = 0;
  int ppid = 0;
  std::vector<size_t> event_indices;  // positions in trace.events
  std::vector<std::string> exec_basenames;
  bool has_project_ops = false;
};

}  // namespace

ProcessFileSummary ClassifyProcess(const std::string& project_root,
                                   const std::vector<TraceEvent>& events) {
  ProcessFileSummary summary;
  FileClassifier classifier(project_root);
  for (const TraceEvent& ev : events) {
    if (summary.pid == 0) {
      summary.pid = ev.pid;
      summary.ppid = ev.ppid;
    }
    if (ev.op == TraceOp::kExec) {
      summary.exec_basenames.push_back(ExecBasename(ev.path));
    }
    classifier.OnEvent(ev);
  }
  summary.inputs = classifier.inputs();
  summary.outputs = classifier.outputs();
  summary.has_file_ops = classifier.saw_ops();
  return summary;
}

ActualGraphResult BuildActualGraph(const BuildTrace& trace,
                                   const std::string& project_root,
                                   const std::string& commit,
                                   Provenance provenance) {
  ActualGraphResult result;
  const std::string root = CanonicalProjectRoot(project_root);

  std::set<std::string> external_paths;
  auto note_external = [&](const std::string& raw) {
    if (raw.empty()) return;
    try {
      if (NormalizePath(root, raw).cls == PathClass::kExternal) {
        external_paths.insert(raw);
      }
    } catch (const Error&) {
    }
  };

  std::map<int, ProcInfo> procs;
  std::vector<int> pid_order;
  for (size_t i = 0; i < trace.events.size(); ++i) {
    const TraceEvent& ev = trace.events[i];
    switch (ev.op) {
      case TraceOp::kRead:
      case TraceOp::kWrite:
      case TraceOp::kCreate:
      case TraceOp::kDelete:
        note_external(ev.path);
        break;
      case TraceOp::kRename:
        note_external(ev.path);
        note_external(ev.path2);
        break;
      default:
        break;
    }
    auto it = procs.find(ev.pid);
    if (it == procs.end()) {
      it = procs.emplace(ev.pid, ProcInfo{ev.pid, ev.ppid, {}, {}, false})
               .first;
      pid_order.push_back(ev.pid);
    }
    it->second.event_indices.push_back(i);
    if (ev.op == TraceOp::kExec) {
      it->second.exec_basenames.push_back(ExecBasename(ev.path));
    }
  }

  // Per-process project activity, needed for the make-likeness test.
  for (auto& [pid, info] : procs) {
    FileClassifier cls(root);
    for (size_t idx : info.event_indices) {
      cls.OnEvent(trace.events[idx]);
    }
    info.has_project_ops = cls.saw_ops();
  }

  auto is_traced = [&](int pid) { return procs.count(pid) > 0; };
  auto is_make_like = [&](const ProcInfo& info) {
    for (const std::string& name : info.exec_basenames) {
      if (IsMakeName(name)) return true;
    }
    // A root process that never touched project files is assumed to be the
    // orchestrating make even when its exec was not captured.
    return !is_traced(info.ppid) && !info.has_project_ops;
  };

  std::map<int, std::vector<int>> children;
  for (int pid : pid_order) {
    children[procs[pid].ppid].push_back(pid);
  }

  // Recipe roots: first non-make process under a make process (or a traced
  // root that does file work itself).
  std::vector<int> recipe_roots;
  for (int pid : pid_order) {
    const ProcInfo& info = procs[pid];
    if (is_make_like(info)) continue;
    bool parent_traced = is_traced(info.ppid);
    if (!parent_traced || is_make_like(procs[info.ppid])) {
      recipe_roots.push_back(pid);
    }
  }

  for (int root_pid : recipe_roots) {
    // Collect the subtree, stopping at nested make processes: their
    // children belong to new recipes.
    std::vector<int> stack = {root_pid};
    std::set<int> subtree;
    while (!stack.empty()) {
      int pid = stack.back();
      stack.pop_back();
      if (!subtree.insert(pid).second) continue;
      auto it = children.find(pid);
      if (it == children.end()) continue;
      for (int child : it->second) {
        if (!is_make_like(procs[child])) stack.push_back(child);
      }
    }

    std::vector<size_t> indices;
    for (int pid : subtree) {
      const ProcInfo& info = procs[pid];
      indices.insert(indices.end(), info.event_indices.begin(),
                     info.event_indices.end());
    }
    std::sort(indices.begin(), indices.end());

    FileClassifier cls(root);
    for (size_t idx : indices) {
      cls.OnEvent(trace.events[idx]);
    }

    for (const std::string& output : cls.outputs()) {
      TargetNode& node = result.graph.EnsureNode(output);
      for (const std::string& input : cls.inputs()) {
        if (input != output) node.deps.insert(input);
      }
      node.provenance = provenance;
      node.last_updated = commit;
    }
  }

  // A target deleted after its last (re)creation ended the build missing;
  // keep the node but flag the contradiction.
  std::map<std::string, size_t> last_make;
  std::map<std::string, size_t> last_delete;
  for (size_t i = 0; i < trace.events.size(); ++i) {
    const TraceEvent& ev = trace.events[i];
    auto project_rel = [&](const std::string& raw) -> std::optional<std::string> {
      try {
        NormalizedPath np = NormalizePath(root, raw);
        if (np.cls != PathClass::kProject) return std::nullopt;
        return np.path;
      } catch (const Error&) {
        return std::nullopt;
      }
    };
    if (ev.op == TraceOp::kWrite || ev.op == TraceOp::kCreate) {
      if (auto p = project_rel(ev.path)) last_make[*p] = i;
    } else if (ev.op == TraceOp::kDelete) {
      if (auto p = project_rel(ev.path)) last_delete[*p] = i;
    } else if (ev.op == TraceOp::kRename) {
      if (auto p = project_rel(ev.path)) last_delete[*p] = i;
      if (auto p = project_rel(ev.path2)) last_make[*p] = i;
    }
  }
  for (const auto& [name, node] : result.graph.nodes) {
    auto del = last_delete.find(name);
    if (del == last_delete.end()) continue;
    auto mk = last_make.find(name);
    if (mk == last_make.end() || del->second > mk->second) {
      result.warnings.push_back("target '" + name +
                                "' was deleted by a later recipe; keeping "
                                "last observed dependencies");
    }
  }
  result.externals_dropped = external_paths.size();
  return result;
}

namespace {

// Replay traces record the root they were captured under; remap onto the
// current project root so fixture directories can be relocated freely.
void RemapTraceRoot(BuildTrace& trace, const std::string& project_root) {
  const std::string want = CanonicalProjectRoot(project_root);
  if (trace.root.empty() || trace.root == want) {
    trace.root = want;
    return;
  }
  const std::string old_prefix = trace.root + "/";
  for (TraceEvent& ev : trace.events) {
    if (StartsWith(ev.path, old_prefix)) {
      ev.path = want + "/" + ev.path.substr(old_prefix.size());
    }
    if (!ev.path2.empty() && StartsWith(ev.path2, old_prefix)) {
      ev.path2 = want + "/" + ev.path2.substr(old_prefix.size());
    }
  }
  trace.root = want;
}

}  // namespace

TracedBuildResult RunTracedBuild(const TracedBuildRequest& request) {
  TracedBuildResult result;
  if (request.mode == TraceMode::kReplay) {
    result.trace = ReadTraceFile(request.replay_file);
    RemapTraceRoot(result.trace, request.project_root);
    result.make_exit = 0;
    return result;
  }

  if (request.shim_path.empty() || !FileExists(request.shim_path)) {
    throw Error(ErrorKind::kTracerUnavailable,
                "tracing shim not found: " +
                    (request.shim_path.empty() ? "(unset)"
                                               : request.shim_path));
  }
  const std::string root = CanonicalProjectRoot(request.project_root);
  WriteFile(request.trace_out, "#depsentry-trace v1 root=" + root + "\n");

  std::vector<std::string> argv = {"make"};
  argv.insert(argv.end(), request.make_args.begin(), request.make_args.end());
  argv.insert(argv.end(), request.targets.begin(), request.targets.end());

  RunResult run = RunCommand(argv, request.project_root,
                             {{"LD_PRELOAD", request.shim_path},
                              {"DEPSENTRY_TRACE_OUT", request.trace_out}});
  result.make_exit = run.exit_code;
  result.make_output = std::move(run.output);
  result.trace = ReadTraceFile(request.trace_out);
  RemapTraceRoot(result.trace, request.project_root);
  return result;
}

}  // namespace depsentry
