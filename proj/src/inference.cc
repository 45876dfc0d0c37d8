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

#include "depsentry/inference.h"

#include <algorithm>
#include <filesystem>
#include <optional>

#include "depsentry/error.h"
#include "depsentry/path.h"
#include "depsentry/util.h"

namespace depsentry {

namespace {

std::string MapRename(const ResolverContext& ctx, const std::string& path) {
  auto it = ctx.renames.find(path);
  return it == ctx.renames.end() ? path : it->second;
}

FileKind KindOf(const ResolverContext& ctx, const std::string& path) {
  return ClassifyFileKind(path, ctx.suffixes);
}

// Include search directories for a node: the -I flags of its fresh recipe,
// then the project root itself.
std::vector<std::string> NodeSearchDirs(const ResolverContext& ctx,
                                        const std::string& node) {
  std::vector<std::string> dirs;
  if (ctx.recipes != nullptr) {
    auto it = ctx.recipes->entries.find(node);
    if (it != ctx.recipes->entries.end()) {
      dirs = ExtractIncludeDirs(it->second.text);
    }
  }
  dirs.push_back("");
  return dirs;
}

// Include closure of one source, or nullopt when the source itself cannot
// be read (callers decide whether that is fatal for their node).
std::optional<std::set<std::string>> Closure(ResolverContext& ctx,
                                             const std::string& source,
                                             const std::string& node) {
  std::vector<std::string> unresolved;
  try {
    std::set<std::string> incs = TransitiveIncludes(
        ctx.project_root, source, NodeSearchDirs(ctx, node), &unresolved);
    for (const std::string& u : unresolved) ctx.unresolved_includes.insert(u);
    return incs;
  } catch (const Error& e) {
    ctx.warnings.push_back("inference: cannot scan '" + source +
                           "' for includes: " + e.what());
    return std::nullopt;
  }
}

// `%`-pattern match in the plain textual sense: prefix/suffix anchoring with
// a non-empty stem. Patterns without `%` never match.
std::optional<std::string> MatchPattern(const std::string& pattern,
                                        const std::string& name) {
  size_t pos = pattern.find('%');
  if (pos == std::string::npos) return std::nullopt;
  std::string prefix = pattern.substr(0, pos);
  std::string suffix = pattern.substr(pos + 1);
  if (name.size() < prefix.size() + suffix.size() + 1) return std::nullopt;
  if (!StartsWith(name, prefix) || !EndsWith(name, suffix)) {
    return std::nullopt;
  }
  return name.substr(prefix.size(),
                     name.size() - prefix.size() - suffix.size());
}

std::string SubstitutePattern(const std::string& pattern,
                              const std::string& stem) {
  size_t pos = pattern.find('%');
  if (pos == std::string::npos) return pattern;
  return pattern.substr(0, pos) + stem + pattern.substr(pos + 1);
}

// Which target should a newly added source feed? Tried in order: an explicit
// declared rule that lists it, a user pattern rule it matches, and finally
// the conventional sibling object name when the declared graph knows it.
std::optional<std::string> ExpectedObject(const ResolverContext& ctx,
                                          const std::string& source) {
  if (ctx.declared != nullptr) {
    for (const auto& [tname, rule] : ctx.declared->targets) {
      if (std::find(rule.prereqs.begin(), rule.prereqs.end(), source) !=
          rule.prereqs.end()) {
        return tname;
      }
    }
  }
  if (ctx.db != nullptr) {
    for (const PatternRule& pr : ctx.db->pattern_rules) {
      for (const std::string& pp : pr.prereq_patterns) {
        if (auto stem = MatchPattern(pp, source)) {
          return SubstitutePattern(pr.target_pattern, *stem);
        }
      }
    }
  }
  std::string dir = PathDirname(source);
  std::string cand =
      (dir.empty() ? "" : dir + "/") + PathStem(source) + ".o";
  if (ctx.declared != nullptr && ctx.declared->HasTarget(cand)) return cand;
  return std::nullopt;
}

// Delta application used by Merge: entries touching traced nodes are
// skipped (the trace is fresher), absent removals and duplicate adds are
// no-ops. Order matters: target adds land before target removals so a
// rename composed with a node removal nets out to the removal.
void ApplyDeltaLenient(DependencyGraph& graph, const GraphDelta& delta,
                       const std::set<std::string>& traced) {
  for (const TargetNode& node : delta.added_targets) {
    if (traced.count(node.name)) continue;
    graph.nodes[node.name] = node;
  }
  for (const std::string& name : delta.removed_targets) {
    if (traced.count(name)) continue;
    graph.nodes.erase(name);
  }
  for (const auto& [target, dep] : delta.removed_edges) {
    if (traced.count(target)) continue;
    auto it = graph.nodes.find(target);
    if (it != graph.nodes.end()) it->second.deps.erase(dep);
  }
  for (const auto& [target, dep] : delta.added_edges) {
    if (traced.count(target)) continue;
    auto it = graph.nodes.find(target);
    if (it != graph.nodes.end()) it->second.deps.insert(dep);
  }
  for (const auto& [target, meta] : delta.meta_updates) {
    if (traced.count(target)) continue;
    auto it = graph.nodes.find(target);
    if (it != graph.nodes.end()) {
      it->second.provenance = meta.provenance;
      it->second.last_updated = meta.last_updated;
    }
  }
}

}  // namespace

GraphDelta InferFileUpdates(const DependencyGraph& historical,
                            const CommitDelta& delta, ResolverContext& ctx) {
  GraphDelta out;

  for (const FileChange& change : delta.changes) {
    if (change.type == ChangeType::kRenamed && !change.old_path.empty()) {
      ctx.renames[change.old_path] = change.path;
    }
  }

  if (!ctx.renames.empty()) {
    for (const auto& [name, node] : historical.nodes) {
      if (ctx.renames.count(name)) {
        out.removed_targets.push_back(name);
        TargetNode renamed;
        renamed.name = MapRename(ctx, name);
        renamed.provenance = node.provenance;
        renamed.last_updated = node.last_updated;
        for (const std::string& d : node.deps) {
          renamed.deps.insert(MapRename(ctx, d));
        }
        out.added_targets.push_back(std::move(renamed));
        continue;
      }
      for (const std::string& d : node.deps) {
        std::string mapped = MapRename(ctx, d);
        if (mapped != d) {
          out.removed_edges.emplace_back(name, d);
          out.added_edges.emplace_back(name, mapped);
        }
      }
    }
  }

  for (const FileChange& change : delta.changes) {
    if (change.type != ChangeType::kDeleted) continue;
    if (KindOf(ctx, change.path) != FileKind::kSource) continue;
    const std::string& gone = change.path;
    std::set<std::string> victims;
    for (const auto& [name, node] : historical.nodes) {
      std::string nm = MapRename(ctx, name);
      std::set<std::string> deps;
      for (const std::string& d : node.deps) deps.insert(MapRename(ctx, d));
      if (!deps.count(gone)) continue;
      bool other_source = false;
      for (const std::string& d : deps) {
        if (d != gone && KindOf(ctx, d) == FileKind::kSource) {
          other_source = true;
          break;
        }
      }
      if (other_source) {
        out.removed_edges.emplace_back(nm, gone);
      } else {
        out.removed_targets.push_back(nm);
        victims.insert(nm);
      }
    }
    // Consumers of a removed node lose their edge to it as well: the thing
    // it used to produce is not part of this commit's build any more.
    for (const auto& [name, node] : historical.nodes) {
      std::string nm = MapRename(ctx, name);
      if (victims.count(nm)) continue;
      for (const std::string& d : node.deps) {
        if (victims.count(MapRename(ctx, d))) {
          out.removed_edges.emplace_back(nm, MapRename(ctx, d));
        }
      }
    }
  }

  for (const FileChange& change : delta.changes) {
    if (change.type != ChangeType::kAdded) continue;
    if (KindOf(ctx, change.path) != FileKind::kSource) continue;
    const std::string& source = change.path;
    std::optional<std::string> object = ExpectedObject(ctx, source);
    if (!object.has_value()) {
      ctx.uncovered_sources.push_back(source);
      continue;
    }
    TargetNode node;
    node.name = *object;
    node.provenance = Provenance::kInferred;
    node.last_updated = ctx.commit;
    node.deps.insert(source);
    if (auto closure = Closure(ctx, source, *object)) {
      node.deps.insert(closure->begin(), closure->end());
    }
    out.added_targets.push_back(std::move(node));
  }

  return out;
}

GraphDelta InferDirectiveUpdates(const DependencyGraph& historical,
                                 const std::vector<DirectiveChange>& changes,
                                 ResolverContext& ctx) {
  GraphDelta out;
  if (changes.empty()) return out;

  std::set<std::string> changed_files;
  for (const DirectiveChange& c : changes) changed_files.insert(c.file);

  for (const auto& [name, node] : historical.nodes) {
    std::string nm = MapRename(ctx, name);
    std::set<std::string> deps;
    for (const std::string& d : node.deps) deps.insert(MapRename(ctx, d));

    bool triggered = false;
    for (const std::string& d : deps) {
      if (changed_files.count(d)) {
        triggered = true;
        break;
      }
    }
    if (!triggered && ctx.declared != nullptr) {
      auto it = ctx.declared->targets.find(nm);
      if (it != ctx.declared->targets.end()) {
        for (const std::string& p : it->second.prereqs) {
          if (changed_files.count(p)) {
            triggered = true;
            break;
          }
        }
      }
    }
    if (!triggered) continue;

    std::set<std::string> sources;
    for (const std::string& d : deps) {
      if (KindOf(ctx, d) == FileKind::kSource) sources.insert(d);
    }
    if (sources.empty()) continue;  // nothing to anchor a recomputation on

    std::set<std::string> fresh = sources;
    bool scan_failed = false;
    for (const std::string& s : sources) {
      auto closure = Closure(ctx, s, nm);
      if (!closure.has_value()) {
        scan_failed = true;
        break;
      }
      fresh.insert(closure->begin(), closure->end());
    }
    if (scan_failed) continue;  // keep the historical view rather than guess
    for (const std::string& d : deps) {
      FileKind kind = KindOf(ctx, d);
      if (kind != FileKind::kSource && kind != FileKind::kHeader) {
        fresh.insert(d);
      }
    }
    if (fresh == deps) continue;

    for (const std::string& d : deps) {
      if (!fresh.count(d)) out.removed_edges.emplace_back(nm, d);
    }
    for (const std::string& d : fresh) {
      if (!deps.count(d)) out.added_edges.emplace_back(nm, d);
    }
    out.meta_updates[nm] = NodeMeta{Provenance::kInferred, ctx.commit};
  }

  return out;
}

RebuildPlan PlanRebuilds(const std::set<std::string>& recipe_diff,
                         const DependencyGraph& incremental,
                         const std::vector<std::string>& uncovered_sources,
                         const DeclaredGraph& declared) {
  RebuildPlan plan;
  for (const std::string& target : recipe_diff) {
    if (incremental.HasNode(target)) continue;
    if (!declared.HasTarget(target)) continue;
    plan.entries.push_back({target, RebuildReason::kRecipeChanged});
  }
  std::vector<std::string> uncovered = uncovered_sources;
  std::sort(uncovered.begin(), uncovered.end());
  for (const std::string& source : uncovered) {
    plan.entries.push_back({source, RebuildReason::kNewSourceUncovered});
  }
  return plan;
}

std::string RebuildTraceName(const std::string& commit,
                             const std::string& target) {
  std::string mangled = target;
  std::replace(mangled.begin(), mangled.end(), '/', '_');
  return "target-" + commit + "-" + mangled + ".trace";
}

RebuildResult ExecuteRebuilds(const RebuildPlan& plan,
                              const RebuildExecution& exec) {
  RebuildResult out;
  for (const RebuildEntry& entry : plan.entries) {
    TracedBuildRequest req;
    req.project_root = exec.project_root;
    req.make_args = exec.make_args;
    req.targets = {entry.target};
    req.mode = exec.mode;

    if (exec.mode == TraceMode::kReplay) {
      std::string mangled = entry.target;
      std::replace(mangled.begin(), mangled.end(), '/', '_');
      std::string per_commit =
          exec.replay_dir + "/" + RebuildTraceName(exec.commit, entry.target);
      std::string generic = exec.replay_dir + "/target-" + mangled + ".trace";
      if (FileExists(per_commit)) {
        req.replay_file = per_commit;
      } else if (FileExists(generic)) {
        req.replay_file = generic;
      } else {
        if (entry.reason == RebuildReason::kRecipeChanged) {
          out.warnings.push_back("rebuild: no replay trace for '" +
                                 entry.target + "'; skipping");
          ++out.failed;
        }
        continue;
      }
    } else {
      req.shim_path = exec.shim_path;
      std::error_code ec;
      std::filesystem::create_directories(exec.trace_dir, ec);
      req.trace_out =
          exec.trace_dir + "/" + RebuildTraceName(exec.commit, entry.target);
    }

    TracedBuildResult built = RunTracedBuild(req);
    if (built.make_exit != 0) {
      out.warnings.push_back("rebuild: make exited with status " +
                             std::to_string(built.make_exit) + " for '" +
                             entry.target + "'");
      ++out.failed;
      continue;
    }

    ActualGraphResult sub = BuildActualGraph(
        built.trace, exec.project_root, exec.commit,
        Provenance::kIncrementalTrace);
    out.externals_dropped += sub.externals_dropped;
    for (const std::string& w : sub.warnings) out.warnings.push_back(w);
    if (entry.reason == RebuildReason::kRecipeChanged &&
        !sub.graph.HasNode(entry.target)) {
      out.warnings.push_back("rebuild: selective rebuild of '" + entry.target +
                             "' produced no target nodes");
    }
    for (const auto& [name, node] : sub.graph.nodes) {
      out.graph.nodes[name] = node;
    }
  }
  return out;
}

namespace {

// Folds one traced node into the merged graph. An existing node keeps its
// historical C/C++ dependencies unless a directive change reached it, in
// which case the fresh trace is the complete truth. A build that re-runs a
// recipe reads only what the compiler opened this time; headers pulled in
// through unchanged directives are still real dependencies, so they carry
// over from history.
void MergeTracedNode(DependencyGraph& merged, const std::string& name,
                     const TargetNode& tnode,
                     const std::set<std::string>* directive_files,
                     ResolverContext& ctx) {
  auto hist = merged.nodes.find(name);
  if (hist == merged.nodes.end()) {
    merged.nodes[name] = tnode;
    return;
  }
  std::set<std::string> hist_sh;
  for (const std::string& d : hist->second.deps) {
    std::string mapped = MapRename(ctx, d);
    FileKind kind = KindOf(ctx, mapped);
    if (kind == FileKind::kSource || kind == FileKind::kHeader) {
      hist_sh.insert(mapped);
    }
  }
  bool wholesale = false;
  if (directive_files != nullptr) {
    for (const std::string& d : tnode.deps) {
      if (directive_files->count(d)) {
        wholesale = true;
        break;
      }
    }
    if (!wholesale) {
      for (const std::string& d : hist_sh) {
        if (directive_files->count(d)) {
          wholesale = true;
          break;
        }
      }
    }
  }
  TargetNode fresh = tnode;
  if (!wholesale) fresh.deps.insert(hist_sh.begin(), hist_sh.end());
  hist->second = std::move(fresh);
}

}  // namespace

DependencyGraph Merge(const MergeInputs& in, ResolverContext& ctx) {
  DependencyGraph merged = *in.historical;

  std::set<std::string> traced;
  for (const auto& [name, node] : in.incremental->nodes) traced.insert(name);
  if (in.rebuilds != nullptr) {
    for (const auto& [name, node] : in.rebuilds->graph.nodes) {
      traced.insert(name);
    }
  }

  for (const auto& [name, tnode] : in.incremental->nodes) {
    MergeTracedNode(merged, name, tnode, in.directive_files, ctx);
  }

  // Selective rebuilds re-run a recipe over an already-built tree, so the
  // same carry-over rule applies to them.
  if (in.rebuilds != nullptr) {
    for (const auto& [name, node] : in.rebuilds->graph.nodes) {
      MergeTracedNode(merged, name, node, in.directive_files, ctx);
    }
  }

  if (in.file_delta != nullptr) {
    ApplyDeltaLenient(merged, *in.file_delta, traced);
  }
  if (in.directive_delta != nullptr) {
    ApplyDeltaLenient(merged, *in.directive_delta, traced);
  }

  // Prune targets that fell out of the build: snapshotted as a make target
  // at the previous commit, declared nowhere now, and not observed this
  // commit. Only the node entry goes away; edges pointing at it stay, since
  // consumers were last seen reading the file it used to denote.
  if (in.previous_recipes != nullptr && in.declared != nullptr) {
    std::vector<std::string> stale;
    for (const auto& [name, node] : merged.nodes) {
      if (traced.count(name)) continue;
      if (in.declared->HasTarget(name)) continue;
      if (!in.previous_recipes->count(name)) continue;
      stale.push_back(name);
    }
    for (const std::string& name : stale) {
      merged.nodes.erase(name);
      ctx.warnings.push_back("merge: pruned stale target '" + name +
                             "' (no longer declared)");
    }
  }

  // Sources the file pass could not map to an object are satisfied when any
  // merged node consumes them (typically via the incremental trace).
  std::vector<std::string> pending = ctx.uncovered_sources;
  std::sort(pending.begin(), pending.end());
  for (const std::string& source : pending) {
    bool satisfied = false;
    for (const auto& [name, node] : merged.nodes) {
      for (const std::string& d : node.deps) {
        if (d == source || EndsWith(d, "/" + source)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) break;
    }
    if (!satisfied) {
      ctx.warnings.push_back("merge: new source '" + source +
                             "' is not consumed by any target");
    }
  }

  return merged;
}

}  // namespace depsentry
