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

#ifndef DEPSENTRY_TRACER_H_
#define DEPSENTRY_TRACER_H_

#include <set>
#include <string>
#include <vector>

#include "depsentry/graph.h"
#include "depsentry/trace.h"

namespace depsentry {

// Project-relative file activity of one traced process.
struct ProcessFileSummary {
  int pid = 0;
  int ppid = 0;
  std::set<std::string> inputs;   // read before the process wrote them
  std::set<std::string> outputs;  // created or written first
  std::vector<std::string> exec_basenames;  // argv[0] basename per exec
  bool has_file_ops = false;      // saw any project-relative R/W/C/D/N
};

// Classifies one process's events (in observation order) into disjoint
// input and output sets. First relevant operation on a path wins:
// read-after-own-write stays an output, write-after-read stays an input.
// Delete drops an output; rename transfers the classification. External
// paths are dropped entirely.
ProcessFileSummary ClassifyProcess(const std::string& project_root,
                                   const std::vector<TraceEvent>& events);

struct ActualGraphResult {
  DependencyGraph graph;
  std::vector<std::string> warnings;
  // Distinct absolute paths the build touched outside the project root.
  size_t externals_dropped = 0;
};

// Aggregates a build trace into target nodes. Processes are grouped into
// recipe subtrees rooted at the first non-make descendant of each make
// process; each subtree's merged event stream is classified as a unit, its
// outputs become targets and its inputs their dependencies.
ActualGraphResult BuildActualGraph(const BuildTrace& trace,
                                   const std::string& project_root,
                                   const std::string& commit,
                                   Provenance provenance);

enum class TraceMode { kLive, kReplay };

struct TracedBuildRequest {
  std::string project_root;
  std::vector<std::string> make_args;  // extra args for make
  std::vector<std::string> targets;    // explicit goal targets, may be empty
  TraceMode mode = TraceMode::kReplay;
  std::string replay_file;             // replay: trace file to load
  std::string trace_out;               // live: trace file to produce
  std::string shim_path;               // live: tracer shared object
};

struct TracedBuildResult {
  BuildTrace trace;
  int make_exit = 0;
  std::string make_output;  // live only: combined stdout+stderr
};

// Runs make under the tracing shim (live) or loads a previously captured
// trace (replay). Live mode throws Error(kTracerUnavailable) when the shim
// is missing; a failing make is reported via make_exit, not an exception.
TracedBuildResult RunTracedBuild(const TracedBuildRequest& request);

}  // namespace depsentry

#endif  // DEPSENTRY_TRACER_H_
