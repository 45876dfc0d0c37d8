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

#ifndef DEPSENTRY_TRACE_H_
#define DEPSENTRY_TRACE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace depsentry {

// One record of the trace format:
//
//   #depsentry-trace v1 root=<absolute project root>
//   seq<TAB>pid<TAB>ppid<TAB>op<TAB>path[<TAB>path2]
//
// Ops: R read, W write, C create, D delete, N rename (path -> path2),
// X exec (path column holds the command line), S process start (path column
// holds the working directory), E process exit (path column holds "-").
// TAB, backslash and newline inside a path/command column are escaped as
// \t, \\ and \n. The `seq` column is written by the producer for human
// consumption; consumers rely on record order within the file, which is the
// global observation order.
enum class TraceOp : char {
  kRead = 'R',
  kWrite = 'W',
  kCreate = 'C',
  kDelete = 'D',
  kRename = 'N',
  kExec = 'X',
  kSpawn = 'S',
  kExit = 'E',
};

struct TraceEvent {
  uint64_t seq = 0;
  int pid = 0;
  int ppid = 0;
  TraceOp op = TraceOp::kRead;
  std::string path;
  std::string path2;  // rename destination; empty otherwise

  bool operator==(const TraceEvent& other) const {
    return seq == other.seq && pid == other.pid && ppid == other.ppid &&
           op == other.op && path == other.path && path2 == other.path2;
  }
};

struct BuildTrace {
  std::string root;  // absolute project root recorded in the header
  std::vector<TraceEvent> events;
};

std::string EscapeTraceField(const std::string& raw);
std::string UnescapeTraceField(const std::string& field);

std::string SerializeTrace(const BuildTrace& trace);
// Throws Error(kParseError) on a bad header or malformed record.
BuildTrace ParseTrace(const std::string& text);

BuildTrace ReadTraceFile(const std::string& path);
void WriteTraceFile(const std::string& path, const BuildTrace& trace);

}  // namespace depsentry

#endif  // DEPSENTRY_TRACE_H_
