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

#ifndef DEPSENTRY_ERROR_H_
#define DEPSENTRY_ERROR_H_

#include <stdexcept>
#include <string>

namespace depsentry {

// Failure categories. The CLI maps each category onto a process exit code;
// library code only ever throws, it never calls exit().
enum class ErrorKind {
  kInvalidPath,       // malformed or unusable path input
  kCycleError,        // cycle where a DAG is required (e.g. phony expansion)
  kParseError,        // unparseable input text (diffs, make output, traces)
  kStateMissing,      // store not initialized / required file absent
  kStateCorrupt,      // store file present but unreadable or wrong version
  kBuildFailed,       // full make invocation failed
  kTargetBuildFailed, // selective single-target rebuild failed
  kTracerUnavailable, // tracing backend not usable on this host
  kIoError,           // filesystem or subprocess plumbing failure
  kRewriteFailed,     // makefile rewrite for verification failed
  kProbeFailed,       // verification probe could not be executed
  kUsageError,        // bad CLI arguments or conflicting options
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace depsentry

#endif  // DEPSENTRY_ERROR_H_
