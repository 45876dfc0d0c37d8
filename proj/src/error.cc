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

#include "depsentry/error.h"

namespace depsentry {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidPath:
      return "invalid path";
    case ErrorKind::kCycleError:
      return "cycle error";
    case ErrorKind::kParseError:
      return "parse error";
    case ErrorKind::kStateMissing:
      return "state missing";
    case ErrorKind::kStateCorrupt:
      return "state corrupt";
    case ErrorKind::kBuildFailed:
      return "build failed";
    case ErrorKind::kTargetBuildFailed:
      return "target build failed";
    case ErrorKind::kTracerUnavailable:
      return "tracer unavailable";
    case ErrorKind::kIoError:
      return "io error";
    case ErrorKind::kRewriteFailed:
      return "rewrite failed";
    case ErrorKind::kProbeFailed:
      return "probe failed";
    case ErrorKind::kUsageError:
      return "usage error";
  }
  return "unknown error";
}

}  // namespace depsentry
