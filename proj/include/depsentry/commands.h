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

#ifndef DEPSENTRY_COMMANDS_H_
#define DEPSENTRY_COMMANDS_H_

#include <string>
#include <vector>

#include "depsentry/detector.h"
#include "depsentry/error.h"

namespace depsentry {

struct CommandOptions {
  std::string project = ".";
  std::string store;      // flag value; env/config/default applied later
  std::string commit;
  std::string diff;       // path or "-" for stdin
  std::vector<std::string> make_args;
  std::string replay_dir;
  ReportFormat format = ReportFormat::kHuman;
  bool skip_irrelevant = false;
  bool force = false;
};

// Exit codes: 0 the command ran (and, for verify, everything confirmed);
// 1 verify rejected at least one finding; 2 build/trace/probe failures;
// 3 usage or state problems.
int ExitCodeFor(ErrorKind kind);

int CmdInit(const CommandOptions& opts);
int CmdCheck(const CommandOptions& opts);
int CmdReport(const CommandOptions& opts);
int CmdVerify(const CommandOptions& opts);

}  // namespace depsentry

#endif  // DEPSENTRY_COMMANDS_H_
