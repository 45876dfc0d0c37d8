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

#ifndef DEPSENTRY_SUBPROCESS_H_
#define DEPSENTRY_SUBPROCESS_H_

#include <string>
#include <utility>
#include <vector>

namespace depsentry {

struct RunResult {
  int exit_code = 0;      // exit status, or 128+signal when killed
  std::string output;     // combined stdout and stderr
};

// Runs `argv` with `cwd` as working directory and `env_extra` appended to
// the inherited environment. Never throws for a failing command; throws
// Error(kIoError) only when the process cannot be spawned at all. A missing
// executable surfaces as exit code 127.
RunResult RunCommand(
    const std::vector<std::string>& argv, const std::string& cwd,
    const std::vector<std::pair<std::string, std::string>>& env_extra = {});

}  // namespace depsentry

#endif  // DEPSENTRY_SUBPROCESS_H_
