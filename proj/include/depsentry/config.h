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

#ifndef DEPSENTRY_CONFIG_H_
#define DEPSENTRY_CONFIG_H_

#include <string>
#include <vector>

#include "depsentry/change_analyzer.h"

namespace depsentry {

// Project-level configuration, read from `depsentry.conf` in the project
// root. `key=value` lines; `#` starts a comment; unknown keys are ignored.
// Recognized keys: store, make_arg (repeatable), source_suffixes,
// header_suffixes (comma-separated lists).
struct Config {
  std::string store;
  std::vector<std::string> make_args;
  SuffixConfig suffixes;
};

Config LoadConfig(const std::string& project_root);

// Parses the config text directly (exposed for tests).
Config ParseConfig(const std::string& text);

}  // namespace depsentry

#endif  // DEPSENTRY_CONFIG_H_
