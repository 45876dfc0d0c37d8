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

#include "depsentry/config.h"

#include "depsentry/error.h"
#include "depsentry/util.h"

namespace depsentry {

namespace {

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> out;
  for (const std::string& item : Split(value, ',')) {
    std::string trimmed = TrimWhitespace(item);
    if (!trimmed.empty()) out.push_back(trimmed);
  }
  return out;
}

}  // namespace

Config ParseConfig(const std::string& text) {
  Config config;
  for (const std::string& raw : SplitLines(text)) {
    std::string line = TrimWhitespace(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kParseError, "bad config line: " + line);
    }
    std::string key = TrimWhitespace(line.substr(0, eq));
    std::string value = TrimWhitespace(line.substr(eq + 1));
    if (key == "store") {
      config.store = value;
    } else if (key == "make_arg") {
      config.make_args.push_back(value);
    } else if (key == "source_suffixes") {
      config.suffixes.source_suffixes = SplitList(value);
    } else if (key == "header_suffixes") {
      config.suffixes.header_suffixes = SplitList(value);
    }
    // Unknown keys are ignored so configs stay forward compatible.
  }
  return config;
}

Config LoadConfig(const std::string& project_root) {
  const std::string path = project_root + "/depsentry.conf";
  if (!FileExists(path)) return Config{};
  return ParseConfig(ReadFile(path));
}

}  // namespace depsentry
