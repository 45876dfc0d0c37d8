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

#ifndef DEPSENTRY_DETECTOR_H_
#define DEPSENTRY_DETECTOR_H_

#include <string>
#include <vector>

#include "depsentry/graph.h"
#include "depsentry/make_adapter.h"

namespace depsentry {

enum class FindingKind { kMissing, kRedundant };
enum class Evidence { kTrace, kInferred, kHistorical };

const char* FindingKindName(FindingKind kind);
const char* EvidenceName(Evidence evidence);

struct Finding {
  FindingKind kind = FindingKind::kMissing;
  std::string target;
  std::string dependency;
  Evidence evidence = Evidence::kHistorical;
  std::string commit;
  bool order_only = false;  // redundant order-only prerequisite

  bool operator==(const Finding& other) const {
    return kind == other.kind && target == other.target &&
           dependency == other.dependency && evidence == other.evidence &&
           commit == other.commit && order_only == other.order_only;
  }
};

struct ReportStats {
  size_t targets_compared = 0;
  size_t externals_dropped = 0;
  size_t unresolved_includes = 0;
  size_t failed_rebuilds = 0;
};

struct ErrorReport {
  std::string commit;
  std::vector<Finding> findings;  // sorted by (target, kind, dependency)
  std::vector<std::string> warnings;
  ReportStats stats;
};

struct DetectOptions {
  // Fresh recipe snapshot; enables the bare `ln -s` recipe warning for
  // targets that have findings.
  const RecipeSnapshot* recipes = nullptr;
};

// Compares the actual graph against the declared one. Targets present in
// both contribute missing (actual-only) and redundant (declared-only) edges;
// a built-but-undeclared target has every dependency reported missing, and
// a declared-but-never-built target is only worth a warning.
ErrorReport Detect(const DependencyGraph& actual, const DeclaredGraph& declared,
                   const std::string& commit, const DetectOptions& opts = {});

enum class ReportFormat { kHuman, kMachine };

// Machine format: `#depsentry-report v1` header, then one
// `kind<TAB>target<TAB>dependency<TAB>evidence<TAB>commit` line per finding;
// redundant order-only prerequisites carry a `+order-only` evidence suffix.
std::string RenderReport(const ErrorReport& report, ReportFormat format);

// Inverse of the machine rendering. Throws Error(kParseError) on bad input.
std::vector<Finding> ParseMachineReport(const std::string& text);

// Round-trip encoding of the non-finding report parts (commit, warnings,
// stats) so a stored report can be re-rendered later.
std::string SerializeReportAux(const ErrorReport& report);
void ParseReportAux(const std::string& text, ErrorReport& report);

}  // namespace depsentry

#endif  // DEPSENTRY_DETECTOR_H_
