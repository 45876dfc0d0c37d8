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

#ifndef DEPSENTRY_VERIFIER_H_
#define DEPSENTRY_VERIFIER_H_

#include <string>
#include <vector>

#include "depsentry/detector.h"

namespace depsentry {

enum class ProbeMethod { kTimestampMutation, kPrerequisiteRemoval };

struct Verdict {
  Finding finding;
  bool confirmed = false;
  ProbeMethod method = ProbeMethod::kTimestampMutation;
};

struct VerifierOptions {
  std::string project_root;
  std::vector<std::string> make_args;
};

// Confirms a missing dependency by mutation: bump the dependency's mtime past
// everything else in the tree and run `make <target>`. A correct declaration
// would rebuild the target; if its mtime is untouched, the edge really is
// missing. The build must be in a built state. Throws Error(kProbeFailed)
// when make fails or the involved files are absent.
Verdict VerifyMd(const VerifierOptions& opts, const Finding& finding);

// Confirms a redundant dependency by removal: in a scratch copy of the tree,
// append an overriding rule for the target whose prerequisite list drops the
// dependency (automatic variables in the recipe are filtered to match),
// delete all declared target files, and build the target from scratch. A
// clean exit means the build never needed the edge. Throws
// Error(kRewriteFailed) when no recipe can be found to rewrite and
// Error(kProbeFailed) on environmental failures.
Verdict VerifyRd(const VerifierOptions& opts, const Finding& finding);

// `kind<TAB>target<TAB>dependency<TAB>confirmed<TAB>method` with
// confirmed in {true,false} and method in
// {timestamp-mutation,prerequisite-removal}.
std::string RenderVerdictLine(const Verdict& verdict);

// Exposed for tests: recipe text with $^, $+ and $< rewritten so the
// dependency disappears from automatic variables despite GNU make's
// prerequisite accumulation across rules.
std::string FilterAutomaticVars(const std::string& line,
                                const std::string& dep);

}  // namespace depsentry

#endif  // DEPSENTRY_VERIFIER_H_
