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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "depsentry/commands.h"
#include "depsentry/error.h"
#include "depsentry/version.h"

namespace {

void AddCommonOptions(CLI::App* cmd, depsentry::CommandOptions* opts,
                      std::string* format) {
  cmd->add_option("--project", opts->project, "Project root directory");
  cmd->add_option("--store", opts->store,
                  "State directory (default: <project>/.depsentry, or "
                  "DEPSENTRY_STORE)");
  cmd->add_option("--format", *format, "Report format")
      ->check(CLI::IsMember({"human", "machine"}));
}

void AddBuildOptions(CLI::App* cmd, depsentry::CommandOptions* opts) {
  cmd->add_option("--commit", opts->commit,
                  "Commit identifier (default: git HEAD)");
  cmd->add_option("--make-arg", opts->make_args,
                  "Extra argument passed to make (repeatable)");
  cmd->add_option("--replay", opts->replay_dir,
                  "Directory with recorded traces instead of live builds");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "depsentry: detect missing and redundant dependencies in GNU Make "
      "builds"};
  app.set_version_flag("--version", depsentry::kVersion);
  app.require_subcommand(1);

  depsentry::CommandOptions opts;
  std::string format = "human";

  CLI::App* init =
      app.add_subcommand("init", "Trace a clean build and seed the store");
  AddCommonOptions(init, &opts, &format);
  AddBuildOptions(init, &opts);
  init->add_flag("--force", opts.force, "Reinitialize an existing store");

  CLI::App* check = app.add_subcommand(
      "check", "Analyze one commit: trace, infer, merge and report");
  AddCommonOptions(check, &opts, &format);
  AddBuildOptions(check, &opts);
  check->add_option("--diff", opts.diff,
                    "Unified diff for the commit ('-' reads stdin); the tree "
                    "must already be at the commit");
  check->add_flag("--skip-irrelevant", opts.skip_irrelevant,
                  "Skip commits that touch no source, header or makefile");

  CLI::App* report =
      app.add_subcommand("report", "Print the most recent stored report");
  AddCommonOptions(report, &opts, &format);

  CLI::App* verify = app.add_subcommand(
      "verify", "Probe each stored finding against the real build");
  AddCommonOptions(verify, &opts, &format);
  verify->add_option("--make-arg", opts.make_args,
                     "Extra argument passed to make (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  opts.format = format == "machine" ? depsentry::ReportFormat::kMachine
                                    : depsentry::ReportFormat::kHuman;

  try {
    if (init->parsed()) return depsentry::CmdInit(opts);
    if (check->parsed()) return depsentry::CmdCheck(opts);
    if (report->parsed()) return depsentry::CmdReport(opts);
    if (verify->parsed()) return depsentry::CmdVerify(opts);
  } catch (const depsentry::Error& e) {
    std::cerr << "depsentry: error: " << e.what() << "\n";
    return depsentry::ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "depsentry: internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
