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

#ifndef DEPSENTRY_STORE_H_
#define DEPSENTRY_STORE_H_

#include <map>
#include <string>

#include "depsentry/graph.h"
#include "depsentry/make_adapter.h"

namespace depsentry {

// On-disk state store:
//   <dir>/actual-graph.v1   historical actual dependency graph
//   <dir>/recipes.v1        per-target recipe hashes of the last snapshot
//   <dir>/meta.v1           key=value: project_root, root_commit, tool_version
//   <dir>/report.v1         last machine-format report
//   <dir>/report-aux.v1     last report's warnings/stats/commit
//   <dir>/traces/           captured trace files (live mode)
//   <dir>/lock              advisory lock
// All writes are temp+rename, so readers never see partial state.
class Store {
 public:
  explicit Store(std::string dir);
  ~Store();

  const std::string& dir() const { return dir_; }
  std::string traces_dir() const { return dir_ + "/traces"; }

  bool Initialized() const;

  // Advisory exclusive lock; throws Error(kUsageError) when another process
  // holds it. Released on Unlock() or destruction.
  void Lock();
  void Unlock();

  DependencyGraph LoadGraph() const;
  void SaveGraph(const DependencyGraph& graph) const;

  // Returns target → sha256; commit the snapshot was taken at via out-param.
  std::map<std::string, std::string> LoadRecipes(std::string* commit) const;
  void SaveRecipes(const RecipeSnapshot& snapshot) const;

  std::map<std::string, std::string> LoadMeta() const;
  void SaveMeta(const std::map<std::string, std::string>& meta) const;

  void SaveReport(const std::string& machine_text,
                  const std::string& aux_text) const;
  std::string LoadReportMachine() const;
  std::string LoadReportAux() const;

 private:
  std::string dir_;
  int lock_fd_ = -1;
};

}  // namespace depsentry

#endif  // DEPSENTRY_STORE_H_
