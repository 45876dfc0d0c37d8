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

#include "depsentry/store.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <filesystem>

#include "depsentry/error.h"
#include "depsentry/util.h"

namespace depsentry {

namespace {
constexpr const char kMetaHeader[] = "#depsentry-meta v1";
}  // namespace

Store::Store(std::string dir) : dir_(std::move(dir)) {}

Store::~Store() { Unlock(); }

bool Store::Initialized() const {
  return FileExists(dir_ + "/meta.v1") && FileExists(dir_ + "/actual-graph.v1");
}

void Store::Lock() {
  if (lock_fd_ >= 0) return;
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw Error(ErrorKind::kIoError, "cannot create store dir " + dir_);
  }
  const std::string lock_path = dir_ + "/lock";
  lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (lock_fd_ < 0) {
    throw Error(ErrorKind::kIoError, "cannot open lock file " + lock_path);
  }
  if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(lock_fd_);
    lock_fd_ = -1;
    throw Error(ErrorKind::kUsageError,
                "store is locked by another depsentry process: " + dir_);
  }
}

void Store::Unlock() {
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
    lock_fd_ = -1;
  }
}

DependencyGraph Store::LoadGraph() const {
  const std::string path = dir_ + "/actual-graph.v1";
  if (!FileExists(path)) {
    throw Error(ErrorKind::kStateMissing,
                "no actual graph in store (run 'depsentry init'): " + path);
  }
  return ParseGraph(ReadFile(path));
}

void Store::SaveGraph(const DependencyGraph& graph) const {
  WriteFileAtomic(dir_ + "/actual-graph.v1", SerializeGraph(graph));
}

std::map<std::string, std::string> Store::LoadRecipes(
    std::string* commit) const {
  const std::string path = dir_ + "/recipes.v1";
  if (!FileExists(path)) {
    throw Error(ErrorKind::kStateMissing, "no recipe snapshot in store");
  }
  return ParseRecipes(ReadFile(path), commit);
}

void Store::SaveRecipes(const RecipeSnapshot& snapshot) const {
  WriteFileAtomic(dir_ + "/recipes.v1", SerializeRecipes(snapshot));
}

std::map<std::string, std::string> Store::LoadMeta() const {
  const std::string path = dir_ + "/meta.v1";
  if (!FileExists(path)) {
    throw Error(ErrorKind::kStateMissing,
                "store not initialized (run 'depsentry init'): " + dir_);
  }
  std::map<std::string, std::string> meta;
  std::vector<std::string> lines = SplitLines(ReadFile(path));
  if (lines.empty() || lines[0] != kMetaHeader) {
    throw Error(ErrorKind::kStateCorrupt, "bad meta header in " + path);
  }
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    size_t eq = lines[i].find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kStateCorrupt, "bad meta line: " + lines[i]);
    }
    meta[lines[i].substr(0, eq)] = lines[i].substr(eq + 1);
  }
  return meta;
}

void Store::SaveMeta(const std::map<std::string, std::string>& meta) const {
  std::string out = std::string(kMetaHeader) + "\n";
  for (const auto& [key, value] : meta) {
    out += key + "=" + value + "\n";
  }
  WriteFileAtomic(dir_ + "/meta.v1", out);
}

void Store::SaveReport(const std::string& machine_text,
                       const std::string& aux_text) const {
  WriteFileAtomic(dir_ + "/report.v1", machine_text);
  WriteFileAtomic(dir_ + "/report-aux.v1", aux_text);
}

std::string Store::LoadReportMachine() const {
  const std::string path = dir_ + "/report.v1";
  if (!FileExists(path)) {
    throw Error(ErrorKind::kStateMissing, "no report in store: " + path);
  }
  return ReadFile(path);
}

std::string Store::LoadReportAux() const {
  const std::string path = dir_ + "/report-aux.v1";
  if (!FileExists(path)) {
    throw Error(ErrorKind::kStateMissing, "no report aux in store: " + path);
  }
  return ReadFile(path);
}

}  // namespace depsentry
