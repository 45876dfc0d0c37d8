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

#include "depsentry/path.h"

#include <limits.h>
#include <stdlib.h>

#include <vector>

#include "depsentry/error.h"
#include "depsentry/util.h"

namespace depsentry {

std::string LexicalNormalize(const std::string& abs_path) {
  std::vector<std::string> stack;
  size_t i = 0;
  while (i < abs_path.size()) {
    size_t j = abs_path.find('/', i);
    if (j == std::string::npos) j = abs_path.size();
    std::string seg = abs_path.substr(i, j - i);
    if (seg.empty() || seg == ".") {
      // skip
    } else if (seg == "..") {
      if (!stack.empty()) stack.pop_back();
    } else {
      stack.push_back(seg);
    }
    i = j + 1;
  }
  std::string out = "/";
  for (size_t k = 0; k < stack.size(); ++k) {
    if (k > 0) out += '/';
    out += stack[k];
  }
  if (stack.empty()) return "/";
  return "/" + JoinStrings(stack, "/");
}

std::string CanonicalProjectRoot(const std::string& root) {
  char buf[PATH_MAX];
  if (::realpath(root.c_str(), buf) != nullptr) {
    return std::string(buf);
  }
  return LexicalNormalize(root);
}

NormalizedPath NormalizePath(const std::string& project_root,
                             const std::string& raw_path) {
  if (raw_path.empty()) {
    throw Error(ErrorKind::kInvalidPath, "empty path");
  }
  if (raw_path.find('\0') != std::string::npos ||
      project_root.find('\0') != std::string::npos) {
    throw Error(ErrorKind::kInvalidPath, "embedded NUL byte in path");
  }
  if (project_root.empty() || project_root[0] != '/') {
    throw Error(ErrorKind::kInvalidPath,
                "project root must be absolute: " + project_root);
  }

  std::string abs = raw_path[0] == '/' ? raw_path
                                       : project_root + "/" + raw_path;
  std::string norm = LexicalNormalize(abs);

  // Match against the literal root first, then against its resolved form,
  // so traces produced through a symlinked root still map into the project.
  const std::string roots[2] = {LexicalNormalize(project_root),
                                CanonicalProjectRoot(project_root)};
  for (const std::string& r : roots) {
    if (norm == r) {
      throw Error(ErrorKind::kInvalidPath,
                  "path names the project root itself: " + raw_path);
    }
    std::string prefix = r == "/" ? "/" : r + "/";
    if (StartsWith(norm, prefix)) {
      return NormalizedPath{PathClass::kProject, norm.substr(prefix.size())};
    }
  }
  return NormalizedPath{PathClass::kExternal, norm};
}

std::string PathDirname(const std::string& path) {
  size_t pos = path.rfind('/');
  if (pos == std::string::npos) return "";
  return path.substr(0, pos);
}

std::string PathBasename(const std::string& path) {
  size_t pos = path.rfind('/');
  if (pos == std::string::npos) return path;
  return path.substr(pos + 1);
}

std::string PathStem(const std::string& path) {
  std::string base = PathBasename(path);
  size_t pos = base.rfind('.');
  if (pos == std::string::npos || pos == 0) return base;
  return base.substr(0, pos);
}

std::string PathExtension(const std::string& path) {
  std::string base = PathBasename(path);
  size_t pos = base.rfind('.');
  if (pos == std::string::npos || pos == 0) return "";
  return base.substr(pos);
}

std::string PathJoin(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.back() == '/') return a + b;
  return a + "/" + b;
}

}  // namespace depsentry
