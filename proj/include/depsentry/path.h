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

#ifndef DEPSENTRY_PATH_H_
#define DEPSENTRY_PATH_H_

#include <string>

namespace depsentry {

enum class PathClass {
  kProject,   // inside the project root; `path` is root-relative
  kExternal,  // outside the project root; `path` is absolute
};

struct NormalizedPath {
  PathClass cls;
  std::string path;

  bool IsProject() const { return cls == PathClass::kProject; }
};

// Collapses "//", "." and ".." segments of an absolute path lexically.
// Never touches the filesystem, so symlinked paths stay distinct.
std::string LexicalNormalize(const std::string& abs_path);

// Resolves the project root through the filesystem (realpath). Only the
// root is ever resolved this way; paths under it are handled lexically.
// Returns the lexically-normalized input when the root does not exist yet.
std::string CanonicalProjectRoot(const std::string& root);

// Maps a raw path observed during a build (absolute, or relative to the
// project root) to either a root-relative project path or an absolute
// external path. Throws Error(kInvalidPath) for empty paths, paths with
// embedded NUL bytes, a non-absolute project root, or a path that names
// the project root itself.
NormalizedPath NormalizePath(const std::string& project_root,
                             const std::string& raw_path);

// Lexical helpers over '/'-separated relative paths.
std::string PathDirname(const std::string& path);   // "" when no '/'
std::string PathBasename(const std::string& path);
std::string PathStem(const std::string& path);      // basename minus last ext
std::string PathExtension(const std::string& path); // includes '.', or ""
std::string PathJoin(const std::string& a, const std::string& b);

}  // namespace depsentry

#endif  // DEPSENTRY_PATH_H_
