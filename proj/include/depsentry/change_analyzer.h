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

#ifndef DEPSENTRY_CHANGE_ANALYZER_H_
#define DEPSENTRY_CHANGE_ANALYZER_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace depsentry {

// Suffix-only file classification (the paper's source-type list). The
// suffix sets are configurable; pass nullptr for the defaults.
enum class FileKind { kSource, kHeader, kMake, kOther };

struct SuffixConfig {
  std::vector<std::string> source_suffixes = {".c", ".cpp", ".cc"};
  std::vector<std::string> header_suffixes = {".h", ".hpp"};
};

FileKind ClassifyFileKind(const std::string& path,
                          const SuffixConfig* config = nullptr);

enum class ChangeType { kAdded, kDeleted, kModified, kRenamed };

struct FileChange {
  ChangeType type = ChangeType::kModified;
  std::string path;      // current path (rename destination)
  std::string old_path;  // renames only
  std::vector<std::string> added_lines;
  std::vector<std::string> removed_lines;
};

struct CommitDelta {
  std::vector<FileChange> changes;
};

// Parses a unified diff (git style with rename/new/deleted markers, or plain
// ---/+++ pairs). Throws Error(kParseError) on text that is recognizably a
// diff but malformed.
CommitDelta ParseDiff(const std::string& text);

struct IncludeSpec {
  bool angled = false;
  std::string name;

  bool operator==(const IncludeSpec& other) const {
    return angled == other.angled && name == other.name;
  }
};

struct DirectiveChange {
  std::string file;  // current path of the changed Source/Header file
  std::vector<IncludeSpec> added_includes;
  std::vector<IncludeSpec> removed_includes;
  bool conditionals_changed = false;  // #if/#ifdef/#define/... toggled
};

// Preprocessor-directive changes per Source/Header file of the delta.
// A line removed and re-added verbatim in one file cancels out. Deleted
// files yield no entry; renamed files are keyed by their new name.
std::vector<DirectiveChange> ExtractDirectiveChanges(
    const CommitDelta& delta, const SuffixConfig* config = nullptr);

// Include directives found in a blob of source text, in order.
std::vector<IncludeSpec> ScanIncludes(const std::string& text);

enum class ResolutionKind { kProject, kExternal, kUnresolved };

struct Resolution {
  ResolutionKind kind = ResolutionKind::kUnresolved;
  std::string path;  // project-relative when kind == kProject
};

// Resolves one include against the working tree. Quoted includes search the
// including file's directory first, then `search_dirs`; angled includes
// search only `search_dirs`. A hit outside the project root, an absolute
// include path, or an angled miss are External; a quoted miss is Unresolved
// (a pending expectation, typically a yet-to-be-generated header).
Resolution ResolveInclude(const std::string& project_root,
                          const std::string& including_file,
                          const IncludeSpec& spec,
                          const std::vector<std::string>& search_dirs);

// Fixed point of ResolveInclude over project-internal includes, excluding
// `file` itself. Cycle-safe. Unresolved names are appended to
// `unresolved_out` (deduplicated) when provided.
std::set<std::string> TransitiveIncludes(
    const std::string& project_root, const std::string& file,
    const std::vector<std::string>& search_dirs,
    std::vector<std::string>* unresolved_out = nullptr);

}  // namespace depsentry

#endif  // DEPSENTRY_CHANGE_ANALYZER_H_
