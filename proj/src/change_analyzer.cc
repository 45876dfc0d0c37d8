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

#include "depsentry/change_analyzer.h"

#include <deque>
#include <map>

#include "depsentry/error.h"
#include "depsentry/path.h"
#include "depsentry/util.h"

namespace depsentry {

FileKind ClassifyFileKind(const std::string& path,
                          const SuffixConfig* config) {
  static const SuffixConfig kDefaults;
  const SuffixConfig& cfg = config != nullptr ? *config : kDefaults;
  const std::string base = PathBasename(path);
  if (base == "Makefile" || base == "makefile" || base == "GNUmakefile" ||
      EndsWith(base, ".mk")) {
    return FileKind::kMake;
  }
  for (const std::string& suffix : cfg.source_suffixes) {
    if (EndsWith(base, suffix)) return FileKind::kSource;
  }
  for (const std::string& suffix : cfg.header_suffixes) {
    if (EndsWith(base, suffix)) return FileKind::kHeader;
  }
  return FileKind::kOther;
}

namespace {

// Strips the conventional a/ b/ diff prefixes.
std::string StripDiffPrefix(const std::string& path) {
  if (StartsWith(path, "a/") || StartsWith(path, "b/")) {
    return path.substr(2);
  }
  return path;
}

// Extracts the path from a "--- a/x" / "+++ b/x" line; empty for /dev/null.
std::string FileHeaderPath(const std::string& line) {
  std::string rest = TrimWhitespace(line.substr(3));
  size_t tab = rest.find('\t');
  if (tab != std::string::npos) rest = rest.substr(0, tab);
  if (rest == "/dev/null") return "";
  return StripDiffPrefix(rest);
}

}  // namespace

CommitDelta ParseDiff(const std::string& text) {
  CommitDelta delta;
  FileChange* current = nullptr;
  bool current_has_git_header = false;
  bool saw_old_header = false;

  auto begin_change = [&]() -> FileChange* {
    delta.changes.emplace_back();
    return &delta.changes.back();
  };

  for (const std::string& line : SplitLines(text)) {
    if (StartsWith(line, "diff --git ")) {
      current = begin_change();
      current_has_git_header = true;
      saw_old_header = false;
      // "diff --git a/x b/y": provisional paths, refined by later headers.
      std::vector<std::string> parts = Split(line, ' ');
      if (parts.size() >= 4) {
        current->old_path = StripDiffPrefix(parts[parts.size() - 2]);
        current->path = StripDiffPrefix(parts[parts.size() - 1]);
      }
      continue;
    }
    if (current != nullptr && current_has_git_header) {
      if (StartsWith(line, "new file mode")) {
        current->type = ChangeType::kAdded;
        continue;
      }
      if (StartsWith(line, "deleted file mode")) {
        current->type = ChangeType::kDeleted;
        continue;
      }
      if (StartsWith(line, "rename from ")) {
        current->type = ChangeType::kRenamed;
        current->old_path = line.substr(12);
        continue;
      }
      if (StartsWith(line, "rename to ")) {
        current->type = ChangeType::kRenamed;
        current->path = line.substr(10);
        continue;
      }
      if (StartsWith(line, "copy from ") || StartsWith(line, "copy to ") ||
          StartsWith(line, "similarity index") ||
          StartsWith(line, "dissimilarity index") ||
          StartsWith(line, "old mode") || StartsWith(line, "new mode") ||
          StartsWith(line, "index ")) {
        continue;
      }
    }
    if (StartsWith(line, "--- ")) {
      if (current == nullptr || saw_old_header) {
        current = begin_change();
        current_has_git_header = false;
      }
      saw_old_header = true;
      std::string path = FileHeaderPath(line);
      if (path.empty()) {
        current->type = ChangeType::kAdded;
      } else if (current->old_path.empty()) {
        current->old_path = path;
      }
      continue;
    }
    if (StartsWith(line, "+++ ")) {
      if (current == nullptr) {
        throw Error(ErrorKind::kParseError, "+++ without --- in diff");
      }
      std::string path = FileHeaderPath(line);
      if (path.empty()) {
        current->type = ChangeType::kDeleted;
        if (current->path.empty() || current->path == current->old_path) {
          current->path = current->old_path;
        }
      } else if (current->type != ChangeType::kRenamed) {
        current->path = path;
        if (current->old_path.empty()) current->old_path = path;
      }
      continue;
    }
    if (StartsWith(line, "@@")) {
      if (current == nullptr) {
        throw Error(ErrorKind::kParseError, "hunk before file header");
      }
      continue;
    }
    if (current == nullptr) continue;
    if (StartsWith(line, "+")) {
      current->added_lines.push_back(line.substr(1));
    } else if (StartsWith(line, "-")) {
      current->removed_lines.push_back(line.substr(1));
    }
    // Context lines and "\ No newline at end of file" markers are skipped.
  }

  for (FileChange& change : delta.changes) {
    if (change.path.empty()) change.path = change.old_path;
    if (change.type != ChangeType::kRenamed) {
      change.old_path = change.type == ChangeType::kModified ||
                                change.type == ChangeType::kDeleted ||
                                change.type == ChangeType::kAdded
                            ? ""
                            : change.old_path;
    }
    if (change.path.empty()) {
      throw Error(ErrorKind::kParseError, "diff entry without a path");
    }
  }
  return delta;
}

namespace {

std::optional<IncludeSpec> ParseIncludeLine(const std::string& line) {
  std::string trimmed = TrimWhitespace(line);
  if (trimmed.empty() || trimmed[0] != '#') return std::nullopt;
  size_t pos = 1;
  while (pos < trimmed.size() && (trimmed[pos] == ' ' || trimmed[pos] == '\t'))
    ++pos;
  if (trimmed.compare(pos, 7, "include") != 0) return std::nullopt;
  pos += 7;
  while (pos < trimmed.size() && (trimmed[pos] == ' ' || trimmed[pos] == '\t'))
    ++pos;
  if (pos >= trimmed.size()) return std::nullopt;
  IncludeSpec spec;
  char open = trimmed[pos];
  if (open == '<' || open == '"') {
    char close = open == '<' ? '>' : '"';
    size_t end = trimmed.find(close, pos + 1);
    if (end == std::string::npos) return std::nullopt;
    spec.angled = open == '<';
    spec.name = trimmed.substr(pos + 1, end - pos - 1);
    return spec;
  }
  // `#include HEADER_MACRO`: keep the raw token; it resolves Unresolved.
  size_t end = trimmed.find_first_of(" \t", pos);
  spec.angled = false;
  spec.name = trimmed.substr(pos, end == std::string::npos ? std::string::npos
                                                           : end - pos);
  return spec;
}

bool IsConditionalDirective(const std::string& line) {
  std::string trimmed = TrimWhitespace(line);
  if (trimmed.empty() || trimmed[0] != '#') return false;
  size_t pos = 1;
  while (pos < trimmed.size() && (trimmed[pos] == ' ' || trimmed[pos] == '\t'))
    ++pos;
  static const char* kKeywords[] = {"ifdef", "ifndef", "if",    "elif",
                                    "else",  "endif",  "define", "undef"};
  for (const char* kw : kKeywords) {
    size_t len = std::string(kw).size();
    if (trimmed.compare(pos, len, kw) == 0) {
      char next = pos + len < trimmed.size() ? trimmed[pos + len] : ' ';
      if (next == ' ' || next == '\t' || next == '(' || next == '\0') {
        return true;
      }
      // `#if` is a prefix of `#ifdef`; the loop order handles it, but a
      // directive like `#iffy` must not match.
      if (std::string(kw) == "if" && (next == ' ' || next == '\t')) {
        return true;
      }
    }
  }
  return false;
}

bool IsDirectiveLine(const std::string& line) {
  return ParseIncludeLine(line).has_value() || IsConditionalDirective(line);
}

}  // namespace

std::vector<IncludeSpec> ScanIncludes(const std::string& text) {
  std::vector<IncludeSpec> specs;
  for (const std::string& line : SplitLines(text)) {
    if (auto spec = ParseIncludeLine(line)) {
      specs.push_back(*spec);
    }
  }
  return specs;
}

std::vector<DirectiveChange> ExtractDirectiveChanges(
    const CommitDelta& delta, const SuffixConfig* config) {
  std::vector<DirectiveChange> out;
  for (const FileChange& change : delta.changes) {
    if (change.type == ChangeType::kDeleted) continue;
    if (ClassifyFileKind(change.path, config) != FileKind::kSource &&
        ClassifyFileKind(change.path, config) != FileKind::kHeader) {
      continue;
    }

    // Verbatim remove+re-add of the same directive line cancels out.
    std::multiset<std::string> added(change.added_lines.begin(),
                                     change.added_lines.end());
    std::multiset<std::string> removed;
    for (const std::string& line : change.removed_lines) {
      auto it = added.find(line);
      if (it != added.end() && IsDirectiveLine(line)) {
        added.erase(it);
      } else {
        removed.insert(line);
      }
    }

    DirectiveChange dc;
    dc.file = change.path;
    for (const std::string& line : added) {
      if (auto spec = ParseIncludeLine(line)) {
        dc.added_includes.push_back(*spec);
      } else if (IsConditionalDirective(line)) {
        dc.conditionals_changed = true;
      }
    }
    for (const std::string& line : removed) {
      if (auto spec = ParseIncludeLine(line)) {
        dc.removed_includes.push_back(*spec);
      } else if (IsConditionalDirective(line)) {
        dc.conditionals_changed = true;
      }
    }
    if (!dc.added_includes.empty() || !dc.removed_includes.empty() ||
        dc.conditionals_changed) {
      out.push_back(std::move(dc));
    }
  }
  return out;
}

namespace {

// Joins dir and name, collapsing "." and ".." lexically. Returns nullopt
// when the result escapes above the (implicit) root.
std::optional<std::string> RelJoinNormalize(const std::string& dir,
                                            const std::string& name) {
  std::vector<std::string> stack;
  auto push_segments = [&](const std::string& p) -> bool {
    size_t i = 0;
    while (i <= p.size()) {
      size_t j = p.find('/', i);
      if (j == std::string::npos) j = p.size();
      std::string seg = p.substr(i, j - i);
      if (seg == "..") {
        if (stack.empty()) return false;
        stack.pop_back();
      } else if (!seg.empty() && seg != ".") {
        stack.push_back(seg);
      }
      if (j == p.size()) break;
      i = j + 1;
    }
    return true;
  };
  if (!push_segments(dir) || !push_segments(name)) return std::nullopt;
  return JoinStrings(stack, "/");
}

}  // namespace

Resolution ResolveInclude(const std::string& project_root,
                          const std::string& including_file,
                          const IncludeSpec& spec,
                          const std::vector<std::string>& search_dirs) {
  if (!spec.name.empty() && spec.name[0] == '/') {
    return Resolution{ResolutionKind::kExternal, spec.name};
  }

  std::vector<std::string> dirs;
  if (!spec.angled) {
    dirs.push_back(PathDirname(including_file));
  }
  dirs.insert(dirs.end(), search_dirs.begin(), search_dirs.end());

  for (const std::string& dir : dirs) {
    if (!dir.empty() && dir[0] == '/') {
      // Absolute search dir: a hit there is outside the project unless the
      // dir itself sits under the root.
      std::string abs = LexicalNormalize(dir + "/" + spec.name);
      try {
        NormalizedPath np = NormalizePath(project_root, abs);
        if (np.cls == PathClass::kProject) {
          if (FileExists(project_root + "/" + np.path)) {
            return Resolution{ResolutionKind::kProject, np.path};
          }
        } else if (FileExists(abs)) {
          return Resolution{ResolutionKind::kExternal, abs};
        }
      } catch (const Error&) {
      }
      continue;
    }
    std::optional<std::string> rel = RelJoinNormalize(dir, spec.name);
    if (!rel.has_value() || rel->empty()) continue;
    if (FileExists(project_root + "/" + *rel)) {
      return Resolution{ResolutionKind::kProject, *rel};
    }
  }
  if (spec.angled) {
    return Resolution{ResolutionKind::kExternal, spec.name};
  }
  return Resolution{ResolutionKind::kUnresolved, spec.name};
}

std::set<std::string> TransitiveIncludes(
    const std::string& project_root, const std::string& file,
    const std::vector<std::string>& search_dirs,
    std::vector<std::string>* unresolved_out) {
  std::set<std::string> visited = {file};
  std::set<std::string> result;
  std::set<std::string> unresolved_seen;
  std::deque<std::string> queue = {file};

  bool first = true;
  while (!queue.empty()) {
    std::string current = queue.front();
    queue.pop_front();
    std::string text;
    try {
      text = ReadFile(project_root + "/" + current);
    } catch (const Error&) {
      if (first) throw;  // the starting file must be readable
      continue;
    }
    first = false;
    for (const IncludeSpec& spec : ScanIncludes(text)) {
      Resolution res = ResolveInclude(project_root, current, spec,
                                      search_dirs);
      switch (res.kind) {
        case ResolutionKind::kProject:
          if (res.path != file && visited.insert(res.path).second) {
            result.insert(res.path);
            queue.push_back(res.path);
          }
          break;
        case ResolutionKind::kExternal:
          break;
        case ResolutionKind::kUnresolved:
          if (unresolved_out != nullptr &&
              unresolved_seen.insert(res.path).second) {
            unresolved_out->push_back(res.path);
          }
          break;
      }
    }
  }
  return result;
}

}  // namespace depsentry
