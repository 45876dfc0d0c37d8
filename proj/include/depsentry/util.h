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

#ifndef DEPSENTRY_UTIL_H_
#define DEPSENTRY_UTIL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace depsentry {

// SHA-256 of `data`, rendered as 64 lowercase hex characters.
std::string Sha256Hex(std::string_view data);

// Whole-file read. Throws Error(kIoError) when the file cannot be read.
std::string ReadFile(const std::string& path);

// Plain write, creating parent directories as needed.
void WriteFile(const std::string& path, std::string_view contents);

// Crash-safe write: writes to a sibling temp file, fsyncs, then renames over
// the destination so readers only ever observe complete content.
void WriteFileAtomic(const std::string& path, std::string_view contents);

// Splits on a single character; keeps empty fields.
std::vector<std::string> Split(std::string_view text, char sep);

// Splits into lines, accepting both "\n" and "\r\n"; drops the terminators.
std::vector<std::string> SplitLines(std::string_view text);

std::string TrimWhitespace(std::string_view text);

bool StartsWith(std::string_view text, std::string_view prefix);
bool EndsWith(std::string_view text, std::string_view suffix);

std::string JoinStrings(const std::vector<std::string>& parts,
                        std::string_view sep);

// File mtime in nanoseconds since the epoch. Throws Error(kIoError) if the
// file cannot be stat'ed.
int64_t FileMtimeNs(const std::string& path);

// Sets a file's mtime (atime is left at "now"). Throws Error(kIoError).
void SetFileMtimeNs(const std::string& path, int64_t mtime_ns);

bool FileExists(const std::string& path);

}  // namespace depsentry

#endif  // DEPSENTRY_UTIL_H_
