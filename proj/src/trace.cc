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

#include "depsentry/trace.h"

#include <charconv>

#include "depsentry/error.h"
#include "depsentry/util.h"

namespace depsentry {

namespace {

constexpr const char kTraceHeaderPrefix[] = "#depsentry-trace v1 root=";

bool IsKnownOp(char c) {
  switch (c) {
    case 'R':
    case 'W':
    case 'C':
    case 'D':
    case 'N':
    case 'X':
    case 'S':
    case 'E':
      return true;
    default:
      return false;
  }
}

template <typename T>
T ParseNumber(const std::string& field, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::kParseError,
                std::string("bad ") + what + " in trace: " + field);
  }
  return value;
}

}  // namespace

std::string EscapeTraceField(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::string UnescapeTraceField(const std::string& field) {
  std::string out;
  out.reserve(field.size());
  for (size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\' || i + 1 >= field.size()) {
      out.push_back(field[i]);
      continue;
    }
    ++i;
    switch (field[i]) {
      case '\\':
        out.push_back('\\');
        break;
      case 't':
        out.push_back('\t');
        break;
      case 'n':
        out.push_back('\n');
        break;
      default:
        // Unknown escape: keep both characters verbatim.
        out.push_back('\\');
        out.push_back(field[i]);
    }
  }
  return out;
}

std::string SerializeTrace(const BuildTrace& trace) {
  std::string out = std::string(kTraceHeaderPrefix) + trace.root + "\n";
  for (const TraceEvent& ev : trace.events) {
    out += std::to_string(ev.seq);
    out += '\t';
    out += std::to_string(ev.pid);
    out += '\t';
    out += std::to_string(ev.ppid);
    out += '\t';
    out.push_back(static_cast<char>(ev.op));
    out += '\t';
    out += EscapeTraceField(ev.path);
    if (ev.op == TraceOp::kRename) {
      out += '\t';
      out += EscapeTraceField(ev.path2);
    }
    out += '\n';
  }
  return out;
}

BuildTrace ParseTrace(const std::string& text) {
  std::vector<std::string> lines = SplitLines(text);
  if (lines.empty() || !StartsWith(lines[0], kTraceHeaderPrefix)) {
    throw Error(ErrorKind::kParseError, "bad trace header");
  }
  BuildTrace trace;
  trace.root = lines[0].substr(sizeof(kTraceHeaderPrefix) - 1);
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    std::vector<std::string> fields = Split(line, '\t');
    if (fields.size() < 5) {
      throw Error(ErrorKind::kParseError, "short trace record: " + line);
    }
    TraceEvent ev;
    ev.seq = ParseNumber<uint64_t>(fields[0], "seq");
    ev.pid = ParseNumber<int>(fields[1], "pid");
    ev.ppid = ParseNumber<int>(fields[2], "ppid");
    if (fields[3].size() != 1 || !IsKnownOp(fields[3][0])) {
      throw Error(ErrorKind::kParseError, "bad trace op: " + line);
    }
    ev.op = static_cast<TraceOp>(fields[3][0]);
    ev.path = UnescapeTraceField(fields[4]);
    if (ev.op == TraceOp::kRename) {
      if (fields.size() != 6) {
        throw Error(ErrorKind::kParseError,
                    "rename record needs two paths: " + line);
      }
      ev.path2 = UnescapeTraceField(fields[5]);
    } else if (fields.size() != 5) {
      throw Error(ErrorKind::kParseError, "extra fields in record: " + line);
    }
    trace.events.push_back(std::move(ev));
  }
  return trace;
}

BuildTrace ReadTraceFile(const std::string& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error&) {
    throw Error(ErrorKind::kStateMissing, "trace file not found: " + path);
  }
  return ParseTrace(text);
}

void WriteTraceFile(const std::string& path, const BuildTrace& trace) {
  WriteFileAtomic(path, SerializeTrace(trace));
}

}  // namespace depsentry
