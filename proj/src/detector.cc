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

#include "depsentry/detector.h"

#include <algorithm>
#include <set>

#include "depsentry/error.h"
#include "depsentry/util.h"

namespace depsentry {

namespace {

constexpr const char kReportHeader[] = "#depsentry-report v1";
constexpr const char kAuxHeader[] = "#depsentry-report-aux v1";

Evidence EvidenceOf(const TargetNode& node, const std::string& commit) {
  if (node.last_updated == commit) {
    return node.provenance == Provenance::kInferred ? Evidence::kInferred
                                                    : Evidence::kTrace;
  }
  return Evidence::kHistorical;
}

// Total order so rendering is byte-deterministic even for findings that tie
// on the visible sort key.
bool FindingLess(const Finding& a, const Finding& b) {
  if (a.target != b.target) return a.target < b.target;
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.dependency != b.dependency) return a.dependency < b.dependency;
  if (a.evidence != b.evidence) return a.evidence < b.evidence;
  if (a.order_only != b.order_only) return a.order_only < b.order_only;
  return a.commit < b.commit;
}

Evidence EvidenceFromName(const std::string& name) {
  if (name == "trace") return Evidence::kTrace;
  if (name == "inferred") return Evidence::kInferred;
  if (name == "historical") return Evidence::kHistorical;
  throw Error(ErrorKind::kParseError, "unknown evidence: " + name);
}

}  // namespace

const char* FindingKindName(FindingKind kind) {
  return kind == FindingKind::kMissing ? "missing" : "redundant";
}

const char* EvidenceName(Evidence evidence) {
  switch (evidence) {
    case Evidence::kTrace:
      return "trace";
    case Evidence::kInferred:
      return "inferred";
    case Evidence::kHistorical:
      return "historical";
  }
  return "historical";
}

ErrorReport Detect(const DependencyGraph& actual, const DeclaredGraph& declared,
                   const std::string& commit, const DetectOptions& opts) {
  ErrorReport report;
  report.commit = commit;

  for (const auto& [name, node] : actual.nodes) {
    auto decl = declared.targets.find(name);
    Evidence evidence = EvidenceOf(node, commit);
    if (decl == declared.targets.end()) {
      report.warnings.push_back(
          "detector: target '" + name +
          "' is built but not declared; every dependency reported missing");
      for (const std::string& d : node.deps) {
        report.findings.push_back(
            {FindingKind::kMissing, name, d, evidence, commit, false});
      }
      continue;
    }
    ++report.stats.targets_compared;
    const DeclaredRule& rule = decl->second;
    std::set<std::string> normal(rule.prereqs.begin(), rule.prereqs.end());
    std::set<std::string> order_only(rule.order_only.begin(),
                                     rule.order_only.end());
    for (const std::string& d : node.deps) {
      if (!normal.count(d) && !order_only.count(d)) {
        report.findings.push_back(
            {FindingKind::kMissing, name, d, evidence, commit, false});
      }
    }
    for (const std::string& p : normal) {
      if (!node.deps.count(p)) {
        report.findings.push_back(
            {FindingKind::kRedundant, name, p, evidence, commit, false});
      }
    }
    for (const std::string& p : order_only) {
      if (!node.deps.count(p)) {
        report.findings.push_back(
            {FindingKind::kRedundant, name, p, evidence, commit, true});
      }
    }
  }

  for (const auto& [name, rule] : declared.targets) {
    if (!actual.HasNode(name)) {
      report.warnings.push_back("detector: declared target '" + name +
                                "' was never observed to build");
    }
  }

  std::sort(report.findings.begin(), report.findings.end(), FindingLess);

  if (opts.recipes != nullptr) {
    std::set<std::string> flagged;
    for (const Finding& f : report.findings) flagged.insert(f.target);
    for (const std::string& target : flagged) {
      auto it = opts.recipes->entries.find(target);
      if (it != opts.recipes->entries.end() &&
          RecipeCreatesBareSymlink(it->second.text)) {
        report.warnings.push_back(
            "detector: recipe for '" + target +
            "' creates symlinks without -f; links may silently go stale");
      }
    }
  }

  return report;
}

std::string RenderReport(const ErrorReport& report, ReportFormat format) {
  std::vector<Finding> findings = report.findings;
  std::sort(findings.begin(), findings.end(), FindingLess);

  if (format == ReportFormat::kMachine) {
    std::string out = std::string(kReportHeader) + "\n";
    for (const Finding& f : findings) {
      std::string evidence = EvidenceName(f.evidence);
      if (f.order_only) evidence += "+order-only";
      out += std::string(FindingKindName(f.kind)) + "\t" + f.target + "\t" +
             f.dependency + "\t" + evidence + "\t" + f.commit + "\n";
    }
    return out;
  }

  std::string out = "depsentry report for commit " + report.commit + "\n";
  out += "findings: " + std::to_string(findings.size()) + "\n";
  if (!findings.empty()) {
    out += "\n";
    std::string current;
    bool first = true;
    for (const Finding& f : findings) {
      if (first || f.target != current) {
        out += "target " + f.target + "\n";
        current = f.target;
        first = false;
      }
      out += "  ";
      out += FindingKindName(f.kind);
      if (f.order_only) out += " order-only";
      out += " dependency: " + f.dependency + " (evidence: " +
             EvidenceName(f.evidence) + ")\n";
    }
  }
  if (!report.warnings.empty()) {
    out += "\nwarnings:\n";
    for (const std::string& w : report.warnings) {
      out += "  " + w + "\n";
    }
  }
  out += "\nstats: targets_compared=" +
         std::to_string(report.stats.targets_compared) +
         " externals_dropped=" + std::to_string(report.stats.externals_dropped) +
         " unresolved_includes=" +
         std::to_string(report.stats.unresolved_includes) +
         " failed_rebuilds=" + std::to_string(report.stats.failed_rebuilds) +
         "\n";
  return out;
}

std::vector<Finding> ParseMachineReport(const std::string& text) {
  std::vector<std::string> lines = SplitLines(text);
  if (lines.empty() || lines[0] != kReportHeader) {
    throw Error(ErrorKind::kParseError, "bad report header");
  }
  std::vector<Finding> findings;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = Split(lines[i], '\t');
    if (fields.size() != 5) {
      throw Error(ErrorKind::kParseError, "bad report line: " + lines[i]);
    }
    Finding f;
    if (fields[0] == "missing") {
      f.kind = FindingKind::kMissing;
    } else if (fields[0] == "redundant") {
      f.kind = FindingKind::kRedundant;
    } else {
      throw Error(ErrorKind::kParseError, "bad finding kind: " + fields[0]);
    }
    f.target = fields[1];
    f.dependency = fields[2];
    std::string evidence = fields[3];
    const std::string suffix = "+order-only";
    if (EndsWith(evidence, suffix)) {
      f.order_only = true;
      evidence = evidence.substr(0, evidence.size() - suffix.size());
    }
    f.evidence = EvidenceFromName(evidence);
    f.commit = fields[4];
    findings.push_back(std::move(f));
  }
  return findings;
}

std::string SerializeReportAux(const ErrorReport& report) {
  std::string out = std::string(kAuxHeader) + "\n";
  out += "C\t" + report.commit + "\n";
  for (const std::string& w : report.warnings) {
    out += "W\t" + w + "\n";
  }
  out += "S\ttargets_compared\t" +
         std::to_string(report.stats.targets_compared) + "\n";
  out += "S\texternals_dropped\t" +
         std::to_string(report.stats.externals_dropped) + "\n";
  out += "S\tunresolved_includes\t" +
         std::to_string(report.stats.unresolved_includes) + "\n";
  out += "S\tfailed_rebuilds\t" + std::to_string(report.stats.failed_rebuilds) +
         "\n";
  return out;
}

void ParseReportAux(const std::string& text, ErrorReport& report) {
  std::vector<std::string> lines = SplitLines(text);
  if (lines.empty() || lines[0] != kAuxHeader) {
    throw Error(ErrorKind::kParseError, "bad report aux header");
  }
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = Split(lines[i], '\t');
    if (fields[0] == "C" && fields.size() == 2) {
      report.commit = fields[1];
    } else if (fields[0] == "W" && fields.size() == 2) {
      report.warnings.push_back(fields[1]);
    } else if (fields[0] == "S" && fields.size() == 3) {
      size_t value = static_cast<size_t>(std::stoull(fields[2]));
      if (fields[1] == "targets_compared") {
        report.stats.targets_compared = value;
      } else if (fields[1] == "externals_dropped") {
        report.stats.externals_dropped = value;
      } else if (fields[1] == "unresolved_includes") {
        report.stats.unresolved_includes = value;
      } else if (fields[1] == "failed_rebuilds") {
        report.stats.failed_rebuilds = value;
      }
    } else {
      throw Error(ErrorKind::kParseError, "bad report aux line: " + lines[i]);
    }
  }
}

}  // namespace depsentry
