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

#include "depsentry/graph.h"

#include <algorithm>

#include "depsentry/error.h"
#include "depsentry/util.h"

namespace depsentry {

namespace {
constexpr const char kGraphHeader[] = "#depsentry-actual-graph v1";
}  // namespace

const char* ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kCleanTrace:
      return "clean";
    case Provenance::kIncrementalTrace:
      return "incremental";
    case Provenance::kInferred:
      return "inferred";
  }
  return "unknown";
}

Provenance ProvenanceFromName(const std::string& name) {
  if (name == "clean") return Provenance::kCleanTrace;
  if (name == "incremental") return Provenance::kIncrementalTrace;
  if (name == "inferred") return Provenance::kInferred;
  throw Error(ErrorKind::kStateCorrupt, "unknown provenance: " + name);
}

void DependencyGraph::RemoveNodeEverywhere(const std::string& name) {
  nodes.erase(name);
  RemoveDependencyEverywhere(name);
}

void DependencyGraph::RemoveDependencyEverywhere(const std::string& dep) {
  for (auto& [_, node] : nodes) {
    node.deps.erase(dep);
  }
}

void DependencyGraph::RenameDependencyEverywhere(const std::string& old_dep,
                                                 const std::string& new_dep) {
  for (auto& [_, node] : nodes) {
    if (node.deps.erase(old_dep) > 0) {
      node.deps.insert(new_dep);
    }
  }
}

void ApplyDelta(DependencyGraph& graph, const GraphDelta& delta) {
  for (const std::string& name : delta.removed_targets) {
    if (graph.nodes.erase(name) == 0) {
      throw Error(ErrorKind::kStateCorrupt,
                  "delta removes unknown target: " + name);
    }
  }
  for (const auto& [target, dep] : delta.removed_edges) {
    auto it = graph.nodes.find(target);
    if (it == graph.nodes.end() || it->second.deps.erase(dep) == 0) {
      throw Error(ErrorKind::kStateCorrupt,
                  "delta removes unknown edge: " + target + " -> " + dep);
    }
  }
  for (const TargetNode& node : delta.added_targets) {
    if (!graph.nodes.emplace(node.name, node).second) {
      throw Error(ErrorKind::kStateCorrupt,
                  "delta adds duplicate target: " + node.name);
    }
  }
  for (const auto& [target, dep] : delta.added_edges) {
    auto it = graph.nodes.find(target);
    if (it == graph.nodes.end()) {
      throw Error(ErrorKind::kStateCorrupt,
                  "delta adds edge to unknown target: " + target);
    }
    if (!it->second.deps.insert(dep).second) {
      throw Error(ErrorKind::kStateCorrupt,
                  "delta adds duplicate edge: " + target + " -> " + dep);
    }
  }
  for (const auto& [target, meta] : delta.meta_updates) {
    auto it = graph.nodes.find(target);
    if (it == graph.nodes.end()) {
      throw Error(ErrorKind::kStateCorrupt,
                  "delta updates meta of unknown target: " + target);
    }
    it->second.provenance = meta.provenance;
    it->second.last_updated = meta.last_updated;
  }
}

GraphDelta DiffGraphs(const DependencyGraph& before,
                      const DependencyGraph& after) {
  GraphDelta delta;
  for (const auto& [name, node] : before.nodes) {
    if (!after.HasNode(name)) {
      delta.removed_targets.push_back(name);
    }
  }
  for (const auto& [name, new_node] : after.nodes) {
    auto it = before.nodes.find(name);
    if (it == before.nodes.end()) {
      delta.added_targets.push_back(new_node);
      continue;
    }
    const TargetNode& old_node = it->second;
    for (const std::string& dep : old_node.deps) {
      if (new_node.deps.find(dep) == new_node.deps.end()) {
        delta.removed_edges.emplace_back(name, dep);
      }
    }
    for (const std::string& dep : new_node.deps) {
      if (old_node.deps.find(dep) == old_node.deps.end()) {
        delta.added_edges.emplace_back(name, dep);
      }
    }
    if (old_node.provenance != new_node.provenance ||
        old_node.last_updated != new_node.last_updated) {
      delta.meta_updates.emplace(
          name, NodeMeta{new_node.provenance, new_node.last_updated});
    }
  }
  // std::map iteration already yields sorted targets; edge lists inherit
  // that order and sorted dep order from std::set.
  return delta;
}

std::string SerializeGraph(const DependencyGraph& graph) {
  std::string out = kGraphHeader;
  out += '\n';
  for (const auto& [name, node] : graph.nodes) {
    out += "T\t" + name + "\t" + ProvenanceName(node.provenance) + "\t" +
           node.last_updated + "\n";
    for (const std::string& dep : node.deps) {
      out += "D\t" + dep + "\n";
    }
  }
  return out;
}

DependencyGraph ParseGraph(const std::string& text) {
  std::vector<std::string> lines = SplitLines(text);
  if (lines.empty() || lines[0] != kGraphHeader) {
    throw Error(ErrorKind::kStateCorrupt, "bad actual-graph header");
  }
  DependencyGraph graph;
  TargetNode* current = nullptr;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    std::vector<std::string> fields = Split(line, '\t');
    if (fields[0] == "T") {
      if (fields.size() != 4) {
        throw Error(ErrorKind::kStateCorrupt,
                    "malformed target line: " + line);
      }
      TargetNode node;
      node.name = fields[1];
      node.provenance = ProvenanceFromName(fields[2]);
      node.last_updated = fields[3];
      auto [it, inserted] = graph.nodes.emplace(node.name, std::move(node));
      if (!inserted) {
        throw Error(ErrorKind::kStateCorrupt,
                    "duplicate target: " + fields[1]);
      }
      current = &it->second;
    } else if (fields[0] == "D") {
      if (fields.size() != 2 || current == nullptr) {
        throw Error(ErrorKind::kStateCorrupt,
                    "malformed dependency line: " + line);
      }
      current->deps.insert(fields[1]);
    } else {
      throw Error(ErrorKind::kStateCorrupt, "unknown record type: " + line);
    }
  }
  return graph;
}

}  // namespace depsentry
