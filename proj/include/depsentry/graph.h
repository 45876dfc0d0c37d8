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

#ifndef DEPSENTRY_GRAPH_H_
#define DEPSENTRY_GRAPH_H_

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace depsentry {

// Where a node's dependency set came from. Kept per node so detection can
// report the strength of its evidence.
enum class Provenance {
  kCleanTrace,        // full traced build
  kIncrementalTrace,  // traced incremental or selective rebuild
  kInferred,          // derived from diff analysis without tracing
};

const char* ProvenanceName(Provenance p);
Provenance ProvenanceFromName(const std::string& name);

// One build target (root-relative path) and the files its recipe actually
// consumed the last time we observed or inferred it.
struct TargetNode {
  std::string name;
  std::set<std::string> deps;
  Provenance provenance = Provenance::kCleanTrace;
  std::string last_updated;  // commit id of the last observation

  bool operator==(const TargetNode& other) const {
    return name == other.name && deps == other.deps &&
           provenance == other.provenance &&
           last_updated == other.last_updated;
  }
};

struct DependencyGraph {
  std::map<std::string, TargetNode> nodes;

  bool HasNode(const std::string& name) const {
    return nodes.find(name) != nodes.end();
  }

  TargetNode& EnsureNode(const std::string& name) {
    auto it = nodes.find(name);
    if (it == nodes.end()) {
      it = nodes.emplace(name, TargetNode{name, {}, Provenance::kInferred, ""})
               .first;
    }
    return it->second;
  }

  // Removes a node and every edge that references its name as a dependency.
  void RemoveNodeEverywhere(const std::string& name);

  // Removes the file as a dependency of every node (node set untouched).
  void RemoveDependencyEverywhere(const std::string& dep);

  // Rewrites every edge (*, old_dep) to (*, new_dep).
  void RenameDependencyEverywhere(const std::string& old_dep,
                                  const std::string& new_dep);

  bool operator==(const DependencyGraph& other) const {
    return nodes == other.nodes;
  }
};

struct NodeMeta {
  Provenance provenance;
  std::string last_updated;

  bool operator==(const NodeMeta& other) const {
    return provenance == other.provenance &&
           last_updated == other.last_updated;
  }
};

// Exact difference between two graphs; ApplyDelta(old, DiffGraphs(old, new))
// reproduces `new` byte for byte.
struct GraphDelta {
  std::vector<TargetNode> added_targets;
  std::vector<std::string> removed_targets;
  std::vector<std::pair<std::string, std::string>> added_edges;
  std::vector<std::pair<std::string, std::string>> removed_edges;
  std::map<std::string, NodeMeta> meta_updates;

  bool Empty() const {
    return added_targets.empty() && removed_targets.empty() &&
           added_edges.empty() && removed_edges.empty() &&
           meta_updates.empty();
  }
};

// Mutates `graph` in place. Throws Error(kStateCorrupt) when the delta
// references targets that do not exist (or adds duplicates), since that
// means delta and graph were produced from different states.
void ApplyDelta(DependencyGraph& graph, const GraphDelta& delta);

// Deterministic (sorted) delta taking `before` to `after`.
GraphDelta DiffGraphs(const DependencyGraph& before,
                      const DependencyGraph& after);

// Text form used by the on-disk store (actual-graph.v1). Deterministic:
// targets and dependencies are emitted in sorted order.
std::string SerializeGraph(const DependencyGraph& graph);

// Throws Error(kStateCorrupt) on bad header or malformed lines.
DependencyGraph ParseGraph(const std::string& text);

}  // namespace depsentry

#endif  // DEPSENTRY_GRAPH_H_
