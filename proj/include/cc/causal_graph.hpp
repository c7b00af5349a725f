// Copyright 2026 The ccorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cc {

using NodeId = std::string;
using EdgeId = std::string;
using NodeSet = std::set<NodeId>;

struct Node {
  NodeId id;
  std::size_t outcomes = 1;

  bool operator==(const Node&) const = default;
};

struct Edge {
  EdgeId id;
  NodeId src;
  NodeId dst;

  bool operator==(const Edge&) const = default;
};

/// A finite directed graph of events, each carrying an outcome alphabet.
///
/// Construction does not check acyclicity; call validate() for that. Lookups
/// by id throw UnknownNode / UnknownEdge. Parallel edges between the same
/// pair of nodes are allowed and are told apart by their EdgeId.
class CausalGraph {
 public:
  CausalGraph() = default;
  CausalGraph(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }

  bool has_node(const NodeId& id) const;
  bool has_edge(const EdgeId& id) const;
  std::size_t node_index(const NodeId& id) const;
  const Node& node(const NodeId& id) const;
  const Edge& edge(const EdgeId& id) const;
  std::size_t outcomes(const NodeId& id) const { return node(id).outcomes; }

  /// Incoming / outgoing edge ids, sorted lexicographically.
  std::vector<EdgeId> in_edges(const NodeId& id) const;
  std::vector<EdgeId> out_edges(const NodeId& id) const;
  /// Distinct parent / child node ids, sorted lexicographically.
  std::vector<NodeId> parents(const NodeId& id) const;
  std::vector<NodeId> children(const NodeId& id) const;

  CausalGraph with_edge(Edge e) const;
  CausalGraph without_edge(const EdgeId& id) const;

  bool operator==(const CausalGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  void index();

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::map<NodeId, std::size_t> node_pos_;
  std::map<EdgeId, std::size_t> edge_pos_;
};

/// Returns every invariant violation of `graph`; an empty list means valid.
std::vector<std::string> validate(const CausalGraph& graph);

/// Kahn's algorithm, always taking the lexicographically smallest ready node.
/// Throws CycleError on cyclic input.
std::vector<NodeId> topological_order(const CausalGraph& graph);

/// Checks that `order` is a permutation of the nodes consistent with every edge.
bool is_topological_order(const CausalGraph& graph, const std::vector<NodeId>& order);

/// Union over v in `seed` of v together with every node having a directed path to v.
NodeSet causal_past(const CausalGraph& graph, const NodeSet& seed);

/// True iff there is a directed path of length >= 1 from `from` to `to`.
bool reaches(const CausalGraph& graph, const NodeId& from, const NodeId& to);

bool is_ancestral(const CausalGraph& graph, const NodeSet& set);

/// All ancestral node sets (including the empty set), in ascending bitmask order
/// over the declared node order. Guarded by `node_limit`.
std::vector<NodeSet> ancestral_sets(const CausalGraph& graph, std::size_t node_limit = 14);

struct DisjointPastPair {
  NodeSet first;
  NodeSet second;

  bool operator==(const DisjointPastPair&) const = default;
};

/// Every unordered pair (U, W) of nonempty node sets with disjoint causal pasts
/// that cannot be enlarged on either side. Each pair is reported with the
/// lexicographically smaller set first; the list is sorted.
std::vector<DisjointPastPair> maximal_disjoint_past_pairs(const CausalGraph& graph,
                                                          std::size_t node_limit = 14);

/// Adds u->w for every u that reaches w without a direct edge, named "u->w#tc".
CausalGraph transitive_closure(const CausalGraph& graph);

/// True iff both graphs induce the same reachability relation. Throws
/// NodeMismatch when node sets differ.
bool poset_equal(const CausalGraph& a, const CausalGraph& b);

}  // namespace cc
