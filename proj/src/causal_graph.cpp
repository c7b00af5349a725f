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

#include "cc/causal_graph.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>

#include "cc/errors.hpp"

namespace cc {

CausalGraph::CausalGraph(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  index();
}

void CausalGraph::index() {
  node_pos_.clear();
  edge_pos_.clear();
  for (std::size_t i = 0; i < nodes_.size(); ++i) node_pos_.emplace(nodes_[i].id, i);
  for (std::size_t i = 0; i < edges_.size(); ++i) edge_pos_.emplace(edges_[i].id, i);
}

bool CausalGraph::has_node(const NodeId& id) const { return node_pos_.count(id) != 0; }
bool CausalGraph::has_edge(const EdgeId& id) const { return edge_pos_.count(id) != 0; }

std::size_t CausalGraph::node_index(const NodeId& id) const {
  auto it = node_pos_.find(id);
  if (it == node_pos_.end()) throw UnknownNode("unknown node '" + id + "'");
  return it->second;
}

const Node& CausalGraph::node(const NodeId& id) const { return nodes_[node_index(id)]; }

const Edge& CausalGraph::edge(const EdgeId& id) const {
  auto it = edge_pos_.find(id);
  if (it == edge_pos_.end()) throw UnknownEdge("unknown edge '" + id + "'");
  return edges_[it->second];
}

std::vector<EdgeId> CausalGraph::in_edges(const NodeId& id) const {
  node_index(id);
  std::vector<EdgeId> out;
  for (const auto& e : edges_)
    if (e.dst == id) out.push_back(e.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> CausalGraph::out_edges(const NodeId& id) const {
  node_index(id);
  std::vector<EdgeId> out;
  for (const auto& e : edges_)
    if (e.src == id) out.push_back(e.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> CausalGraph::parents(const NodeId& id) const {
  node_index(id);
  std::set<NodeId> s;
  for (const auto& e : edges_)
    if (e.dst == id) s.insert(e.src);
  return {s.begin(), s.end()};
}

std::vector<NodeId> CausalGraph::children(const NodeId& id) const {
  node_index(id);
  std::set<NodeId> s;
  for (const auto& e : edges_)
    if (e.src == id) s.insert(e.dst);
  return {s.begin(), s.end()};
}

CausalGraph CausalGraph::with_edge(Edge e) const {
  if (has_edge(e.id)) throw Error("edge id '" + e.id + "' already exists");
  node_index(e.src);
  node_index(e.dst);
  auto edges = edges_;
  edges.push_back(std::move(e));
  return CausalGraph(nodes_, std::move(edges));
}

CausalGraph CausalGraph::without_edge(const EdgeId& id) const {
  edge(id);
  auto edges = edges_;
  edges.erase(std::remove_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.id == id; }),
              edges.end());
  return CausalGraph(nodes_, std::move(edges));
}

std::vector<std::string> validate(const CausalGraph& graph) {
  std::vector<std::string> violations;
  std::set<NodeId> seen_nodes;
  for (const auto& n : graph.nodes()) {
    if (!seen_nodes.insert(n.id).second) violations.push_back("duplicate node id '" + n.id + "'");
    if (n.outcomes < 1) violations.push_back("node '" + n.id + "' has an empty outcome alphabet");
  }
  std::set<EdgeId> seen_edges;
  std::map<NodeId, std::vector<std::pair<EdgeId, NodeId>>> adjacency;
  for (const auto& e : graph.edges()) {
    if (!seen_edges.insert(e.id).second) violations.push_back("duplicate edge id '" + e.id + "'");
    bool ok = true;
    if (!seen_nodes.count(e.src)) {
      violations.push_back("edge '" + e.id + "' has unknown source '" + e.src + "'");
      ok = false;
    }
    if (!seen_nodes.count(e.dst)) {
      violations.push_back("edge '" + e.id + "' has unknown target '" + e.dst + "'");
      ok = false;
    }
    if (ok) adjacency[e.src].emplace_back(e.id, e.dst);
  }
  for (auto& [_, adj] : adjacency) std::sort(adj.begin(), adj.end());

  // Colour DFS; every back edge closes a cycle reported along the DFS stack.
  std::map<NodeId, int> colour;
  std::vector<NodeId> stack;
  std::function<void(const NodeId&)> visit = [&](const NodeId& v) {
    colour[v] = 1;
    stack.push_back(v);
    for (const auto& [eid, w] : adjacency[v]) {
      if (colour[w] == 1) {
        auto start = std::find(stack.begin(), stack.end(), w);
        std::string msg = "cycle ";
        for (auto it = start; it != stack.end(); ++it) msg += *it + "\xE2\x86\x92";
        msg += w;
        violations.push_back(msg);
      } else if (colour[w] == 0) {
        visit(w);
      }
    }
    stack.pop_back();
    colour[v] = 2;
  };
  for (const auto& id : seen_nodes)
    if (colour[id] == 0) visit(id);
  return violations;
}

std::vector<NodeId> topological_order(const CausalGraph& graph) {
  std::map<NodeId, std::size_t> indegree;
  std::map<NodeId, std::vector<NodeId>> succ;
  for (const auto& n : graph.nodes()) indegree[n.id] = 0;
  for (const auto& e : graph.edges()) {
    if (!indegree.count(e.src) || !indegree.count(e.dst))
      throw UnknownNode("edge '" + e.id + "' has an unknown endpoint");
    ++indegree[e.dst];
    succ[e.src].push_back(e.dst);
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (const auto& [id, d] : indegree)
    if (d == 0) ready.push(id);
  std::vector<NodeId> order;
  while (!ready.empty()) {
    NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (const auto& w : succ[v])
      if (--indegree[w] == 0) ready.push(w);
  }
  if (order.size() != indegree.size()) throw CycleError("graph contains a directed cycle");
  return order;
}

bool is_topological_order(const CausalGraph& graph, const std::vector<NodeId>& order) {
  if (order.size() != graph.node_count()) return false;
  std::map<NodeId, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!graph.has_node(order[i]) || !pos.emplace(order[i], i).second) return false;
  }
  for (const auto& e : graph.edges())
    if (pos.at(e.src) >= pos.at(e.dst)) return false;
  return true;
}

NodeSet causal_past(const CausalGraph& graph, const NodeSet& seed) {
  std::map<NodeId, std::vector<NodeId>> pred;
  for (const auto& e : graph.edges()) pred[e.dst].push_back(e.src);
  NodeSet result;
  std::vector<NodeId> todo;
  for (const auto& v : seed) {
    graph.node_index(v);
    if (result.insert(v).second) todo.push_back(v);
  }
  while (!todo.empty()) {
    NodeId v = todo.back();
    todo.pop_back();
    for (const auto& u : pred[v])
      if (result.insert(u).second) todo.push_back(u);
  }
  return result;
}

bool reaches(const CausalGraph& graph, const NodeId& from, const NodeId& to) {
  graph.node_index(from);
  graph.node_index(to);
  std::map<NodeId, std::vector<NodeId>> succ;
  for (const auto& e : graph.edges()) succ[e.src].push_back(e.dst);
  std::set<NodeId> seen;
  std::vector<NodeId> todo = succ[from];
  while (!todo.empty()) {
    NodeId v = todo.back();
    todo.pop_back();
    if (v == to) return true;
    if (!seen.insert(v).second) continue;
    for (const auto& w : succ[v]) todo.push_back(w);
  }
  return false;
}

bool is_ancestral(const CausalGraph& graph, const NodeSet& set) {
  return causal_past(graph, set) == set;
}

namespace {

using Mask = std::uint32_t;
constexpr std::size_t kMaskBits = 30;

// past_mask[i]: bitmask of the causal past of node i (including i).
std::vector<Mask> past_masks(const CausalGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<Mask> past(n);
  for (std::size_t i = 0; i < n; ++i) {
    NodeSet p = causal_past(graph, {graph.nodes()[i].id});
    for (const auto& v : p) past[i] |= Mask{1} << graph.node_index(v);
  }
  return past;
}

NodeSet mask_to_set(const CausalGraph& graph, Mask m) {
  NodeSet s;
  for (std::size_t i = 0; i < graph.node_count(); ++i)
    if (m & (Mask{1} << i)) s.insert(graph.nodes()[i].id);
  return s;
}

void check_node_limit(const CausalGraph& graph, std::size_t node_limit) {
  std::size_t limit = std::min(node_limit, kMaskBits);
  if (graph.node_count() > limit)
    throw SizeLimitExceeded("ancestral-set enumeration over " +
                            std::to_string(graph.node_count()) + " nodes exceeds limit " +
                            std::to_string(limit));
}

}  // namespace

std::vector<NodeSet> ancestral_sets(const CausalGraph& graph, std::size_t node_limit) {
  check_node_limit(graph, node_limit);
  const auto past = past_masks(graph);
  const std::size_t n = graph.node_count();
  std::vector<NodeSet> result;
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i)
      if ((m & (Mask{1} << i)) && (past[i] & ~m)) closed = false;
    if (closed) result.push_back(mask_to_set(graph, m));
  }
  return result;
}

std::vector<DisjointPastPair> maximal_disjoint_past_pairs(const CausalGraph& graph,
                                                          std::size_t node_limit) {
  check_node_limit(graph, node_limit);
  const auto past = past_masks(graph);
  const std::size_t n = graph.node_count();
  const Mask all = n == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << n) - 1);

  // For an ancestral U, the largest W with past(W) disjoint from U is the set
  // of nodes whose past avoids U. A pair is maximal iff each side is exactly
  // that complement of the other.
  auto complement = [&](Mask u) {
    Mask c = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((past[i] & u) == 0) c |= Mask{1} << i;
    return c;
  };

  std::set<std::pair<std::vector<NodeId>, std::vector<NodeId>>> found;
  for (Mask u = 1; u <= all && u != 0; ++u) {
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i)
      if ((u & (Mask{1} << i)) && (past[i] & ~u)) closed = false;
    if (!closed) continue;
    Mask w = complement(u);
    if (w == 0 || complement(w) != u) continue;
    NodeSet us = mask_to_set(graph, u), ws = mask_to_set(graph, w);
    std::vector<NodeId> a(us.begin(), us.end()), b(ws.begin(), ws.end());
    if (b < a) std::swap(a, b);
    found.emplace(std::move(a), std::move(b));
  }
  std::vector<DisjointPastPair> pairs;
  for (const auto& [a, b] : found)
    pairs.push_back({NodeSet(a.begin(), a.end()), NodeSet(b.begin(), b.end())});
  return pairs;
}

namespace {

std::map<NodeId, NodeSet> reachability(const CausalGraph& graph) {
  std::map<NodeId, NodeSet> reach;
  for (const auto& n : graph.nodes()) {
    NodeSet past = causal_past(graph, {n.id});
    past.erase(n.id);
    reach[n.id] = std::move(past);  // nodes that reach n
  }
  return reach;
}

}  // namespace

CausalGraph transitive_closure(const CausalGraph& graph) {
  topological_order(graph);
  std::set<std::pair<NodeId, NodeId>> direct;
  for (const auto& e : graph.edges()) direct.emplace(e.src, e.dst);
  std::vector<Edge> edges = graph.edges();
  std::vector<Edge> added;
  for (const auto& [w, sources] : reachability(graph))
    for (const auto& u : sources)
      if (!direct.count({u, w})) added.push_back({u + "->" + w + "#tc", u, w});
  std::sort(added.begin(), added.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  edges.insert(edges.end(), added.begin(), added.end());
  return CausalGraph(graph.nodes(), std::move(edges));
}

bool poset_equal(const CausalGraph& a, const CausalGraph& b) {
  std::set<NodeId> na, nb;
  for (const auto& n : a.nodes()) na.insert(n.id);
  for (const auto& n : b.nodes()) nb.insert(n.id);
  if (na != nb) throw NodeMismatch("poset_equal requires identical node sets");
  return reachability(a) == reachability(b);
}

}  // namespace cc
