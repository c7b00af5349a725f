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
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cc/causal_graph.hpp"
#include "cc/dist.hpp"
#include "cc/tensor.hpp"
#include "cc/violation.hpp"

namespace cc::classical {

/// Stochastic gate P(o[v] lambda_out | lambda_in) at one node.
///
/// Tensor layout: lambda_in tuple major, then o[v], then lambda_out tuple,
/// each tuple row-major over the declared edge order (first edge slowest).
struct Gate {
  std::vector<EdgeId> in_edges;
  std::vector<EdgeId> out_edges;
  std::vector<double> tensor;

  /// True iff every entry is exactly 0 or 1.
  bool deterministic() const;
};

/// Finite hidden-variable model: an alphabet per edge, a gate per node.
struct Model {
  CausalGraph graph;
  std::map<EdgeId, std::size_t> edge_alphabet;
  std::map<NodeId, Gate> gates;
};

inline constexpr double kGateNormTol = 1e-12;

/// Sizes of a gate's three index blocks, computed from the model.
struct GateShape {
  std::size_t in = 1;
  std::size_t outcomes = 1;
  std::size_t out = 1;

  std::size_t volume() const { return in * outcomes * out; }
  std::size_t index(std::size_t lin, std::size_t o, std::size_t lout) const {
    return (lin * outcomes + o) * out + lout;
  }
};

GateShape gate_shape(const Model& model, const NodeId& node);

std::vector<ModelViolation> validate_model(const Model& model, double tol = kGateNormTol);

/// Throws InvalidModel listing the violations, if any.
void require_valid(const Model& model);

/// P(o[V]) with variables in the graph's node order, by eliminating hidden
/// variables along `order` (default: topological_order). Each edge is summed
/// out as soon as its target has been absorbed.
JointDistribution evaluate(const Model& model, const std::optional<std::vector<NodeId>>& order = {},
                           Execution exec = Execution::parallel);

/// Reference evaluator: full enumeration over every o[V] and lambda_E.
JointDistribution evaluate_naive(const Model& model);

/// P(o[U]) for an ancestral U from the nodes of U alone; edges leaving U are
/// summed at their source. Throws NotAncestral.
JointDistribution evaluate_marginal_ancestral(const Model& model, const NodeSet& u);

/// Equivalent model in which every node with incoming edges has a 0/1 gate.
///
/// Nodes are processed in reverse topological order. For node w the
/// designated parent u is its lexicographically smallest parent (and the
/// smallest edge u->w if there are several). The alphabet of u->w grows to
/// F x X_{u->w}, where F is the set of functions from lambda_in(w) tuples to
/// (o[w], lambda_out(w)) pairs; u draws the function from the product of w's
/// gate rows and w just applies it.
///
/// A function f in F is encoded as the mixed-radix number sum_j f(j) R^(N-1-j)
/// with R = |O_w| * |X_out(w)| and N the number of lambda_in(w) tuples, and
/// the enlarged edge value as f * |X_{u->w}| + lambda_{u->w}.
Model push_back_determinism(const Model& model);

/// Adds edge u->w with a one-point alphabet. Gates are unchanged apart from
/// listing the new edge last. Throws WouldCreateCycle.
Model lift_trivial_edge(const Model& model, const NodeId& u, const NodeId& w,
                        const std::optional<EdgeId>& id = std::nullopt);

/// Removes edge `direct` = u->w, relaying its value through `via`: u->v and
/// v->w get alphabets X x X_direct (value x * |X_direct| + relayed), v copies
/// the relayed component, and w reads it from v->w. Throws MissingRelayPath.
Model reroute_transitive_edge(const Model& model, const EdgeId& direct, const NodeId& via);

/// Gates with rows of independent uniform(0,1) entries, normalized;
/// deterministic given `seed`.
Model random_model(const CausalGraph& graph, const std::map<EdgeId, std::size_t>& edge_sizes,
                   std::uint64_t seed);
Model random_model(const CausalGraph& graph, std::size_t edge_size, std::uint64_t seed);

}  // namespace cc::classical
