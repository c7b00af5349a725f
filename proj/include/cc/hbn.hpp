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
#include <vector>

#include "cc/causal_graph.hpp"
#include "cc/classical.hpp"
#include "cc/dist.hpp"
#include "cc/tensor.hpp"
#include "cc/violation.hpp"

namespace cc::hbn {

inline constexpr double kRowTol = 1e-12;

/// P(mu_v | mu_pa(v)). Rows run over parent tuples (parents in NodeId
/// order, first parent slowest; one row for a root), columns over Y_v.
struct Transition {
  std::vector<NodeId> parents;
  std::vector<double> table;
};

/// Bayesian network over node-dwelling hidden variables with a noisy
/// readout P(o[v] | mu_v) per node (rows mu_v, columns o[v]).
struct Net {
  CausalGraph graph;
  std::map<NodeId, std::size_t> node_alphabet;
  std::map<NodeId, Transition> transitions;
  std::map<NodeId, std::vector<double>> readouts;
};

std::vector<ModelViolation> validate(const Net& net, double tol = kRowTol);

void require_valid(const Net& net);

/// Exact sum over mu_V of prod_v P(o[v] | mu_v) P(mu_v | mu_pa(v)),
/// variables in the graph's node order.
JointDistribution evaluate(const Net& net, Execution exec = Execution::parallel);

/// Y_v = O_v x prod of v's out-edge alphabets (outcome slowest, then
/// out-edges in EdgeId order). The transition is v's gate read off the
/// parents' components; the readout projects onto O_v.
Net from_classical(const classical::Model& model);

/// X_e = Y_src(e). The gate at v draws mu_v from the transition, o[v] from
/// the readout at mu_v, and copies mu_v onto every out-edge. A parent's
/// value is read from its lowest EdgeId edge into v.
classical::Model to_classical(const Net& net);

/// Rows of independent uniform(0,1) entries, normalized.
Net random_net(const CausalGraph& graph, const std::map<NodeId, std::size_t>& node_sizes,
               std::uint64_t seed);
Net random_net(const CausalGraph& graph, std::size_t node_size, std::uint64_t seed);

}  // namespace cc::hbn
