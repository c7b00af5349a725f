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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cc/causal_graph.hpp"
#include "cc/classical.hpp"
#include "cc/dist.hpp"
#include "cc/tensor.hpp"
#include "cc/violation.hpp"

namespace cc::quantum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kCompletenessTol = 1e-10;
inline constexpr double kImaginaryTol = 1e-12;
inline constexpr double kNegativeTol = 1e-9;

/// Quantum instrument at one node.
///
/// kraus[o] holds the Kraus operators of the outcome-o component, each of
/// shape out_dim x in_dim. Input and output spaces are tensor products over
/// the declared edge order, first edge most significant.
struct Instrument {
  std::vector<EdgeId> in_edges;
  std::vector<EdgeId> out_edges;
  std::vector<std::vector<Matrix>> kraus;
};

struct Model {
  CausalGraph graph;
  std::map<EdgeId, std::size_t> edge_dim;
  std::map<NodeId, Instrument> instruments;
};

/// Shape and completeness checks. The completeness deviation is the largest
/// entry of |sum K^dagger K - 1|.
std::vector<ModelViolation> validate_model(const Model& model, double tol = kCompletenessTol);

void require_valid(const Model& model);

/// P(o[V]) with variables in the graph's node order.
///
/// Each outcome tuple is contracted along `order` (default
/// topological_order). The state is a density matrix on the open wires in
/// EdgeId order; before a node acts, its in-edges are moved to the end in
/// declared order, and afterwards the wires are sorted again.
///
/// The parallel path shares prefix states across tuples; the serial path
/// recomputes every tuple from scratch. Both apply the same operations to
/// each tuple, so their outputs agree bit for bit.
JointDistribution evaluate(const Model& model, const std::optional<std::vector<NodeId>>& order = {},
                           Execution exec = Execution::parallel);

/// Classical model as a quantum model diagonal in the canonical basis: one
/// Kraus operator sqrt(G) |lambda_out><lambda_in| per nonzero gate entry.
Model decohere_embed(const classical::Model& cmodel);

/// Unitary on prod(dims) that moves subsystem perm[k] to position k.
Matrix subsystem_permutation(const std::vector<std::size_t>& dims,
                             const std::vector<std::size_t>& perm);

/// Same model with `node` declaring its edges in the given orders; the Kraus
/// operators are conjugated by the matching subsystem permutations.
Model reorder_instrument(const Model& model, const NodeId& node, const std::vector<EdgeId>& in_edges,
                         const std::vector<EdgeId>& out_edges);

/// Random valid model: for each node, complex Gaussian matrices A_j, one per
/// (outcome, Kraus slot), made complete as A_j S^{-1/2} with S = sum A_j^dagger A_j.
Model random_model(const CausalGraph& graph, const std::map<EdgeId, std::size_t>& edge_dims,
                   std::size_t kraus_per_outcome, std::uint64_t seed);
Model random_model(const CausalGraph& graph, std::size_t edge_dim, std::size_t kraus_per_outcome,
                   std::uint64_t seed);

/// Product of the dimensions of `edges`.
std::size_t space_dim(const Model& model, const std::vector<EdgeId>& edges);

}  // namespace cc::quantum
