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

#include <vector>

#include "cc/causal_graph.hpp"
#include "cc/dist.hpp"

namespace cc {

struct PairDeviation {
  NodeSet first;
  NodeSet second;
  /// max over outcome tuples of |P(o[U] o[W]) - P(o[U]) P(o[W])|
  double deviation = 0.0;
};

struct CorrelationVerdict {
  bool is_correlation = true;
  std::vector<PairDeviation> violations;  // sorted by (first, second)
  double tol = 1e-9;
};

/// Factorization defect of `p` across the node sets `u` and `w`.
double pair_deviation(const JointDistribution& p, const NodeSet& u, const NodeSet& w);

/// Deviation for every maximal disjoint-past pair of `graph`, in pair order.
std::vector<PairDeviation> pair_deviations(const CausalGraph& graph, const JointDistribution& p,
                                           std::size_t node_limit = 14);

/// Decides whether `p` factorizes across every pair of node sets with disjoint
/// causal pasts. Only maximal pairs are checked, which is equivalent.
///
/// `p` must be normalized and range over exactly the graph's nodes (any
/// order) with matching alphabet sizes; otherwise ShapeMismatch is thrown.
CorrelationVerdict is_correlation(const CausalGraph& graph, const JointDistribution& p,
                                  double tol = 1e-9, std::size_t node_limit = 14);

/// Throws ShapeMismatch unless `p` ranges over exactly the nodes of `graph`.
void check_distribution_matches(const CausalGraph& graph, const JointDistribution& p);

}  // namespace cc
