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

#include "cc/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "cc/errors.hpp"

namespace cc {

void check_distribution_matches(const CausalGraph& graph, const JointDistribution& p) {
  if (p.vars().size() != graph.node_count())
    throw ShapeMismatch("distribution has " + std::to_string(p.vars().size()) +
                        " variables, graph has " + std::to_string(graph.node_count()) + " nodes");
  for (const auto& n : graph.nodes()) {
    auto i = p.find(n.id);
    if (!i) throw ShapeMismatch("distribution lacks a variable for node '" + n.id + "'");
    if (p.vars()[*i].size != n.outcomes)
      throw ShapeMismatch("alphabet size of '" + n.id + "' differs between graph and distribution");
  }
}

double pair_deviation(const JointDistribution& p, const NodeSet& u, const NodeSet& w) {
  std::vector<std::string> uv(u.begin(), u.end()), wv(w.begin(), w.end());
  std::vector<std::string> both = uv;
  both.insert(both.end(), wv.begin(), wv.end());
  const Tensor full = p.as_tensor();
  const Tensor one = Tensor::scalar(1.0);
  Tensor joint = contract(full, one, both, Execution::serial);
  Tensor pu = contract(full, one, uv, Execution::serial);
  Tensor pw = contract(full, one, wv, Execution::serial);
  Tensor prod = contract(pu, pw, both, Execution::serial);
  double dev = 0.0;
  for (std::size_t i = 0; i < joint.size(); ++i)
    dev = std::max(dev, std::abs(joint.data()[i] - prod.data()[i]));
  return dev;
}

std::vector<PairDeviation> pair_deviations(const CausalGraph& graph, const JointDistribution& p,
                                           std::size_t node_limit) {
  check_distribution_matches(graph, p);
  if (!p.normalized()) throw ShapeMismatch("correlation check requires a normalized distribution");
  auto pairs = maximal_disjoint_past_pairs(graph, node_limit);
  std::vector<PairDeviation> out(pairs.size());
  const auto count = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic) if (count > 1)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto& pr = pairs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = {pr.first, pr.second, pair_deviation(p, pr.first, pr.second)};
  }
  return out;
}

CorrelationVerdict is_correlation(const CausalGraph& graph, const JointDistribution& p, double tol,
                                  std::size_t node_limit) {
  CorrelationVerdict v;
  v.tol = tol;
  for (auto& d : pair_deviations(graph, p, node_limit))
    if (d.deviation > tol) v.violations.push_back(std::move(d));
  v.is_correlation = v.violations.empty();
  return v;
}

}  // namespace cc
