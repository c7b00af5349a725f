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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cc/causal_graph.hpp"
#include "cc/dist.hpp"

namespace cc::testing {

/// Strictly positive random table over the graph's nodes (node order).
inline JointDistribution random_table(const CausalGraph& g, std::mt19937_64& rng) {
  std::vector<Variable> vars;
  std::size_t n = 1;
  for (const auto& v : g.nodes()) {
    vars.push_back({v.id, v.outcomes});
    n *= v.outcomes;
  }
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) sum += x = expo(rng);
  for (auto& x : p) x /= sum;
  return JointDistribution(std::move(vars), std::move(p));
}

/// Random DAG on n nodes v0..v(n-1): edge vi->vj (i<j) with probability q.
inline CausalGraph random_dag(std::size_t n, double q, std::mt19937_64& rng,
                              std::size_t max_outcomes = 2) {
  std::bernoulli_distribution coin(q);
  std::uniform_int_distribution<std::size_t> card(1, max_outcomes);
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({"v" + std::to_string(i), card(rng)});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) {
        const auto u = "v" + std::to_string(i), w = "v" + std::to_string(j);
        edges.push_back({u + "->" + w, u, w});
      }
  // Shuffle the declared node order so it is not already topological.
  std::shuffle(nodes.begin(), nodes.end(), rng);
  return CausalGraph(std::move(nodes), std::move(edges));
}

/// A uniformly chosen linear extension, by randomized Kahn.
inline std::vector<NodeId> random_topological_order(const CausalGraph& g, std::mt19937_64& rng) {
  std::map<NodeId, std::size_t> indeg;
  for (const auto& n : g.nodes()) indeg[n.id] = 0;
  for (const auto& e : g.edges()) ++indeg[e.dst];
  std::vector<NodeId> ready, order;
  for (const auto& [v, d] : indeg)
    if (d == 0) ready.push_back(v);
  while (!ready.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, ready.size() - 1);
    const std::size_t k = pick(rng);
    const NodeId v = ready[k];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(k));
    order.push_back(v);
    for (const auto& e : g.out_edges(v))
      if (--indeg[g.edge(e).dst] == 0) ready.push_back(g.edge(e).dst);
  }
  return order;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace cc::testing
