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

#include <gtest/gtest.h>

#include <algorithm>

#include <random>
#include <set>

#include "cc/causal_graph.hpp"
#include "cc/errors.hpp"
#include "cc/scenarios.hpp"
#include "support.hpp"

namespace cc {
namespace {

using Mask = std::uint32_t;

// Oracle helpers, written against the raw edge list only.
Mask past_mask(const CausalGraph& g, Mask seed) {
  std::map<NodeId, std::size_t> pos;
  for (std::size_t i = 0; i < g.nodes().size(); ++i) pos[g.nodes()[i].id] = i;
  Mask m = seed;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& e : g.edges()) {
      const Mask s = Mask{1} << pos[e.src], d = Mask{1} << pos[e.dst];
      if ((m & d) && !(m & s)) {
        m |= s;
        grew = true;
      }
    }
  }
  return m;
}

NodeSet to_set(const CausalGraph& g, Mask m) {
  NodeSet s;
  for (std::size_t i = 0; i < g.nodes().size(); ++i)
    if (m >> i & 1) s.insert(g.nodes()[i].id);
  return s;
}

std::set<std::set<NodeSet>> brute_force_pairs(const CausalGraph& g) {
  const std::size_t n = g.nodes().size();
  const Mask full = (Mask{1} << n) - 1;
  std::vector<Mask> past(full + 1);
  for (Mask m = 0; m <= full; ++m) past[m] = past_mask(g, m);
  auto disjoint = [&](Mask u, Mask w) { return (past[u] & past[w]) == 0; };
  std::set<std::set<NodeSet>> out;
  for (Mask u = 1; u <= full; ++u)
    for (Mask w = 1; w <= full; ++w) {
      if (!disjoint(u, w)) continue;
      bool maximal = true;
      // Any enlargement implies a one-node enlargement, since pasts are monotone.
      for (std::size_t i = 0; i < n && maximal; ++i) {
        const Mask b = Mask{1} << i;
        if (!(u & b) && disjoint(u | b, w)) maximal = false;
        if (!(w & b) && disjoint(u, w | b)) maximal = false;
      }
      if (maximal) out.insert({to_set(g, u), to_set(g, w)});
    }
  return out;
}

std::set<std::set<NodeSet>> as_unordered(const std::vector<DisjointPastPair>& pairs) {
  std::set<std::set<NodeSet>> out;
  for (const auto& p : pairs) out.insert({p.first, p.second});
  return out;
}

TEST(CausalGraph, ValidGraphsHaveNoViolations) {
  for (const auto& [name, g] : scenarios::corpus()) EXPECT_TRUE(validate(g).empty()) << name;
}

TEST(CausalGraph, ReportsCycleWithPath) {
  CausalGraph g({{"a", 2}, {"b", 2}}, {{"ab", "a", "b"}, {"ba", "b", "a"}});
  auto v = validate(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], "cycle a→b→a");
  EXPECT_THROW(topological_order(g), CycleError);
}

TEST(CausalGraph, ReportsSelfLoopDuplicatesAndEmptyAlphabets) {
  CausalGraph loop({{"a", 2}}, {{"aa", "a", "a"}});
  EXPECT_FALSE(validate(loop).empty());
  CausalGraph dup({{"a", 2}, {"a", 2}}, {});
  EXPECT_FALSE(validate(dup).empty());
  CausalGraph empty({{"a", 0}}, {});
  EXPECT_FALSE(validate(empty).empty());
  CausalGraph dangling({{"a", 2}}, {{"ab", "a", "b"}});
  EXPECT_FALSE(validate(dangling).empty());
}

TEST(CausalGraph, TopologicalOrderIsLexicographicKahn) {
  const auto g = scenarios::bell();
  EXPECT_EQ(topological_order(g), (std::vector<NodeId>{"s", "x", "a", "y", "b"}));
  EXPECT_TRUE(is_topological_order(g, {"y", "x", "s", "b", "a"}));
  EXPECT_FALSE(is_topological_order(g, {"a", "x", "s", "y", "b"}));
  EXPECT_FALSE(is_topological_order(g, {"s", "x", "a"}));
}

TEST(CausalGraph, CausalPastAndAncestralSets) {
  const auto g = scenarios::popescu();
  EXPECT_EQ(causal_past(g, {"a"}), (NodeSet{"a", "a'", "s", "x"}));
  EXPECT_TRUE(reaches(g, "s", "a"));
  EXPECT_FALSE(reaches(g, "a", "s"));
  EXPECT_FALSE(reaches(g, "s", "s"));
  EXPECT_TRUE(is_ancestral(g, {"s", "a'"}));
  EXPECT_FALSE(is_ancestral(g, {"a'"}));

  for (const auto& [name, gr] : scenarios::corpus()) {
    const std::size_t n = gr.nodes().size();
    std::size_t count = 0;
    for (Mask m = 0; m < (Mask{1} << n); ++m)
      if (past_mask(gr, m) == m) ++count;
    EXPECT_EQ(ancestral_sets(gr).size(), count) << name;
    for (const auto& s : ancestral_sets(gr)) EXPECT_TRUE(is_ancestral(gr, s));
  }
}

TEST(CausalGraph, BellPairsAreSettingsVersusRest) {
  CausalGraph g({{"s", 1}, {"x1", 2}, {"a1", 2}, {"x2", 2}, {"a2", 2}},
                {{"s->a1", "s", "a1"}, {"x1->a1", "x1", "a1"}, {"s->a2", "s", "a2"}, {"x2->a2", "x2", "a2"}});
  std::set<std::set<NodeSet>> expected{
      {NodeSet{"x1"}, NodeSet{"x2", "a2", "s"}},
      {NodeSet{"x2"}, NodeSet{"x1", "a1", "s"}},
      {NodeSet{"x1", "x2"}, NodeSet{"s"}},
  };
  EXPECT_EQ(as_unordered(maximal_disjoint_past_pairs(g)), expected);
}

TEST(CausalGraph, MaximalPairsMatchBruteForceOnCorpus) {
  for (const auto& [name, g] : scenarios::corpus()) {
    if (g.nodes().size() > 8) continue;
    EXPECT_EQ(as_unordered(maximal_disjoint_past_pairs(g)), brute_force_pairs(g)) << name;
  }
}

TEST(CausalGraph, MaximalPairsMatchBruteForceOnRandomDags) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto g = testing::random_dag(n, 0.35, rng);
    const auto pairs = maximal_disjoint_past_pairs(g);
    EXPECT_EQ(as_unordered(pairs), brute_force_pairs(g)) << "trial " << trial;
    EXPECT_TRUE(std::is_sorted(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
      return std::tie(a.first, a.second) < std::tie(b.first, b.second);
    }));
    for (const auto& p : pairs) EXPECT_LE(p.first, p.second);
  }
}

TEST(CausalGraph, SingleNodeAndChainHaveNoPairs) {
  EXPECT_TRUE(maximal_disjoint_past_pairs(CausalGraph({{"v", 2}}, {})).empty());
  EXPECT_TRUE(maximal_disjoint_past_pairs(scenarios::chain(4)).empty());
}

TEST(CausalGraph, PairEnumerationIsGuarded) {
  const auto g = scenarios::chain(16);
  EXPECT_THROW(maximal_disjoint_past_pairs(g), SizeLimitExceeded);
  EXPECT_NO_THROW(maximal_disjoint_past_pairs(g, 16));
}

TEST(CausalGraph, TransitiveClosureAddsImpliedEdges) {
  const auto g = scenarios::chain(3);
  const auto c = transitive_closure(g);
  EXPECT_EQ(c.edges().size(), 3u);
  EXPECT_TRUE(c.has_edge("v0->v2#tc"));
  EXPECT_TRUE(poset_equal(g, c));
  EXPECT_EQ(transitive_closure(c), c);

  const auto p = scenarios::popescu();
  EXPECT_TRUE(poset_equal(p, p.with_edge({"s->a", "s", "a"})));
  EXPECT_FALSE(poset_equal(p, p.with_edge({"x->b", "x", "b"})));
  EXPECT_THROW(poset_equal(p, scenarios::bell()), NodeMismatch);
}

TEST(CausalGraph, AdjacencyIsSorted) {
  const auto g = scenarios::triangle();
  EXPECT_EQ(g.in_edges("c"), (std::vector<EdgeId>{"x->c", "y->c"}));
  EXPECT_EQ(g.parents("a"), (std::vector<NodeId>{"y", "z"}));
  EXPECT_EQ(g.children("x"), (std::vector<NodeId>{"b", "c"}));
  EXPECT_THROW(g.node("q"), UnknownNode);
  EXPECT_THROW(g.edge("q"), UnknownEdge);
}

}  // namespace
TEST(CausalGraph, RandomDagProperties) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_dag(2 + trial % 9, 0.4, rng);
    const auto order = topological_order(g);
    EXPECT_TRUE(is_topological_order(g, order));
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<NodeId> ids;
    for (const auto& n : g.nodes()) ids.push_back(n.id);
    std::sort(ids.begin(), ids.end());
    EXPECT_EQ(sorted, ids);

    EXPECT_TRUE(poset_equal(g, transitive_closure(g)));

    // Monotone and idempotent on random seed pairs.
    for (int k = 0; k < 5; ++k) {
      NodeSet small, big;
      for (const auto& id : ids) {
        const auto r = rng() % 3;
        if (r == 0) small.insert(id);
        if (r <= 1) big.insert(id);
      }
      const auto ps = causal_past(g, small), pb = causal_past(g, big);
      EXPECT_TRUE(std::includes(pb.begin(), pb.end(), ps.begin(), ps.end()));
      EXPECT_EQ(causal_past(g, pb), pb);
      EXPECT_TRUE(is_ancestral(g, ps));
    }
  }
}

TEST(CausalGraph, TopologicalOrderRejectsCycles) {
  CausalGraph cyc({{"a", 2}, {"b", 2}}, {{"a->b", "a", "b"}, {"b->a", "b", "a"}});
  EXPECT_THROW(topological_order(cyc), CycleError);
}

}  // namespace cc
