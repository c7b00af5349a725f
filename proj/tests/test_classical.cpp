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

#include <cstdlib>
#include <random>

#include "cc/classical.hpp"
#include "cc/correlation.hpp"
#include "cc/errors.hpp"
#include "cc/scenarios.hpp"
#include "models.hpp"
#include "support.hpp"

namespace cc {
namespace {

using classical::Model;
using testing::tabulate;
using V = std::vector<std::size_t>;

double uniform2(const V&, std::size_t, const V&) { return 0.5; }

// Two-party Bell graph: s broadcasts one uniform bit to a and b, which output it.
Model shared_coin() {
  const auto g = scenarios::bell();
  return tabulate(g, {{"s->a", 2}, {"s->b", 2}, {"x->a", 1}, {"y->b", 1}},
                  {{"s", [](const V&, std::size_t o, const V& out) { return o == 0 && out[0] == out[1] ? 0.5 : 0.0; }},
                   {"x", [](const V&, std::size_t, const V&) { return 0.5; }},
                   {"y", [](const V&, std::size_t, const V&) { return 0.5; }},
                   {"a", [](const V& in, std::size_t o, const V&) { return o == in[0] ? 1.0 : 0.0; }},
                   {"b", [](const V& in, std::size_t o, const V&) { return o == in[0] ? 1.0 : 0.0; }}});
}

// Triangle graph: roots broadcast uniform bits; each top node outputs the XOR.
Model triangle_xor() {
  const auto g = scenarios::triangle();
  std::map<EdgeId, std::size_t> sizes;
  for (const auto& e : g.edges()) sizes[e.id] = 2;
  auto root = [](const V&, std::size_t o, const V& out) { return o == 0 && out[0] == out[1] ? 0.5 : 0.0; };
  auto xor2 = [](const V& in, std::size_t o, const V&) { return o == (in[0] ^ in[1]) ? 1.0 : 0.0; };
  return tabulate(g, sizes, {{"x", root}, {"y", root}, {"z", root}, {"a", xor2}, {"b", xor2}, {"c", xor2}});
}

// x -> a: x outputs a uniform bit and sends a copy; a is a BSC(0.25) of it.
Model bsc_chain() {
  CausalGraph g({{"x", 2}, {"a", 2}}, {{"x->a", "x", "a"}});
  return tabulate(g, {{"x->a", 2}},
                  {{"x", [](const V&, std::size_t o, const V& out) { return o == out[0] ? 0.5 : 0.0; }},
                   {"a", [](const V& in, std::size_t o, const V&) { return o == in[0] ? 0.75 : 0.25; }}});
}

std::size_t state_space(const Model& m) {
  std::size_t n = 1;
  for (const auto& v : m.graph.nodes()) n *= v.outcomes;
  for (const auto& [e, x] : m.edge_alphabet) n *= x;
  return n;
}

TEST(Classical, ValidationReportsNormalizationDefect) {
  auto m = bsc_chain();
  EXPECT_TRUE(classical::validate_model(m).empty());
  m.gates["a"].tensor = {0.75, 0.15, 0.25, 0.75};
  const auto v = classical::validate_model(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].where, "a");
  EXPECT_NEAR(v[0].deviation, 0.1, 1e-15);
  EXPECT_THROW(classical::evaluate(m), InvalidModel);
}

TEST(Classical, ValidationReportsShapeErrors) {
  auto m = bsc_chain();
  m.gates["a"].tensor.pop_back();
  EXPECT_FALSE(classical::validate_model(m).empty());
  m = bsc_chain();
  m.edge_alphabet.erase("x->a");
  EXPECT_FALSE(classical::validate_model(m).empty());
  m = bsc_chain();
  m.gates.erase("x");
  EXPECT_FALSE(classical::validate_model(m).empty());
  m = bsc_chain();
  m.gates["a"].in_edges.clear();
  EXPECT_FALSE(classical::validate_model(m).empty());
}

TEST(Classical, UniformGatesOnBellGraphAreValid) {
  const auto g = scenarios::bell();
  std::map<EdgeId, std::size_t> sizes;
  for (const auto& e : g.edges()) sizes[e.id] = 1;
  const auto m = tabulate(g, sizes,
                          {{"s", uniform2}, {"x", uniform2}, {"y", uniform2}, {"a", uniform2}, {"b", uniform2}});
  EXPECT_TRUE(classical::validate_model(m).empty());
  const auto p = classical::evaluate(m);
  for (double v : p.probs()) EXPECT_DOUBLE_EQ(v, 1.0 / 32);
}

TEST(Classical, NoEdgeGraphGivesProduct) {
  CausalGraph g({{"a", 2}, {"b", 3}}, {});
  const auto m = tabulate(g, {},
                          {{"a", [](const V&, std::size_t o, const V&) { return o == 0 ? 0.3 : 0.7; }},
                           {"b", [](const V&, std::size_t o, const V&) { return (1.0 + double(o)) / 6.0; }}});
  const auto p = classical::evaluate(m);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      EXPECT_NEAR(p[a * 3 + b], (a == 0 ? 0.3 : 0.7) * (1.0 + double(b)) / 6.0, 1e-15);
}

TEST(Classical, SharedCoinGivesPerfectCorrelation) {
  const auto p = classical::evaluate(shared_coin());
  // Node order s, x, y, a, b. s is always 0; x, y, a uniform; b = a.
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto t = p.unflatten(i);
    const double expected = (t[0] == 0 && t[3] == t[4]) ? 0.125 : 0.0;
    EXPECT_DOUBLE_EQ(p[i], expected);
  }
  const auto xy = marginal(p, {"x", "y"});
  for (double v : xy.probs()) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(Classical, TriangleXorHasParityConstraint) {
  const auto p = classical::evaluate(triangle_xor());
  const auto abc = marginal(p, {"a", "b", "c"});
  for (std::size_t i = 0; i < 8; ++i) {
    const auto t = abc.unflatten(i);
    EXPECT_DOUBLE_EQ(abc[i], (t[0] ^ t[1] ^ t[2]) == 0 ? 0.25 : 0.0);
  }
  for (const auto& v : {"a", "b", "c"}) {
    const auto pv = marginal(p, {v});
    for (double q : pv.probs()) EXPECT_DOUBLE_EQ(q, 0.5);
  }
}

TEST(Classical, AncestralMarginals) {
  const auto m = classical::random_model(scenarios::bell(), 2, 3);
  const auto empty = classical::evaluate_marginal_ancestral(m, {});
  EXPECT_EQ(empty.vars().size(), 0u);
  EXPECT_DOUBLE_EQ(empty[0], 1.0);

  const auto full = classical::evaluate(m);
  NodeSet all;
  for (const auto& n : m.graph.nodes()) all.insert(n.id);
  EXPECT_LE(max_abs_difference(classical::evaluate_marginal_ancestral(m, all), full), 1e-15);

  const auto xs = classical::evaluate_marginal_ancestral(m, {"x", "s"});
  const auto px = classical::evaluate_marginal_ancestral(m, {"x"});
  const auto ps = classical::evaluate_marginal_ancestral(m, {"s"});
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t x = 0; x < 2; ++x) EXPECT_NEAR(xs[s * 2 + x], ps[s] * px[x], 1e-15);

  EXPECT_THROW(classical::evaluate_marginal_ancestral(m, {"a"}), NotAncestral);
}

TEST(Classical, AncestralMarginalsMatchFullEvaluation) {
  std::mt19937_64 rng(4);
  for (const auto& [name, g] : scenarios::corpus()) {
    const auto m = classical::random_model(g, 2, rng());
    const auto full = classical::evaluate(m);
    for (const auto& u : ancestral_sets(g)) {
      if (u.empty()) continue;
      const auto r = classical::evaluate_marginal_ancestral(m, u);
      EXPECT_LE(max_abs_difference(r, marginal(full, std::vector<std::string>(u.begin(), u.end()))), 1e-12)
          << name;
    }
  }
}

TEST(Classical, EliminationMatchesNaiveEnumeration) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    const auto g = testing::random_dag(2 + t % 5, 0.5, rng, 3);
    std::map<EdgeId, std::size_t> sizes;
    std::uniform_int_distribution<std::size_t> sz(1, 3);
    for (const auto& e : g.edges()) sizes[e.id] = sz(rng);
    const auto m = classical::random_model(g, sizes, rng());
    if (state_space(m) > (1u << 16)) continue;
    ++checked;
    EXPECT_LE(max_abs_difference(classical::evaluate(m), classical::evaluate_naive(m)), 1e-12);
  }
  EXPECT_GT(checked, 20);
}

TEST(Classical, CustomOrderAndExecutionModesAgree) {
  std::mt19937_64 rng(6);
  const auto m = classical::random_model(scenarios::sequential(), 2, 99);
  const auto ref = classical::evaluate(m, std::nullopt, Execution::serial);
  EXPECT_EQ(classical::evaluate(m).probs(), ref.probs());
  for (int t = 0; t < 5; ++t) {
    const auto order = testing::random_topological_order(m.graph, rng);
    EXPECT_LE(max_abs_difference(classical::evaluate(m, order), ref), 1e-12);
  }
  EXPECT_THROW(classical::evaluate(m, std::vector<NodeId>{"a", "b"}), Error);
}

TEST(Classical, EvaluationIsNormalizedAndACorrelation) {
  std::mt19937_64 rng(8);
  for (const auto& [name, g] : scenarios::corpus()) {
    for (int t = 0; t < 3; ++t) {
      const auto p = classical::evaluate(classical::random_model(g, 2 + t % 2, rng()));
      EXPECT_NEAR(p.total(), 1.0, 1e-10);
      EXPECT_TRUE(is_correlation(g, p).is_correlation) << name;
    }
  }
}

TEST(Classical, PushBackOnBscChain) {
  const auto m = bsc_chain();
  const auto d = classical::push_back_determinism(m);
  EXPECT_EQ(d.edge_alphabet.at("x->a"), 8u);
  EXPECT_TRUE(d.gates.at("a").deterministic());
  EXPECT_TRUE(classical::validate_model(d).empty());
  const auto p = classical::evaluate(d);
  // Hand enumeration: P(x, a) = 1/2 * (3/4 if a == x else 1/4).
  EXPECT_NEAR(p[0], 0.375, 1e-12);
  EXPECT_NEAR(p[1], 0.125, 1e-12);
  EXPECT_NEAR(p[2], 0.125, 1e-12);
  EXPECT_NEAR(p[3], 0.375, 1e-12);
}

TEST(Classical, PushBackKeepsDeterministicModelsAndPreservesJoint) {
  const auto m = shared_coin();
  const auto d = classical::push_back_determinism(m);
  for (const auto& v : {"a", "b"}) EXPECT_TRUE(d.gates.at(v).deterministic());
  EXPECT_LE(max_abs_difference(classical::evaluate(d), classical::evaluate(m)), 1e-12);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const auto r = classical::random_model(scenarios::chain(2 + t % 2), 2, rng());
    const auto dr = classical::push_back_determinism(r);
    for (const auto& n : dr.graph.nodes())
      if (!dr.graph.in_edges(n.id).empty()) EXPECT_TRUE(dr.gates.at(n.id).deterministic());
    EXPECT_LE(max_abs_difference(classical::evaluate(dr), classical::evaluate(r)), 1e-12);
  }
}

TEST(Classical, PushBackIsGuarded) {
  const auto m = classical::random_model(scenarios::popescu(), 2, 1);
  EXPECT_THROW(classical::push_back_determinism(m), SizeLimitExceeded);
}

TEST(Classical, LiftTrivialEdgeIsBitExact) {
  std::mt19937_64 rng(10);
  const auto m = classical::random_model(scenarios::popescu(), 2, rng());
  const auto l = classical::lift_trivial_edge(m, "s", "a");
  EXPECT_TRUE(l.graph.has_edge("s->a#tc"));
  EXPECT_EQ(l.edge_alphabet.at("s->a#tc"), 1u);
  EXPECT_EQ(classical::evaluate(l).probs(), classical::evaluate(m).probs());
  EXPECT_THROW(classical::lift_trivial_edge(m, "a", "s"), WouldCreateCycle);
  EXPECT_THROW(classical::lift_trivial_edge(m, "a", "a"), WouldCreateCycle);
}

TEST(Classical, RerouteRelaysDirectBit) {
  CausalGraph g({{"u", 2}, {"v", 2}, {"w", 2}},
                {{"u->v", "u", "v"}, {"v->w", "v", "w"}, {"u->w", "u", "w"}});
  // u outputs a uniform bit and sends it straight to w; v sends a fixed 0.
  const auto m = tabulate(
      g, {{"u->v", 1}, {"v->w", 1}, {"u->w", 2}},
      {{"u", [](const V&, std::size_t o, const V& out) { return o == out[1] ? 0.5 : 0.0; }},
       {"v", [](const V&, std::size_t o, const V&) { return o == 0 ? 1.0 : 0.0; }},
       {"w", [](const V& in, std::size_t o, const V&) { return o == in[0] ? 1.0 : 0.0; }}});
  const auto r = classical::reroute_transitive_edge(m, "u->w", "v");
  EXPECT_FALSE(r.graph.has_edge("u->w"));
  EXPECT_EQ(r.edge_alphabet.at("u->v"), 2u);
  EXPECT_EQ(r.edge_alphabet.at("v->w"), 2u);
  const auto p = classical::evaluate(r);
  // Node order u, v, w: w equals u, v is 0.
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[5], 0.5);
  EXPECT_LE(max_abs_difference(p, classical::evaluate(m)), 1e-12);
  EXPECT_THROW(classical::reroute_transitive_edge(m, "u->w", "w"), MissingRelayPath);
}

TEST(Classical, RerouteOfTrivialEdgeRestoresOriginal) {
  const auto m = classical::random_model(scenarios::popescu(), 2, 12);
  const auto l = classical::lift_trivial_edge(m, "s", "a");
  const auto r = classical::reroute_transitive_edge(l, "s->a#tc", "a'");
  EXPECT_EQ(r.graph, m.graph);
  EXPECT_EQ(r.edge_alphabet, m.edge_alphabet);
  for (const auto& [v, gate] : m.gates) EXPECT_EQ(r.gates.at(v).tensor, gate.tensor) << v;
}

TEST(Classical, RerouteThenLiftPreservesJoint) {
  std::mt19937_64 rng(13);
  const auto g = scenarios::popescu().with_edge({"s->a", "s", "a"});
  for (int t = 0; t < 5; ++t) {
    const auto m = classical::random_model(g, 2, rng());
    const auto r = classical::reroute_transitive_edge(m, "s->a", "a'");
    EXPECT_EQ(r.graph, scenarios::popescu());
    const auto back = classical::lift_trivial_edge(r, "s", "a", "s->a");
    EXPECT_LE(max_abs_difference(classical::evaluate(back), classical::evaluate(m)), 1e-12);
  }
}

TEST(Classical, RandomModelIsDeterministicAndValid) {
  const auto a = classical::random_model(scenarios::triangle(), 3, 42);
  const auto b = classical::random_model(scenarios::triangle(), 3, 42);
  const auto c = classical::random_model(scenarios::triangle(), 3, 43);
  EXPECT_TRUE(classical::validate_model(a).empty());
  for (const auto& [v, gate] : a.gates) {
    EXPECT_EQ(gate.tensor, b.gates.at(v).tensor);
    EXPECT_NE(gate.tensor, c.gates.at(v).tensor);
  }
}

TEST(Classical, EnvironmentOverridesSizeGuard) {
  const auto m = classical::random_model(scenarios::bell(), 2, 1);
  ::setenv("CC_MAX_STATE_SPACE", "16", 1);
  EXPECT_THROW(classical::evaluate_naive(m), SizeLimitExceeded);
  ::unsetenv("CC_MAX_STATE_SPACE");
  EXPECT_NO_THROW(classical::evaluate_naive(m));
}

}  // namespace
}  // namespace cc
