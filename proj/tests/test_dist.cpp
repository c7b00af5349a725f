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

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include "cc/bell.hpp"
#include "cc/dist.hpp"
#include "cc/errors.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace cc {
namespace {

JointDistribution bits(std::vector<double> p) {
  return JointDistribution({{"a", 2}, {"b", 2}}, std::move(p));
}

TEST(Dist, ConstructorChecksInvariants) {
  EXPECT_THROW(JointDistribution({{"a", 2}}, {0.5, 0.6}), InvalidDistribution);
  EXPECT_THROW(JointDistribution({{"a", 2}}, {1.5, -0.5}), InvalidDistribution);
  EXPECT_THROW(JointDistribution({{"a", 2}}, {1.0}), InvalidDistribution);
  EXPECT_THROW(JointDistribution({{"a", 2}, {"a", 2}}, {0.25, 0.25, 0.25, 0.25}), InvalidDistribution);
  EXPECT_NO_THROW(JointDistribution({{"a", 2}}, {0.5, 0.6}, false));
}

TEST(Dist, MarginalOfUniformIsUniform) {
  const auto p = JointDistribution::uniform({{"a", 2}, {"b", 2}});
  const auto m = marginal(p, {"a"});
  EXPECT_EQ(m.probs(), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(marginal(p, {"b", "a"}), p);
  EXPECT_THROW(marginal(p, {"c"}), UnknownVariable);
}

TEST(Dist, PrBoxSettingsMarginalIsUniform) {
  const auto sc = bell::Scenario::uniform(2, 2, 2);
  const auto p = bell::behaviour_joint(sc, bell::pr_box_conditional());
  const auto m = marginal(p, {"x1", "x2"});
  for (double v : m.probs()) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(Dist, MarginalIsConsistentAndCommutesWithReorder) {
  std::mt19937_64 rng(3);
  CausalGraph g({{"a", 2}, {"b", 3}, {"c", 2}, {"d", 3}}, {});
  for (int t = 0; t < 20; ++t) {
    const auto p = testing::random_table(g, rng);
    const auto direct = marginal(p, {"b", "d"});
    const auto nested = marginal(marginal(p, {"b", "c", "d"}), {"b", "d"});
    EXPECT_EQ(direct.vars(), nested.vars());
    EXPECT_LE(max_abs_difference(direct, nested), 1e-15);
    const auto r = reorder(p, {"d", "c", "b", "a"});
    EXPECT_LE(max_abs_difference(reorder(marginal(r, {"b", "d"}), {"b", "d"}), direct), 1e-15);
    EXPECT_LE(std::abs(r.total() - 1.0), 1e-12);
  }
}

TEST(Dist, NestedMarginalIsExactOnDyadicTables) {
  // With entries on a 2^-20 grid every partial sum is representable, so the
  // summation order cannot matter.
  std::mt19937_64 rng(4);
  std::vector<Variable> vars{{"a", 2}, {"b", 3}, {"c", 2}, {"d", 3}};
  for (int t = 0; t < 20; ++t) {
    std::vector<std::uint64_t> w(36);
    std::uint64_t total = 0;
    for (auto& x : w) total += x = rng() % 1000;
    w.back() += (std::uint64_t{1} << 20) - total;
    std::vector<double> probs;
    for (auto x : w) probs.push_back(std::ldexp(static_cast<double>(x), -20));
    const JointDistribution p(vars, probs);
    const auto direct = marginal(p, {"b", "d"});
    EXPECT_EQ(direct, marginal(marginal(p, {"b", "c", "d"}), {"b", "d"}));
    EXPECT_EQ(direct, marginal(marginal(p, {"a", "b", "d"}), {"b", "d"}));
    EXPECT_EQ(reorder(marginal(reorder(p, {"d", "c", "b", "a"}), {"b", "d"}), {"b", "d"}), direct);
  }
}

TEST(Dist, ConditionalOfIndependentProductIsTheFactor) {
  const auto pa = JointDistribution({{"a", 2}}, {0.3, 0.7});
  const auto pb = JointDistribution({{"b", 3}}, {0.2, 0.5, 0.3});
  const auto joint = product(pa, pb);
  const auto c = conditional(joint, {"a"}, {"b"});
  ASSERT_EQ(c.rows.size(), 3u);
  for (const auto& row : c.rows) {
    ASSERT_TRUE(row.has_value());
    EXPECT_NEAR((*row)[0], 0.3, 1e-15);
    EXPECT_NEAR((*row)[1], 0.7, 1e-15);
  }
}

TEST(Dist, ConditionalOfCopyIsPointMassAndMarksZeroRows) {
  const auto p = bits({0.5, 0.0, 0.0, 0.5});
  const auto c = conditional(p, {"b"}, {"a"});
  EXPECT_EQ(*c.rows[0], (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(*c.rows[1], (std::vector<double>{0.0, 1.0}));

  const auto q = bits({0.5, 0.5, 0.0, 0.0});
  const auto d = conditional(q, {"b"}, {"a"});
  EXPECT_TRUE(d.rows[0].has_value());
  EXPECT_FALSE(d.rows[1].has_value());
  EXPECT_THROW(conditional(q, {"a"}, {"a"}), OverlappingSets);
}

TEST(Dist, ConditionalTimesMarginalReconstructsJoint) {
  std::mt19937_64 rng(5);
  CausalGraph g({{"a", 3}, {"b", 2}, {"c", 2}}, {});
  for (int t = 0; t < 10; ++t) {
    const auto p = testing::random_table(g, rng);
    const auto c = conditional(p, {"a", "c"}, {"b"});
    const auto pr = reorder(p, {"b", "a", "c"});
    for (std::size_t gi = 0; gi < 2; ++gi)
      for (std::size_t ti = 0; ti < 6; ++ti)
        EXPECT_NEAR((*c.rows[gi])[ti] * c.given_marginal[gi], pr[gi * 6 + ti], 1e-12);
  }
}

TEST(Dist, ProductAndDistances) {
  const auto u = JointDistribution::uniform({{"a", 2}});
  const auto v = JointDistribution::uniform({{"b", 2}});
  EXPECT_EQ(product(u, v), JointDistribution::uniform({{"a", 2}, {"b", 2}}));
  EXPECT_THROW(product(u, u), VariableCollision);

  const auto p0 = JointDistribution::point_mass({{"a", 2}}, {0});
  const auto p1 = JointDistribution::point_mass({{"a", 2}}, {1});
  EXPECT_EQ(tv_distance(p0, p0), 0.0);
  EXPECT_EQ(tv_distance(p0, p1), 1.0);
  EXPECT_THROW(tv_distance(p0, v), VariableMismatch);

  std::mt19937_64 rng(11);
  CausalGraph g({{"a", 3}, {"b", 2}}, {});
  for (int t = 0; t < 20; ++t) {
    const auto x = testing::random_table(g, rng), y = testing::random_table(g, rng),
               z = testing::random_table(g, rng);
    EXPECT_LE(tv_distance(x, z), tv_distance(x, y) + tv_distance(y, z) + 1e-15);
    EXPECT_DOUBLE_EQ(tv_distance(x, y), tv_distance(y, x));
  }
}

TEST(Dist, SerialAndParallelMarginalsAgreeBitwise) {
  std::mt19937_64 rng(13);
  std::vector<Node> nodes;
  for (int i = 0; i < 10; ++i) nodes.push_back({"v" + std::to_string(i), 3});
  const auto p = testing::random_table(CausalGraph(nodes, {}), rng);
  const std::vector<std::string> keep{"v1", "v4", "v8"};
  EXPECT_EQ(marginal(p, keep, Execution::parallel).probs(), marginal(p, keep, Execution::serial).probs());
}

TEST(CoarseGraining, ParityInstanceMatchesExhaustiveOptimum) {
  const auto p = JointDistribution::uniform({{"x", 3}, {"y", 3}});
  const auto f = testing::parity3x3();
  const auto r = factor_coarse_graining(p, f, 0.0);
  const std::size_t total = r.factor_sizes[0] + r.factor_sizes[1];
  EXPECT_EQ(testing::oracle_min_classes(p, f, 0.0), 4u);
  EXPECT_EQ(total, 4u);
  EXPECT_EQ(r.error, 0.0);
  EXPECT_EQ(r.factor_maps[0], (std::vector<std::size_t>{0, 1, 0}));
}

TEST(CoarseGraining, SingleFactorDependenceCollapsesOthers) {
  CoarseGraining f;
  f.domain = {3, 4};
  f.codomain = 3;
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 4; ++y) f.map.push_back(x);
  const auto p = JointDistribution::uniform({{"x", 3}, {"y", 4}});
  const auto r = factor_coarse_graining(p, f, 0.0);
  EXPECT_EQ(r.factor_sizes, (std::vector<std::size_t>{3, 1}));
  EXPECT_EQ(r.error, 0.0);
}

TEST(CoarseGraining, ErrorBoundHoldsAndIsExact) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> val(0, 2);
  for (int t = 0; t < 30; ++t) {
    CoarseGraining f;
    f.domain = {3, 3};
    f.codomain = 3;
    for (int i = 0; i < 9; ++i) f.map.push_back(val(rng));
    const auto p = testing::random_table(CausalGraph({{"x", 3}, {"y", 3}}, {}), rng);
    for (double eps : {0.0, 0.1, 0.3}) {
      const auto r = factor_coarse_graining(p, f, eps);
      EXPECT_LE(r.error, eps);
      EXPECT_DOUBLE_EQ(r.error, factorization_error(p, f, r.factor_maps, r.factor_sizes, r.composed));
      EXPECT_GE(r.factor_sizes[0] + r.factor_sizes[1], testing::oracle_min_classes(p, f, eps));
    }
  }
}

TEST(CoarseGraining, RejectsBadEpsilonAndShapes) {
  const auto p = JointDistribution::uniform({{"x", 3}, {"y", 3}});
  EXPECT_THROW(factor_coarse_graining(p, testing::parity3x3(), -0.1), BadEpsilon);
  EXPECT_THROW(factor_coarse_graining(p, testing::parity3x3(), 1.5), BadEpsilon);
  auto f = testing::parity3x3();
  f.map[0] = 5;
  EXPECT_THROW(validate_coarse_graining(f), ShapeMismatch);
}

}  // namespace
}  // namespace cc
