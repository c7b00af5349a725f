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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cc/tensor.hpp"

namespace cc {

struct Variable {
  std::string id;
  std::size_t size = 1;

  bool operator==(const Variable&) const = default;
};

inline constexpr double kNormalizationTol = 1e-9;
inline constexpr double kZeroTol = 1e-12;

/// Dense joint probability table over finite variables, row-major in the
/// declared variable order (last variable fastest).
///
/// Entries must be non-negative. Unless constructed as unnormalized, they
/// must also sum to one within `norm_tol`. Tables are capped at 2^24 entries.
class JointDistribution {
 public:
  JointDistribution(std::vector<Variable> vars, std::vector<double> probs, bool normalized = true,
                    double norm_tol = kNormalizationTol);

  static JointDistribution uniform(std::vector<Variable> vars);
  static JointDistribution point_mass(std::vector<Variable> vars,
                                      const std::vector<std::size_t>& tuple);

  const std::vector<Variable>& vars() const { return vars_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  bool normalized() const { return normalized_; }

  std::optional<std::size_t> find(const std::string& id) const;
  std::size_t index_of(const std::string& id) const;  // throws UnknownVariable
  std::vector<std::string> ids() const;

  std::size_t flat_index(std::span<const std::size_t> tuple) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  double at(std::span<const std::size_t> tuple) const { return probs_[flat_index(tuple)]; }
  double operator[](std::size_t flat) const { return probs_[flat]; }
  double total() const;

  Tensor as_tensor() const;

  bool operator==(const JointDistribution& other) const {
    return vars_ == other.vars_ && probs_ == other.probs_;
  }

 private:
  std::vector<Variable> vars_;
  std::vector<double> probs_;
  bool normalized_ = true;
};

/// Sums out every variable not in `keep`; the result keeps the input's
/// variable order. Throws UnknownVariable.
JointDistribution marginal(const JointDistribution& p, const std::vector<std::string>& keep,
                           Execution exec = Execution::parallel);

/// Same table with variables permuted into `order` (a permutation of ids).
JointDistribution reorder(const JointDistribution& p, const std::vector<std::string>& order);

/// P(targets | givens) for every given tuple. Rows whose given marginal is at
/// most `zero_tol` are left undefined.
struct ConditionalTable {
  std::vector<Variable> targets;
  std::vector<Variable> givens;
  /// One entry per given tuple (row-major over `givens`); each defined row is
  /// a normalized distribution over target tuples (row-major over `targets`).
  std::vector<std::optional<std::vector<double>>> rows;
  std::vector<double> given_marginal;
};

ConditionalTable conditional(const JointDistribution& p, const std::vector<std::string>& targets,
                             const std::vector<std::string>& givens, double zero_tol = kZeroTol);

/// Outer product; throws VariableCollision on shared ids.
JointDistribution product(const JointDistribution& a, const JointDistribution& b);

/// Half the L1 distance; throws VariableMismatch unless variable lists match.
double tv_distance(const JointDistribution& a, const JointDistribution& b);

/// Largest absolute entry-wise difference; same precondition as tv_distance.
double max_abs_difference(const JointDistribution& a, const JointDistribution& b);

/// A function from the product of finite factors to a finite codomain,
/// tabulated row-major over the factors.
struct CoarseGraining {
  std::vector<std::size_t> domain;
  std::size_t codomain = 1;
  std::vector<std::size_t> map;
};

void validate_coarse_graining(const CoarseGraining& f);

struct CoarseGrainingFactorization {
  /// factor_maps[k][x] is the class of value x of factor k; classes are
  /// numbered 0..factor_sizes[k]-1 in order of first appearance.
  std::vector<std::vector<std::size_t>> factor_maps;
  std::vector<std::size_t> factor_sizes;
  /// Composed map on the product of classes, row-major.
  std::vector<std::size_t> composed;
  /// Exact probability that f differs from composed o (f_1 x ... x f_n).
  double error = 0.0;
};

/// Probability under `p` that `f` disagrees with the factorized map.
double factorization_error(const JointDistribution& p, const CoarseGraining& f,
                           const std::vector<std::vector<std::size_t>>& factor_maps,
                           const std::vector<std::size_t>& factor_sizes,
                           const std::vector<std::size_t>& composed);

/// For fixed per-factor maps, the composed map minimizing the error: each
/// cell takes the codomain value of largest mass (smallest value on ties).
std::vector<std::size_t> best_composed_map(const JointDistribution& p, const CoarseGraining& f,
                                           const std::vector<std::vector<std::size_t>>& factor_maps,
                                           const std::vector<std::size_t>& factor_sizes);

/// Starts from identity factor maps and greedily merges pairs of classes
/// (ascending factor, then ascending value pairs) while the exact error stays
/// within `eps`, repeating until no merge is accepted. Throws BadEpsilon unless
/// eps is in [0, 1].
CoarseGrainingFactorization factor_coarse_graining(const JointDistribution& p,
                                                   const CoarseGraining& f, double eps);

}  // namespace cc
