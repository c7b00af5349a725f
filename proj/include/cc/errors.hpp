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
#include <stdexcept>
#include <string>

namespace cc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CC_DECLARE_ERROR(Name)         \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

CC_DECLARE_ERROR(CycleError);
CC_DECLARE_ERROR(UnknownNode);
CC_DECLARE_ERROR(UnknownEdge);
CC_DECLARE_ERROR(NodeMismatch);
CC_DECLARE_ERROR(SizeLimitExceeded);
CC_DECLARE_ERROR(UnknownVariable);
CC_DECLARE_ERROR(OverlappingSets);
CC_DECLARE_ERROR(VariableCollision);
CC_DECLARE_ERROR(VariableMismatch);
CC_DECLARE_ERROR(InvalidDistribution);
CC_DECLARE_ERROR(BadEpsilon);
CC_DECLARE_ERROR(ShapeMismatch);
CC_DECLARE_ERROR(InvalidModel);
CC_DECLARE_ERROR(NotAncestral);
CC_DECLARE_ERROR(WouldCreateCycle);
CC_DECLARE_ERROR(MissingRelayPath);
CC_DECLARE_ERROR(NegativeProbability);
CC_DECLARE_ERROR(NotNoSignalling);
CC_DECLARE_ERROR(IncompletePOVM);
CC_DECLARE_ERROR(SchemaError);

#undef CC_DECLARE_ERROR

/// Default guard on dense tables and on the work of a single contraction step.
inline constexpr std::size_t kDefaultStateSpaceLimit = std::size_t{1} << 24;
/// Default guard on the function-space alphabets built by determinism push-back.
inline constexpr std::size_t kDefaultFunctionSpaceLimit = std::size_t{1} << 20;
/// Default guard on one side of a density matrix during quantum contraction.
inline constexpr std::size_t kDefaultDensityDimLimit = std::size_t{1} << 12;
/// Default guard on the number of deterministic strategies in a Bell LP.
inline constexpr std::size_t kDefaultStrategyLimit = 1000000;

/// Returns `default_limit`, or the value of CC_MAX_STATE_SPACE when that
/// variable is set to a positive integer.
std::size_t guard_limit(std::size_t default_limit);

/// Multiplies with saturation at SIZE_MAX; used for size-guard arithmetic.
std::size_t saturating_mul(std::size_t a, std::size_t b);

/// Throws SizeLimitExceeded when `value > guard_limit(default_limit)`.
void check_limit(std::size_t value, std::size_t default_limit, const std::string& what);

}  // namespace cc
