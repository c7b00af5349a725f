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
#include <string>
#include <vector>

#include "cc/causal_graph.hpp"

namespace cc::scenarios {

/// Two-party Bell graph with binary nodes: s, x, y, a, b.
CausalGraph bell();

/// Bell graph with intermediate hidden stations a', b' between the source
/// and the measurement nodes.
CausalGraph popescu();

/// Two independent sources s, t shared by three parties a, b, c.
CausalGraph bilocality();

/// Three roots x, y, z, each feeding two of a, b, c.
CausalGraph triangle();

/// Two rounds of measurement: a', b' with settings x', y', then a, b.
CausalGraph sequential();

/// v0 -> v1 -> ... -> v(n-1).
CausalGraph chain(std::size_t n, std::size_t outcomes = 2);

/// Every graph above under its name, for corpus-wide tests.
std::vector<std::pair<std::string, CausalGraph>> corpus();

}  // namespace cc::scenarios
