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

#include "cc/scenarios.hpp"

namespace cc::scenarios {

namespace {

CausalGraph binary(const std::vector<std::string>& nodes,
                   const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<Node> ns;
  for (const auto& n : nodes) ns.push_back({n, 2});
  std::vector<Edge> es;
  for (const auto& [u, w] : edges) es.push_back({u + "->" + w, u, w});
  return CausalGraph(std::move(ns), std::move(es));
}

}  // namespace

CausalGraph bell() {
  return binary({"s", "x", "y", "a", "b"}, {{"s", "a"}, {"s", "b"}, {"x", "a"}, {"y", "b"}});
}

CausalGraph popescu() {
  return binary({"s", "a'", "b'", "x", "y", "a", "b"},
                {{"s", "a'"}, {"s", "b'"}, {"x", "a"}, {"y", "b"}, {"a'", "a"}, {"b'", "b"}});
}

CausalGraph bilocality() {
  return binary({"s", "t", "x", "y", "z", "a", "b", "c"},
                {{"s", "a"}, {"s", "b"}, {"t", "b"}, {"t", "c"}, {"x", "a"}, {"y", "b"}, {"z", "c"}});
}

CausalGraph triangle() {
  return binary({"x", "y", "z", "a", "b", "c"},
                {{"x", "b"}, {"x", "c"}, {"y", "a"}, {"y", "c"}, {"z", "a"}, {"z", "b"}});
}

CausalGraph sequential() {
  return binary({"s", "x'", "y'", "a'", "b'", "x", "y", "a", "b"},
                {{"s", "a'"},
                 {"s", "b'"},
                 {"x'", "a'"},
                 {"y'", "b'"},
                 {"x", "a"},
                 {"y", "b"},
                 {"a'", "a"},
                 {"b'", "b"}});
}

CausalGraph chain(std::size_t n, std::size_t outcomes) {
  std::vector<Node> ns;
  std::vector<Edge> es;
  for (std::size_t i = 0; i < n; ++i) {
    ns.push_back({"v" + std::to_string(i), outcomes});
    if (i) {
      const auto u = "v" + std::to_string(i - 1), w = "v" + std::to_string(i);
      es.push_back({u + "->" + w, u, w});
    }
  }
  return CausalGraph(std::move(ns), std::move(es));
}

std::vector<std::pair<std::string, CausalGraph>> corpus() {
  return {{"bell", bell()},
          {"popescu", popescu()},
          {"bilocality", bilocality()},
          {"triangle", triangle()},
          {"sequential", sequential()}};
}

}  // namespace cc::scenarios
