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

#include "cc/errors.hpp"

#include <cstdlib>
#include <limits>

namespace cc {

std::size_t guard_limit(std::size_t default_limit) {
  const char* env = std::getenv("CC_MAX_STATE_SPACE");
  if (env == nullptr || *env == '\0') return default_limit;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) return default_limit;
  return static_cast<std::size_t>(v);
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

void check_limit(std::size_t value, std::size_t default_limit, const std::string& what) {
  std::size_t limit = guard_limit(default_limit);
  if (value > limit) {
    throw SizeLimitExceeded(what + ": " + std::to_string(value) + " exceeds limit " +
                            std::to_string(limit) + " (set CC_MAX_STATE_SPACE to override)");
  }
}

}  // namespace cc
