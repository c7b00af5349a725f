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
#include <vector>

#include "cc/errors.hpp"

namespace cc {

/// Mixed-radix codec for tuples, first digit slowest.
class Radix {
 public:
  Radix() = default;
  explicit Radix(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    for (auto s : sizes_) volume_ = saturating_mul(volume_, s);
  }

  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t volume() const { return volume_; }

  std::size_t encode(const std::vector<std::size_t>& digits) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < sizes_.size(); ++i) idx = idx * sizes_[i] + digits[i];
    return idx;
  }

  void decode(std::size_t idx, std::vector<std::size_t>& digits) const {
    digits.resize(sizes_.size());
    for (std::size_t i = sizes_.size(); i-- > 0;) {
      digits[i] = idx % sizes_[i];
      idx /= sizes_[i];
    }
  }

  std::vector<std::size_t> decode(std::size_t idx) const {
    std::vector<std::size_t> d;
    decode(idx, d);
    return d;
  }

 private:
  std::vector<std::size_t> sizes_;
  std::size_t volume_ = 1;
};

}  // namespace cc
