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
#include <string>
#include <vector>

namespace cc {

/// Selects the OpenMP kernel or the serial reference loop. Both produce
/// bit-identical results: every output entry is summed in the same order.
enum class Execution { parallel, serial };

struct Axis {
  std::string label;
  std::size_t size = 1;

  bool operator==(const Axis&) const = default;
};

/// Dense row-major table over labelled axes (last axis fastest).
class Tensor {
 public:
  Tensor() : data_{1.0} {}
  Tensor(std::vector<Axis> axes, std::vector<double> data);

  static Tensor scalar(double value);

  const std::vector<Axis>& axes() const { return axes_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }
  std::size_t size() const { return data_.size(); }
  std::optional<std::size_t> position(const std::string& label) const;
  std::vector<std::size_t> strides() const;

 private:
  std::vector<Axis> axes_;
  std::vector<double> data_;
};

/// Returns sum over every label not in `keep` of a*b, with axes sharing a
/// label identified. The output axes follow the order of `keep`.
/// Throws ShapeMismatch on inconsistent sizes or unknown keep labels, and
/// SizeLimitExceeded when output size times summed size exceeds the guard.
Tensor contract(const Tensor& a, const Tensor& b, const std::vector<std::string>& keep,
                Execution exec = Execution::parallel);

/// Product of all sizes; saturates instead of overflowing.
std::size_t volume(const std::vector<Axis>& axes);

}  // namespace cc
