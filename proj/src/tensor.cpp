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

#include "cc/tensor.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "cc/errors.hpp"

namespace cc {

Tensor::Tensor(std::vector<Axis> axes, std::vector<double> data)
    : axes_(std::move(axes)), data_(std::move(data)) {
  std::size_t expected = 1;
  for (const auto& ax : axes_) {
    if (ax.size == 0) throw ShapeMismatch("axis '" + ax.label + "' has size 0");
    expected *= ax.size;
  }
  if (expected != data_.size())
    throw ShapeMismatch("tensor data length " + std::to_string(data_.size()) +
                        " does not match axis volume " + std::to_string(expected));
  for (std::size_t i = 0; i < axes_.size(); ++i)
    for (std::size_t j = i + 1; j < axes_.size(); ++j)
      if (axes_[i].label == axes_[j].label)
        throw ShapeMismatch("duplicate axis label '" + axes_[i].label + "'");
}

Tensor Tensor::scalar(double value) { return Tensor({}, {value}); }

std::optional<std::size_t> Tensor::position(const std::string& label) const {
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i].label == label) return i;
  return std::nullopt;
}

std::vector<std::size_t> Tensor::strides() const {
  std::vector<std::size_t> s(axes_.size(), 1);
  for (std::size_t i = axes_.size(); i-- > 1;) s[i - 1] = s[i] * axes_[i].size;
  return s;
}

std::size_t volume(const std::vector<Axis>& axes) {
  std::size_t v = 1;
  for (const auto& ax : axes) v = saturating_mul(v, ax.size);
  return v;
}

namespace {

struct Plan {
  std::vector<Axis> out_axes;
  std::vector<std::size_t> out_a, out_b;  // per output axis: stride in a, b (0 if absent)
  std::vector<std::size_t> sum_size, sum_a, sum_b;
  std::size_t out_volume = 1;
  std::size_t sum_volume = 1;
};

Plan make_plan(const Tensor& a, const Tensor& b, const std::vector<std::string>& keep) {
  std::map<std::string, std::size_t> sizes;
  std::vector<std::string> labels;  // first-seen order: a then b
  for (const Tensor* t : {&a, &b}) {
    for (const auto& ax : t->axes()) {
      auto [it, inserted] = sizes.emplace(ax.label, ax.size);
      if (inserted) {
        labels.push_back(ax.label);
      } else if (it->second != ax.size) {
        throw ShapeMismatch("axis '" + ax.label + "' has sizes " + std::to_string(it->second) +
                            " and " + std::to_string(ax.size));
      }
    }
  }
  const auto sa = a.strides(), sb = b.strides();
  auto stride_in = [](const Tensor& t, const std::vector<std::size_t>& s, const std::string& l) {
    auto p = t.position(l);
    return p ? s[*p] : std::size_t{0};
  };
  Plan plan;
  for (const auto& l : keep) {
    auto it = sizes.find(l);
    if (it == sizes.end()) throw ShapeMismatch("keep label '" + l + "' not present");
    if (std::count(keep.begin(), keep.end(), l) > 1)
      throw ShapeMismatch("keep label '" + l + "' repeated");
    plan.out_axes.push_back({l, it->second});
    plan.out_a.push_back(stride_in(a, sa, l));
    plan.out_b.push_back(stride_in(b, sb, l));
    plan.out_volume = saturating_mul(plan.out_volume, it->second);
  }
  for (const auto& l : labels) {
    if (std::find(keep.begin(), keep.end(), l) != keep.end()) continue;
    plan.sum_size.push_back(sizes[l]);
    plan.sum_a.push_back(stride_in(a, sa, l));
    plan.sum_b.push_back(stride_in(b, sb, l));
    plan.sum_volume = saturating_mul(plan.sum_volume, sizes[l]);
  }
  check_limit(plan.out_volume, kDefaultStateSpaceLimit, "contraction output size");
  check_limit(saturating_mul(plan.out_volume, plan.sum_volume), kDefaultStateSpaceLimit,
              "contraction work");
  return plan;
}

// Sums a*b over the summed axes for fixed base offsets, odometer order with
// the last summed axis fastest.
double sum_block(const Plan& p, const double* a, const double* b, std::size_t a0, std::size_t b0,
                 std::vector<std::size_t>& digit) {
  const std::size_t k = p.sum_size.size();
  std::fill(digit.begin(), digit.end(), 0);
  double acc = 0.0;
  std::size_t ao = a0, bo = b0;
  for (std::size_t n = 0; n < p.sum_volume; ++n) {
    acc += a[ao] * b[bo];
    for (std::size_t j = k; j-- > 0;) {
      if (++digit[j] < p.sum_size[j]) {
        ao += p.sum_a[j];
        bo += p.sum_b[j];
        break;
      }
      digit[j] = 0;
      ao -= p.sum_a[j] * (p.sum_size[j] - 1);
      bo -= p.sum_b[j] * (p.sum_size[j] - 1);
    }
  }
  return acc;
}

void contract_parallel(const Plan& p, const double* a, const double* b, double* out) {
  const std::int64_t total = static_cast<std::int64_t>(p.out_volume);
  const std::size_t rank = p.out_axes.size();
#pragma omp parallel if (total * static_cast<std::int64_t>(p.sum_volume) > 4096)
  {
    std::vector<std::size_t> digit(p.sum_size.size());
#pragma omp for schedule(static)
    for (std::int64_t idx = 0; idx < total; ++idx) {
      std::size_t rem = static_cast<std::size_t>(idx), a0 = 0, b0 = 0;
      for (std::size_t j = rank; j-- > 0;) {
        std::size_t d = rem % p.out_axes[j].size;
        rem /= p.out_axes[j].size;
        a0 += d * p.out_a[j];
        b0 += d * p.out_b[j];
      }
      out[idx] = sum_block(p, a, b, a0, b0, digit);
    }
  }
}

// Reference: one odometer over output axes followed by summed axes.
void contract_serial(const Plan& p, const double* a, const double* b, double* out) {
  std::vector<std::size_t> size, sa, sb;
  for (std::size_t j = 0; j < p.out_axes.size(); ++j) {
    size.push_back(p.out_axes[j].size);
    sa.push_back(p.out_a[j]);
    sb.push_back(p.out_b[j]);
  }
  size.insert(size.end(), p.sum_size.begin(), p.sum_size.end());
  sa.insert(sa.end(), p.sum_a.begin(), p.sum_a.end());
  sb.insert(sb.end(), p.sum_b.begin(), p.sum_b.end());
  std::vector<std::size_t> digit(size.size(), 0);
  std::size_t ao = 0, bo = 0;
  for (std::size_t o = 0; o < p.out_volume; ++o) {
    double acc = 0.0;
    for (std::size_t s = 0; s < p.sum_volume; ++s) {
      acc += a[ao] * b[bo];
      for (std::size_t j = size.size(); j-- > 0;) {
        if (++digit[j] < size[j]) {
          ao += sa[j];
          bo += sb[j];
          break;
        }
        digit[j] = 0;
        ao -= sa[j] * (size[j] - 1);
        bo -= sb[j] * (size[j] - 1);
      }
    }
    out[o] = acc;
  }
}

}  // namespace

Tensor contract(const Tensor& a, const Tensor& b, const std::vector<std::string>& keep,
                Execution exec) {
  Plan plan = make_plan(a, b, keep);
  std::vector<double> out(plan.out_volume, 0.0);
  if (exec == Execution::parallel) {
    contract_parallel(plan, a.data().data(), b.data().data(), out.data());
  } else {
    contract_serial(plan, a.data().data(), b.data().data(), out.data());
  }
  return Tensor(plan.out_axes, std::move(out));
}

}  // namespace cc
