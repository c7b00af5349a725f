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

// Serial reference loops versus the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "cc/classical.hpp"
#include "cc/dist.hpp"
#include "cc/quantum.hpp"
#include "cc/scenarios.hpp"
#include "cc/tensor.hpp"

namespace {

using cc::Execution;

cc::Tensor random_tensor(std::vector<cc::Axis> axes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> data(cc::volume(axes));
  for (auto& x : data) x = u(rng);
  return cc::Tensor(std::move(axes), std::move(data));
}

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

void BM_Contract(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(1));
  const auto a = random_tensor({{"i", n}, {"j", n}, {"k", 8}}, 1);
  const auto b = random_tensor({{"j", n}, {"k", 8}, {"l", n}}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(cc::contract(a, b, {"i", "l"}, mode(state)));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_Contract)->ArgsProduct({{0, 1}, {16, 48}})->Unit(benchmark::kMillisecond);

void BM_Marginal(benchmark::State& state) {
  std::vector<cc::Variable> vars;
  for (int k = 0; k < 20; ++k) vars.push_back({"v" + std::to_string(k), 2});
  const auto p = cc::JointDistribution::uniform(vars);
  for (auto _ : state) benchmark::DoNotOptimize(cc::marginal(p, {"v1", "v7", "v13"}, mode(state)));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_Marginal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ClassicalEvaluate(benchmark::State& state) {
  const auto m = cc::classical::random_model(cc::scenarios::triangle(), 4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(cc::classical::evaluate(m, std::nullopt, mode(state)));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_ClassicalEvaluate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_QuantumEvaluate(benchmark::State& state) {
  const auto m = cc::quantum::random_model(cc::scenarios::triangle(), 2, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(cc::quantum::evaluate(m, std::nullopt, mode(state)));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_QuantumEvaluate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
