// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The erasure-mmse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Serial reference vs OpenMP kernels. Arguments: {dimension or trials, exec},
// exec 0 = serial, 1 = parallel. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "emmse/bounds.hpp"
#include "emmse/erasure_average.hpp"
#include "emmse/mmse.hpp"

using namespace emmse;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::serial : Exec::parallel; }

SourceModel geometric_model(std::size_t n) {
  std::vector<double> l(n);
  double v = 1.0;
  for (double& x : l) x = (v *= 0.8);
  return SourceModel(random_unitary(n, 17), Spectrum(l));
}

void BM_ErrorByCount(benchmark::State& state) {
  const SourceModel m = geometric_model(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(error_by_count(m, 0.5, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}

void BM_EmpiricalMse(benchmark::State& state) {
  const SourceModel m = geometric_model(16);
  const SamplingPattern p({0, 3, 5, 8, 13});
  for (auto _ : state)
    benchmark::DoNotOptimize(empirical_mse(m, p, 0.5, static_cast<std::size_t>(state.range(0)), 7, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AverageMc(benchmark::State& state) {
  const SourceModel m = geometric_model(16);
  const auto ch = ChannelSpec::bernoulli(0.5, 0.4);
  for (auto _ : state)
    benchmark::DoNotOptimize(average_mmse_mc(m, ch, static_cast<std::size_t>(state.range(0)), 7, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EmpiricalTail(benchmark::State& state) {
  const SourceModel m = geometric_model(32);
  for (auto _ : state)
    benchmark::DoNotOptimize(empirical_tail(m, 16, 0.1, 0.5, static_cast<std::size_t>(state.range(0)), 7, true, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ErrorByCount)->ArgsProduct({{10, 14}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmpiricalMse)->ArgsProduct({{20000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AverageMc)->ArgsProduct({{5000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmpiricalTail)->ArgsProduct({{2000}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
