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

#ifndef EMMSE_PARALLEL_HPP
#define EMMSE_PARALLEL_HPP

/// \file parallel.hpp
/// Execution policy and the indexed-map kernel shared by every data-parallel
/// loop in the library (subset enumeration, Monte Carlo trials).
///
/// Each kernel writes one result per index into a preallocated vector; all
/// reductions are then performed serially in index order. The parallel and
/// serial paths therefore produce bit-identical results for any thread count,
/// and the serial path is kept as the reference the tests compare against.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace emmse {

enum class Exec { serial, parallel };

/// Sets the OpenMP worker count for subsequent parallel kernels (k >= 1).
void set_num_threads(int k);
int num_threads();

/// Counter-based seed derivation: trial `index` of a run seeded with `seed`
/// gets splitmix64(seed + (index + 1) * golden_gamma). Any trial can be
/// regenerated in isolation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

template <class F>
auto map_indexed(Exec exec, std::size_t count, F&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using T = decltype(fn(std::size_t{}));
  std::vector<T> out(count);
  if (exec == Exec::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
#ifdef _OPENMP
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(emmse_map_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
#else
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
#endif
  return out;
}

/// Sum in index order.
double ordered_sum(std::span<const double> values) noexcept;

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean and standard error (sample std / sqrt(n)), accumulated in index order.
SampleStats mean_and_std_error(std::span<const double> values) noexcept;

}  // namespace emmse

#endif  // EMMSE_PARALLEL_HPP
