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

#include "emmse/parallel.hpp"

#include <cassert>
#include <cmath>

namespace emmse {

void set_num_threads(int k) {
  assert(k > 0);
#ifdef _OPENMP
  omp_set_num_threads(k);
#else
  (void)k;
#endif
}

int num_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double ordered_sum(std::span<const double> values) noexcept {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

SampleStats mean_and_std_error(std::span<const double> values) noexcept {
  SampleStats st;
  const auto n = values.size();
  if (n == 0) return st;
  st.mean = ordered_sum(values) / static_cast<double>(n);
  if (n < 2) return st;
  double ss = 0.0;
  for (double v : values) ss += (v - st.mean) * (v - st.mean);
  const double var = ss / static_cast<double>(n - 1);
  st.std_error = std::sqrt(var / static_cast<double>(n));
  return st;
}

}  // namespace emmse
