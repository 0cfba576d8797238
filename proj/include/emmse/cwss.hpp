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

#ifndef EMMSE_CWSS_HPP
#define EMMSE_CWSS_HPP

/// \file cwss.hpp
/// Equidistant sampling of circularly wide-sense stationary sources.
///
/// The covariance is circulant, so U is the DFT and lambda_k is the power at
/// frequency k (never re-sorted here). Keeping every Delta_N-th sample,
/// starting at index 0, folds frequencies {iM + k : i = 0..Delta_N-1} onto
/// one alias group k of the M = N / Delta_N observed frequencies, and the
/// error separates into independent per-group terms.

#include <cstddef>
#include <vector>

#include "emmse/model.hpp"

namespace emmse {

struct AliasDecomposition {
  std::size_t m = 0;        // samples kept, N / delta_n
  std::size_t delta_n = 0;  // sampling period
  std::vector<std::vector<double>> groups;  // groups[k][i] = lambda_{iM+k}
  std::vector<double> group_power;          // P^k

  /// Eigenvalue k of the observation covariance: P^k / delta_n.
  double observed_eigenvalue(std::size_t k) const { return group_power[k] / static_cast<double>(delta_n); }
};

struct AliasFreeSet {
  std::vector<std::size_t> indices;  // ascending
  double power = 0.0;
};

AliasDecomposition alias_decompose(const Spectrum& spectrum, std::size_t delta_n);

/// sum_k [P^k - sum_i lambda_{iM+k}^2 / (P^k + delta_n sigma^2)]; with
/// sigma^2 = 0 the groups with P^k = 0 contribute nothing.
double equidistant_mmse(const Spectrum& spectrum, std::size_t delta_n, double noise_power);

/// Error of one alias group; the group size is the sampling period.
double per_band_error(const std::vector<double>& group, double noise_power);

/// P / (1 + (P/|B|)(M/N)/sigma^2) for a flat low-pass spectrum, valid for M >= |B|.
double bandpass_error(double power, std::size_t band, std::size_t m, std::size_t n, double noise_power);

/// One largest-eigenvalue index per alias group (ties go to the lower index).
AliasFreeSet best_alias_free_set(const Spectrum& spectrum, std::size_t delta_n);

/// Noiseless upper bound 2 (P - P_J) for the best alias-free set J.
double aliasing_free_bound(const Spectrum& spectrum, std::size_t delta_n);

/// {0, delta_n, 2 delta_n, ...}
SamplingPattern equidistant_pattern(std::size_t n, std::size_t delta_n);

}  // namespace emmse

#endif  // EMMSE_CWSS_HPP
