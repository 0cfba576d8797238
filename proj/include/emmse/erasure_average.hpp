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

#ifndef EMMSE_ERASURE_AVERAGE_HPP
#define EMMSE_ERASURE_AVERAGE_HPP

/// \file erasure_average.hpp
/// MMSE averaged over random erasure patterns: exact subset enumeration
/// (OpenMP kernel with a serial reference), Monte Carlo, and closed forms
/// for the flat-spectrum, rank-1 and noiseless worst-case settings.

#include <cstdint>
#include <random>
#include <vector>

#include "emmse/mmse.hpp"
#include "emmse/model.hpp"
#include "emmse/parallel.hpp"

namespace emmse {

/// Largest N for which 2^N patterns are enumerated exactly.
inline constexpr std::size_t kMaxExactDimension = 20;

/// e[M] = sum of the per-pattern MMSE over all size-M subsets, M = 0..N.
struct ErrorByCount {
  std::vector<double> e;
};

ErrorByCount error_by_count(const SourceModel& model, double noise_power, Exec exec = Exec::parallel);

/// Probability-weighted subsets of {0..N-1} (as bitmasks) for the channel's
/// pattern distribution. Subsets of zero weight are omitted.
struct WeightedMask {
  std::uint64_t mask;
  double weight;
};
std::vector<WeightedMask> channel_pattern_weights(const ChannelSpec& channel, std::size_t n);

/// E_H[mmse] for scalar, bernoulli and uniform_M channels by exact enumeration.
double average_mmse_exact(const SourceModel& model, const ChannelSpec& channel, Exec exec = Exec::parallel);

/// Draws one pattern from the channel's distribution.
SamplingPattern draw_pattern(const ChannelSpec& channel, std::size_t n, std::mt19937_64& gen);

EmpiricalMse average_mmse_mc(const SourceModel& model, const ChannelSpec& channel, std::size_t trials,
                             std::uint64_t seed, Exec exec = Exec::parallel);

/// Minimum scalar-channel average error for a flat spectrum on |B| components,
/// attained by any constant-diagonal covariance (e.g. a DFT model).
double scalar_flat_optimum(std::size_t n, std::size_t support_size, double power, double noise_power);

/// Bernoulli-channel average error of a rank-1 source whose eigenvector has
/// |u_i|^2 = 1/N: sum_k C(N,k) p^k (1-p)^(N-k) / (1/P + k/(N sigma^2)).
double rank1_average(std::size_t n, double power, double noise_power, double p);

/// Largest noiseless average error over all transforms (attained by U = I):
/// P - P/N for the scalar channel, (1-p) P for the Bernoulli channel.
double worst_unitary_value(const Spectrum& spectrum, const ChannelSpec& channel);

/// (1/N) sum_l Pi^l K (Pi^l)^H over cyclic shifts Pi; circulant, same trace.
cmat circulant_average_inverse(const cmat& k_inv);

}  // namespace emmse

#endif  // EMMSE_ERASURE_AVERAGE_HPP
