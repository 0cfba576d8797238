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

#ifndef EMMSE_MMSE_HPP
#define EMMSE_MMSE_HPP

/// \file mmse.hpp
/// Per-realization MMSE of a Gaussian source observed on a sampling pattern,
/// the LMMSE estimator itself, and Monte Carlo checks of both.

#include <cstdint>

#include "emmse/model.hpp"
#include "emmse/parallel.hpp"

namespace emmse {

enum class MmseMethod { woodbury, pseudo_inverse };

const char* to_string(MmseMethod method) noexcept;

struct MmseResult {
  double error = 0.0;
  MmseMethod method = MmseMethod::woodbury;
};

struct EmpiricalMse {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Relative cutoff below which an eigenvalue of H K_x H^H + sigma^2 I is
/// treated as zero: lambda < kSingularCutoff * (P + sigma^2).
inline constexpr double kSingularCutoff = 1e-12;

/// MMSE of estimating x from y = Hx + n for one pattern.
///
/// With noise_power > 0 this evaluates tr((Lambda_B^{-1} + U_B^H H^H H U_B / sigma^2)^{-1})
/// on the |B| x |B| support block. With noise_power == 0 it falls back to
/// tr(K_x - K_x H^H (H K_x H^H)^+ H K_x).
MmseResult mmse_for_pattern(const SourceModel& model, const SamplingPattern& pattern, double noise_power);

/// tr(K_x - K_x H^H (H K_x H^H + sigma^2 I)^+ H K_x) evaluated on the full
/// N x N covariance. Slower; kept as an independent route for cross-checks.
double mmse_direct(const SourceModel& model, const SamplingPattern& pattern, double noise_power);

/// LMMSE gain W = K_x H^H (H K_x H^H + sigma^2 I)^+, so that x_hat = W y.
cmat lmmse_gain(const SourceModel& model, const SamplingPattern& pattern, double noise_power);

cvec lmmse_estimate(const SourceModel& model, const SamplingPattern& pattern, double noise_power, const cvec& y);

struct SourceSample {
  cvec x;
  cvec y;
};

/// x = U Lambda^{1/2} w with w ~ CN(0, I); y = Hx + n with n ~ CN(0, sigma^2 I).
SourceSample sample_source(const SourceModel& model, double noise_power, const SamplingPattern& pattern,
                           std::uint64_t seed);

/// Mean and standard error of ||x - x_hat||^2 over `trials` draws; trial i
/// uses derive_seed(seed, i).
EmpiricalMse empirical_mse(const SourceModel& model, const SamplingPattern& pattern, double noise_power,
                           std::size_t trials, std::uint64_t seed, Exec exec = Exec::parallel);

/// Lower bound on the MMSE of any M-sample pattern under any transform:
/// sum of the N - M smallest eigenvalues plus, for each of the M smallest
/// eigenvalues, the scalar Wiener error lambda sigma^2 / (lambda + sigma^2).
double mmse_lower_bound_fixed_m(const Spectrum& spectrum, std::size_t m, double noise_power);

}  // namespace emmse

#endif  // EMMSE_MMSE_HPP
