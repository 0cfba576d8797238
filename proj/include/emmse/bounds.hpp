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

#ifndef EMMSE_BOUNDS_HPP
#define EMMSE_BOUNDS_HPP

/// \file bounds.hpp
/// High-probability MMSE bounds under random sampling and the Monte Carlo
/// tools that check them.
///
/// The sufficient conditions carry very large absolute constants
/// (C1 <= 50963, C2 <= 456), so at desk scale the conditions are reported
/// with their numeric margins rather than assumed.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "emmse/model.hpp"
#include "emmse/parallel.hpp"

namespace emmse {

inline constexpr double kSparseC1 = 50963.0;
inline constexpr double kSparseC2 = 456.0;

/// P / (1 + (1/sigma^2)(0.5 M/N)(P/|B|)): the flat-support bound that holds
/// with high probability once M is large enough.
double flat_support_bound(double power, std::size_t support_size, std::size_t m, std::size_t n, double noise_power);

/// ceil(|B| mu^2 max(C1 ln|B|, C2 ln(3/delta))): samples sufficient for the
/// flat-support bound.
std::size_t flat_sample_condition(std::size_t support_size, double mu, double delta_prob, double c1 = kSparseC1,
                                  double c2 = kSparseC2);

struct DofBoundParams {
  double delta = 0.9;    // energy fraction defining D
  double kappa = 2.0;    // oversizing of the sparse set, 1 <= kappa < N/D
  double theta = 0.5;    // restricted-isometry slack, (0, 0.5]
  double gamma = 0.5;    // compressible-vector shrink, (0, 1)
  double rho = 0.1;      // incompressibility level, (0, 1)
  double epsilon = 0.1;  // failure probability, (0, 1)
  std::size_t m = 1;
  std::size_t n = 1;
  double noise_power = 1.0;
  double c1 = kSparseC1;
  double c2 = kSparseC2;

  void validate() const;
};

struct BoundCondition {
  std::string name;
  bool satisfied = false;
  double margin = 0.0;  // lhs - rhs; satisfied iff margin >= 0 (> 0 for strict ones)
};

struct BoundReport {
  double bound_value = 0.0;  // +inf when the incompressible branch is undefined
  std::vector<BoundCondition> conditions;
  std::map<std::string, double> constants;

  bool all_satisfied() const;
};

/// Upper bound (1-delta) P + max(P / C_I, P / (1/C_S + gamma^2 C_kD^2 P / (sigma^2 D)))
/// on the MMSE for effectively D-dimensional sources, with every sufficient
/// condition evaluated. C_I follows the incompressible-vector chain,
/// C_I = (0.5 rho^2 kappa - 1) 0.5 rho^2 (N - D) / (C_lambda^I N).
BoundReport dof_mmse_bound(const Spectrum& spectrum, const DofBoundParams& params, double mu);

/// Claimed lower bound min(C_I D/P, D/(C_S P) + gamma^2 C_kD^2 / sigma^2) on
/// lambda_min(Lambda^{-1} + (HU)^H HU / sigma^2); 0 when C_I <= 0.
double eigmin_lower_bound(const Spectrum& spectrum, const DofBoundParams& params, double mu);

/// (1 - gamma) C_kD / (C_kD + 1)
double compressible_rho_max(double gamma, double c_kd);

struct SparseConditionResult {
  bool satisfied = false;
  double margin_log = 0.0;     // M/ln(10M) - C1 theta^-2 mu^2 kD ln^2(100 kD) ln(4N)
  double margin_linear = 0.0;  // M - C2 theta^-2 mu^2 kD ln(1/eps)
};

SparseConditionResult sparse_condition_check(double m, double n, double kappa_d, double mu, double theta,
                                             double epsilon);

/// Fraction of random size-M patterns whose MMSE is >= bound_value.
/// replacement = true draws M indices independently (duplicates kept).
double empirical_tail(const SourceModel& model, std::size_t m, double noise_power, double bound_value,
                      std::size_t trials, std::uint64_t seed, bool replacement, Exec exec = Exec::parallel);

struct EigminQuantiles {
  double min = 0.0;
  double q01 = 0.0;
  double median = 0.0;
};

/// Quantiles of lambda_min(Lambda^{-1} + (HU)^H HU / sigma^2) over patterns of
/// M draws with replacement. Needs a full-support spectrum.
EigminQuantiles empirical_eigmin(const SourceModel& model, std::size_t m, double noise_power, std::size_t trials,
                                 std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace emmse

#endif  // EMMSE_BOUNDS_HPP
