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

#ifndef EMMSE_MODEL_HPP
#define EMMSE_MODEL_HPP

/// \file model.hpp
/// Data model: eigenvalue spectra, unitary transforms, source models
/// K_x = U diag(lambda) U^H, erasure channels and sampling patterns.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace emmse {

using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using cplx = std::complex<double>;

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kSupportEpsilon = 1e-14;

/// Nonnegative eigenvalues of a covariance matrix, kept in caller order.
/// Operations that need magnitude order sort a copy.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> lambdas);

  std::size_t size() const noexcept { return lambdas_.size(); }
  double operator[](std::size_t i) const { return lambdas_[i]; }
  std::span<const double> values() const noexcept { return lambdas_; }
  double trace() const noexcept { return trace_; }
  double max() const noexcept;

  /// Indices with lambda_i > eps * P.
  std::vector<std::size_t> support(double eps = kSupportEpsilon) const;
  std::vector<double> sorted_descending() const;

 private:
  std::vector<double> lambdas_;
  double trace_ = 0.0;
};

/// Square complex matrix with max|U^H U - I| <= tolerance.
class UnitaryTransform {
 public:
  explicit UnitaryTransform(cmat entries, double tolerance = kUnitaryTolerance);

  static UnitaryTransform identity(std::size_t n);

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const cmat& matrix() const noexcept { return entries_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  cmat entries_;
  double tolerance_;
};

/// max_{ij} |(U^H U - I)_{ij}|
double unitarity_residual(const cmat& u);

/// Unitary factor of a QR factorization with R's diagonal made real positive.
/// Used both for Haar sampling and as the optimizer's retraction.
cmat orthonormalize(const cmat& x);

class SourceModel {
 public:
  SourceModel(UnitaryTransform transform, Spectrum spectrum);

  std::size_t size() const noexcept { return spectrum_.size(); }
  const UnitaryTransform& transform() const noexcept { return transform_; }
  const Spectrum& spectrum() const noexcept { return spectrum_; }
  double power() const noexcept { return spectrum_.trace(); }

  const std::vector<std::size_t>& support() const noexcept { return support_; }
  /// U_B: the columns of U on the support, N x |B|.
  const cmat& support_columns() const noexcept { return u_b_; }
  /// Lambda_{x,B} as a vector.
  const Eigen::VectorXd& support_eigenvalues() const noexcept { return lambda_b_; }

 private:
  UnitaryTransform transform_;
  Spectrum spectrum_;
  std::vector<std::size_t> support_;
  cmat u_b_;
  Eigen::VectorXd lambda_b_;
};

enum class ChannelMode { scalar, bernoulli, uniform_m, with_replacement_m };

const char* to_string(ChannelMode mode) noexcept;

struct ChannelSpec {
  double noise_power = 1.0;
  double p = 0.5;  // bernoulli only
  ChannelMode mode = ChannelMode::bernoulli;
  std::size_t m = 0;  // uniform_m / with_replacement_m only

  static ChannelSpec scalar(double noise_power);
  static ChannelSpec bernoulli(double noise_power, double p);
  static ChannelSpec uniform(double noise_power, std::size_t m);
  static ChannelSpec with_replacement(double noise_power, std::size_t m);

  /// Throws invalid-input when a field is out of range for dimension n.
  void validate(std::size_t n) const;
};

/// Observed row indices of the identity, i.e. a realization of H.
/// Subset patterns are stored strictly increasing; patterns drawn with
/// replacement keep their draw order and duplicates.
class SamplingPattern {
 public:
  SamplingPattern() = default;
  explicit SamplingPattern(std::vector<std::size_t> indices, bool with_replacement = false);

  static SamplingPattern full(std::size_t n);
  static SamplingPattern from_mask(std::uint64_t mask, std::size_t n);

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool with_replacement() const noexcept { return with_replacement_; }
  std::span<const std::size_t> indices() const noexcept { return indices_; }

  /// Throws invalid-pattern if an index is >= n.
  void validate(std::size_t n) const;

 private:
  std::vector<std::size_t> indices_;
  bool with_replacement_ = false;
};

UnitaryTransform make_dft(std::size_t n);
double coherence(const UnitaryTransform& u);
std::size_t effective_dof(const Spectrum& spectrum, double delta);
cmat covariance(const SourceModel& model);
UnitaryTransform random_unitary(std::size_t n, std::uint64_t seed);

/// Eigendecomposition of a Hermitian PSD matrix into a SourceModel.
/// Negative round-off eigenvalues above -tol * trace are clamped to zero.
SourceModel model_from_covariance(const cmat& k, double tol = 1e-12);

}  // namespace emmse

#endif  // EMMSE_MODEL_HPP
