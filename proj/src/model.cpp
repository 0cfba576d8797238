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

#include "emmse/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "emmse/errors.hpp"

namespace emmse {

Spectrum::Spectrum(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) throw Error(ErrorKind::invalid_dimension, "spectrum must be non-empty");
  for (std::size_t i = 0; i < lambdas_.size(); ++i) {
    if (!std::isfinite(lambdas_[i]) || lambdas_[i] < 0.0) {
      std::ostringstream os;
      os << "eigenvalue " << i << " = " << lambdas_[i] << " is not a finite nonnegative number";
      throw Error(ErrorKind::invalid_input, os.str());
    }
    trace_ += lambdas_[i];
  }
  if (!(trace_ > 0.0)) throw Error(ErrorKind::invalid_input, "spectrum has no positive eigenvalue");
}

double Spectrum::max() const noexcept { return *std::max_element(lambdas_.begin(), lambdas_.end()); }

std::vector<std::size_t> Spectrum::support(double eps) const {
  std::vector<std::size_t> b;
  for (std::size_t i = 0; i < lambdas_.size(); ++i)
    if (lambdas_[i] > eps * trace_) b.push_back(i);
  return b;
}

std::vector<double> Spectrum::sorted_descending() const {
  auto s = lambdas_;
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

double unitarity_residual(const cmat& u) {
  const cmat g = u.adjoint() * u - cmat::Identity(u.cols(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

UnitaryTransform::UnitaryTransform(cmat entries, double tolerance)
    : entries_(std::move(entries)), tolerance_(tolerance) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw Error(ErrorKind::invalid_dimension, "transform must be a non-empty square matrix");
  if (!entries_.allFinite()) throw Error(ErrorKind::invalid_input, "transform has non-finite entries");
  const double r = unitarity_residual(entries_);
  if (!(r <= tolerance_)) {
    std::ostringstream os;
    os << "matrix is not unitary: max|U^H U - I| = " << r << " > " << tolerance_;
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

UnitaryTransform UnitaryTransform::identity(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_dimension, "N must be >= 1");
  return UnitaryTransform(cmat::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

cmat orthonormalize(const cmat& x) {
  Eigen::HouseholderQR<cmat> qr(x);
  const auto n = x.cols();
  cmat q = qr.householderQ() * cmat::Identity(x.rows(), n);
  const cmat& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    const double a = std::abs(d);
    if (a > 0.0) q.col(i) *= d / a;
  }
  return q;
}

SourceModel::SourceModel(UnitaryTransform transform, Spectrum spectrum)
    : transform_(std::move(transform)), spectrum_(std::move(spectrum)) {
  if (transform_.size() != spectrum_.size()) {
    std::ostringstream os;
    os << "transform is " << transform_.size() << "x" << transform_.size() << " but spectrum has "
       << spectrum_.size() << " entries";
    throw Error(ErrorKind::invalid_dimension, os.str());
  }
  support_ = spectrum_.support();
  const auto n = static_cast<Eigen::Index>(size());
  const auto b = static_cast<Eigen::Index>(support_.size());
  u_b_.resize(n, b);
  lambda_b_.resize(b);
  for (Eigen::Index j = 0; j < b; ++j) {
    u_b_.col(j) = transform_.matrix().col(static_cast<Eigen::Index>(support_[j]));
    lambda_b_(j) = spectrum_[support_[j]];
  }
}

const char* to_string(ChannelMode mode) noexcept {
  switch (mode) {
    case ChannelMode::scalar: return "scalar";
    case ChannelMode::bernoulli: return "bernoulli";
    case ChannelMode::uniform_m: return "uniform_M";
    case ChannelMode::with_replacement_m: return "with_replacement_M";
  }
  return "unknown";
}

ChannelSpec ChannelSpec::scalar(double noise_power) {
  return {noise_power, 0.0, ChannelMode::scalar, 1};
}
ChannelSpec ChannelSpec::bernoulli(double noise_power, double p) {
  return {noise_power, p, ChannelMode::bernoulli, 0};
}
ChannelSpec ChannelSpec::uniform(double noise_power, std::size_t m) {
  return {noise_power, 0.0, ChannelMode::uniform_m, m};
}
ChannelSpec ChannelSpec::with_replacement(double noise_power, std::size_t m) {
  return {noise_power, 0.0, ChannelMode::with_replacement_m, m};
}

void ChannelSpec::validate(std::size_t n) const {
  if (!std::isfinite(noise_power) || noise_power < 0.0)
    throw Error(ErrorKind::invalid_input, "noise_power must be finite and >= 0");
  if (mode == ChannelMode::bernoulli && !(p >= 0.0 && p <= 1.0))
    throw Error(ErrorKind::invalid_input, "erasure parameter p must lie in [0, 1]");
  if (mode == ChannelMode::uniform_m && m > n) {
    std::ostringstream os;
    os << "uniform_M mode needs M <= N, got M = " << m << ", N = " << n;
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

SamplingPattern::SamplingPattern(std::vector<std::size_t> indices, bool with_replacement)
    : indices_(std::move(indices)), with_replacement_(with_replacement) {
  if (with_replacement_) return;
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw Error(ErrorKind::invalid_pattern, "repeated index in a subset pattern");
}

SamplingPattern SamplingPattern::full(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return SamplingPattern(std::move(idx));
}

SamplingPattern SamplingPattern::from_mask(std::uint64_t mask, std::size_t n) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (std::uint64_t{1} << i)) idx.push_back(i);
  return SamplingPattern(std::move(idx));
}

void SamplingPattern::validate(std::size_t n) const {
  for (std::size_t i : indices_) {
    if (i >= n) {
      std::ostringstream os;
      os << "index " << i << " out of range for N = " << n;
      throw Error(ErrorKind::invalid_pattern, os.str());
    }
  }
}

UnitaryTransform make_dft(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_dimension, "N must be >= 1");
  const auto ni = static_cast<Eigen::Index>(n);
  cmat f(ni, ni);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < n; ++k) {
      // reduce t*k mod N first so the phase stays accurate for larger N
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((t * k) % n) / static_cast<double>(n);
      f(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = scale * std::polar(1.0, phase);
    }
  }
  return UnitaryTransform(std::move(f));
}

double coherence(const UnitaryTransform& u) {
  return std::sqrt(static_cast<double>(u.size())) * u.matrix().cwiseAbs().maxCoeff();
}

std::size_t effective_dof(const Spectrum& spectrum, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorKind::invalid_input, "delta must lie in (0, 1]");
  const auto sorted = spectrum.sorted_descending();
  const double target = delta * spectrum.trace();
  // relative slack absorbs round-off in the running sum, e.g. 0.5 + 0.3 vs 0.8
  const double slack = 1e-12 * spectrum.trace();
  double acc = 0.0;
  for (std::size_t d = 0; d < sorted.size(); ++d) {
    acc += sorted[d];
    if (acc >= target - slack) return d + 1;
  }
  return sorted.size();
}

cmat covariance(const SourceModel& model) {
  const cmat& ub = model.support_columns();
  const cmat k = ub * model.support_eigenvalues().cast<cplx>().asDiagonal() * ub.adjoint();
  return (k + k.adjoint()) * 0.5;
}

UnitaryTransform random_unitary(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::invalid_dimension, "N must be >= 1");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const auto ni = static_cast<Eigen::Index>(n);
  cmat z(ni, ni);
  for (Eigen::Index j = 0; j < ni; ++j)
    for (Eigen::Index i = 0; i < ni; ++i) {
      const double re = normal(gen);
      const double im = normal(gen);
      z(i, j) = cplx(re, im);
    }
  return UnitaryTransform(orthonormalize(z));
}

SourceModel model_from_covariance(const cmat& k, double tol) {
  if (k.rows() == 0 || k.rows() != k.cols()) throw Error(ErrorKind::invalid_dimension, "covariance must be square");
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  if ((k - k.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error(ErrorKind::invalid_input, "covariance is not Hermitian");
  Eigen::SelfAdjointEigenSolver<cmat> es((k + k.adjoint()) * 0.5);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::numerical_failure, "eigendecomposition failed");
  const double trace = k.trace().real();
  std::vector<double> lambdas(static_cast<std::size_t>(k.rows()));
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    double l = es.eigenvalues()(i);
    if (l < -tol * std::abs(trace)) throw Error(ErrorKind::invalid_input, "covariance is not positive semi-definite");
    lambdas[static_cast<std::size_t>(i)] = std::max(l, 0.0);
  }
  return SourceModel(UnitaryTransform(orthonormalize(es.eigenvectors())), Spectrum(std::move(lambdas)));
}

}  // namespace emmse
