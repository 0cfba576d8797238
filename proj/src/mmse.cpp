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

#include "emmse/mmse.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "emmse/errors.hpp"

namespace emmse {

namespace {

void check_noise(double noise_power) {
  if (!std::isfinite(noise_power) || noise_power < 0.0)
    throw Error(ErrorKind::invalid_input, "noise_power must be finite and >= 0");
}

// Rows of `m` picked by the pattern (duplicates kept).
cmat select_rows(const cmat& m, const SamplingPattern& pattern) {
  cmat out(static_cast<Eigen::Index>(pattern.size()), m.cols());
  Eigen::Index r = 0;
  for (std::size_t i : pattern.indices()) out.row(r++) = m.row(static_cast<Eigen::Index>(i));
  return out;
}

cmat hermitian_pinv(const cmat& a, double cutoff) {
  Eigen::SelfAdjointEigenSolver<cmat> es(a);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::numerical_failure, "eigendecomposition failed");
  Eigen::VectorXd inv = es.eigenvalues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = inv(i) > cutoff ? 1.0 / inv(i) : 0.0;
  return es.eigenvectors() * inv.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double clamp_error(double e, double power) { return std::clamp(e, 0.0, power); }

}  // namespace

const char* to_string(MmseMethod method) noexcept {
  return method == MmseMethod::woodbury ? "woodbury" : "pseudo_inverse";
}

MmseResult mmse_for_pattern(const SourceModel& model, const SamplingPattern& pattern, double noise_power) {
  check_noise(noise_power);
  pattern.validate(model.size());
  const double power = model.power();
  if (noise_power == 0.0) return {mmse_direct(model, pattern, 0.0), MmseMethod::pseudo_inverse};
  if (pattern.empty()) return {power, MmseMethod::woodbury};

  const cmat a = select_rows(model.support_columns(), pattern);
  const Eigen::VectorXd& lb = model.support_eigenvalues();
  cmat inner = a.adjoint() * a / noise_power;
  for (Eigen::Index i = 0; i < lb.size(); ++i) inner(i, i) += 1.0 / lb(i);
  Eigen::LLT<cmat> llt(inner);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::numerical_failure, "reduced information matrix is not positive definite");
  const cmat inv = llt.solve(cmat::Identity(inner.rows(), inner.cols()));
  return {clamp_error(inv.trace().real(), power), MmseMethod::woodbury};
}

double mmse_direct(const SourceModel& model, const SamplingPattern& pattern, double noise_power) {
  check_noise(noise_power);
  pattern.validate(model.size());
  const double power = model.power();
  if (pattern.empty()) return power;
  const cmat k = covariance(model);
  const cmat hk = select_rows(k, pattern);  // H K_x
  cmat ky = select_rows(hk.adjoint(), pattern).adjoint();  // H K_x H^H
  ky = (ky + ky.adjoint()) * 0.5;
  ky.diagonal().array() += noise_power;
  const cmat ky_pinv = hermitian_pinv(ky, kSingularCutoff * (power + noise_power));
  const double explained = (ky_pinv * hk * hk.adjoint()).trace().real();
  return clamp_error(k.trace().real() - explained, power);
}

cmat lmmse_gain(const SourceModel& model, const SamplingPattern& pattern, double noise_power) {
  check_noise(noise_power);
  pattern.validate(model.size());
  const auto n = static_cast<Eigen::Index>(model.size());
  if (pattern.empty()) return cmat::Zero(n, 0);
  const cmat k = covariance(model);
  const cmat hk = select_rows(k, pattern);
  cmat ky = select_rows(hk.adjoint(), pattern).adjoint();
  ky = (ky + ky.adjoint()) * 0.5;
  ky.diagonal().array() += noise_power;
  return hk.adjoint() * hermitian_pinv(ky, kSingularCutoff * (model.power() + noise_power));
}

cvec lmmse_estimate(const SourceModel& model, const SamplingPattern& pattern, double noise_power, const cvec& y) {
  if (static_cast<std::size_t>(y.size()) != pattern.size()) {
    std::ostringstream os;
    os << "observation has length " << y.size() << " but the pattern has " << pattern.size() << " indices";
    throw Error(ErrorKind::invalid_input, os.str());
  }
  if (pattern.empty()) return cvec::Zero(static_cast<Eigen::Index>(model.size()));
  return lmmse_gain(model, pattern, noise_power) * y;
}

namespace {

SourceSample draw(const SourceModel& model, const Eigen::VectorXd& sqrt_lambda, double noise_power,
                  const SamplingPattern& pattern, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const auto n = static_cast<Eigen::Index>(model.size());
  cvec w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(gen);
    const double im = normal(gen);
    w(i) = cplx(re, im) * sqrt_lambda(i);
  }
  SourceSample s;
  s.x = model.transform().matrix() * w;
  s.y.resize(static_cast<Eigen::Index>(pattern.size()));
  const double sigma = std::sqrt(noise_power);
  Eigen::Index r = 0;
  for (std::size_t i : pattern.indices()) {
    const double re = normal(gen);
    const double im = normal(gen);
    s.y(r++) = s.x(static_cast<Eigen::Index>(i)) + sigma * cplx(re, im);
  }
  return s;
}

Eigen::VectorXd sqrt_spectrum(const Spectrum& spectrum) {
  Eigen::VectorXd s(static_cast<Eigen::Index>(spectrum.size()));
  for (std::size_t i = 0; i < spectrum.size(); ++i) s(static_cast<Eigen::Index>(i)) = std::sqrt(spectrum[i]);
  return s;
}

}  // namespace

SourceSample sample_source(const SourceModel& model, double noise_power, const SamplingPattern& pattern,
                           std::uint64_t seed) {
  check_noise(noise_power);
  pattern.validate(model.size());
  return draw(model, sqrt_spectrum(model.spectrum()), noise_power, pattern, seed);
}

EmpiricalMse empirical_mse(const SourceModel& model, const SamplingPattern& pattern, double noise_power,
                           std::size_t trials, std::uint64_t seed, Exec exec) {
  if (trials < 2) throw Error(ErrorKind::invalid_input, "empirical_mse needs at least 2 trials");
  const cmat gain = lmmse_gain(model, pattern, noise_power);
  const Eigen::VectorXd sl = sqrt_spectrum(model.spectrum());
  const auto errors = map_indexed(exec, trials, [&](std::size_t i) {
    const SourceSample s = draw(model, sl, noise_power, pattern, derive_seed(seed, i));
    const cvec xhat = pattern.empty() ? cvec::Zero(s.x.size()) : cvec(gain * s.y);
    return (s.x - xhat).squaredNorm();
  });
  const SampleStats st = mean_and_std_error(errors);
  return {st.mean, st.std_error, trials, seed};
}

double mmse_lower_bound_fixed_m(const Spectrum& spectrum, std::size_t m, double noise_power) {
  const std::size_t n = spectrum.size();
  if (m > n) {
    std::ostringstream os;
    os << "M = " << m << " exceeds N = " << n;
    throw Error(ErrorKind::invalid_input, os.str());
  }
  if (!(noise_power > 0.0) || !std::isfinite(noise_power))
    throw Error(ErrorKind::invalid_input, "the fixed-M lower bound needs noise_power > 0");
  const auto sorted = spectrum.sorted_descending();
  double tail = 0.0;
  for (std::size_t i = m; i < n; ++i) tail += sorted[i];
  double wiener = 0.0;
  for (std::size_t i = n - m; i < n; ++i) {
    const double l = sorted[i];
    if (l > 0.0) wiener += l * noise_power / (l + noise_power);
  }
  return tail + wiener;
}

}  // namespace emmse
