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

#include "emmse/cwss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "emmse/errors.hpp"

namespace emmse {

namespace {

void check_divides(std::size_t n, std::size_t delta_n) {
  if (delta_n == 0 || n % delta_n != 0) {
    std::ostringstream os;
    os << "sampling period " << delta_n << " does not divide N = " << n;
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

void check_noise(double noise_power) {
  if (!std::isfinite(noise_power) || noise_power < 0.0)
    throw Error(ErrorKind::invalid_input, "noise_power must be finite and >= 0");
}

}  // namespace

AliasDecomposition alias_decompose(const Spectrum& spectrum, std::size_t delta_n) {
  const std::size_t n = spectrum.size();
  check_divides(n, delta_n);
  AliasDecomposition d;
  d.delta_n = delta_n;
  d.m = n / delta_n;
  d.groups.assign(d.m, std::vector<double>(delta_n));
  d.group_power.assign(d.m, 0.0);
  for (std::size_t k = 0; k < d.m; ++k) {
    for (std::size_t i = 0; i < delta_n; ++i) {
      const double l = spectrum[i * d.m + k];
      d.groups[k][i] = l;
      d.group_power[k] += l;
    }
  }
  return d;
}

double per_band_error(const std::vector<double>& group, double noise_power) {
  if (group.empty()) throw Error(ErrorKind::invalid_input, "alias group must be non-empty");
  check_noise(noise_power);
  double power = 0.0;
  double sq = 0.0;
  for (double l : group) {
    power += l;
    sq += l * l;
  }
  const double denom = power + static_cast<double>(group.size()) * noise_power;
  if (denom == 0.0) return 0.0;  // silent band, noiseless
  return power - sq / denom;
}

double equidistant_mmse(const Spectrum& spectrum, std::size_t delta_n, double noise_power) {
  check_noise(noise_power);
  const AliasDecomposition d = alias_decompose(spectrum, delta_n);
  double total = 0.0;
  for (const auto& g : d.groups) total += per_band_error(g, noise_power);
  return total;
}

double bandpass_error(double power, std::size_t band, std::size_t m, std::size_t n, double noise_power) {
  if (band == 0 || n == 0 || m > n) throw Error(ErrorKind::invalid_input, "need 1 <= |B|, M <= N");
  if (m < band) {
    std::ostringstream os;
    os << "closed form needs M >= |B|, got M = " << m << ", |B| = " << band;
    throw Error(ErrorKind::precondition_violation, os.str());
  }
  check_noise(noise_power);
  if (noise_power == 0.0) return 0.0;
  const double snr = (power / static_cast<double>(band)) * (static_cast<double>(m) / static_cast<double>(n)) /
                     noise_power;
  return power / (1.0 + snr);
}

AliasFreeSet best_alias_free_set(const Spectrum& spectrum, std::size_t delta_n) {
  const AliasDecomposition d = alias_decompose(spectrum, delta_n);
  AliasFreeSet j;
  for (std::size_t k = 0; k < d.m; ++k) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < delta_n; ++i)
      if (d.groups[k][i] > d.groups[k][best]) best = i;
    j.indices.push_back(best * d.m + k);
    j.power += d.groups[k][best];
  }
  std::sort(j.indices.begin(), j.indices.end());
  return j;
}

double aliasing_free_bound(const Spectrum& spectrum, std::size_t delta_n) {
  const AliasFreeSet j = best_alias_free_set(spectrum, delta_n);
  return 2.0 * std::max(0.0, spectrum.trace() - j.power);
}

SamplingPattern equidistant_pattern(std::size_t n, std::size_t delta_n) {
  check_divides(n, delta_n);
  std::vector<std::size_t> idx;
  for (std::size_t t = 0; t < n; t += delta_n) idx.push_back(t);
  return SamplingPattern(std::move(idx));
}

}  // namespace emmse
