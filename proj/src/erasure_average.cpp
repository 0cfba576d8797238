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

#include "emmse/erasure_average.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "emmse/errors.hpp"

namespace emmse {

namespace {

void check_exact_size(std::size_t n) {
  if (n > kMaxExactDimension) {
    std::ostringstream os;
    os << "N = " << n << " exceeds the exact-enumeration cap " << kMaxExactDimension << "; use Monte Carlo";
    throw Error(ErrorKind::resource_limit, os.str());
  }
}

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// C(n,k) p^k (1-p)^(n-k) in log space; exact zero for the p in {0,1} edges.
double binomial_weight(std::size_t n, std::size_t k, double p) {
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double lw = log_binomial(n, k) + static_cast<double>(k) * std::log(p) +
                    static_cast<double>(n - k) * std::log1p(-p);
  return std::exp(lw);
}

double pattern_probability(std::size_t n, std::size_t k, double p) {
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  return std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(n - k));
}

}  // namespace

ErrorByCount error_by_count(const SourceModel& model, double noise_power, Exec exec) {
  const std::size_t n = model.size();
  check_exact_size(n);
  const std::size_t count = std::size_t{1} << n;
  const auto per_mask = map_indexed(exec, count, [&](std::size_t mask) {
    return mmse_for_pattern(model, SamplingPattern::from_mask(mask, n), noise_power).error;
  });
  ErrorByCount out;
  out.e.assign(n + 1, 0.0);
  for (std::size_t mask = 0; mask < count; ++mask)
    out.e[static_cast<std::size_t>(std::popcount(mask))] += per_mask[mask];
  return out;
}

std::vector<WeightedMask> channel_pattern_weights(const ChannelSpec& channel, std::size_t n) {
  channel.validate(n);
  std::vector<WeightedMask> out;
  switch (channel.mode) {
    case ChannelMode::scalar:
      for (std::size_t i = 0; i < n; ++i) out.push_back({std::uint64_t{1} << i, 1.0 / static_cast<double>(n)});
      return out;
    case ChannelMode::bernoulli: {
      check_exact_size(n);
      const std::uint64_t count = std::uint64_t{1} << n;
      for (std::uint64_t mask = 0; mask < count; ++mask) {
        const double w = pattern_probability(n, static_cast<std::size_t>(std::popcount(mask)), channel.p);
        if (w > 0.0) out.push_back({mask, w});
      }
      return out;
    }
    case ChannelMode::uniform_m: {
      check_exact_size(n);
      const double w = std::exp(-log_binomial(n, channel.m));
      const std::uint64_t count = std::uint64_t{1} << n;
      for (std::uint64_t mask = 0; mask < count; ++mask)
        if (static_cast<std::size_t>(std::popcount(mask)) == channel.m) out.push_back({mask, w});
      return out;
    }
    case ChannelMode::with_replacement_m:
      break;
  }
  throw Error(ErrorKind::invalid_input, "exact averaging is not available for with_replacement_M channels");
}

double average_mmse_exact(const SourceModel& model, const ChannelSpec& channel, Exec exec) {
  const std::size_t n = model.size();
  channel.validate(n);
  switch (channel.mode) {
    case ChannelMode::scalar: {
      const auto errs = map_indexed(exec, n, [&](std::size_t i) {
        return mmse_for_pattern(model, SamplingPattern({i}), channel.noise_power).error;
      });
      return ordered_sum(errs) / static_cast<double>(n);
    }
    case ChannelMode::bernoulli: {
      const ErrorByCount ebc = error_by_count(model, channel.noise_power, exec);
      double j = 0.0;
      for (std::size_t m = 0; m <= n; ++m) j += pattern_probability(n, m, channel.p) * ebc.e[m];
      return j;
    }
    case ChannelMode::uniform_m: {
      const ErrorByCount ebc = error_by_count(model, channel.noise_power, exec);
      return ebc.e[channel.m] * std::exp(-log_binomial(n, channel.m));
    }
    case ChannelMode::with_replacement_m:
      break;
  }
  throw Error(ErrorKind::invalid_input, "exact averaging is not available for with_replacement_M channels");
}

SamplingPattern draw_pattern(const ChannelSpec& channel, std::size_t n, std::mt19937_64& gen) {
  std::uniform_int_distribution<std::size_t> index(0, n - 1);
  switch (channel.mode) {
    case ChannelMode::scalar:
      return SamplingPattern({index(gen)});
    case ChannelMode::bernoulli: {
      std::bernoulli_distribution keep(channel.p);
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i)
        if (keep(gen)) idx.push_back(i);
      return SamplingPattern(std::move(idx));
    }
    case ChannelMode::uniform_m: {
      // partial Fisher-Yates
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      for (std::size_t i = 0; i < channel.m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(perm[i], perm[pick(gen)]);
      }
      perm.resize(channel.m);
      return SamplingPattern(std::move(perm));
    }
    case ChannelMode::with_replacement_m: {
      std::vector<std::size_t> idx(channel.m);
      for (auto& i : idx) i = index(gen);
      return SamplingPattern(std::move(idx), true);
    }
  }
  throw Error(ErrorKind::invalid_input, "unknown channel mode");
}

EmpiricalMse average_mmse_mc(const SourceModel& model, const ChannelSpec& channel, std::size_t trials,
                             std::uint64_t seed, Exec exec) {
  if (trials < 2) throw Error(ErrorKind::invalid_input, "average_mmse_mc needs at least 2 trials");
  const std::size_t n = model.size();
  channel.validate(n);
  const auto errs = map_indexed(exec, trials, [&](std::size_t i) {
    std::mt19937_64 gen(derive_seed(seed, i));
    return mmse_for_pattern(model, draw_pattern(channel, n, gen), channel.noise_power).error;
  });
  const SampleStats st = mean_and_std_error(errs);
  return {st.mean, st.std_error, trials, seed};
}

double scalar_flat_optimum(std::size_t n, std::size_t support_size, double power, double noise_power) {
  if (support_size < 1 || support_size > n) throw Error(ErrorKind::invalid_input, "support size must lie in [1, N]");
  if (!(power > 0.0) || !(noise_power > 0.0)) throw Error(ErrorKind::invalid_input, "P and noise_power must be > 0");
  const double b = static_cast<double>(support_size);
  const double level = power / b;
  if (std::isinf(noise_power)) return power;
  return power - level + level / (1.0 + power / (static_cast<double>(n) * noise_power));
}

double rank1_average(std::size_t n, double power, double noise_power, double p) {
  if (n == 0) throw Error(ErrorKind::invalid_dimension, "N must be >= 1");
  if (!(power > 0.0) || !(noise_power > 0.0)) throw Error(ErrorKind::invalid_input, "P and noise_power must be > 0");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invalid_input, "p must lie in [0, 1]");
  const double nd = static_cast<double>(n);
  double total = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double w = binomial_weight(n, k, p);
    if (w == 0.0) continue;
    total += w / (1.0 / power + static_cast<double>(k) / (nd * noise_power));
  }
  return total;
}

double worst_unitary_value(const Spectrum& spectrum, const ChannelSpec& channel) {
  channel.validate(spectrum.size());
  if (channel.noise_power != 0.0)
    throw Error(ErrorKind::unsupported, "the worst-transform value is only established for noiseless channels");
  const double power = spectrum.trace();
  switch (channel.mode) {
    case ChannelMode::scalar: return power - power / static_cast<double>(spectrum.size());
    case ChannelMode::bernoulli: return (1.0 - channel.p) * power;
    default: break;
  }
  throw Error(ErrorKind::unsupported, "worst-transform value needs a scalar or bernoulli channel");
}

cmat circulant_average_inverse(const cmat& k_inv) {
  const auto n = k_inv.rows();
  if (n == 0 || n != k_inv.cols()) throw Error(ErrorKind::invalid_dimension, "matrix must be square and non-empty");
  const double scale = std::max(1.0, k_inv.cwiseAbs().maxCoeff());
  if ((k_inv - k_inv.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error(ErrorKind::invalid_input, "matrix is not Hermitian");
  Eigen::LLT<cmat> llt(k_inv);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::invalid_input, "matrix is not positive definite");
  // (Pi^l K Pi^-l)_{ij} = K_{(i+l) mod N, (j+l) mod N}
  cmat avg = cmat::Zero(n, n);
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) avg(i, j) += k_inv((i + l) % n, (j + l) % n);
  return avg / static_cast<double>(n);
}

}  // namespace emmse
