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

#include "emmse/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "emmse/errors.hpp"
#include "emmse/erasure_average.hpp"
#include "emmse/mmse.hpp"

namespace emmse {

double flat_support_bound(double power, std::size_t support_size, std::size_t m, std::size_t n, double noise_power) {
  if (!(power > 0.0) || support_size == 0 || n == 0 || m > n)
    throw Error(ErrorKind::invalid_input, "need P > 0, |B| >= 1 and M <= N");
  if (!std::isfinite(noise_power) || noise_power < 0.0) throw Error(ErrorKind::invalid_input, "noise_power must be >= 0");
  if (noise_power == 0.0) return 0.0;
  const double gain = (0.5 * static_cast<double>(m) / static_cast<double>(n)) * (power / static_cast<double>(support_size));
  return power / (1.0 + gain / noise_power);
}

std::size_t flat_sample_condition(std::size_t support_size, double mu, double delta_prob, double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw Error(ErrorKind::invalid_input, "C1 and C2 must be positive");
  if (support_size == 0 || !(mu > 0.0)) throw Error(ErrorKind::invalid_input, "need |B| >= 1 and mu > 0");
  if (!(delta_prob > 0.0 && delta_prob < 3.0)) throw Error(ErrorKind::invalid_input, "delta must lie in (0, 3)");
  const double b = static_cast<double>(support_size);
  const double rhs = b * mu * mu * std::max(c1 * std::log(b), c2 * std::log(3.0 / delta_prob));
  // round up, ignoring last-bit noise such as log(e) = 1 + ulp
  return static_cast<std::size_t>(std::ceil(rhs * (1.0 - 1e-12)));
}

void DofBoundParams::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorKind::invalid_params, what); };
  if (!(delta > 0.0 && delta <= 1.0)) fail("delta must lie in (0, 1]");
  if (!(kappa >= 1.0)) fail("kappa must be >= 1");
  if (!(theta > 0.0 && theta <= 0.5)) fail("theta must lie in (0, 0.5]");
  if (!(gamma > 0.0 && gamma < 1.0)) fail("gamma must lie in (0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) fail("rho must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0, 1)");
  if (n == 0 || m > n) fail("need 1 <= N and M <= N");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) fail("noise_power must be > 0");
  if (!(c1 > 0.0) || !(c2 > 0.0)) fail("C1 and C2 must be positive");
}

bool BoundReport::all_satisfied() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const BoundCondition& c) { return c.satisfied; });
}

namespace {

struct DerivedConstants {
  double power = 0.0;
  std::size_t d = 0;
  double c_lambda_s = 0.0;
  double c_lambda_i = 0.0;
  double c_kd = 0.0;
  double c_i = 0.0;
  double incompressible_gain = 0.0;  // 0.5 rho^2 kappa - 1
};

DerivedConstants derive(const Spectrum& spectrum, const DofBoundParams& prm, double mu) {
  prm.validate();
  if (spectrum.size() != prm.n) {
    std::ostringstream os;
    os << "spectrum has " << spectrum.size() << " entries but N = " << prm.n;
    throw Error(ErrorKind::invalid_params, os.str());
  }
  if (!(mu >= 1.0 - 1e-12)) throw Error(ErrorKind::invalid_params, "coherence must be >= 1");
  DerivedConstants c;
  const auto sorted = spectrum.sorted_descending();
  const double n = static_cast<double>(prm.n);
  c.power = spectrum.trace();
  c.d = effective_dof(spectrum, prm.delta);
  const double d = static_cast<double>(c.d);
  if (!(prm.kappa < n / d)) {
    std::ostringstream os;
    os << "kappa = " << prm.kappa << " must be below N/D = " << n / d;
    throw Error(ErrorKind::invalid_params, os.str());
  }
  c.c_lambda_s = sorted.front() * d / c.power;
  double tail_max = 0.0;
  for (std::size_t i = c.d; i < prm.n; ++i) tail_max = std::max(tail_max, sorted[i]);
  // strict inequality lambda_i < C_I^lambda P / (N - D)
  c.c_lambda_i = tail_max * (n - d) / c.power + 1e-12;
  c.c_kd = std::sqrt((1.0 - prm.theta) * static_cast<double>(prm.m) / n);
  c.incompressible_gain = 0.5 * prm.rho * prm.rho * prm.kappa - 1.0;
  c.c_i = c.incompressible_gain * 0.5 * prm.rho * prm.rho * (n - d) / (c.c_lambda_i * n);
  return c;
}

}  // namespace

double compressible_rho_max(double gamma, double c_kd) {
  if (!(gamma >= 0.0 && gamma <= 1.0) || !(c_kd >= 0.0)) throw Error(ErrorKind::invalid_input, "need gamma in [0,1], C_kD >= 0");
  return (1.0 - gamma) * c_kd / (c_kd + 1.0);
}

SparseConditionResult sparse_condition_check(double m, double n, double kappa_d, double mu, double theta,
                                             double epsilon) {
  if (!(m > 0.0 && n > 0.0 && kappa_d > 0.0 && mu > 0.0 && theta > 0.0 && epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorKind::invalid_input, "sparse condition inputs must be positive (epsilon < 1)");
  const double scale = mu * mu * kappa_d / (theta * theta);
  const double lg = std::log(100.0 * kappa_d);
  SparseConditionResult r;
  r.margin_log = m / std::log(10.0 * m) - kSparseC1 * scale * lg * lg * std::log(4.0 * n);
  r.margin_linear = m - kSparseC2 * scale * std::log(1.0 / epsilon);
  r.satisfied = r.margin_log >= 0.0 && r.margin_linear >= 0.0;
  return r;
}

BoundReport dof_mmse_bound(const Spectrum& spectrum, const DofBoundParams& params, double mu) {
  const DerivedConstants c = derive(spectrum, params, mu);
  const double d = static_cast<double>(c.d);
  const double n = static_cast<double>(params.n);
  const double m = static_cast<double>(params.m);
  const double kd = params.kappa * d;

  const double incompressible = c.c_i > 0.0 ? c.power / c.c_i : std::numeric_limits<double>::infinity();
  const double compressible =
      c.power / (1.0 / c.c_lambda_s + params.gamma * params.gamma * c.c_kd * c.c_kd * c.power / (params.noise_power * d));

  BoundReport rep;
  rep.bound_value = (1.0 - params.delta) * c.power + std::max(incompressible, compressible);

  const double scale = mu * mu * kd / (params.theta * params.theta);
  const double lg = std::log(100.0 * kd);
  const double m_log = m > 0.0 ? m / std::log(10.0 * m) : 0.0;
  const double margin_log = m_log - params.c1 * scale * lg * lg * std::log(4.0 * n);
  const double margin_lin = m - params.c2 * scale * std::log(1.0 / params.epsilon);
  const double rho_slack = compressible_rho_max(params.gamma, c.c_kd) - params.rho;
  rep.conditions = {
      {"kappa_below_N_over_D", n / d - params.kappa > 0.0, n / d - params.kappa},
      {"sample_count_log", margin_log >= 0.0, margin_log},
      {"sample_count_linear", margin_lin >= 0.0, margin_lin},
      {"incompressible_gain", c.incompressible_gain > 0.0, c.incompressible_gain},
      {"rho_compressible", rho_slack >= 0.0, rho_slack},
  };
  rep.constants = {
      {"C_kD", c.c_kd},
      {"C_I", c.c_i},
      {"C_lambda_S", c.c_lambda_s},
      {"C_lambda_I", c.c_lambda_i},
      {"mu", mu},
      {"D", d},
      {"eta", kd / n},
      {"P", c.power},
  };
  return rep;
}

double eigmin_lower_bound(const Spectrum& spectrum, const DofBoundParams& params, double mu) {
  const DerivedConstants c = derive(spectrum, params, mu);
  if (!(c.c_i > 0.0)) return 0.0;
  const double d = static_cast<double>(c.d);
  const double incompressible = c.c_i * d / c.power;
  const double compressible =
      1.0 / (c.c_lambda_s * c.power / d) + params.gamma * params.gamma * c.c_kd * c.c_kd / params.noise_power;
  return std::min(incompressible, compressible);
}

double empirical_tail(const SourceModel& model, std::size_t m, double noise_power, double bound_value,
                      std::size_t trials, std::uint64_t seed, bool replacement, Exec exec) {
  if (trials < 1) throw Error(ErrorKind::invalid_input, "empirical_tail needs at least 1 trial");
  const std::size_t n = model.size();
  const ChannelSpec channel =
      replacement ? ChannelSpec::with_replacement(noise_power, m) : ChannelSpec::uniform(noise_power, m);
  channel.validate(n);
  const auto hits = map_indexed(exec, trials, [&](std::size_t i) {
    std::mt19937_64 gen(derive_seed(seed, i));
    const double e = mmse_for_pattern(model, draw_pattern(channel, n, gen), noise_power).error;
    return e >= bound_value ? 1.0 : 0.0;
  });
  return ordered_sum(hits) / static_cast<double>(trials);
}

EigminQuantiles empirical_eigmin(const SourceModel& model, std::size_t m, double noise_power, std::size_t trials,
                                 std::uint64_t seed, Exec exec) {
  const std::size_t n = model.size();
  if (model.support().size() != n) throw Error(ErrorKind::invalid_input, "empirical_eigmin needs a full-support spectrum");
  if (!(noise_power > 0.0)) throw Error(ErrorKind::invalid_input, "empirical_eigmin needs noise_power > 0");
  if (trials < 1) throw Error(ErrorKind::invalid_input, "empirical_eigmin needs at least 1 trial");
  const ChannelSpec channel = ChannelSpec::with_replacement(noise_power, m);
  const cmat& u = model.transform().matrix();
  Eigen::VectorXd inv_lambda(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) inv_lambda(static_cast<Eigen::Index>(i)) = 1.0 / model.spectrum()[i];

  auto values = map_indexed(exec, trials, [&](std::size_t t) {
    std::mt19937_64 gen(derive_seed(seed, t));
    const SamplingPattern pat = draw_pattern(channel, n, gen);
    cmat a = inv_lambda.cast<cplx>().asDiagonal();
    for (std::size_t i : pat.indices()) {
      const auto row = u.row(static_cast<Eigen::Index>(i));
      a += row.adjoint() * row / noise_power;
    }
    Eigen::SelfAdjointEigenSolver<cmat> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::numerical_failure, "eigenvalue solver failed");
    return es.eigenvalues()(0);
  });
  std::sort(values.begin(), values.end());
  auto q = [&](double p) { return values[static_cast<std::size_t>(std::floor(p * static_cast<double>(values.size() - 1)))]; };
  return {values.front(), q(0.01), q(0.5)};
}

}  // namespace emmse
