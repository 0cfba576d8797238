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

#include "emmse/precoder.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "emmse/errors.hpp"

namespace emmse {

void OptimizerConfig::validate() const {
  if (!(step_init > 0.0)) throw Error(ErrorKind::invalid_input, "step_init must be > 0");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw Error(ErrorKind::invalid_input, "armijo_c must lie in (0, 1)");
  if (!(shrink > 0.0 && shrink < 1.0)) throw Error(ErrorKind::invalid_input, "shrink must lie in (0, 1)");
  if (!(tol_residual > 0.0)) throw Error(ErrorKind::invalid_input, "tol_residual must be > 0");
}

namespace {

struct SupportBlock {
  std::vector<std::size_t> index;
  Eigen::VectorXd inv_lambda;
  double power = 0.0;
};

SupportBlock support_block(const Spectrum& spectrum) {
  SupportBlock sb;
  sb.index = spectrum.support();
  sb.inv_lambda.resize(static_cast<Eigen::Index>(sb.index.size()));
  for (std::size_t j = 0; j < sb.index.size(); ++j) {
    sb.inv_lambda(static_cast<Eigen::Index>(j)) = 1.0 / spectrum[sb.index[j]];
    sb.power += spectrum[sb.index[j]];
  }
  return sb;
}

cmat support_columns(const cmat& u, const SupportBlock& sb) {
  cmat ub(u.rows(), static_cast<Eigen::Index>(sb.index.size()));
  for (std::size_t j = 0; j < sb.index.size(); ++j)
    ub.col(static_cast<Eigen::Index>(j)) = u.col(static_cast<Eigen::Index>(sb.index[j]));
  return ub;
}

// U_B with the rows outside the mask zeroed, i.e. H^H H U_B.
cmat masked_rows(const cmat& ub, std::uint64_t mask) {
  cmat d = cmat::Zero(ub.rows(), ub.cols());
  for (Eigen::Index i = 0; i < ub.rows(); ++i)
    if (mask & (std::uint64_t{1} << i)) d.row(i) = ub.row(i);
  return d;
}

cmat information_inverse(const cmat& ub, const cmat& dub, const SupportBlock& sb, double noise_power) {
  cmat inner = ub.adjoint() * dub / noise_power;
  inner.diagonal() += sb.inv_lambda.cast<cplx>();
  inner = (inner + inner.adjoint()) * 0.5;
  Eigen::LDLT<cmat> ldlt(inner);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::numerical_failure, "information matrix factorization failed");
  return ldlt.solve(cmat::Identity(inner.rows(), inner.cols()));
}

void require_noisy(const ChannelSpec& channel) {
  if (!(channel.noise_power > 0.0))
    throw Error(ErrorKind::invalid_input, "gradient-based precoder design needs noise_power > 0");
}

void check_square(const cmat& u, const Spectrum& spectrum) {
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != spectrum.size())
    throw Error(ErrorKind::invalid_dimension, "transform and spectrum dimensions differ");
}

}  // namespace

double objective(const UnitaryTransform& u, const Spectrum& spectrum, const ChannelSpec& channel, Exec exec) {
  return average_mmse_exact(SourceModel(u, spectrum), channel, exec);
}

double objective_unconstrained(const cmat& u, const Spectrum& spectrum, const ChannelSpec& channel) {
  check_square(u, spectrum);
  require_noisy(channel);
  const SupportBlock sb = support_block(spectrum);
  const cmat ub = support_columns(u, sb);
  double j = 0.0;
  for (const auto& wm : channel_pattern_weights(channel, spectrum.size())) {
    if (wm.mask == 0) {
      j += wm.weight * sb.power;
      continue;
    }
    j += wm.weight * information_inverse(ub, masked_rows(ub, wm.mask), sb, channel.noise_power).trace().real();
  }
  return j;
}

cmat euclidean_gradient(const cmat& u, const Spectrum& spectrum, const ChannelSpec& channel) {
  check_square(u, spectrum);
  require_noisy(channel);
  const SupportBlock sb = support_block(spectrum);
  const cmat ub = support_columns(u, sb);
  cmat gb = cmat::Zero(ub.rows(), ub.cols());
  for (const auto& wm : channel_pattern_weights(channel, spectrum.size())) {
    if (wm.mask == 0) continue;
    const cmat dub = masked_rows(ub, wm.mask);
    const cmat minv = information_inverse(ub, dub, sb, channel.noise_power);
    gb -= (wm.weight / channel.noise_power) * dub * minv * minv;
  }
  cmat g = cmat::Zero(u.rows(), u.cols());
  for (std::size_t j = 0; j < sb.index.size(); ++j)
    g.col(static_cast<Eigen::Index>(sb.index[j])) = gb.col(static_cast<Eigen::Index>(j));
  return g;
}

cmat euclidean_gradient(const UnitaryTransform& u, const Spectrum& spectrum, const ChannelSpec& channel) {
  return euclidean_gradient(u.matrix(), spectrum, channel);
}

namespace {

double residual_from_gradient(const cmat& u, const cmat& g, const Spectrum& spectrum) {
  const SupportBlock sb = support_block(spectrum);
  const cmat ub = support_columns(u, sb);
  const cmat gb = support_columns(g, sb);
  const cmat x = ub.adjoint() * gb;
  const cmat herm = (x + x.adjoint()) * 0.5;
  return (gb - ub * herm).norm();
}

}  // namespace

StationarityReport stationarity_residual(const UnitaryTransform& u, const Spectrum& spectrum,
                                         const ChannelSpec& channel, double tol_residual) {
  const cmat g = euclidean_gradient(u.matrix(), spectrum, channel);
  StationarityReport r;
  r.residual = residual_from_gradient(u.matrix(), g, spectrum);
  r.objective = objective_unconstrained(u.matrix(), spectrum, channel);
  r.satisfied = r.residual <= tol_residual;
  return r;
}

OptimizeResult optimize(const Spectrum& spectrum, const ChannelSpec& channel, const UnitaryTransform& u_init,
                        const OptimizerConfig& config) {
  config.validate();
  require_noisy(channel);
  check_square(u_init.matrix(), spectrum);

  auto eval = [&](const cmat& u) {
    const double f = objective_unconstrained(u, spectrum, channel);
    if (!std::isfinite(f)) throw Error(ErrorKind::numerical_failure, "objective evaluated to a non-finite value");
    return f;
  };

  cmat u = u_init.matrix();
  double f = eval(u);
  OptimizeResult res{u_init, {}, {}, 0, false};
  double step = config.step_init;
  for (std::size_t it = 0;; ++it) {
    const cmat g = euclidean_gradient(u, spectrum, channel);
    const double r = residual_from_gradient(u, g, spectrum);
    res.objective_trace.push_back(f);
    res.residual_trace.push_back(r);
    if (r <= config.tol_residual) {
      res.converged = true;
      break;
    }
    if (it == config.max_steps) break;

    // Riemannian gradient U skew(U^H G); the real slope along it is 2 ||skew||^2.
    const cmat x = u.adjoint() * g;
    const cmat skew = (x - x.adjoint()) * 0.5;
    const cmat dir = u * skew;
    const double slope = 2.0 * skew.squaredNorm();

    step = it == 0 ? config.step_init : step / config.shrink;
    bool accepted = false;
    cmat u_next;
    double f_next = f;
    while (step > 1e-20) {
      u_next = orthonormalize(u - step * dir);
      f_next = eval(u_next);
      if (f_next <= f - config.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      step *= config.shrink;
    }
    if (!accepted) break;
    if (f_next < f) ++res.strict_decreases;
    u = std::move(u_next);
    f = f_next;
  }
  res.transform = UnitaryTransform(u, std::max(kUnitaryTolerance, u_init.tolerance()));
  return res;
}

UnitaryTransform counterexample_transform() {
  const double s = 1.0 / std::sqrt(2.0);
  cmat u(3, 3);
  u << s, 0, s,  //
      0, 1, 0,   //
      -s, 0, s;
  return UnitaryTransform(u);
}

Spectrum counterexample_spectrum() { return Spectrum({1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0}); }

CounterexampleReport reproduce_counterexample() { return reproduce_counterexample(counterexample_spectrum()); }

CounterexampleReport reproduce_counterexample(const Spectrum& spectrum) {
  if (spectrum.size() != 3) throw Error(ErrorKind::invalid_dimension, "the counterexample fixture is 3-dimensional");
  constexpr double noise = 1.0;
  CounterexampleReport rep;
  rep.expected_u0 = {1.0, 65.0 / 24.0, 409.0 / 168.0, 61.0 / 84.0};
  const SourceModel m_u0(counterexample_transform(), spectrum);
  const SourceModel m_dft(make_dft(3), spectrum);
  rep.e_u0 = error_by_count(m_u0, noise).e;
  rep.e_dft = error_by_count(m_dft, noise).e;

  std::ostringstream diff;
  diff << std::setprecision(17);
  bool ok = true;
  for (std::size_t i = 0; i < 4; ++i) {
    const double rel = std::abs(rep.e_u0[i] - rep.expected_u0[i]) / std::abs(rep.expected_u0[i]);
    rep.max_rel_diff_u0 = std::max(rep.max_rel_diff_u0, rel);
    if (!(rel <= 1e-12)) {
      ok = false;
      diff << "\n  e_" << i << "(U0) = " << rep.e_u0[i] << ", expected " << rep.expected_u0[i] << " (rel diff " << rel
           << ")";
    }
  }
  rep.e2_dft_abs_diff = std::abs(rep.e_dft[2] - rep.expected_e2_dft);
  if (!(rep.e2_dft_abs_diff <= 1e-5)) {
    ok = false;
    diff << "\n  e_2(DFT) = " << rep.e_dft[2] << ", expected ~" << rep.expected_e2_dft;
  }
  if (!(rep.e_u0[2] < rep.e_dft[2])) {
    ok = false;
    diff << "\n  e_2(U0) = " << rep.e_u0[2] << " is not below e_2(DFT) = " << rep.e_dft[2];
  }
  for (int k = 1; k <= 9; ++k) {
    const double p = 0.1 * k;
    double ju = 0.0;
    double jf = 0.0;
    for (std::size_t m = 0; m <= 3; ++m) {
      const double w = std::pow(p, static_cast<double>(m)) * std::pow(1.0 - p, static_cast<double>(3 - m));
      ju += w * rep.e_u0[m];
      jf += w * rep.e_dft[m];
    }
    rep.p_grid.push_back(p);
    rep.j_u0.push_back(ju);
    rep.j_dft.push_back(jf);
    if (!(ju < jf)) {
      ok = false;
      diff << "\n  J(U0) = " << ju << " >= J(DFT) = " << jf << " at p = " << p;
    }
  }
  if (!ok) throw Error(ErrorKind::reproduction_failure, "counterexample mismatch:" + diff.str());
  return rep;
}

}  // namespace emmse
