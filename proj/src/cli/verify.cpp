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

// Self-check of the closed forms against brute-force evaluation, and of the
// 3x3 counterexample against its exact rational values. Each item reports
// the worst deviation it saw.

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "emmse/cwss.hpp"
#include "emmse/erasure_average.hpp"
#include "emmse/errors.hpp"
#include "emmse/mmse.hpp"
#include "emmse/precoder.hpp"

namespace emmse::cli {

namespace {

struct Item {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::vector<double> random_spectrum(std::mt19937_64& gen, std::size_t n, double zero_fraction) {
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> l(n);
  for (double& v : l) v = uni(gen) < zero_fraction ? 0.0 : ex(gen);
  if (std::all_of(l.begin(), l.end(), [](double v) { return v == 0.0; })) l[0] = 1.0;
  return l;
}

Item flat_scalar_optimum() {
  double worst = 0.0, beaten = 0.0;
  for (std::size_t n = 2; n <= 8; ++n)
    for (std::size_t b = 1; b <= n; ++b) {
      std::vector<double> l(n, 0.0);
      for (std::size_t i = 0; i < b; ++i) l[i] = 1.0 / static_cast<double>(b);
      const Spectrum sp(l);
      const auto ch = ChannelSpec::scalar(1.0);
      const double j = average_mmse_exact(SourceModel(make_dft(n), sp), ch);
      worst = std::max(worst, std::abs(j - scalar_flat_optimum(n, b, 1.0, 1.0)));
      for (std::uint64_t s = 0; s < 5; ++s)
        beaten = std::max(beaten, j - average_mmse_exact(SourceModel(random_unitary(n, derive_seed(n * 64 + b, s)), sp), ch));
    }
  return {"flat-spectrum scalar optimum at the DFT", worst <= 1e-10 && beaten <= 1e-10,
          "max |J_dft - closed form| = " + sci(worst) + ", max J_dft - J_haar = " + sci(beaten)};
}

Item worst_case_values() {
  const Spectrum sp({0.2, 0.3, 0.5});
  double dev = 0.0, excess = -INFINITY;
  for (const auto& ch : {ChannelSpec::scalar(0.0), ChannelSpec::bernoulli(0.0, 0.3)}) {
    const double w = worst_unitary_value(sp, ch);
    const double expect = ch.mode == ChannelMode::scalar ? 1.0 - 1.0 / 3.0 : 0.7;
    dev = std::max({dev, std::abs(w - expect),
                    std::abs(average_mmse_exact(SourceModel(UnitaryTransform::identity(3), sp), ch) - w)});
    excess = std::max(excess, average_mmse_exact(SourceModel(make_dft(3), sp), ch) - w);
    for (std::uint64_t s = 0; s < 20; ++s)
      excess = std::max(excess, average_mmse_exact(SourceModel(random_unitary(3, s), sp), ch) - w);
  }
  return {"noiseless worst-case transform values", dev <= 1e-10 && excess <= 1e-10,
          "max deviation at identity = " + sci(dev) + ", max excess over worst = " + sci(excess)};
}

Item rank_one_sum() {
  double worst = 0.0;
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<double> l(n, 0.0);
    l[0] = 1.3;
    const SourceModel m(make_dft(n), Spectrum(l));
    for (double p : {0.2, 0.5, 0.8})
      worst = std::max(worst, std::abs(rank1_average(n, 1.3, 0.7, p) - average_mmse_exact(m, ChannelSpec::bernoulli(0.7, p))));
  }
  return {"rank-one binomial sum vs subset enumeration", worst <= 1e-10, "max deviation = " + sci(worst)};
}

Item circulant_averaging() {
  std::mt19937_64 gen(7);
  double excess = -INFINITY;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(gen() % 4);
    const auto d = random_spectrum(gen, n, 0.0);
    const cmat u = random_unitary(n, gen()).matrix();
    cmat kinv = u * Eigen::VectorXd::Map(d.data(), static_cast<Eigen::Index>(n)).cwiseInverse().asDiagonal() * u.adjoint();
    kinv = (kinv + kinv.adjoint()) * 0.5;
    const cmat avg = circulant_average_inverse(kinv);
    const auto ch = ChannelSpec::bernoulli(0.5, 0.5);
    excess = std::max(excess, average_mmse_exact(model_from_covariance(avg.inverse()), ch) -
                                  average_mmse_exact(model_from_covariance(kinv.inverse()), ch));
  }
  return {"circulant averaging never increases the error", excess <= 1e-10,
          "max increase = " + sci(excess)};
}

Item counterexample(double perturb) {
  Spectrum sp = counterexample_spectrum();
  if (perturb != 0.0) sp = Spectrum({sp[0] + perturb, sp[1], sp[2] - perturb});
  try {
    const auto r = reproduce_counterexample(sp);
    std::ostringstream os;
    os.precision(10);
    os << "e2(U0) = " << r.e_u0[2] << " vs 409/168 = " << 409.0 / 168.0 << ", e2(F) = " << r.e_dft[2]
       << " vs 2.434555; J(U0) < J(F) on p = 0.1..0.9";
    return {"3x3 counterexample error-by-count values", true, os.str()};
  } catch (const Error& e) {
    return {"3x3 counterexample error-by-count values", false, e.what()};
  }
}

Item equidistant_vs_direct() {
  std::mt19937_64 gen(11);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 16; ++n)
    for (std::size_t d = 1; d <= n; ++d) {
      if (n % d) continue;
      const auto l = random_spectrum(gen, n, 0.25);
      const SourceModel m(make_dft(n), Spectrum(l));
      for (double s2 : {0.0, 0.1, 1.0})
        worst = std::max(worst, std::abs(equidistant_mmse(m.spectrum(), d, s2) -
                                         mmse_for_pattern(m, equidistant_pattern(n, d), s2).error));
    }
  return {"equidistant closed form vs direct estimator", worst <= 1e-10, "max deviation = " + sci(worst)};
}

Item two_band_example() {
  const double v = equidistant_mmse(Spectrum({0.5, 0.25, 0.125, 0.125}), 2, 0.0);
  const double b = equidistant_mmse(Spectrum({0.5, 0.5, 0.0, 0.0}), 2, 0.5);
  const bool ok = std::abs(v - 11.0 / 30.0) <= 1e-12 && std::abs(b - 2.0 / 3.0) <= 1e-12 &&
                  std::abs(bandpass_error(1.0, 2, 2, 4, 0.5) - 2.0 / 3.0) <= 1e-12;
  std::ostringstream os;
  os.precision(15);
  os << "noiseless two-band = " << v << " (11/30), band-pass = " << b << " (2/3)";
  return {"two-band noiseless and band-pass examples", ok, os.str()};
}

Item aliasing_free() {
  std::mt19937_64 gen(13);
  double excess = -INFINITY;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(gen() % 23);
    std::vector<std::size_t> divs;
    for (std::size_t d = 1; d <= n; ++d)
      if (n % d == 0) divs.push_back(d);
    const std::size_t d = divs[gen() % divs.size()];
    const Spectrum sp(random_spectrum(gen, n, 0.3));
    excess = std::max(excess, equidistant_mmse(sp, d, 0.0) - aliasing_free_bound(sp, d));
  }
  return {"aliasing-free upper bound", excess <= 1e-12, "max excess = " + sci(excess)};
}

Item fixed_size_bound() {
  std::mt19937_64 gen(17);
  double excess = -INFINITY;
  for (std::size_t n = 1; n <= 6; ++n) {
    const Spectrum sp(random_spectrum(gen, n, 0.2));
    for (const auto& u : {make_dft(n), UnitaryTransform::identity(n), random_unitary(n, gen())}) {
      const SourceModel m(u, sp);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const auto pat = SamplingPattern::from_mask(mask, n);
        excess = std::max(excess, mmse_lower_bound_fixed_m(sp, pat.size(), 0.5) - mmse_for_pattern(m, pat, 0.5).error);
      }
    }
  }
  return {"fixed-size lower bound below every pattern", excess <= 1e-10, "max excess = " + sci(excess)};
}

Item gradient_check() {
  std::mt19937_64 gen(19);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(gen() % 4);
    const Spectrum sp(random_spectrum(gen, n, 0.0));
    const cmat u = random_unitary(n, gen()).matrix();
    const auto ch = ChannelSpec::bernoulli(0.4, 0.5);
    cmat v(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(gen), g(gen));
    v /= v.norm();
    const double h = 1e-5;
    const double fd = (objective_unconstrained(u + h * v, sp, ch) - objective_unconstrained(u - h * v, sp, ch)) / (2 * h);
    const double an = 2.0 * (euclidean_gradient(u, sp, ch).adjoint() * v).trace().real();
    worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
  }
  return {"gradient vs central finite differences", worst <= 1e-6, "max relative deviation = " + sci(worst)};
}

Item stationarity() {
  std::mt19937_64 gen(23);
  double worst = 0.0;
  for (std::size_t n = 2; n <= 6; ++n) {
    const Spectrum sp(random_spectrum(gen, n, 0.0));
    const auto ch = ChannelSpec::scalar(1.0);
    worst = std::max({worst, stationarity_residual(make_dft(n), sp, ch).residual,
                      stationarity_residual(UnitaryTransform::identity(n), sp, ch).residual});
  }
  return {"stationarity of the DFT and identity (scalar channel)", worst <= 1e-8, "max residual = " + sci(worst)};
}

}  // namespace

int cmd_verify(const ExperimentConfig& c, std::ostream& out) {
  const std::vector<std::function<Item()>> items{
      flat_scalar_optimum, worst_case_values, rank_one_sum, circulant_averaging,
      [&] { return counterexample(c.perturb); }, equidistant_vs_direct, two_band_example, aliasing_free,
      fixed_size_bound, gradient_check, stationarity};
  std::size_t passed = 0;
  for (const auto& run : items) {
    Item it;
    try {
      it = run();
    } catch (const std::exception& e) {
      it = {"(item raised)", false, e.what()};
    }
    passed += it.passed ? 1 : 0;
    for (std::size_t pos = it.detail.find('\n'); pos != std::string::npos; pos = it.detail.find('\n', pos + 2))
      it.detail.replace(pos, 1, "\n  ");
    out << (it.passed ? "[PASS] " : "[FAIL] ") << it.name << ": " << it.detail << '\n';
  }
  out << passed << "/" << items.size() << " checks passed\n";
  return passed == items.size() ? kOk : kReproductionFailure;
}

}  // namespace emmse::cli
