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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and runtime limits are fixed per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "emmse/bounds.hpp"
#include "emmse/cli.hpp"
#include "emmse/cwss.hpp"
#include "emmse/erasure_average.hpp"
#include "emmse/mmse.hpp"
#include "emmse/precoder.hpp"
#include "oracles.hpp"

using namespace emmse;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Keeps the first failure reason and accumulates the pass bit.
struct Tally {
  Verdict v;
  void require(bool ok, const std::string& what) {
    if (!ok && v.pass) v.detail = what;
    v.pass = v.pass && ok;
  }
};

// Exact average under a Bernoulli channel by explicit subset weights and
// the Gauss-Jordan oracle.
double oracle_bernoulli_average(const cmat& u, const std::vector<double>& lambda, double s2, double p) {
  const std::size_t n = lambda.size();
  const cmat k = oracle::covariance(u, lambda);
  double j = 0.0;
  for (std::size_t m = 0; m <= n; ++m)
    for (const auto& s : oracle::subsets(n, m))
      j += std::pow(p, double(m)) * std::pow(1.0 - p, double(n - m)) * oracle::mmse(k, s, s2);
  return j;
}

std::vector<std::size_t> divisors(std::size_t n) {
  std::vector<std::size_t> d;
  for (std::size_t k = 1; k <= n; ++k)
    if (n % k == 0) d.push_back(k);
  return d;
}

Verdict counterexample() {
  Tally t;
  const auto e = error_by_count(SourceModel(counterexample_transform(), counterexample_spectrum()), 1.0).e;
  const double expected[] = {1.0, 65.0 / 24.0, 409.0 / 168.0, 61.0 / 84.0};
  double rel = 0.0;
  for (int i = 0; i < 4; ++i) rel = std::max(rel, std::abs(e[i] - expected[i]) / expected[i]);
  t.require(rel <= 1e-12, "U0 vector rel diff " + num(rel));
  const auto f = error_by_count(SourceModel(make_dft(3), counterexample_spectrum()), 1.0).e;
  t.require(std::abs(f[2] - 2.434555) <= 1e-5, "e2(DFT) = " + num(f[2]));
  t.require(e[2] < f[2], "e2(U0) >= e2(DFT)");
  for (int k = 1; k <= 9; ++k) {
    const auto ch = ChannelSpec::bernoulli(1.0, 0.1 * k);
    t.require(objective(counterexample_transform(), counterexample_spectrum(), ch) <
                  objective(make_dft(3), counterexample_spectrum(), ch),
              "J(U0) >= J(DFT) at p = " + num(0.1 * k));
  }
  if (t.v.pass) t.v.detail = "U0 rel diff " + num(rel) + ", |e2(DFT) - 2.434555| = " + num(std::abs(f[2] - 2.434555));
  return t.v;
}

Verdict flat_scalar_optimum() {
  Tally t;
  double dev = 0.0, gap = -INFINITY;
  for (std::size_t n = 2; n <= 8; ++n)
    for (std::size_t b = 1; b <= n; ++b) {
      std::vector<double> l(n, 0.0);
      for (std::size_t i = 0; i < b; ++i) l[i] = 1.0 / double(b);
      const Spectrum sp(l);
      const auto ch = ChannelSpec::scalar(1.0);
      const double j = average_mmse_exact(SourceModel(make_dft(n), sp), ch);
      const cmat k = oracle::covariance(oracle::dft(n), l);
      double enumerated = 0.0;
      for (std::size_t i = 0; i < n; ++i) enumerated += oracle::mmse(k, {i}, 1.0) / double(n);
      dev = std::max({dev, std::abs(j - scalar_flat_optimum(n, b, 1.0, 1.0)), std::abs(enumerated - j)});
      for (std::uint64_t s = 0; s < 100; ++s)
        gap = std::max(gap, j - average_mmse_exact(SourceModel(random_unitary(n, derive_seed(n * 100 + b, s)), sp), ch));
    }
  t.require(dev <= 1e-10, "closed form deviation " + num(dev));
  t.require(gap <= 1e-10, "a Haar draw beats the DFT by " + num(gap));
  if (t.v.pass) t.v.detail = "max deviation " + num(dev) + ", max J_dft - J_haar " + num(gap);
  return t.v;
}

Verdict worst_transform() {
  Tally t;
  std::mt19937_64 gen(31);
  double dev = 0.0, excess = -INFINITY;
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto l = oracle::random_spectrum(gen, n, 0.2);
    const Spectrum sp(l);
    const double p_total = sp.trace();
    const auto sc = ChannelSpec::scalar(0.0);
    const auto be = ChannelSpec::bernoulli(0.0, 0.35);
    const double at_i = average_mmse_exact(SourceModel(UnitaryTransform::identity(n), sp), sc);
    dev = std::max({dev, std::abs(at_i - (p_total - p_total / double(n))), std::abs(worst_unitary_value(sp, sc) - at_i)});
    dev = std::max(dev, std::abs(average_mmse_exact(SourceModel(UnitaryTransform::identity(n), sp), be) - 0.65 * p_total));
    excess = std::max(excess, average_mmse_exact(SourceModel(make_dft(n), sp), sc) - at_i);
    for (std::uint64_t s = 0; s < 50; ++s)
      excess = std::max(excess, average_mmse_exact(SourceModel(random_unitary(n, gen()), sp), sc) - at_i);
  }
  t.require(dev <= 1e-10, "identity value deviation " + num(dev));
  t.require(excess <= 1e-10, "a transform exceeds the identity by " + num(excess));
  if (t.v.pass) t.v.detail = "max deviation " + num(dev) + ", max excess " + num(excess);
  return t.v;
}

Verdict rank_one() {
  double dev = 0.0;
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<double> l(n, 0.0);
    l[(3 * n) / 4] = 2.0;
    for (double p : {0.2, 0.5, 0.8})
      dev = std::max(dev, std::abs(rank1_average(n, 2.0, 0.5, p) - oracle_bernoulli_average(oracle::dft(n), l, 0.5, p)));
  }
  return {dev <= 1e-10, "max deviation " + num(dev)};
}

Verdict circulantization() {
  std::mt19937_64 gen(41);
  std::normal_distribution<double> g(0.0, 1.0);
  double excess = -INFINITY;
  for (int rep = 0; rep < 100; ++rep) {
    const auto n = static_cast<Eigen::Index>(2 + gen() % 5);
    cmat a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cplx(g(gen), g(gen));
    cmat kinv = a * a.adjoint() + 0.05 * cmat::Identity(n, n);
    kinv = (kinv + kinv.adjoint()) * 0.5;
    const auto ch = ChannelSpec::bernoulli(0.5, 0.1 + 0.8 * (rep % 5) / 4.0);
    const double orig = average_mmse_exact(model_from_covariance(oracle::gauss_jordan_inverse(kinv)), ch);
    const double circ = average_mmse_exact(model_from_covariance(oracle::gauss_jordan_inverse(circulant_average_inverse(kinv))), ch);
    excess = std::max(excess, circ - orig);
  }
  return {excess <= 1e-10, "max increase " + num(excess)};
}

Verdict cwss_formulas() {
  Tally t;
  std::mt19937_64 gen(51);
  double dev = 0.0, excess = -INFINITY;
  for (std::size_t n = 1; n <= 24; ++n)
    for (int rep = 0; rep < 50; ++rep) {
      const auto l = oracle::random_spectrum(gen, n, rep % 2 ? 0.3 : 0.0);
      const cmat k = oracle::covariance(oracle::dft(n), l);
      for (std::size_t d : divisors(n)) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; i += d) rows.push_back(i);
        for (double s2 : {0.0, 0.1, 1.0})
          dev = std::max(dev, std::abs(equidistant_mmse(Spectrum(l), d, s2) - oracle::mmse(k, rows, s2)));
        excess = std::max(excess, equidistant_mmse(Spectrum(l), d, 0.0) - aliasing_free_bound(Spectrum(l), d));
      }
    }
  const double a1 = equidistant_mmse(Spectrum({0.5, 0.25, 0.125, 0.125}), 2, 0.0);
  const double c31 = equidistant_mmse(Spectrum({0.5, 0.5, 0.0, 0.0}), 2, 0.5);
  t.require(dev <= 1e-10, "closed form vs direct deviation " + num(dev));
  t.require(std::abs(a1 - 11.0 / 30.0) <= 1e-12, "two-band noiseless value " + num(a1));
  t.require(std::abs(c31 - 2.0 / 3.0) <= 1e-12 && std::abs(bandpass_error(1.0, 2, 2, 4, 0.5) - 2.0 / 3.0) <= 1e-12,
            "band-pass value " + num(c31));
  t.require(excess <= 1e-12, "aliasing-free bound violated by " + num(excess));
  if (t.v.pass) t.v.detail = "max deviation " + num(dev) + ", 11/30 and 2/3 reproduced, max noiseless error - bound " + num(excess);
  return t.v;
}

Verdict fixed_m_lower_bound() {
  std::mt19937_64 gen(61);
  double excess = -INFINITY;
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 8; ++n)
    for (double s2 : {0.1, 1.0}) {
      const Spectrum sp(oracle::random_spectrum(gen, n, 0.2));
      for (const auto& u : {make_dft(n), UnitaryTransform::identity(n), random_unitary(n, gen())}) {
        const SourceModel m(u, sp);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
          const auto pat = SamplingPattern::from_mask(mask, n);
          excess = std::max(excess, mmse_lower_bound_fixed_m(sp, pat.size(), s2) - mmse_for_pattern(m, pat, s2).error);
          ++checked;
        }
      }
    }
  return {excess <= 1e-12, std::to_string(checked) + " patterns, max bound - mmse " + num(excess)};
}

Verdict gradient_and_descent() {
  Tally t;
  std::mt19937_64 gen(71);
  std::normal_distribution<double> g(0.0, 1.0);
  double fd_dev = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + gen() % 4;
    const Spectrum sp(oracle::random_spectrum(gen, n, rep % 4 == 0 ? 0.4 : 0.0));
    const cmat u = random_unitary(n, gen()).matrix();
    const ChannelSpec ch = rep % 2 ? ChannelSpec::bernoulli(0.3, 0.55) : ChannelSpec::scalar(0.3);
    cmat v(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(gen), g(gen));
    v /= v.norm();
    const double h = 1e-5;
    const double fd = (objective_unconstrained(u + h * v, sp, ch) - objective_unconstrained(u - h * v, sp, ch)) / (2 * h);
    const double an = 2.0 * (euclidean_gradient(u, sp, ch).adjoint() * v).trace().real();
    fd_dev = std::max(fd_dev, std::abs(fd - an) / std::max(1.0, std::abs(an)));
  }
  t.require(fd_dev <= 1e-6, "finite-difference deviation " + num(fd_dev));

  double resid = 0.0;
  for (std::size_t n = 2; n <= 8; ++n)
    for (std::size_t b = 1; b <= n; ++b) {
      std::vector<double> l(n, 0.0);
      for (std::size_t i = 0; i < b; ++i) l[i] = 1.0 / double(b);
      for (const auto& u : {make_dft(n), UnitaryTransform::identity(n)})
        resid = std::max(resid, stationarity_residual(u, Spectrum(l), ChannelSpec::scalar(1.0)).residual);
    }
  t.require(resid <= 1e-8, "stationarity residual " + num(resid));

  const auto ch = ChannelSpec::bernoulli(1.0, 0.5);
  const double j_u0 = objective(counterexample_transform(), counterexample_spectrum(), ch);
  double best = INFINITY;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto r = optimize(counterexample_spectrum(), ch, random_unitary(3, derive_seed(2024, s)));
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
      t.require(r.objective_trace[i] <= r.objective_trace[i - 1], "objective trace increased");
    best = std::min(best, r.objective_trace.back());
  }
  t.require(best <= j_u0 + 1e-6, "best restart " + num(best) + " above J(U0) + 1e-6");
  if (t.v.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "fd dev %.3g, residual %.3g, best J %.9f vs J(U0) %.9f", fd_dev, resid, best, j_u0);
    t.v.detail = buf;
  }
  return t.v;
}

Verdict monte_carlo() {
  Tally t;
  const SourceModel m(counterexample_transform(), counterexample_spectrum());
  const auto e = empirical_mse(m, SamplingPattern({0, 2}), 1.0, 100000, 20240901);
  const double z1 = std::abs(e.mean - 17.0 / 21.0) / e.std_error;
  t.require(z1 <= 4.0, "pattern MSE z = " + num(z1));
  const auto ch = ChannelSpec::bernoulli(1.0, 0.5);
  const auto a = average_mmse_mc(m, ch, 100000, 20240902);
  const double z2 = std::abs(a.mean - average_mmse_exact(m, ch)) / a.std_error;
  t.require(z2 <= 4.0, "average MMSE z = " + num(z2));
  if (t.v.pass) t.v.detail = "z-scores " + num(z1) + " and " + num(z2);
  return t.v;
}

Verdict high_probability_properties() {
  Tally t;
  // (a) recomposition and (b) sign of C_I
  const Spectrum sp({0.4, 0.2, 0.1, 0.08, 0.06, 0.05, 0.04, 0.03, 0.02, 0.02});
  const double mu = coherence(make_dft(10));
  double recomp = 0.0;
  bool sign_ok = true;
  for (double rho : {0.3, 0.8, 0.95})
    for (double kappa : {1.0, 2.0, 3.0, 4.5}) {
      DofBoundParams p;
      p.delta = 0.6;
      p.rho = rho;
      p.kappa = kappa;
      p.m = 8;
      p.n = 10;
      p.noise_power = 0.3;
      const auto rep = dof_mmse_bound(sp, p, mu);
      const bool gain = 0.5 * rho * rho * kappa > 1.0;
      sign_ok = sign_ok && ((rep.constants.at("C_I") > 0.0) == gain);
      if (gain) {
        const double rc = (1.0 - p.delta) * sp.trace() + rep.constants.at("D") / eigmin_lower_bound(sp, p, mu);
        recomp = std::max(recomp, std::abs(rc - rep.bound_value) / rep.bound_value);
      }
    }
  t.require(recomp <= 1e-12, "(a) recomposition rel diff " + num(recomp));
  t.require(sign_ok, "(b) C_I sign disagrees with 0.5 rho^2 kappa > 1");

  // (c) desk-scale margins
  const auto sc = sparse_condition_check(32, 64, 4, 1.0, 0.5, 0.1);
  t.require(!sc.satisfied && sc.margin_log < 0.0 && sc.margin_linear < 0.0, "(c) desk-scale sample condition holds");
  DofBoundParams desk;
  desk.m = 32;
  desk.n = 64;
  std::vector<double> geo(64);
  for (std::size_t i = 0; i < 64; ++i) geo[i] = std::pow(0.8, double(i));
  const auto drep = dof_mmse_bound(Spectrum(geo), desk, 1.0);
  for (const auto& c : drep.conditions)
    if (c.name.rfind("sample_count", 0) == 0) t.require(!c.satisfied && c.margin < 0.0, "(c) " + c.name + " satisfied");

  // (d) loose tail sanity
  const std::size_t n = 32, b = 4, m = 16;
  std::vector<double> flat(n, 0.0);
  for (std::size_t i = 0; i < b; ++i) flat[i] = 0.25;
  const SourceModel fm(make_dft(n), Spectrum(flat));
  const double bound = flat_support_bound(1.0, b, m, n, 0.1);
  const double tail_sub = empirical_tail(fm, m, 0.1, bound, 10000, 81, false);
  const double tail_rep = empirical_tail(fm, m, 0.1, bound, 10000, 82, true);
  t.require(tail_sub <= 0.5 && tail_rep <= 0.5, "(d) tail fraction " + num(std::max(tail_sub, tail_rep)));

  // (e) eigenvalue floor
  const SourceModel em(random_unitary(10, 5), sp);
  const double floor = 1.0 / sp.max();
  double worst = INFINITY;
  for (std::size_t mm : {0u, 2u, 5u, 10u, 40u}) {
    const auto q = empirical_eigmin(em, mm, 0.3, 500, 90 + mm);
    worst = std::min(worst, q.min / floor);
  }
  t.require(worst >= 1.0 - 1e-12, "(e) lambda_min below 1/lambda_max, ratio " + num(worst));
  if (t.v.pass)
    t.v.detail = "recomposition " + num(recomp) + ", log margin " + num(sc.margin_log) + ", tails " + num(tail_sub) +
                 "/" + num(tail_rep) + ", min lambda_min*lambda_max " + num(worst);
  return t.v;
}

Verdict cli_reproducibility() {
  Tally t;
  const std::vector<std::vector<std::string>> commands{
      {"mc", "--spectrum", "1/6,1/3,1/2", "--transform", "u0", "--pattern", "0,2", "--p", "0.2,0.5", "--trials", "20000"},
      {"average", "--N", "10", "--preset", "geometric", "--transform", "haar:3"},
      {"bounds", "--N", "32", "--preset", "geometric", "--ratio", "0.7", "--M", "8,16", "--trials", "2000"},
      {"optimize", "--spectrum", "1/6,1/3,1/2", "--p", "0.5", "--restarts", "3", "--max-steps", "100"},
      {"cwss", "--N", "24", "--preset", "bandpass", "--noise", "0.1"}};
  auto run = [](std::vector<std::string> args, const std::string& threads, const std::string& format) {
    args.insert(args.begin(), "erasure-mmse");
    for (const auto& a : {std::string("--seed"), std::string("424242"), std::string("--threads"), threads,
                          std::string("--format"), format})
      args.push_back(a);
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int rc = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return rc == 0 ? out.str() : "exit " + std::to_string(rc) + ": " + err.str();
  };
  std::size_t compared = 0;
  for (const auto& cmd : commands)
    for (const char* format : {"csv", "json"}) {
      const std::string ref = run(cmd, "1", format);
      t.require(ref.rfind("exit ", 0) != 0, cmd[0] + " failed: " + ref);
      for (const char* k : {"2", "4", "8"}) {
        t.require(run(cmd, k, format) == ref, cmd[0] + " output differs with " + k + " threads");
        ++compared;
      }
    }
  if (t.v.pass) t.v.detail = std::to_string(compared) + " outputs byte-identical to the 1-thread run";
  return t.v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
    double time_limit;  // seconds; 0 means unlimited
  };
  const std::vector<Criterion> criteria{
      {"counterexample error-by-count values", counterexample, 1.0},
      {"flat-spectrum closed form beats Haar draws", flat_scalar_optimum, 30.0},
      {"worst-case transform values", worst_transform, 0.0},
      {"rank-one binomial sum vs enumeration", rank_one, 0.0},
      {"circulant averaging never hurts", circulantization, 0.0},
      {"equidistant closed forms", cwss_formulas, 0.0},
      {"fixed-size lower bound", fixed_m_lower_bound, 0.0},
      {"gradient, stationarity and descent", gradient_and_descent, 0.0},
      {"Monte Carlo consistency", monte_carlo, 60.0},
      {"high-probability bound properties", high_probability_properties, 0.0},
      {"CLI byte-identical across thread counts", cli_reproducibility, 0.0},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].time_limit > 0.0 && secs >= criteria[i].time_limit) {
      v.pass = false;
      v.detail += "; runtime " + num(secs) + " s over the " + num(criteria[i].time_limit) + " s limit";
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s  %2zu  %-44s %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, v.detail.c_str(), secs);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
