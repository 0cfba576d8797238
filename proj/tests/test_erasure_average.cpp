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

#include <cmath>

#include "doctest.h"
#include "emmse/erasure_average.hpp"
#include "emmse/errors.hpp"
#include "emmse/precoder.hpp"
#include "oracles.hpp"

using namespace emmse;

namespace {

// e[M] by explicit subset lists and the Gauss-Jordan oracle.
std::vector<double> oracle_error_by_count(const cmat& u, const std::vector<double>& lambda, double s2) {
  const std::size_t n = lambda.size();
  const cmat k = oracle::covariance(u, lambda);
  std::vector<double> e(n + 1, 0.0);
  for (std::size_t m = 0; m <= n; ++m)
    for (const auto& s : oracle::subsets(n, m)) e[m] += oracle::mmse(k, s, s2);
  return e;
}

cmat random_pd(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  cmat a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = cplx(g(gen), g(gen));
  cmat k = a * a.adjoint() + 0.1 * cmat::Identity(a.rows(), a.cols());
  return (k + k.adjoint()) * 0.5;
}

}  // namespace

TEST_CASE("error_by_count counterexample vectors") {
  const auto e_u0 = error_by_count(SourceModel(counterexample_transform(), counterexample_spectrum()), 1.0).e;
  const double expected[] = {1.0, 65.0 / 24.0, 409.0 / 168.0, 61.0 / 84.0};
  REQUIRE(e_u0.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(e_u0[i] - expected[i]) <= 1e-12 * expected[i]);

  const auto e_f = error_by_count(SourceModel(make_dft(3), counterexample_spectrum()), 1.0).e;
  CHECK(std::abs(e_f[2] - 2.434555) <= 1e-5);
  CHECK(e_f[1] == doctest::Approx(65.0 / 24.0).epsilon(1e-13));
  CHECK(e_f[3] == doctest::Approx(61.0 / 84.0).epsilon(1e-13));
  CHECK(e_u0[2] < e_f[2]);
}

TEST_CASE("error_by_count small cases and oracle agreement") {
  const auto e1 = error_by_count(SourceModel(UnitaryTransform::identity(1), Spectrum({2.0})), 0.5).e;
  CHECK(e1[0] == doctest::Approx(2.0));
  CHECK(e1[1] == doctest::Approx(2.0 * 0.5 / 2.5).epsilon(1e-14));

  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + gen() % 6;
    const auto lambda = oracle::random_spectrum(gen, n, 0.3);
    const auto u = random_unitary(n, gen());
    const double s2 = rep % 4 == 0 ? 0.0 : 0.25;
    const auto lib = error_by_count(SourceModel(u, Spectrum(lambda)), s2).e;
    const auto orc = oracle_error_by_count(u.matrix(), lambda, s2);
    for (std::size_t m = 0; m <= n; ++m) CHECK(std::abs(lib[m] - orc[m]) <= 1e-10 * (1.0 + orc[m]));
  }
  CHECK_THROWS_AS(error_by_count(SourceModel(make_dft(21), Spectrum(std::vector<double>(21, 1.0))), 1.0), Error);
}

TEST_CASE("serial reference and parallel kernel are bit-identical") {
  std::mt19937_64 gen(4);
  const SourceModel m(random_unitary(10, 5), Spectrum(oracle::random_spectrum(gen, 10, 0.2)));
  for (int threads : {1, 2, 3, 4}) {
    set_num_threads(threads);
    CHECK(error_by_count(m, 0.3, Exec::parallel).e == error_by_count(m, 0.3, Exec::serial).e);
    const auto a = average_mmse_mc(m, ChannelSpec::bernoulli(0.3, 0.4), 2000, 9, Exec::parallel);
    const auto b = average_mmse_mc(m, ChannelSpec::bernoulli(0.3, 0.4), 2000, 9, Exec::serial);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
  }
  set_num_threads(1);
}

TEST_CASE("average_mmse_exact") {
  const SourceModel u0(counterexample_transform(), counterexample_spectrum());
  const SourceModel f(make_dft(3), counterexample_spectrum());
  CHECK(average_mmse_exact(u0, ChannelSpec::bernoulli(1.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(average_mmse_exact(u0, ChannelSpec::bernoulli(1.0, 1.0)) == doctest::Approx(61.0 / 84.0).epsilon(1e-13));
  for (int k = 1; k <= 9; ++k) {
    const auto ch = ChannelSpec::bernoulli(1.0, 0.1 * k);
    CHECK(average_mmse_exact(u0, ch) < average_mmse_exact(f, ch));
  }
  CHECK(average_mmse_exact(u0, ChannelSpec::scalar(1.0)) == doctest::Approx(65.0 / 24.0 / 3.0).epsilon(1e-13));
  CHECK(average_mmse_exact(u0, ChannelSpec::uniform(1.0, 2)) == doctest::Approx(409.0 / 168.0 / 3.0).epsilon(1e-13));
  try {
    average_mmse_exact(u0, ChannelSpec::with_replacement(1.0, 2));
    FAIL("expected invalid-input");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_input);
  }

  SUBCASE("nonincreasing in p") {
    std::mt19937_64 gen(12);
    for (int rep = 0; rep < 10; ++rep) {
      const std::size_t n = 2 + gen() % 5;
      const SourceModel m(random_unitary(n, gen()), Spectrum(oracle::random_spectrum(gen, n, 0.2)));
      double prev = m.power() + 1e-12;
      for (int k = 0; k <= 20; ++k) {
        const double j = average_mmse_exact(m, ChannelSpec::bernoulli(0.5, k / 20.0));
        CHECK(j <= prev + 1e-12);
        prev = j;
      }
    }
  }
  SUBCASE("per-pattern average nonincreasing in M") {
    std::mt19937_64 gen(13);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t n = 1 + gen() % 8;
      const SourceModel m(random_unitary(n, gen()), Spectrum(oracle::random_spectrum(gen, n, 0.3)));
      const auto e = error_by_count(m, 0.2).e;
      CHECK(e[0] == doctest::Approx(m.power()));
      for (std::size_t k = 1; k <= n; ++k)
        CHECK(e[k] / oracle::binomial(n, k) <= e[k - 1] / oracle::binomial(n, k - 1) + 1e-10);
    }
  }
}

TEST_CASE("average_mmse_mc") {
  const SourceModel u0(counterexample_transform(), counterexample_spectrum());
  const auto full = average_mmse_mc(u0, ChannelSpec::bernoulli(1.0, 1.0), 100, 1);
  CHECK(full.std_error <= 1e-15);
  CHECK(full.mean == doctest::Approx(61.0 / 84.0).epsilon(1e-13));

  const auto ch = ChannelSpec::bernoulli(1.0, 0.5);
  const auto mc = average_mmse_mc(u0, ch, 100000, 5);
  CHECK(std::abs(mc.mean - average_mmse_exact(u0, ch)) <= 4.0 * mc.std_error);
  const auto again = average_mmse_mc(u0, ch, 100000, 5);
  CHECK(again.mean == mc.mean);

  const auto sc = average_mmse_mc(u0, ChannelSpec::scalar(1.0), 50000, 6);
  CHECK(std::abs(sc.mean - average_mmse_exact(u0, ChannelSpec::scalar(1.0))) <= 4.0 * sc.std_error);
  const auto un = average_mmse_mc(u0, ChannelSpec::uniform(1.0, 2), 50000, 7);
  CHECK(std::abs(un.mean - 409.0 / 168.0 / 3.0) <= 4.0 * un.std_error);
}

TEST_CASE("scalar_flat_optimum") {
  // two single-sample patterns on a DFT model, averaged with the oracle
  auto enumerate = [](const std::vector<double>& lambda) {
    const cmat k = oracle::covariance(oracle::dft(lambda.size()), lambda);
    double s = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) s += oracle::mmse(k, {i}, 1.0);
    return s / static_cast<double>(lambda.size());
  };
  CHECK(enumerate({1.0, 0.0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(enumerate({0.5, 0.5}) == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
  CHECK(scalar_flat_optimum(2, 1, 1.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(scalar_flat_optimum(2, 2, 1.0, 1.0) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(scalar_flat_optimum(5, 3, 2.0, 1e12) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(scalar_flat_optimum(5, 3, 2.0, INFINITY) == 2.0);
  CHECK_THROWS_AS(scalar_flat_optimum(3, 4, 1.0, 1.0), Error);
}

TEST_CASE("rank1_average") {
  CHECK(rank1_average(5, 2.0, 0.5, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(rank1_average(5, 2.0, 0.5, 1.0) == doctest::Approx(2.0 * 0.5 / 2.5).epsilon(1e-15));
  CHECK(rank1_average(2, 1.0, 1.0, 0.5) == doctest::Approx(17.0 / 24.0).epsilon(1e-15));
  const SourceModel m(make_dft(2), Spectrum({1.0, 0.0}));
  CHECK(average_mmse_exact(m, ChannelSpec::bernoulli(1.0, 0.5)) == doctest::Approx(17.0 / 24.0).epsilon(1e-14));
  CHECK(std::isfinite(rank1_average(64, 1.0, 1.0, 0.3)));
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<double> lambda(n, 0.0);
    lambda[n / 2] = 1.7;
    const SourceModel dm(make_dft(n), Spectrum(lambda));
    for (double p : {0.2, 0.5, 0.8})
      CHECK(std::abs(rank1_average(n, 1.7, 0.6, p) - average_mmse_exact(dm, ChannelSpec::bernoulli(0.6, p))) <= 1e-10);
  }
}

TEST_CASE("worst_unitary_value") {
  CHECK(worst_unitary_value(Spectrum({0.2, 0.3, 0.5}), ChannelSpec::scalar(0.0)) == doctest::Approx(2.0 / 3.0));
  CHECK(worst_unitary_value(Spectrum({1.5, 0.5}), ChannelSpec::bernoulli(0.0, 0.25)) == doctest::Approx(1.5));
  CHECK(worst_unitary_value(Spectrum({4.0}), ChannelSpec::scalar(0.0)) == 0.0);
  try {
    worst_unitary_value(Spectrum({1.0, 1.0}), ChannelSpec::scalar(0.1));
    FAIL("expected unsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported);
  }

  std::mt19937_64 gen(21);
  for (std::size_t n = 2; n <= 6; ++n) {
    const Spectrum sp(oracle::random_spectrum(gen, n, 0.3));
    for (const auto& ch : {ChannelSpec::scalar(0.0), ChannelSpec::bernoulli(0.0, 0.35)}) {
      const double worst = worst_unitary_value(sp, ch);
      CHECK(std::abs(average_mmse_exact(SourceModel(UnitaryTransform::identity(n), sp), ch) - worst) <= 1e-10);
      for (int k = 0; k < 10; ++k)
        CHECK(average_mmse_exact(SourceModel(random_unitary(n, gen()), sp), ch) <= worst + 1e-10);
    }
  }
}

TEST_CASE("circulant_average_inverse") {
  const cmat circ = covariance(SourceModel(make_dft(4), Spectrum({1.0, 2.0, 3.0, 4.0})));
  CHECK((circulant_average_inverse(circ) - circ).cwiseAbs().maxCoeff() <= 1e-12);

  cmat d = cmat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 5.0;
  CHECK((circulant_average_inverse(d) - 4.0 * cmat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);

  cmat notpd = cmat::Identity(2, 2);
  notpd(1, 1) = -1.0;
  CHECK_THROWS_AS(circulant_average_inverse(notpd), Error);

  std::mt19937_64 gen(33);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + gen() % 5;
    const cmat kinv = random_pd(gen, n);
    const cmat avg = circulant_average_inverse(kinv);
    CHECK(std::abs(avg.trace() - kinv.trace()) <= 1e-12 * std::abs(kinv.trace()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(avg(i, j) - avg((i + 1) % n, (j + 1) % n)) <= 1e-12);
    CHECK(Eigen::LLT<cmat>(avg).info() == Eigen::Success);

    const auto ch = ChannelSpec::bernoulli(0.7, 0.1 + 0.8 * (rep % 9) / 8.0);
    const double orig = average_mmse_exact(model_from_covariance(oracle::gauss_jordan_inverse(kinv)), ch);
    const double circd = average_mmse_exact(model_from_covariance(oracle::gauss_jordan_inverse(avg)), ch);
    CHECK(circd <= orig + 1e-10);
  }
}
