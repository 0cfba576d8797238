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

#ifndef EMMSE_PRECODER_HPP
#define EMMSE_PRECODER_HPP

/// \file precoder.hpp
/// Average-MMSE objective over unitary precoders, its Wirtinger gradient,
/// first-order stationarity on the unitary manifold and a Riemannian
/// gradient descent with Armijo backtracking.

#include <vector>

#include "emmse/erasure_average.hpp"
#include "emmse/model.hpp"

namespace emmse {

struct OptimizerConfig {
  std::size_t max_steps = 500;
  double step_init = 0.1;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double tol_residual = 1e-8;

  void validate() const;
};

struct StationarityReport {
  double residual = 0.0;
  double objective = 0.0;
  bool satisfied = false;
};

struct OptimizeResult {
  UnitaryTransform transform;
  std::vector<double> objective_trace;  // entry 0 is the starting objective
  std::vector<double> residual_trace;
  std::size_t strict_decreases = 0;
  bool converged = false;  // residual <= tol_residual at exit
};

/// E_H[mmse] for a unitary precoder; scalar, bernoulli or uniform_M channel.
double objective(const UnitaryTransform& u, const Spectrum& spectrum, const ChannelSpec& channel,
                 Exec exec = Exec::parallel);

/// The same objective sum_k p_k tr((Lambda_B^{-1} + U_B^H H_k^H H_k U_B / sigma^2)^{-1})
/// for an arbitrary (not necessarily unitary) N x N matrix. Used for
/// finite-difference checks off the manifold.
double objective_unconstrained(const cmat& u, const Spectrum& spectrum, const ChannelSpec& channel);

/// dJ/d(conj U): -(1/sigma^2) sum_k p_k H_k^H H_k U_B M_k^{-2} on the support
/// columns, zero elsewhere. A real perturbation dU changes J by
/// 2 Re tr(G^H dU) to first order.
cmat euclidean_gradient(const cmat& u, const Spectrum& spectrum, const ChannelSpec& channel);
cmat euclidean_gradient(const UnitaryTransform& u, const Spectrum& spectrum, const ChannelSpec& channel);

/// Norm of the gradient's component that no Hermitian multiplier can absorb:
/// ||G_B - U_B herm(U_B^H G_B)||_F. Zero exactly when the first-order
/// Lagrange conditions of the orthonormality-constrained problem hold.
StationarityReport stationarity_residual(const UnitaryTransform& u, const Spectrum& spectrum,
                                         const ChannelSpec& channel, double tol_residual = 1e-8);

/// Deterministic Riemannian descent from u_init. The objective trace is
/// nonincreasing; the run stops at max_steps, when the residual drops to
/// tol_residual, or when backtracking cannot find an Armijo step.
OptimizeResult optimize(const Spectrum& spectrum, const ChannelSpec& channel, const UnitaryTransform& u_init,
                        const OptimizerConfig& config = {});

/// The 3x3 real orthogonal transform that beats the DFT on the three-level
/// spectrum (1/6, 2/6, 3/6) with unit noise.
UnitaryTransform counterexample_transform();
Spectrum counterexample_spectrum();

struct CounterexampleReport {
  std::vector<double> e_u0;
  std::vector<double> e_dft;
  std::vector<double> expected_u0;  // {1, 65/24, 409/168, 61/84}
  double expected_e2_dft = 2.434555;
  double max_rel_diff_u0 = 0.0;
  double e2_dft_abs_diff = 0.0;
  std::vector<double> p_grid;
  std::vector<double> j_u0;
  std::vector<double> j_dft;
};

/// Recomputes the error-by-count vectors for U0 and the DFT and checks them;
/// throws reproduction-failure listing every mismatching entry.
CounterexampleReport reproduce_counterexample();
CounterexampleReport reproduce_counterexample(const Spectrum& spectrum);

}  // namespace emmse

#endif  // EMMSE_PRECODER_HPP
