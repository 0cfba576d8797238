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

#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "emmse/bounds.hpp"
#include "emmse/cwss.hpp"
#include "emmse/erasure_average.hpp"
#include "emmse/errors.hpp"
#include "emmse/mmse.hpp"
#include "emmse/precoder.hpp"

namespace emmse::cli {

namespace {

Cell count(std::size_t v) { return static_cast<std::int64_t>(v); }

std::string pattern_label(const SamplingPattern& p) {
  std::string s = "{";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p.indices()[i]);
  return s + "}";
}

std::vector<SamplingPattern> patterns_of(const ExperimentConfig& c, std::size_t n) {
  std::vector<SamplingPattern> out;
  for (const auto& text : c.patterns) out.push_back(parse_pattern(text, n));
  return out;
}

std::vector<double> p_list(const ExperimentConfig& c) {
  auto ps = parse_real_list("--p", c.p);
  for (double p : ps)
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("--p", "probability " + format_double(p) + " outside [0, 1]");
  return ps;
}

// The channels a subcommand sweeps: one per p for bernoulli, one otherwise.
// The returned p is the expected fraction of observed entries.
std::vector<std::pair<double, ChannelSpec>> channels_of(const ExperimentConfig& c, std::size_t n) {
  std::vector<std::pair<double, ChannelSpec>> out;
  if (c.mode == "bernoulli") {
    for (double p : p_list(c)) out.emplace_back(p, build_channel(c, n, p));
    return out;
  }
  const ChannelSpec ch = build_channel(c, n, 0.0);
  const double frac = ch.mode == ChannelMode::scalar ? 1.0 / static_cast<double>(n)
                                                     : static_cast<double>(ch.m) / static_cast<double>(n);
  out.emplace_back(frac, ch);
  return out;
}

// Flat low-pass spectrum {0..b-1}: returns b, else 0.
std::size_t flat_lowpass_width(const Spectrum& sp) {
  const auto sup = sp.support();
  if (sup.empty()) return 0;
  for (std::size_t i = 0; i < sup.size(); ++i)
    if (sup[i] != i || std::abs(sp[i] - sp[0]) > 1e-15 * sp[0]) return 0;
  return sup.size();
}

}  // namespace

Table cmd_mmse(const ExperimentConfig& c) {
  const SourceModel model = build_model(c);
  const std::size_t n = model.size();
  if (!(c.noise >= 0.0) || !std::isfinite(c.noise)) throw ConfigError("--noise", "must be finite and >= 0");
  std::vector<SamplingPattern> pats = patterns_of(c, n);
  if (pats.empty()) {
    if (n > 10) throw ConfigError("--pattern", "required when N > 10");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) pats.push_back(SamplingPattern::from_mask(mask, n));
  }
  Table t{"mmse", {"pattern", "size", "mmse", "method"}, {}};
  for (const auto& p : pats) {
    const MmseResult r = mmse_for_pattern(model, p, c.noise);
    t.rows.push_back({pattern_label(p), count(p.size()), r.error, std::string(to_string(r.method))});
  }
  return t;
}

Table cmd_average(const ExperimentConfig& c) {
  const SourceModel model = build_model(c);
  const std::size_t n = model.size();
  if (c.mode == "with_replacement_M")
    throw ConfigError("--mode", "no exact average for with_replacement_M; use the mc command");
  const SourceModel dft(make_dft(n), model.spectrum());
  const SourceModel ident(UnitaryTransform::identity(n), model.spectrum());
  Table t{"average", {"p", "J_U", "J_dft", "J_identity"}, {}};
  for (const auto& [p, ch] : channels_of(c, n))
    t.rows.push_back({p, average_mmse_exact(model, ch), average_mmse_exact(dft, ch), average_mmse_exact(ident, ch)});
  return t;
}

Table cmd_cwss(const ExperimentConfig& c) {
  const Spectrum sp = build_spectrum(c);
  const std::size_t n = sp.size();
  if (!(c.noise >= 0.0) || !std::isfinite(c.noise)) throw ConfigError("--noise", "must be finite and >= 0");
  std::vector<std::size_t> periods;
  if (c.delta_n.empty()) {
    for (std::size_t d = 1; d <= n; ++d)
      if (n % d == 0) periods.push_back(d);
  } else {
    periods = parse_count_list("--delta-N", c.delta_n);
    for (std::size_t d : periods)
      if (d == 0 || n % d != 0) throw ConfigError("--delta-N", std::to_string(d) + " does not divide N = " + std::to_string(n));
  }
  const std::size_t band = flat_lowpass_width(sp);
  Table t{"cwss", {"delta_N", "M", "mmse", "bandpass_closed_form", "aliasing_free_bound"}, {}};
  for (std::size_t d : periods) {
    const std::size_t m = n / d;
    Cell closed;
    if (band > 0 && m >= band && c.noise > 0.0) closed = bandpass_error(sp.trace(), band, m, n, c.noise);
    t.rows.push_back({count(d), count(m), equidistant_mmse(sp, d, c.noise), closed, aliasing_free_bound(sp, d)});
  }
  return t;
}

Table cmd_bounds(const ExperimentConfig& c) {
  const SourceModel model = build_model(c);
  const std::size_t n = model.size();
  const double mu = coherence(model.transform());
  const std::vector<std::size_t> ms =
      c.m.empty() ? std::vector<std::size_t>{std::max<std::size_t>(1, n / 2)} : parse_count_list("--M", c.m);

  Table t{"bounds", {"M", "D", "mu", "bound", "eigmin_bound", "C_kD", "C_I", "C_lambda_S", "C_lambda_I"}, {}};
  bool header_done = false;
  for (std::size_t row = 0; row < ms.size(); ++row) {
    DofBoundParams prm;
    prm.delta = c.delta;
    prm.kappa = c.kappa;
    prm.theta = c.theta;
    prm.gamma = c.gamma;
    prm.rho = c.rho;
    prm.epsilon = c.epsilon;
    prm.m = ms[row];
    prm.n = n;
    prm.noise_power = c.noise;
    BoundReport rep;
    double eig = 0.0;
    try {
      rep = dof_mmse_bound(model.spectrum(), prm, mu);
      eig = eigmin_lower_bound(model.spectrum(), prm, mu);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::invalid_params) throw ConfigError("bounds", e.what());
      throw;
    }
    if (!header_done) {
      for (const auto& cond : rep.conditions) {
        t.columns.push_back(cond.name);
        t.columns.push_back(cond.name + "_margin");
      }
      t.columns.push_back("empirical_tail");
      header_done = true;
    }
    std::vector<Cell> r{count(ms[row]),
                        rep.constants.at("D"),
                        mu,
                        rep.bound_value,
                        eig,
                        rep.constants.at("C_kD"),
                        rep.constants.at("C_I"),
                        rep.constants.at("C_lambda_S"),
                        rep.constants.at("C_lambda_I")};
    for (const auto& cond : rep.conditions) {
      r.emplace_back(cond.satisfied);
      r.emplace_back(cond.margin);
    }
    if (c.trials > 0)
      r.emplace_back(empirical_tail(model, ms[row], c.noise, rep.bound_value, c.trials, derive_seed(c.seed, row), true));
    else
      r.emplace_back(std::monostate{});
    t.rows.push_back(std::move(r));
  }
  return t;
}

Table cmd_optimize(const ExperimentConfig& c) {
  const SourceModel model = build_model(c);
  const std::size_t n = model.size();
  if (!(c.noise > 0.0)) throw ConfigError("--noise", "precoder optimization needs noise > 0");
  OptimizerConfig oc;
  oc.max_steps = c.max_steps;
  oc.step_init = c.step;
  oc.tol_residual = c.tol;
  try {
    oc.validate();
  } catch (const Error& e) {
    throw ConfigError("optimize", e.what());
  }
  if (c.mode == "with_replacement_M") throw ConfigError("--mode", "the objective needs scalar, bernoulli or uniform_M");

  std::vector<std::pair<std::string, UnitaryTransform>> starts{{c.transform, model.transform()}};
  for (std::size_t r = 0; r < c.restarts; ++r) {
    const std::uint64_t s = derive_seed(c.seed, r);
    starts.emplace_back("haar:" + std::to_string(s), random_unitary(n, s));
  }
  Table t{"optimize", {"p", "start", "J_initial", "J_final", "steps", "strict_decreases", "residual", "converged"}, {}};
  for (const auto& [p, ch] : channels_of(c, n))
    for (const auto& [label, u] : starts) {
      const OptimizeResult res = optimize(model.spectrum(), ch, u, oc);
      t.rows.push_back({p, label, res.objective_trace.front(), res.objective_trace.back(),
                        count(res.objective_trace.size() - 1), count(res.strict_decreases), res.residual_trace.back(),
                        res.converged});
    }
  return t;
}

Table cmd_mc(const ExperimentConfig& c) {
  const SourceModel model = build_model(c);
  const std::size_t n = model.size();
  if (c.trials < 2) throw ConfigError("--trials", "need at least 2 trials");
  Table t{"mc", {"quantity", "pattern", "p", "analytic", "empirical", "std_error", "trials", "seed", "z_score"}, {}};
  auto z = [](double a, const EmpiricalMse& e) -> double {
    const double d = std::abs(e.mean - a);
    if (e.std_error > 0.0) return d / e.std_error;
    return d == 0.0 ? 0.0 : INFINITY;
  };
  std::uint64_t row = 0;
  for (const auto& p : patterns_of(c, n)) {
    const std::uint64_t s = derive_seed(c.seed, row++);
    const double a = mmse_for_pattern(model, p, c.noise).error;
    const EmpiricalMse e = empirical_mse(model, p, c.noise, c.trials, s);
    t.rows.push_back({std::string("pattern_mse"), pattern_label(p), std::monostate{}, a, e.mean, e.std_error,
                      count(c.trials), std::to_string(s), z(a, e)});
  }
  for (const auto& [frac, ch] : channels_of(c, n)) {
    const std::uint64_t s = derive_seed(c.seed, row++);
    const EmpiricalMse e = average_mmse_mc(model, ch, c.trials, s);
    Cell analytic, zs;
    if (ch.mode != ChannelMode::with_replacement_m) {
      const double a = average_mmse_exact(model, ch);
      analytic = a;
      zs = z(a, e);
    }
    t.rows.push_back({std::string("average_mmse"), std::string(to_string(ch.mode)), frac, analytic, e.mean,
                      e.std_error, count(c.trials), std::to_string(s), zs});
  }
  return t;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const ParseOutcome parsed = parse_arguments(argc, argv);
    if (!parsed.config) {
      (parsed.exit_code == kOk ? out : err) << parsed.message;
      return parsed.exit_code;
    }
    const ExperimentConfig& c = *parsed.config;
    if (const int k = resolve_threads(c); k > 0) set_num_threads(k);

    if (c.command == "verify") return cmd_verify(c, out);

    Table t;
    if (c.command == "mmse") t = cmd_mmse(c);
    else if (c.command == "average") t = cmd_average(c);
    else if (c.command == "cwss") t = cmd_cwss(c);
    else if (c.command == "bounds") t = cmd_bounds(c);
    else if (c.command == "optimize") t = cmd_optimize(c);
    else t = cmd_mc(c);

    const std::string text = c.format == "json" ? to_json(t) : to_csv(t);
    if (c.out.empty()) {
      out << text;
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!(f << text)) throw ConfigError("--out", "cannot write '" + c.out + "'");
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::numerical_failure: return kNumericalFailure;
      case ErrorKind::reproduction_failure: return kReproductionFailure;
      default: return kConfigError;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace emmse::cli
