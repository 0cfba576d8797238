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

#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "emmse/cli.hpp"
#include "emmse/errors.hpp"
#include "emmse/precoder.hpp"
#include "json.hpp"

namespace emmse::cli {

namespace {

constexpr const char* kCommands[] = {"mmse", "average", "cwss", "bounds", "optimize", "mc", "verify"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

double parse_plain_real(const std::string& field, const std::string& tok) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto r = std::from_chars(tok.data(), end, v);
  if (tok.empty() || r.ec != std::errc() || r.ptr != end) throw ConfigError(field, "'" + tok + "' is not a number");
  return v;
}

// "a" or "a/b"
double parse_real(const std::string& field, const std::string& tok) {
  const auto slash = tok.find('/');
  if (slash == std::string::npos) return parse_plain_real(field, tok);
  const double num = parse_plain_real(field, trim(tok.substr(0, slash)));
  const double den = parse_plain_real(field, trim(tok.substr(slash + 1)));
  if (den == 0.0) throw ConfigError(field, "'" + tok + "' divides by zero");
  return num / den;
}

std::uint64_t parse_u64(const std::string& field, const std::string& tok) {
  std::uint64_t v = 0;
  const auto* end = tok.data() + tok.size();
  const auto r = std::from_chars(tok.data(), end, v);
  if (tok.empty() || r.ec != std::errc() || r.ptr != end)
    throw ConfigError(field, "'" + tok + "' is not a nonnegative integer");
  return v;
}

void add_common(CLI::App* sub, ExperimentConfig& c, bool table_output = true) {
  sub->add_option("--config", c.config_path, "JSON experiment record; command-line flags override it");
  sub->add_option("--threads", c.threads, "worker threads (fallback: ERASURE_MMSE_THREADS)");
  if (!table_output) return;
  sub->add_option("--seed", c.seed, "64-bit base seed");
  sub->add_option("--out", c.out, "output file (default: stdout)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_spectrum(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--N", c.n, "dimension");
  sub->add_option("--spectrum", c.spectrum, "comma-separated eigenvalues; fractions a/b allowed");
  sub->add_option("--preset", c.preset, "flat, bandpass or geometric")
      ->check(CLI::IsMember({"flat", "bandpass", "geometric"}));
  sub->add_option("--power", c.power, "total power for presets");
  sub->add_option("--band", c.band, "band-pass width (default max(1, N/4))");
  sub->add_option("--ratio", c.ratio, "geometric decay ratio");
}

void add_model(CLI::App* sub, ExperimentConfig& c) {
  add_spectrum(sub, c);
  sub->add_option("--transform", c.transform, "dft, identity, u0, haar:SEED or file:PATH");
}

void add_channel(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--noise", c.noise, "noise power sigma^2");
  sub->add_option("--mode", c.mode, "scalar, bernoulli, uniform_M or with_replacement_M")
      ->check(CLI::IsMember({"scalar", "bernoulli", "uniform_M", "with_replacement_M"}));
  sub->add_option("--p", c.p, "observation probabilities, comma-separated");
  sub->add_option("--M", c.m, "sample count for the fixed-size modes");
}

void build_app(CLI::App& app, ExperimentConfig& c) {
  app.require_subcommand(0, 1);
  app.add_option("--config", c.config_path, "JSON experiment record with a \"command\" field");

  auto* mmse = app.add_subcommand("mmse", "MMSE of explicit sampling patterns");
  add_common(mmse, c);
  add_model(mmse, c);
  mmse->add_option("--noise", c.noise, "noise power sigma^2");
  mmse->add_option("--pattern", c.patterns, "observed indices, e.g. 0,2; 'none' for the empty pattern");

  auto* average = app.add_subcommand("average", "exact average MMSE against the DFT and identity");
  add_common(average, c);
  add_model(average, c);
  add_channel(average, c);

  auto* cwss = app.add_subcommand("cwss", "equidistant sampling of a circulant source");
  add_common(cwss, c);
  add_spectrum(cwss, c);
  cwss->add_option("--noise", c.noise, "noise power sigma^2");
  cwss->add_option("--delta-N", c.delta_n, "sampling periods, comma-separated (default: all divisors of N)");

  auto* bounds = app.add_subcommand("bounds", "high-probability bound calculator with its conditions");
  add_common(bounds, c);
  add_model(bounds, c);
  bounds->add_option("--noise", c.noise, "noise power sigma^2");
  bounds->add_option("--M", c.m, "sample counts, comma-separated (default N/2)");
  bounds->add_option("--trials", c.trials, "patterns for the empirical tail (0 skips it)");
  bounds->add_option("--delta", c.delta, "energy fraction defining D");
  bounds->add_option("--kappa", c.kappa, "sparse-set oversizing");
  bounds->add_option("--theta", c.theta, "isometry slack");
  bounds->add_option("--gamma", c.gamma, "compressible shrink");
  bounds->add_option("--rho", c.rho, "incompressibility level");
  bounds->add_option("--epsilon", c.epsilon, "failure probability");

  auto* optimize = app.add_subcommand("optimize", "Riemannian descent over unitary precoders");
  add_common(optimize, c);
  add_model(optimize, c);
  add_channel(optimize, c);
  optimize->add_option("--restarts", c.restarts, "additional Haar-random starts");
  optimize->add_option("--max-steps", c.max_steps, "iteration cap per start");
  optimize->add_option("--step", c.step, "initial step length");
  optimize->add_option("--tol", c.tol, "stationarity residual tolerance");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimates against the analytic values");
  add_common(mc, c);
  add_model(mc, c);
  add_channel(mc, c);
  mc->add_option("--pattern", c.patterns, "observed indices for the per-pattern estimate");
  mc->add_option("--trials", c.trials, "Monte Carlo trials");

  auto* verify = app.add_subcommand("verify", "closed-form and counterexample checklist");
  add_common(verify, c, false);
  verify->add_option("--perturb", c.perturb, "shift the counterexample spectrum by +-eps (sensitivity check)");
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_double(v.get<double>());
  throw ConfigError("", "unsupported value " + v.dump());
}

std::string json_list(const nlohmann::json& v) {
  if (!v.is_array()) return json_scalar(v);
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + json_scalar(v[i]);
  return s;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.is_object()) throw ConfigError("--config", "top level must be an object");
    return doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("--config", std::string(path) + ": " + e.what());
  }
}

// Fills every option the command line left unset from the JSON record.
void apply_json(CLI::App* sub, const nlohmann::json& doc) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      if (!value.is_string() || value.get<std::string>() != sub->get_name())
        throw ConfigError("command", "config is for '" + json_list(value) + "' but '" + sub->get_name() + "' was run");
      continue;
    }
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") throw ConfigError(key, "unknown field for '" + sub->get_name() + "'");
    if (opt->count() > 0) continue;
    try {
      if (key == "pattern" && value.is_array()) {
        for (const auto& pat : value) {
          const std::string s = json_list(pat);
          opt->add_result(s.empty() ? "none" : s);
        }
      } else {
        opt->add_result(json_list(value));
      }
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError(key, e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(key, e.what());
    }
  }
}

}  // namespace

ParseOutcome parse_arguments(int argc, const char* const* argv) {
  // Without a command word, the config record names the command; it is
  // inserted first so that every remaining flag parses as a subcommand flag.
  bool has_command = false;
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (std::find(std::begin(kCommands), std::end(kCommands), a) != std::end(kCommands)) has_command = true;
    if (a == "--config" && i + 1 < argc) config_path = argv[i + 1];
    if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
  }
  if (!has_command && !config_path.empty()) {
    const nlohmann::json doc = load_json(config_path);
    if (!doc.contains("command") || !doc["command"].is_string())
      throw ConfigError("command", "config has no \"command\" and none was given");
    const std::string cmd = doc["command"].get<std::string>();
    if (std::find(std::begin(kCommands), std::end(kCommands), cmd) == std::end(kCommands))
      throw ConfigError("command", "unknown command '" + cmd + "'");
    std::vector<const char*> args{argv[0], cmd.c_str()};
    for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
    return parse_arguments(static_cast<int>(args.size()), args.data());
  }

  ParseOutcome outcome;
  ExperimentConfig c;
  CLI::App app{"Average MMSE of Gaussian sources under random and equidistant sampling", "erasure-mmse"};
  build_app(app, c);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int rc = app.exit(e, out, err);
    outcome.exit_code = rc == 0 ? kOk : kConfigError;
    outcome.message = out.str() + err.str();
    return outcome;
  }

  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    outcome.exit_code = kConfigError;
    outcome.message = "a command is required\n" + app.help();
    return outcome;
  }
  CLI::App* sub = subs.front();
  c.command = sub->get_name();
  if (!c.config_path.empty()) apply_json(sub, load_json(c.config_path));
  outcome.config = c;
  return outcome;
}

std::vector<double> parse_real_list(const std::string& field, const std::string& text) {
  std::vector<double> v;
  if (trim(text).empty()) throw ConfigError(field, "empty list");
  for (const auto& tok : split(text, ',')) v.push_back(parse_real(field, tok));
  return v;
}

std::vector<std::size_t> parse_count_list(const std::string& field, const std::string& text) {
  std::vector<std::size_t> v;
  if (trim(text).empty()) throw ConfigError(field, "empty list");
  for (const auto& tok : split(text, ',')) v.push_back(static_cast<std::size_t>(parse_u64(field, tok)));
  return v;
}

Spectrum build_spectrum(const ExperimentConfig& c) {
  try {
    if (!c.spectrum.empty()) {
      if (!c.preset.empty()) throw ConfigError("--preset", "give either --spectrum or --preset, not both");
      auto values = parse_real_list("--spectrum", c.spectrum);
      if (c.n != 0 && c.n != values.size())
        throw ConfigError("--spectrum", std::to_string(values.size()) + " values but --N " + std::to_string(c.n));
      return Spectrum(std::move(values));
    }
    const std::size_t n = c.n == 0 ? 8 : c.n;
    if (!(c.power > 0.0) || !std::isfinite(c.power)) throw ConfigError("--power", "must be positive");
    const std::string preset = c.preset.empty() ? "flat" : c.preset;
    std::vector<double> l(n, 0.0);
    if (preset == "flat") {
      for (double& v : l) v = c.power / static_cast<double>(n);
    } else if (preset == "bandpass") {
      const std::size_t band = c.band == 0 ? std::max<std::size_t>(1, n / 4) : c.band;
      if (band > n) throw ConfigError("--band", "exceeds N");
      for (std::size_t i = 0; i < band; ++i) l[i] = c.power / static_cast<double>(band);
    } else {
      if (!(c.ratio > 0.0 && c.ratio <= 1.0)) throw ConfigError("--ratio", "must lie in (0, 1]");
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += (l[i] = std::pow(c.ratio, static_cast<double>(i)));
      for (double& v : l) v *= c.power / s;
    }
    return Spectrum(std::move(l));
  } catch (const Error& e) {
    throw ConfigError(c.spectrum.empty() ? "--preset" : "--spectrum", e.what());
  }
}

UnitaryTransform build_transform(const ExperimentConfig& c, std::size_t n) {
  const std::string& t = c.transform;
  try {
    if (t == "dft") return make_dft(n);
    if (t == "identity") return UnitaryTransform::identity(n);
    if (t == "u0") {
      if (n != 3) throw ConfigError("--transform", "u0 is the 3x3 counterexample transform; N = " + std::to_string(n));
      return counterexample_transform();
    }
    if (t.rfind("haar:", 0) == 0) return random_unitary(n, parse_u64("--transform", t.substr(5)));
    if (t.rfind("file:", 0) == 0) {
      const nlohmann::json doc = load_json(t.substr(5));
      if (!doc.contains("real")) throw ConfigError("--transform", "matrix file needs a \"real\" array");
      const auto& re = doc["real"];
      const nlohmann::json im = doc.value("imag", nlohmann::json());
      if (!re.is_array() || re.size() != n) throw ConfigError("--transform", "matrix must have N rows");
      cmat u(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        if (!re[i].is_array() || re[i].size() != n) throw ConfigError("--transform", "matrix must be N x N");
        for (std::size_t j = 0; j < n; ++j) {
          const double b = im.is_array() ? im.at(i).at(j).get<double>() : 0.0;
          u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cplx(re[i][j].get<double>(), b);
        }
      }
      return UnitaryTransform(u);
    }
  } catch (const Error& e) {
    throw ConfigError("--transform", e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("--transform", e.what());
  }
  throw ConfigError("--transform", "unknown transform '" + t + "'");
}

SourceModel build_model(const ExperimentConfig& c) {
  Spectrum sp = build_spectrum(c);
  UnitaryTransform u = build_transform(c, sp.size());
  return SourceModel(std::move(u), std::move(sp));
}

SamplingPattern parse_pattern(const std::string& text, std::size_t n) {
  const std::string t = trim(text);
  std::vector<std::size_t> idx;
  if (!(t.empty() || t == "none" || t == "{}")) idx = parse_count_list("--pattern", t);
  try {
    SamplingPattern p(std::move(idx));
    p.validate(n);
    return p;
  } catch (const Error& e) {
    throw ConfigError("--pattern", e.what());
  }
}

ChannelSpec build_channel(const ExperimentConfig& c, std::size_t n, double p) {
  if (!(c.noise >= 0.0) || !std::isfinite(c.noise)) throw ConfigError("--noise", "must be finite and >= 0");
  if (c.mode == "scalar") return ChannelSpec::scalar(c.noise);
  if (c.mode == "bernoulli") {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("--p", "probability " + format_double(p) + " outside [0, 1]");
    return ChannelSpec::bernoulli(c.noise, p);
  }
  if (c.m.empty()) throw ConfigError("--M", "required for mode " + c.mode);
  const std::size_t m = static_cast<std::size_t>(parse_u64("--M", trim(c.m)));
  if (c.mode == "uniform_M") {
    if (m > n) throw ConfigError("--M", "exceeds N = " + std::to_string(n));
    return ChannelSpec::uniform(c.noise, m);
  }
  return ChannelSpec::with_replacement(c.noise, m);
}

int resolve_threads(const ExperimentConfig& c) {
  if (c.threads < 0) throw ConfigError("--threads", "must be >= 1");
  if (c.threads > 0) return c.threads;
  const char* env = std::getenv("ERASURE_MMSE_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  const std::uint64_t k = parse_u64("ERASURE_MMSE_THREADS", trim(env));
  if (k == 0 || k > 4096) throw ConfigError("ERASURE_MMSE_THREADS", "must lie in [1, 4096]");
  return static_cast<int>(k);
}

}  // namespace emmse::cli
