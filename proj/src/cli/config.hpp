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

#ifndef EMMSE_CLI_CONFIG_HPP
#define EMMSE_CLI_CONFIG_HPP

// Experiment configuration: command-line and JSON-file parsing, and the
// conversion of the raw fields into library types. Every failure is a
// ConfigError naming the offending field.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "emmse/model.hpp"

namespace emmse::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what) {}
};

// Raw fields as given; list-valued fields stay comma-separated strings
// until validated.
struct ExperimentConfig {
  std::string command;
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  int threads = 0;  // 0: ERASURE_MMSE_THREADS, else the OpenMP default

  // source model
  std::size_t n = 0;  // 0: taken from the spectrum, else 8
  std::string spectrum;
  std::string preset;
  double power = 1.0;
  std::size_t band = 0;  // 0: max(1, N/4)
  double ratio = 0.5;
  std::string transform = "dft";

  // channel
  double noise = 1.0;
  std::string mode = "bernoulli";
  std::string p = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  std::string m;  // count, or a list for bounds
  std::vector<std::string> patterns;

  // Monte Carlo
  std::size_t trials = 10000;

  // cwss
  std::string delta_n;  // empty: every divisor of N

  // bounds
  double delta = 0.9;
  double kappa = 2.0;
  double theta = 0.5;
  double gamma = 0.5;
  double rho = 0.1;
  double epsilon = 0.1;

  // optimize
  std::size_t restarts = 10;
  std::size_t max_steps = 500;
  double step = 0.1;
  double tol = 1e-8;

  // verify
  double perturb = 0.0;
};

// Result of parsing: either a configuration to run, or an early exit
// (help text, parse error) with its code.
struct ParseOutcome {
  std::optional<ExperimentConfig> config;
  int exit_code = 0;
  std::string message;
};

ParseOutcome parse_arguments(int argc, const char* const* argv);

// Conversions to library types; each throws ConfigError.
Spectrum build_spectrum(const ExperimentConfig& c);
UnitaryTransform build_transform(const ExperimentConfig& c, std::size_t n);
SourceModel build_model(const ExperimentConfig& c);
std::vector<double> parse_real_list(const std::string& field, const std::string& text);
std::vector<std::size_t> parse_count_list(const std::string& field, const std::string& text);
SamplingPattern parse_pattern(const std::string& text, std::size_t n);
ChannelSpec build_channel(const ExperimentConfig& c, std::size_t n, double p);
int resolve_threads(const ExperimentConfig& c);

}  // namespace emmse::cli

#endif  // EMMSE_CLI_CONFIG_HPP
