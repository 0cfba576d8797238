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

#ifndef EMMSE_CLI_COMMANDS_HPP
#define EMMSE_CLI_COMMANDS_HPP

#include <iosfwd>

#include "config.hpp"
#include "emmse/cli.hpp"

namespace emmse::cli {

// Table-producing subcommands.
Table cmd_mmse(const ExperimentConfig& c);
Table cmd_average(const ExperimentConfig& c);
Table cmd_cwss(const ExperimentConfig& c);
Table cmd_bounds(const ExperimentConfig& c);
Table cmd_optimize(const ExperimentConfig& c);
Table cmd_mc(const ExperimentConfig& c);

// Prints the checklist to out; returns kOk or kReproductionFailure.
int cmd_verify(const ExperimentConfig& c, std::ostream& out);

}  // namespace emmse::cli

#endif  // EMMSE_CLI_COMMANDS_HPP
