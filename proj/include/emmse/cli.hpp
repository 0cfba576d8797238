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

#ifndef EMMSE_CLI_HPP
#define EMMSE_CLI_HPP

/// \file cli.hpp
/// Entry point and table writers of the erasure-mmse command-line tool.
///
/// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
/// 4 reproduction failure.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace emmse::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kReproductionFailure = 4 };

/// Empty cells (std::monostate) mark values that do not apply to a row.
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// printf "%.17g"; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);

/// RFC-4180 fields with "\n" line ends: header row first, fields quoted when they
/// contain a comma, quote or newline.
std::string to_csv(const Table& table);

/// {"columns": [...], "command": ..., "rows": [{column: value}]}, keys
/// sorted; non-finite numbers become null.
std::string to_json(const Table& table);

/// Runs the tool on argv; all regular output goes to out, diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace emmse::cli

#endif  // EMMSE_CLI_HPP
