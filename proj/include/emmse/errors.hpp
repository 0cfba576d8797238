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

#ifndef EMMSE_ERRORS_HPP
#define EMMSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace emmse {

enum class ErrorKind {
  invalid_dimension,
  invalid_input,
  invalid_pattern,
  invalid_params,
  resource_limit,
  unsupported,
  precondition_violation,
  numerical_failure,
  reproduction_failure,
};

const char* to_string(ErrorKind kind) noexcept;

// All library failures are reported through this type; `kind()` lets callers
// (the CLI in particular) map failures to exit codes without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace emmse

#endif  // EMMSE_ERRORS_HPP
