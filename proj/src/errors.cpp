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

#include "emmse/errors.hpp"

namespace emmse {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_pattern: return "invalid-pattern";
    case ErrorKind::invalid_params: return "invalid-params";
    case ErrorKind::resource_limit: return "resource-limit";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::precondition_violation: return "precondition-violation";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::reproduction_failure: return "reproduction-failure";
  }
  return "unknown";
}

}  // namespace emmse
