// SPDX-License-Identifier: Apache-2.0
//
// fsolink: free-space optical link capacity and channel statistics
// Copyright (C) 2026 fsolink contributors
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

#pragma once

#include <stdexcept>
#include <string>

namespace fsolink {

/// Invalid configuration or parameter set (CLI exit code 2).
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// An engine was asked to run outside its stated preconditions (CLI exit code 3).
class engine_error : public std::runtime_error {
  public:
    explicit engine_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Numerical failure: overflow, quadrature non-convergence, Gamma pole (CLI exit code 4).
class numeric_error : public std::runtime_error {
  public:
    explicit numeric_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace fsolink
