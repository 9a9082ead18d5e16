// Copyright 2026 The cliffproxy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace cliffproxy {

/// Base class of every error raised by the toolkit.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operands disagree on qubit count or matrix shape.
struct DimensionError : Error {
    using Error::Error;
};

/// A non-Clifford one-qubit gate reached a Clifford-only code path.
struct NotCliffordError : Error {
    using Error::Error;
};

/// Exact folding was requested above the dense label limit.
struct FoldLimitError : Error {
    using Error::Error;
};

/// Reference fidelity estimate fell below the configured floor.
struct ReferenceTooNoisyError : Error {
    using Error::Error;
};

/// Interior-point solver stopped before reaching the requested gap.
struct SolverError : Error {
    SolverError(const std::string &what, double gap) : Error(what), achieved_gap(gap) {
    }
    double achieved_gap;
};

}  // namespace cliffproxy
