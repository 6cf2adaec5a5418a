// Copyright 2026 The relcollapse Authors
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

namespace relcollapse {

/// Malformed input: bad scenario, inconsistent order, unknown label, ...
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numerical precondition failed (zero norm, impossible branch, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario file could not be parsed.
struct ParseError : std::runtime_error {
    ParseError(const std::string &msg, std::size_t line, std::size_t column)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line(line),
          column(column) {}

    std::size_t line;
    std::size_t column;
};

}  // namespace relcollapse
