// Copyright 2026 The phaselock Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Error type shared by every module.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phaselock {

enum class ErrorKind {
    InvalidParameter,
    Domain,
    Truncation,
    DegenerateSplit,
    Aliasing,
    Shape,
    Degenerate,
    Contract,
    Format,
    Config,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidParameter:
        return "invalid-parameter";
    case ErrorKind::Domain:
        return "domain";
    case ErrorKind::Truncation:
        return "truncation";
    case ErrorKind::DegenerateSplit:
        return "degenerate-split";
    case ErrorKind::Aliasing:
        return "aliasing";
    case ErrorKind::Shape:
        return "shape";
    case ErrorKind::Degenerate:
        return "degenerate";
    case ErrorKind::Contract:
        return "contract";
    case ErrorKind::Format:
        return "format";
    case ErrorKind::Config:
        return "config";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what),
          kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string &what) {
    if (!condition) {
        throw Error(kind, what);
    }
}

} // namespace phaselock
