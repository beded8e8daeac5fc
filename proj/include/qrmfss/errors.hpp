// Copyright 2026 The qrmfss Authors
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
#include <string_view>

namespace qrmfss {

enum class ErrorCode {
    InvalidDimension,
    InvalidCoupling,
    NotSymmetric,
    DimensionMismatch,
    NoConvergence,
    TruncationInsufficient,
    UndefinedRatio,
    GridMismatch,
    NoCrossing,
    DegenerateCurves,
    Degenerate,
    DivisionByZero,
    InsufficientData,
    ExtrapolationFailed,
    Encoding,
    DegenerateState,
    Capacity,
    EmptyPostselection,
    Config,
    Io,
};

/// Stable snake_case name, printed by the CLI on failure.
std::string_view error_name(ErrorCode code) noexcept;

/// Config and I/O errors are user errors; everything else is numerical.
bool is_config_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// Raised by bsa_limit when no exponent gives a finite tableau; carries the
/// last raw value of the sequence as a fallback estimate.
class ExtrapolationFailed : public Error {
  public:
    ExtrapolationFailed(const std::string &message, double fallback)
        : Error(ErrorCode::ExtrapolationFailed, message), fallback_(fallback) {}

    double fallback() const noexcept { return fallback_; }

  private:
    double fallback_;
};

}  // namespace qrmfss
