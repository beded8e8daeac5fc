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

#include "qrmfss/errors.hpp"

namespace qrmfss {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidDimension: return "invalid_dimension";
        case ErrorCode::InvalidCoupling: return "invalid_coupling";
        case ErrorCode::NotSymmetric: return "not_symmetric";
        case ErrorCode::DimensionMismatch: return "dimension_mismatch";
        case ErrorCode::NoConvergence: return "no_convergence";
        case ErrorCode::TruncationInsufficient: return "truncation_insufficient";
        case ErrorCode::UndefinedRatio: return "undefined_ratio";
        case ErrorCode::GridMismatch: return "grid_mismatch";
        case ErrorCode::NoCrossing: return "no_crossing";
        case ErrorCode::DegenerateCurves: return "degenerate_curves";
        case ErrorCode::Degenerate: return "degenerate";
        case ErrorCode::DivisionByZero: return "division_by_zero";
        case ErrorCode::InsufficientData: return "insufficient_data";
        case ErrorCode::ExtrapolationFailed: return "extrapolation_failed";
        case ErrorCode::Encoding: return "encoding";
        case ErrorCode::DegenerateState: return "degenerate_state";
        case ErrorCode::Capacity: return "capacity";
        case ErrorCode::EmptyPostselection: return "empty_postselection";
        case ErrorCode::Config: return "config";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

bool is_config_error(ErrorCode code) noexcept {
    return code == ErrorCode::Config || code == ErrorCode::Io;
}

}  // namespace qrmfss
