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

#include <span>
#include <vector>

namespace qrmfss {

/// Bulirsch–Stoer extrapolation table for a sequence T(h_i), h strictly
/// decreasing towards 0.
///
/// rows[0] holds the raw values and each row m ≥ 1 is built from
///
///   T_m^(i) = T_{m-1}^(i+1) + (T_{m-1}^(i+1) - T_{m-1}^(i)) /
///             [ (h_i/h_{i+m})^ω (1 - (T_{m-1}^(i+1) - T_{m-1}^(i)) /
///                                    (T_{m-1}^(i+1) - T_{m-2}^(i+1))) - 1 ]
///
/// with T_{-1} ≡ 0. Row m has (count - m) entries. If a row cannot be
/// completed because a denominator vanishes (to rounding), the table stops at
/// the previous row and `truncated` is set.
struct BsaTableau {
    std::vector<double> h_values;
    std::vector<std::vector<double>> rows;
    double omega = 1.0;
    /// |T_m^(i+1) - T_m^(i)| for the last pair of the deepest row with at
    /// least two entries.
    double epsilon = 0.0;
    bool truncated = false;

    /// Deepest row, last entry: T_{count-1}^(0) when the table is complete.
    double limit() const { return rows.back().back(); }
};

BsaTableau bsa_tableau(std::span<const double> values, std::span<const double> h_values, double omega);

struct BsaResult {
    double limit = 0.0;
    double omega_star = 0.0;
    double epsilon = 0.0;
    bool truncated = false;
};

struct BsaSearch {
    double omega_min = 0.1;
    double omega_max = 10.0;
    double grid_step = 1e-2;
    double refine_tolerance = 1e-4;
};

/// Chooses ω by minimizing ε: grid search (ties to the smaller ω), then one
/// golden-section refinement around the best grid point.
BsaResult bsa_limit(std::span<const double> values, std::span<const double> h_values,
                    const BsaSearch &search = {});

}  // namespace qrmfss
