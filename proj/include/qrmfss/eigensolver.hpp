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

#include "qrmfss/operators.hpp"

namespace qrmfss {

struct GroundSolution {
    double energy = 0.0;
    /// Unit norm; the largest-magnitude component is positive.
    std::vector<double> vector;
    /// ‖H v - E v‖₂
    double residual = 0.0;
};

struct Spectrum {
    /// Ascending.
    std::vector<double> values;
    /// Column k of `vectors` is the eigenvector of values[k].
    Matrix vectors;
};

/// Full eigendecomposition of a symmetric matrix: Householder reduction to
/// tridiagonal form followed by implicit-shift QL iteration.
Spectrum eigen_decompose(const Matrix &h);

/// Eigenvalues only (no vector accumulation).
std::vector<double> eigenvalues(const Matrix &h);

/// Minimal eigenpair of a symmetric matrix.
GroundSolution ground_state(const Matrix &h);

/// Minimal eigenpair of the symmetric tridiagonal matrix with the given
/// diagonal and sub-diagonal (off[i] couples i and i+1). Eigenvalues come from
/// QL without vectors; the vector from inverse iteration. O(n²).
GroundSolution ground_state_tridiagonal(std::span<const double> diag, std::span<const double> off);

}  // namespace qrmfss
