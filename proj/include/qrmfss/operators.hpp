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

#include <cstddef>
#include <span>
#include <vector>

namespace qrmfss {

/// Dense real square matrix over a truncated basis, stored row-major.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

    static Matrix identity(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }

    double &operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    double operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }

    Matrix transpose() const;
    Matrix operator*(const Matrix &rhs) const;
    Matrix operator+(const Matrix &rhs) const;
    Matrix operator-(const Matrix &rhs) const;
    Matrix operator*(double s) const;
    friend Matrix operator*(double s, const Matrix &m) { return m * s; }

    std::vector<double> apply(std::span<const double> v) const;
    /// vᵀ M v
    double quadratic_form(std::span<const double> v) const;

    double max_abs() const noexcept;
    /// max |M(i,j) - M(j,i)|
    double max_asymmetry() const noexcept;

    /// Embeds this matrix in the top-left block of a larger zero matrix.
    Matrix embedded(std::size_t dim) const;

    bool operator==(const Matrix &) const = default;

  private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

/// Truncated ladder operator a: entry (m-1, m) = sqrt(m).
Matrix build_annihilation(std::size_t dim);

/// a†a, assembled as AᵀA from build_annihilation.
Matrix build_number(std::size_t dim);

/// (a+a†)² formed after truncation, so the two highest rows keep their
/// truncation artifacts.
Matrix build_quadrature_squared(std::size_t dim);

// Spin⊗Fock ordering used everywhere in the library: index = 2*m + s with
// s = 0 for spin down and s = 1 for spin up.
inline constexpr std::size_t kSpinDown = 0;
inline constexpr std::size_t kSpinUp = 1;

constexpr std::size_t spin_fock_index(std::size_t photons, std::size_t spin) noexcept {
    return 2 * photons + spin;
}

/// exp(iπ(a†a + |↑⟩⟨↑|)) on the spin⊗Fock space: diag((-1)^(m+s)).
Matrix build_parity(std::size_t dim_fock);

}  // namespace qrmfss
