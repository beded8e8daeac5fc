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

#include "qrmfss/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrmfss/errors.hpp"

namespace qrmfss {

namespace {

void require_dim(std::size_t dim) {
    if (dim == 0) {
        throw Error(ErrorCode::InvalidDimension, "basis size must be at least 1");
    }
}

void require_same_dim(const Matrix &a, const Matrix &b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "matrix dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    }
}

}  // namespace

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Matrix Matrix::operator*(const Matrix &rhs) const {
    require_same_dim(*this, rhs);
    Matrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t k = 0; k < dim_; ++k) {
            const double lhs = (*this)(i, k);
            if (lhs == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < dim_; ++j) {
                out(i, j) += lhs * rhs(k, j);
            }
        }
    }
    return out;
}

Matrix Matrix::operator+(const Matrix &rhs) const {
    require_same_dim(*this, rhs);
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        out.data_[i] += rhs.data_[i];
    }
    return out;
}

Matrix Matrix::operator-(const Matrix &rhs) const {
    require_same_dim(*this, rhs);
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        out.data_[i] -= rhs.data_[i];
    }
    return out;
}

Matrix Matrix::operator*(double s) const {
    Matrix out = *this;
    for (double &x : out.data_) {
        x *= s;
    }
    return out;
}

std::vector<double> Matrix::apply(std::span<const double> v) const {
    if (v.size() != dim_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "vector of length " + std::to_string(v.size()) + " for matrix of dimension " +
                        std::to_string(dim_));
    }
    std::vector<double> out(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        double acc = 0.0;
        const double *r = data_.data() + i * dim_;
        for (std::size_t j = 0; j < dim_; ++j) {
            acc += r[j] * v[j];
        }
        out[i] = acc;
    }
    return out;
}

double Matrix::quadratic_form(std::span<const double> v) const {
    const auto mv = apply(v);
    double acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        acc += v[i] * mv[i];
    }
    return acc;
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double x : data_) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double Matrix::max_asymmetry() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i + 1; j < dim_; ++j) {
            m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
        }
    }
    return m;
}

Matrix Matrix::embedded(std::size_t dim) const {
    if (dim < dim_) {
        throw Error(ErrorCode::DimensionMismatch, "cannot embed into a smaller space");
    }
    Matrix out(dim);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(i, j) = (*this)(i, j);
        }
    }
    return out;
}

Matrix build_annihilation(std::size_t dim) {
    require_dim(dim);
    Matrix a(dim);
    for (std::size_t m = 1; m < dim; ++m) {
        a(m - 1, m) = std::sqrt(static_cast<double>(m));
    }
    return a;
}

Matrix build_number(std::size_t dim) {
    require_dim(dim);
    Matrix n(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        n(i, i) = static_cast<double>(i);
    }
    return n;
}

Matrix build_quadrature_squared(std::size_t dim) {
    const Matrix a = build_annihilation(dim);
    const Matrix x = a + a.transpose();
    return x * x;
}

Matrix build_parity(std::size_t dim_fock) {
    require_dim(dim_fock);
    Matrix p(2 * dim_fock);
    for (std::size_t m = 0; m < dim_fock; ++m) {
        for (std::size_t s : {kSpinDown, kSpinUp}) {
            const std::size_t idx = spin_fock_index(m, s);
            p(idx, idx) = ((m + s) % 2 == 0) ? 1.0 : -1.0;
        }
    }
    return p;
}

}  // namespace qrmfss
