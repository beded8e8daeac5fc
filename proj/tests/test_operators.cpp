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


#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qrmfss/errors.hpp"
#include "qrmfss/operators.hpp"

namespace qrmfss {
namespace {

// Plain triple-loop product, independent of Matrix::operator*.
std::vector<double> naive_product(const Matrix &a, const Matrix &b) {
    const std::size_t n = a.dim();
    std::vector<double> c(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) c[i * n + j] += a(i, k) * b(k, j);
    return c;
}

void expect_error(ErrorCode code, auto &&fn) {
    try {
        fn();
        FAIL() << "expected " << error_name(code);
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), code);
    }
}

TEST(Annihilation, TwoLevel) {
    const Matrix a = build_annihilation(2);
    EXPECT_EQ(a(0, 1), 1.0);
    EXPECT_EQ(a(0, 0), 0.0);
    EXPECT_EQ(a(1, 0), 0.0);
    EXPECT_EQ(a(1, 1), 0.0);
}

TEST(Annihilation, VacuumOnly) {
    const Matrix a = build_annihilation(1);
    ASSERT_EQ(a.dim(), 1u);
    EXPECT_EQ(a(0, 0), 0.0);
}

TEST(Annihilation, FourLevelEntry) {
    const Matrix a = build_annihilation(4);
    EXPECT_NEAR(a(2, 3), 1.7320508, 1e-7);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (j != i + 1) EXPECT_EQ(a(i, j), 0.0);
}

TEST(Annihilation, ZeroDimensionRejected) {
    expect_error(ErrorCode::InvalidDimension, [] { build_annihilation(0); });
    expect_error(ErrorCode::InvalidDimension, [] { build_number(0); });
    expect_error(ErrorCode::InvalidDimension, [] { build_quadrature_squared(0); });
    expect_error(ErrorCode::InvalidDimension, [] { build_parity(0); });
}

TEST(Number, Diagonal) {
    const Matrix n3 = build_number(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(n3(i, j), i == j ? static_cast<double>(i) : 0.0);
    EXPECT_EQ(build_number(1)(0, 0), 0.0);
}

TEST(Number, MatchesLadderProductUpTo64) {
    for (std::size_t dim = 1; dim <= 64; ++dim) {
        const Matrix a = build_annihilation(dim);
        const auto oracle = naive_product(a.transpose(), a);
        const Matrix n = build_number(dim);
        for (std::size_t k = 0; k < oracle.size(); ++k) ASSERT_NEAR(n.data()[k], oracle[k], 1e-13) << dim;
    }
}

TEST(QuadratureSquared, InteriorEntries) {
    const Matrix q = build_quadrature_squared(6);
    for (std::size_t m = 0; m + 3 <= 6; ++m) {
        EXPECT_NEAR(q(m, m), 2.0 * m + 1.0, 1e-14);
        EXPECT_NEAR(q(m, m + 2), std::sqrt((m + 1.0) * (m + 2.0)), 1e-14);
    }
}

TEST(QuadratureSquared, TopRowsKeepTruncationArtifact) {
    // The top level misses its a a† contribution.
    const Matrix q = build_quadrature_squared(6);
    EXPECT_NEAR(q(5, 5), 5.0, 1e-14);
}

TEST(QuadratureSquared, VacuumBlockIsProductOfTruncatedLadders) {
    // A is the 1x1 zero matrix, so (A + Aᵀ)² vanishes.
    EXPECT_EQ(build_quadrature_squared(1)(0, 0), 0.0);
}

TEST(QuadratureSquared, MatchesProductOracleSymmetricBanded) {
    for (std::size_t dim = 1; dim <= 40; ++dim) {
        const Matrix a = build_annihilation(dim);
        const Matrix x = a + a.transpose();
        const auto oracle = naive_product(x, x);
        const Matrix q = build_quadrature_squared(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                ASSERT_NEAR(q(i, j), oracle[i * dim + j], 1e-12);
                ASSERT_EQ(q(i, j), q(j, i));
                const std::size_t band = i > j ? i - j : j - i;
                if (band != 0 && band != 2) ASSERT_EQ(q(i, j), 0.0);
            }
        }
    }
}

TEST(Parity, SingleFockLevel) {
    const Matrix p = build_parity(1);
    ASSERT_EQ(p.dim(), 2u);
    EXPECT_EQ(p(spin_fock_index(0, kSpinDown), spin_fock_index(0, kSpinDown)), 1.0);
    EXPECT_EQ(p(spin_fock_index(0, kSpinUp), spin_fock_index(0, kSpinUp)), -1.0);
    EXPECT_EQ(p(0, 1), 0.0);
}

TEST(Parity, InvolutionWithUnitEigenvalues) {
    for (std::size_t d : {1u, 2u, 7u, 20u}) {
        const Matrix p = build_parity(d);
        const auto sq = naive_product(p, p);
        for (std::size_t i = 0; i < p.dim(); ++i) {
            EXPECT_TRUE(p(i, i) == 1.0 || p(i, i) == -1.0);
            for (std::size_t j = 0; j < p.dim(); ++j) EXPECT_EQ(sq[i * p.dim() + j], i == j ? 1.0 : 0.0);
        }
    }
}

TEST(MatrixOps, ProductAgreesWithNaive) {
    Matrix a(5), b(5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            a(i, j) = std::sin(1.0 + i + 3.0 * j);
            b(i, j) = std::cos(2.0 * i - j);
        }
    const auto oracle = naive_product(a, b);
    const Matrix c = a * b;
    for (std::size_t k = 0; k < oracle.size(); ++k) EXPECT_NEAR(c.data()[k], oracle[k], 1e-14);
}

TEST(MatrixOps, EmbeddingPadsWithZeros) {
    const Matrix n = build_number(3);
    const Matrix e = n.embedded(5);
    ASSERT_EQ(e.dim(), 5u);
    EXPECT_EQ(e(2, 2), 2.0);
    EXPECT_EQ(e(4, 4), 0.0);
    EXPECT_EQ(e(3, 0), 0.0);
}

TEST(MatrixOps, MismatchedShapesRejected) {
    expect_error(ErrorCode::DimensionMismatch, [] { (void)(Matrix(2) + Matrix(3)); });
    expect_error(ErrorCode::DimensionMismatch, [] { (void)(Matrix(2) * Matrix(3)); });
    const std::vector<double> v(3, 1.0);
    expect_error(ErrorCode::DimensionMismatch, [&] { (void)Matrix(2).apply(v); });
}

}  // namespace
}  // namespace qrmfss
