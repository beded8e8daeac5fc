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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qrmfss/errors.hpp"
#include "qrmfss/extrapolate.hpp"

namespace qrmfss {
namespace {

std::vector<double> inverse_sizes(std::size_t first, std::size_t count, std::size_t stride = 2) {
    std::vector<double> h;
    for (std::size_t k = 0; k < count; ++k) h.push_back(1.0 / static_cast<double>(first + stride * k));
    return h;
}

std::vector<double> planted(double t_inf, double c, double omega, const std::vector<double> &h) {
    std::vector<double> v;
    for (double x : h) v.push_back(t_inf + c * std::pow(x, omega));
    return v;
}

// Three points written out from the recurrence by hand.
double three_point_limit(const std::vector<double> &t, const std::vector<double> &h, double w) {
    auto step = [&](double lo, double hi, double below, double hlo, double hhi) {
        const double d = hi - lo;
        return hi + d / (std::pow(hlo / hhi, w) * (1.0 - d / (hi - below)) - 1.0);
    };
    const double a0 = step(t[0], t[1], 0.0, h[0], h[1]);
    const double a1 = step(t[1], t[2], 0.0, h[1], h[2]);
    return step(a0, a1, t[1], h[0], h[2]);
}

TEST(Tableau, ConstantSequence) {
    const auto h = inverse_sizes(8, 6);
    const std::vector<double> v(6, 0.731);
    const auto t = bsa_tableau(v, h, 1.3);
    ASSERT_EQ(t.rows.size(), 6u);
    for (std::size_t m = 0; m < t.rows.size(); ++m) {
        ASSERT_EQ(t.rows[m].size(), 6 - m);
        for (double x : t.rows[m]) EXPECT_EQ(x, 0.731);
    }
    EXPECT_EQ(t.limit(), 0.731);
    EXPECT_EQ(t.epsilon, 0.0);
    EXPECT_FALSE(t.truncated);
}

TEST(Tableau, LinearInStep) {
    std::vector<double> h;
    for (int n = 8; n <= 32; n += 4) h.push_back(1.0 / n);
    std::vector<double> v;
    for (double x : h) v.push_back(5.0 + 2.0 * x);
    EXPECT_NEAR(bsa_tableau(v, h, 1.0).limit(), 5.0, 1e-10);
}

TEST(Tableau, MatchesHandRecurrence) {
    const std::vector<double> h{0.5, 0.25, 0.2};
    const std::vector<double> v{1.31, 1.12, 1.07};
    for (double w : {0.5, 1.0, 2.7}) {
        const auto t = bsa_tableau(v, h, w);
        ASSERT_EQ(t.rows.size(), 3u);
        EXPECT_NEAR(t.limit(), three_point_limit(v, h, w), 1e-13);
        EXPECT_NEAR(t.epsilon, std::abs(t.rows[1][1] - t.rows[1][0]), 0.0);
    }
}

TEST(Tableau, ExactForPlantedExponent) {
    for (double w : {0.5, 1.0, 1.5, 2.0, 3.2}) {
        for (std::size_t count : {4u, 5u, 7u, 11u}) {
            const auto h = inverse_sizes(12, count);
            const auto v = planted(0.999, -0.7, w, h);
            EXPECT_NEAR(bsa_tableau(v, h, w).limit(), 0.999, 1e-10) << w << " " << count;
        }
    }
}

TEST(Tableau, ScalingEquivariance) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t count : {3u, 4u, 5u, 6u, 9u}) {
        const auto h = inverse_sizes(10, count);
        std::vector<double> v;
        for (double x : h) v.push_back(1.0 + 0.4 * x + 0.3 * u(rng) * x * x);
        const double alpha = -2.5;
        std::vector<double> scaled;
        for (double x : v) scaled.push_back(alpha * x);
        const double a = bsa_tableau(v, h, 1.2).limit();
        const double b = bsa_tableau(scaled, h, 1.2).limit();
        EXPECT_NEAR(b, alpha * a, 1e-12 * std::max(1.0, std::abs(alpha * a))) << count;
    }
}

TEST(Tableau, TranslationEquivarianceForOddCounts) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t count : {3u, 5u, 7u, 9u}) {
        const auto h = inverse_sizes(10, count);
        std::vector<double> v;
        for (double x : h) v.push_back(1.0 + 0.4 * x + 0.3 * u(rng) * x * x);
        const double alpha = 1.7, beta = 0.45;
        std::vector<double> moved;
        for (double x : v) moved.push_back(alpha * x + beta);
        const double a = bsa_tableau(v, h, 1.2).limit();
        const double b = bsa_tableau(moved, h, 1.2).limit();
        EXPECT_NEAR(b, alpha * a + beta, 1e-10) << count;
    }
}

TEST(Tableau, TruncatesOnVanishingDenominator) {
    // Second row equals the raw values at index 1, so its denominator is 0.
    const std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
    std::vector<double> v{2.0, 1.0, 1.0, 1.0 + 1e-3};
    const auto t = bsa_tableau(v, h, 1.0);
    EXPECT_TRUE(t.truncated);
    EXPECT_LT(t.rows.size(), 4u);
    for (std::size_t m = 0; m < t.rows.size(); ++m) {
        EXPECT_EQ(t.rows[m].size(), 4 - m);
        for (double x : t.rows[m]) EXPECT_TRUE(std::isfinite(x));
    }
    EXPECT_EQ(t.limit(), t.rows.back().back());
}

TEST(Tableau, Validation) {
    const std::vector<double> v{1, 2, 3};
    const std::vector<double> h{0.3, 0.2, 0.1};
    const auto code = [](auto &&fn) {
        try {
            fn();
        } catch (const Error &e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    EXPECT_EQ(code([&] { bsa_tableau(std::vector<double>{1, 2}, std::vector<double>{0.2, 0.1}, 1.0); }),
              ErrorCode::InsufficientData);
    EXPECT_EQ(code([&] { bsa_tableau(v, std::vector<double>{0.1, 0.2, 0.3}, 1.0); }), ErrorCode::InsufficientData);
    EXPECT_NE(code([&] { bsa_tableau(v, h, 0.0); }), ErrorCode::Io);
    EXPECT_EQ(code([&] { bsa_limit(std::vector<double>{1, 2}, std::vector<double>{0.2, 0.1}); }),
              ErrorCode::InsufficientData);
}

TEST(Limit, PlantedOneAndHalf) {
    const auto h = inverse_sizes(12, 11);
    const auto v = planted(1.0, 3.0, 1.5, h);
    const auto r = bsa_limit(v, h);
    EXPECT_NEAR(r.limit, 1.0, 1e-8);
    EXPECT_NEAR(r.omega_star, 1.5, 1e-2);
}

TEST(Limit, PlantedFivePointFamilies) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> tinf(-2.0, 2.0), amp(0.2, 3.0);
    for (double w : {0.5, 1.0, 1.5, 2.0}) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto h = inverse_sizes(12, 5);
            const double t = tinf(rng);
            const double c = (trial % 2 ? -1.0 : 1.0) * amp(rng);
            const auto r = bsa_limit(planted(t, c, w, h), h);
            EXPECT_NEAR(r.limit, t, 1e-8) << w;
            EXPECT_NEAR(r.omega_star, w, 1e-2) << w;
        }
    }
}

TEST(Limit, ConvergedSequence) {
    const auto h = inverse_sizes(12, 6);
    const std::vector<double> v(6, 0.999996);
    const auto r = bsa_limit(v, h);
    EXPECT_EQ(r.limit, 0.999996);
    EXPECT_EQ(r.epsilon, 0.0);
    EXPECT_NEAR(r.omega_star, 0.1, 1e-12);
}

TEST(Limit, ShiftRobust) {
    const auto h = inverse_sizes(12, 8);
    const auto v = planted(0.5, 1.1, 2.0, h);
    const std::vector<double> hs(h.begin() + 1, h.end()), vs(v.begin() + 1, v.end());
    EXPECT_LT(std::abs(bsa_tableau(v, h, 2.0).limit() - bsa_tableau(vs, hs, 2.0).limit()), 1e-8);
}

TEST(Limit, FailureCarriesFallback) {
    // Every exponent hits a vanishing denominator in the first completed row
    // and leaves no row with two entries beyond the raw values.
    const std::vector<double> h{0.5, 0.25, 0.125};
    const std::vector<double> v{0.0, 0.0, 0.0};
    const auto r = bsa_limit(v, h);
    EXPECT_EQ(r.limit, 0.0);
    try {
        BsaSearch s;
        s.omega_min = 0.5;
        s.omega_max = 0.5;
        const std::vector<double> bad{1.0, std::nan(""), 2.0};
        bsa_limit(bad, h, s);
        FAIL();
    } catch (const ExtrapolationFailed &e) {
        EXPECT_EQ(e.fallback(), 2.0);
        EXPECT_EQ(e.code(), ErrorCode::ExtrapolationFailed);
    }
}

}  // namespace
}  // namespace qrmfss
