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


#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qrmfss/eigensolver.hpp"
#include "qrmfss/errors.hpp"
#include "qrmfss/hamiltonians.hpp"

namespace qrmfss {
namespace {

template <class F>
void expect_error(ErrorCode code, F &&fn) {
    try {
        fn();
        FAIL() << "expected " << error_name(code);
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

void expect_symmetric_exact(const Matrix &h) {
    for (std::size_t i = 0; i < h.dim(); ++i)
        for (std::size_t j = 0; j < h.dim(); ++j) ASSERT_EQ(h(i, j), h(j, i));
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1.0);
    return g;
}

TEST(NormalPhase, FreeOscillatorAtZeroCoupling) {
    const Matrix h = build_h_np(6, 0.0, 1.5);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(h(i, j), i == j ? 1.5 * i : 0.0);
}

TEST(NormalPhase, HandEntries) {
    const Matrix h = build_h_np(8, 0.5, 1.0);
    EXPECT_NEAR(h(0, 0), -0.0625, 1e-15);
    EXPECT_NEAR(h(0, 2), -0.25 * 0.25 * std::sqrt(2.0), 1e-7);
    EXPECT_NEAR(h(0, 2), -0.0883883, 1e-7);
}

TEST(NormalPhase, RejectsNegativeCoupling) {
    expect_error(ErrorCode::InvalidCoupling, [] { build_h_np(8, -0.1, 1.0); });
    expect_error(ErrorCode::InvalidDimension, [] { build_h_np(1, 0.5, 1.0); });
}

TEST(SuperradiantPhase, HandEntry) { EXPECT_NEAR(build_h_sp(8, 2.0, 1.0)(0, 0), -0.015625, 1e-15); }

TEST(SuperradiantPhase, LargeCouplingTendsToFreeOscillator) {
    const Matrix h = build_h_sp(5, 1e4, 1.0);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(h(i, j), i == j ? double(i) : 0.0, 1e-15);
}

TEST(SuperradiantPhase, RejectsNonPositiveCoupling) {
    expect_error(ErrorCode::InvalidCoupling, [] { build_h_sp(8, 0.0, 1.0); });
    expect_error(ErrorCode::InvalidCoupling, [] { build_h_sp(8, -1.0, 1.0); });
}

TEST(EffectiveHamiltonians, AgreeAtUnitCoupling) { EXPECT_EQ(build_h_np(8, 1.0, 1.0), build_h_sp(8, 1.0, 1.0)); }

TEST(EffectiveHamiltonians, ExactlySymmetric) {
    for (double g : {0.3, 1.0, 1.7}) {
        expect_symmetric_exact(build_h_np(17, g, 1.0));
        expect_symmetric_exact(build_h_sp(17, g, 1.0));
        expect_symmetric_exact(build_h_rabi(9, RabiParams::from_coupling(1.0, 40.0, g)));
    }
}

TEST(EffectiveHamiltonians, Derivatives) {
    // Central differences of the builders themselves.
    for (double g : {0.4, 1.0, 1.6}) {
        const double step = 1e-6;
        const Matrix fd_np = (build_h_np(10, g + step, 1.3) - build_h_np(10, g - step, 1.3)) * (0.5 / step);
        const Matrix fd_sp = (build_h_sp(10, g + step, 1.3) - build_h_sp(10, g - step, 1.3)) * (0.5 / step);
        const Matrix d_np = build_dh_np_dg(10, g, 1.3);
        const Matrix d_sp = build_dh_sp_dg(10, g, 1.3);
        for (std::size_t k = 0; k < 100; ++k) {
            EXPECT_NEAR(d_np.data()[k], fd_np.data()[k], 1e-7);
            EXPECT_NEAR(d_sp.data()[k], fd_sp.data()[k], 1e-6 * std::max(1.0, std::abs(d_sp.data()[k])));
        }
        EXPECT_GT(d_sp(0, 0), 0.0);
    }
    EXPECT_EQ(build_dh_np_dg(6, 0.0, 1.0).max_abs(), 0.0);
}

TEST(EffectiveHamiltonians, VariationalMonotonicity) {
    for (double g : {0.5, 0.9, 1.0, 1.1, 1.5}) {
        double prev_np = ground_state(build_h_np(4, g, 1.0)).energy;
        double prev_sp = ground_state(build_h_sp(4, g, 1.0)).energy;
        for (std::size_t dim = 6; dim <= 40; dim += 2) {
            const double np = ground_state(build_h_np(dim, g, 1.0)).energy;
            const double sp = ground_state(build_h_sp(dim, g, 1.0)).energy;
            EXPECT_LE(np, prev_np + 1e-13) << g << " " << dim;
            EXPECT_LE(sp, prev_sp + 1e-13) << g << " " << dim;
            prev_np = np;
            prev_sp = sp;
        }
    }
}

TEST(EffectiveHamiltonians, NormalPhaseConvergesInBasisSize) {
    for (double g : {0.1, 0.5, 0.8, 0.9}) {
        const double e32 = ground_state(build_h_np(32, g, 1.0)).energy;
        const double e64 = ground_state(build_h_np(64, g, 1.0)).energy;
        EXPECT_LT(std::abs(e64 - e32), 1e-8) << g;
    }
}

TEST(Rabi, ParamsFromCoupling) {
    const auto p = RabiParams::from_coupling(2.0, 8.0, 0.5);
    EXPECT_DOUBLE_EQ(p.lambda, 0.5 * std::sqrt(16.0) / 2.0);
    EXPECT_NEAR(2.0 * p.lambda / std::sqrt(p.omega0 * p.Omega), p.g, 1e-15);
    expect_error(ErrorCode::InvalidCoupling, [] { RabiParams::from_coupling(0.0, 1.0, 0.5).validate(); });
    expect_error(ErrorCode::InvalidCoupling, [] { RabiParams::from_coupling(1.0, -1.0, 0.5).validate(); });
    expect_error(ErrorCode::InvalidCoupling, [] { RabiParams::from_coupling(1.0, 1.0, -0.5).validate(); });
}

TEST(Rabi, DecoupledGroundState) {
    const auto p = RabiParams::from_coupling(1.0, 7.0, 0.0);
    const auto g = ground_state(build_h_rabi(6, p));
    EXPECT_NEAR(g.energy, -3.5, 1e-14);
    EXPECT_NEAR(g.vector[spin_fock_index(0, kSpinDown)], 1.0, 1e-14);
}

TEST(Rabi, CommutesWithParity) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 2 + trial;
        RabiParams p{u(rng), u(rng), 0.0, u(rng)};
        p.g = 2.0 * p.lambda / std::sqrt(p.omega0 * p.Omega);
        const Matrix h = build_h_rabi(dim, p);
        const Matrix pi = build_parity(dim);
        EXPECT_EQ((pi * h - h * pi).max_abs(), 0.0);
    }
}

TEST(Rabi, NormalPhaseRescaledEnergy) {
    const auto p = RabiParams::from_coupling(1.0, 1e3, 0.5);
    const double e = ground_state(build_h_rabi(60, p)).energy;
    EXPECT_NEAR(e / 1e3, -0.5, 2e-3);
}

TEST(Rabi, EvenSectorHoldsTheGroundState) {
    for (double g : {0.2, 0.9, 1.3, 2.0}) {
        const auto p = RabiParams::from_coupling(1.0, 20.0, g);
        const std::size_t dim = 80;
        const auto dense = ground_state(build_h_rabi(dim, p));
        const auto sector = build_h_rabi_even_sector(dim, p);
        const auto tri = ground_state_tridiagonal(sector.diag, sector.off);
        EXPECT_NEAR(tri.energy, dense.energy, 1e-9 * std::abs(dense.energy));
        // Sector basis state m sits at Fock level m with spin down for even m.
        double overlap = 0.0;
        for (std::size_t m = 0; m < dim; ++m) {
            overlap += tri.vector[m] * dense.vector[spin_fock_index(m, m % 2 == 0 ? kSpinDown : kSpinUp)];
        }
        EXPECT_NEAR(std::abs(overlap), 1.0, 1e-6) << g;
    }
}

TEST(Analytic, NormalPhase) {
    const auto o = analytic_observables(0.5, 2.0);
    EXPECT_DOUBLE_EQ(o.e_g, -1.0);
    EXPECT_DOUBLE_EQ(o.n_g, 0.0);
}

TEST(Analytic, ContinuousAtCriticalPoint) {
    const auto at = analytic_observables(1.0, 1.0);
    const auto above = analytic_observables(1.0 + 1e-9, 1.0);
    EXPECT_DOUBLE_EQ(at.e_g, -0.5);
    EXPECT_NEAR(above.e_g, -0.5, 1e-8);
    EXPECT_NEAR(above.n_g, 0.0, 1e-8);
}

TEST(Analytic, SuperradiantPhase) {
    const auto o = analytic_observables(std::sqrt(2.0), 1.0);
    EXPECT_NEAR(o.e_g, -0.625, 1e-15);
    EXPECT_NEAR(o.n_g, 0.375, 1e-15);
    expect_error(ErrorCode::InvalidCoupling, [] { analytic_observables(0.0, 1.0); });
}

TEST(Analytic, EnergyBound) {
    for (double g = 0.05; g < 3.0; g += 0.05) {
        const auto o = analytic_observables(g, 1.0);
        EXPECT_GE(o.n_g, 0.0);
        EXPECT_LE(o.e_g, -0.5 * std::min(1.0, (g * g + 1.0 / (g * g)) / 2.0) + 1e-15);
    }
}

TEST(RescaledCurves, NormalPhaseRows) {
    const auto grid = uniform_grid(0.0, 0.9, 10);
    CurveOptions opts;
    opts.omega_ratio = 1e3;
    const auto rows = rescaled_curves(grid, opts);
    ASSERT_EQ(rows.size(), grid.size());
    EXPECT_NEAR(rows[0].e_g, -0.5, 1e-12);
    EXPECT_NEAR(rows[0].n_g, 0.0, 1e-15);
    for (const auto &r : rows) {
        EXPECT_LE(r.n_g, 1e-2);
    }
    EXPECT_NEAR(rows[5].g, 0.5, 1e-15);
    EXPECT_NEAR(rows[5].e_g, -0.5, 2e-3);
}

TEST(RescaledCurves, PhotonNumberApproachesLimitWithRatio) {
    const auto grid = uniform_grid(1.4, 1.5, 3);
    const double exact = analytic_observables(1.5, 1.0).n_g;
    CurveOptions opts;
    opts.omega_ratio = 1e2;
    const double n2 = rescaled_curves(grid, opts).back().n_g;
    opts.omega_ratio = 1e3;
    const double n3 = rescaled_curves(grid, opts).back().n_g;
    EXPECT_LT(std::abs(n3 - exact), std::abs(n2 - exact));
    EXPECT_LT(std::abs(n3 - exact), 0.02);
}

TEST(RescaledCurves, CurvatureExtremumAtCriticalPoint) {
    const auto grid = uniform_grid(0.8, 1.2, 21);
    CurveOptions opts;
    opts.omega_ratio = 1e3;
    const auto rows = rescaled_curves(grid, opts);
    const auto it = std::min_element(rows.begin(), rows.end(),
                                     [](const CurvePoint &a, const CurvePoint &b) { return a.d2e_dg2 < b.d2e_dg2; });
    EXPECT_LE(std::abs(it->g - 1.0), 0.02 + 1e-12);
}

TEST(RescaledCurves, SecondDifferenceOnGrid) {
    const auto grid = uniform_grid(0.6, 1.4, 9);
    CurveOptions opts;
    opts.omega_ratio = 50.0;
    const auto rows = rescaled_curves(grid, opts);
    const double h = grid[1] - grid[0];
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double d2 = (rows[i + 1].e_g - 2.0 * rows[i].e_g + rows[i - 1].e_g) / (h * h);
        EXPECT_NEAR(rows[i].d2e_dg2, d2, 1e-9);
    }
    EXPECT_EQ(rows.front().d2e_dg2, rows[1].d2e_dg2);
    EXPECT_EQ(rows.back().d2e_dg2, rows[rows.size() - 2].d2e_dg2);
}

TEST(RescaledCurves, ExplicitCutoffTooSmall) {
    const auto grid = uniform_grid(1.0, 2.0, 5);
    CurveOptions opts;
    opts.omega_ratio = 1e3;
    opts.dim_fock = 20;
    expect_error(ErrorCode::TruncationInsufficient, [&] { rescaled_curves(grid, opts); });
}

TEST(RescaledCurves, RejectsNonUniformGrid) {
    const std::vector<double> grid{0.1, 0.2, 0.4};
    expect_error(ErrorCode::GridMismatch, [&] { rescaled_curves(grid, CurveOptions{}); });
}

}  // namespace
}  // namespace qrmfss
