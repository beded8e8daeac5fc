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

#include "qrmfss/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "qrmfss/eigensolver.hpp"
#include "qrmfss/errors.hpp"

namespace qrmfss {

namespace {

void require_effective_dims(std::size_t dim, double omega0) {
    if (dim < 2) {
        throw Error(ErrorCode::InvalidDimension, "effective Hamiltonians need dim >= 2");
    }
    if (!(omega0 > 0.0)) {
        throw Error(ErrorCode::InvalidCoupling, "omega0 must be positive");
    }
}

// ω0 n̂ + coeff·(a+a†)²
Matrix oscillator_plus_quadrature(std::size_t dim, double omega0, double coeff) {
    return build_number(dim) * omega0 + build_quadrature_squared(dim) * coeff;
}

std::string format_g(double g) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", g);
    return buf;
}

}  // namespace

RabiParams RabiParams::from_coupling(double omega0, double Omega, double g) {
    RabiParams p{omega0, Omega, g, 0.0};
    p.validate();
    p.lambda = 0.5 * g * std::sqrt(omega0 * Omega);
    return p;
}

void RabiParams::validate() const {
    if (!(omega0 > 0.0)) {
        throw Error(ErrorCode::InvalidCoupling, "omega0 must be positive");
    }
    if (!(Omega >= 0.0)) {
        throw Error(ErrorCode::InvalidCoupling, "Omega must be non-negative");
    }
    if (!(g >= 0.0)) {
        throw Error(ErrorCode::InvalidCoupling, "g must be non-negative");
    }
}

Matrix build_h_np(std::size_t dim, double g, double omega0) {
    require_effective_dims(dim, omega0);
    if (!(g >= 0.0)) {
        throw Error(ErrorCode::InvalidCoupling, "H_np requires g >= 0");
    }
    return oscillator_plus_quadrature(dim, omega0, -omega0 * g * g / 4.0);
}

Matrix build_h_sp(std::size_t dim, double g, double omega0) {
    require_effective_dims(dim, omega0);
    if (!(g > 0.0)) {
        throw Error(ErrorCode::InvalidCoupling, "H_sp requires g > 0");
    }
    const double g2 = g * g;
    return oscillator_plus_quadrature(dim, omega0, -omega0 / (4.0 * g2 * g2));
}

Matrix build_dh_np_dg(std::size_t dim, double g, double omega0) {
    require_effective_dims(dim, omega0);
    if (!(g >= 0.0)) {
        throw Error(ErrorCode::InvalidCoupling, "H_np requires g >= 0");
    }
    return build_quadrature_squared(dim) * (-omega0 * g / 2.0);
}

Matrix build_dh_sp_dg(std::size_t dim, double g, double omega0) {
    require_effective_dims(dim, omega0);
    if (!(g > 0.0)) {
        throw Error(ErrorCode::InvalidCoupling, "H_sp requires g > 0");
    }
    return build_quadrature_squared(dim) * (omega0 / std::pow(g, 5));
}

Matrix build_h_rabi(std::size_t dim_fock, const RabiParams &params) {
    if (dim_fock < 2) {
        throw Error(ErrorCode::InvalidDimension, "H_Rabi needs dim_fock >= 2");
    }
    params.validate();
    Matrix h(2 * dim_fock);
    for (std::size_t m = 0; m < dim_fock; ++m) {
        const double photons = params.omega0 * static_cast<double>(m);
        h(spin_fock_index(m, kSpinDown), spin_fock_index(m, kSpinDown)) = photons - params.Omega / 2.0;
        h(spin_fock_index(m, kSpinUp), spin_fock_index(m, kSpinUp)) = photons + params.Omega / 2.0;
    }
    // σx flips the spin, (a+a†) moves one photon: |m,s⟩ ↔ |m+1,1-s⟩.
    for (std::size_t m = 0; m + 1 < dim_fock; ++m) {
        const double amp = -params.lambda * std::sqrt(static_cast<double>(m + 1));
        for (std::size_t s : {kSpinDown, kSpinUp}) {
            const std::size_t i = spin_fock_index(m, s);
            const std::size_t j = spin_fock_index(m + 1, 1 - s);
            h(i, j) = amp;
            h(j, i) = amp;
        }
    }
    return h;
}

TridiagonalSector build_h_rabi_even_sector(std::size_t dim_fock, const RabiParams &params) {
    if (dim_fock < 2) {
        throw Error(ErrorCode::InvalidDimension, "H_Rabi needs dim_fock >= 2");
    }
    params.validate();
    TridiagonalSector t;
    t.diag.resize(dim_fock);
    t.off.resize(dim_fock - 1);
    for (std::size_t m = 0; m < dim_fock; ++m) {
        const double spin_z = (m % 2 == 0) ? -1.0 : 1.0;
        t.diag[m] = params.omega0 * static_cast<double>(m) + 0.5 * params.Omega * spin_z;
    }
    for (std::size_t m = 0; m + 1 < dim_fock; ++m) {
        t.off[m] = -params.lambda * std::sqrt(static_cast<double>(m + 1));
    }
    return t;
}

AnalyticObservables analytic_observables(double g, double omega0) {
    if (!(g > 0.0)) {
        throw Error(ErrorCode::InvalidCoupling, "analytic observables require g > 0");
    }
    if (g <= 1.0) {
        return {-omega0 / 2.0, 0.0};
    }
    const double g2 = g * g;
    return {-omega0 * (g2 + 1.0 / g2) / 4.0, (g2 - 1.0 / g2) / 4.0};
}

namespace {

struct SectorGround {
    GroundSolution ground;
    double photons = 0.0;
    double top_occupation = 0.0;
};

SectorGround solve_sector(std::size_t dim_fock, const RabiParams &params) {
    const auto sector = build_h_rabi_even_sector(dim_fock, params);
    SectorGround out;
    out.ground = ground_state_tridiagonal(sector.diag, sector.off);
    const auto &v = out.ground.vector;
    for (std::size_t m = 0; m < v.size(); ++m) {
        out.photons += static_cast<double>(m) * v[m] * v[m];
    }
    out.top_occupation = v.back() * v.back() + v[v.size() - 2] * v[v.size() - 2];
    return out;
}

std::size_t automatic_cutoff(double g_max, const CurveOptions &options) {
    const double n_mean = (g_max > 1.0) ? options.omega_ratio * analytic_observables(g_max, 1.0).n_g : 0.0;
    return static_cast<std::size_t>(std::ceil(n_mean + 12.0 * std::sqrt(n_mean + 1.0) + 40.0));
}

}  // namespace

std::vector<CurvePoint> rescaled_curves(std::span<const double> g_grid, const CurveOptions &options) {
    if (g_grid.size() < 3) {
        throw Error(ErrorCode::InvalidDimension, "curve grid needs at least 3 points");
    }
    const double step = g_grid[1] - g_grid[0];
    for (std::size_t i = 1; i < g_grid.size(); ++i) {
        const double d = g_grid[i] - g_grid[i - 1];
        if (!(d > 0.0) || std::abs(d - step) > 1e-9 * std::max(1.0, std::abs(step))) {
            throw Error(ErrorCode::GridMismatch, "curve grid must be strictly increasing and uniform");
        }
    }
    if (!(options.omega_ratio > 0.0)) {
        throw Error(ErrorCode::InvalidCoupling, "Omega/omega0 must be positive");
    }
    const double Omega = options.omega_ratio * options.omega0;
    const double g_max = g_grid.back();

    std::size_t dim_fock = options.dim_fock;
    const bool automatic = dim_fock == 0;
    if (automatic) {
        dim_fock = automatic_cutoff(g_max, options);
    }
    // Truncation is checked at the largest coupling, where the photon
    // distribution is widest.
    for (;;) {
        const auto top = solve_sector(dim_fock, RabiParams::from_coupling(options.omega0, Omega, g_max));
        if (top.top_occupation < options.max_top_occupation) {
            break;
        }
        if (!automatic || dim_fock > (1u << 16)) {
            throw Error(ErrorCode::TruncationInsufficient,
                        "top Fock occupation " + format_g(top.top_occupation) + " at g = " + format_g(g_max) +
                            " with dim_fock = " + std::to_string(dim_fock));
        }
        dim_fock *= 2;
    }

    const double scale = options.omega0 / Omega;
    std::vector<CurvePoint> out(g_grid.size());
    for (std::size_t i = 0; i < g_grid.size(); ++i) {
        const auto sol = solve_sector(dim_fock, RabiParams::from_coupling(options.omega0, Omega, g_grid[i]));
        out[i].g = g_grid[i];
        out[i].e_g = scale * sol.ground.energy;
        out[i].n_g = scale * sol.photons;
    }
    const double h2 = step * step;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t c = std::clamp<std::size_t>(i, 1, out.size() - 2);
        out[i].d2e_dg2 = (out[c + 1].e_g - 2.0 * out[c].e_g + out[c - 1].e_g) / h2;
    }
    return out;
}

}  // namespace qrmfss
