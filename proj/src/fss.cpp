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

#include "qrmfss/fss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "qrmfss/errors.hpp"

namespace qrmfss {

namespace {

constexpr double kBracketTolerance = 1e-8;
constexpr double kGammaHole = 1e-12;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void require_same_grid(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::GridMismatch, "grids have different lengths");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > 1e-12 * std::max(1.0, std::abs(a[i]))) {
            throw Error(ErrorCode::GridMismatch, "grids differ at index " + std::to_string(i));
        }
    }
}

std::size_t segment_for(std::span<const double> grid, double g) {
    const auto it = std::upper_bound(grid.begin(), grid.end(), g);
    const auto idx = static_cast<std::size_t>(it - grid.begin());
    return std::clamp<std::size_t>(idx, 1, grid.size() - 1) - 1;
}

}  // namespace

DeltaCurve delta_curve(std::span<const double> energies_n, std::span<const double> energies_n_prime,
                       std::size_t n, std::size_t n_prime, std::span<const double> g_grid,
                       DeltaConvention convention) {
    if (n == n_prime || n == 0 || n_prime == 0) {
        throw Error(ErrorCode::InvalidDimension, "truncation pair needs two distinct positive sizes");
    }
    if (energies_n.size() != g_grid.size() || energies_n_prime.size() != g_grid.size()) {
        throw Error(ErrorCode::GridMismatch, "energy arrays do not match the coupling grid");
    }
    if (g_grid.size() < 2) {
        throw Error(ErrorCode::GridMismatch, "coupling grid needs at least two points");
    }
    for (std::size_t i = 1; i < g_grid.size(); ++i) {
        if (!(g_grid[i] > g_grid[i - 1])) {
            throw Error(ErrorCode::GridMismatch, "coupling grid must be strictly increasing");
        }
    }

    // Swapping the pair flips numerator and denominator together.
    if (n > n_prime) {
        std::swap(n, n_prime);
        std::swap(energies_n, energies_n_prime);
    }
    const double size_log = convention == DeltaConvention::EnergyScaling
                                ? std::log(static_cast<double>(n_prime) / static_cast<double>(n))
                                : std::log(static_cast<double>(n) / static_cast<double>(n_prime));

    DeltaCurve out;
    out.pair = {n, n_prime};
    out.g_grid.assign(g_grid.begin(), g_grid.end());
    out.values.resize(g_grid.size());
    for (std::size_t i = 0; i < g_grid.size(); ++i) {
        const double ratio = energies_n[i] / energies_n_prime[i];
        if (energies_n[i] == 0.0 || energies_n_prime[i] == 0.0 || !(ratio > 0.0) || !std::isfinite(ratio)) {
            throw Error(ErrorCode::UndefinedRatio, "energy ratio is not positive at g = " + fmt(g_grid[i]));
        }
        out.values[i] = std::log(ratio) / size_log;
    }
    return out;
}

IntersectionPoint find_intersection(const DeltaCurve &a, const DeltaCurve &b) {
    require_same_grid(a.g_grid, b.g_grid);
    const auto &grid = a.g_grid;
    const std::size_t n = grid.size();
    std::vector<double> diff(n);
    bool identical = true;
    for (std::size_t i = 0; i < n; ++i) {
        diff[i] = a.values[i] - b.values[i];
        identical = identical && diff[i] == 0.0;
    }
    if (identical) {
        throw Error(ErrorCode::DegenerateCurves, "curves coincide on the whole grid");
    }

    // A crossing is either an exact zero at a grid point (lo == hi) or a
    // strict sign change across a segment.
    struct Crossing {
        std::size_t lo, hi;
    };
    std::vector<Crossing> crossings;
    for (std::size_t i = 0; i < n; ++i) {
        if (diff[i] == 0.0) {
            crossings.push_back({i, i});
        } else if (i + 1 < n && diff[i + 1] != 0.0 && (diff[i] < 0.0) != (diff[i + 1] < 0.0)) {
            crossings.push_back({i, i + 1});
        }
    }
    if (crossings.empty()) {
        throw Error(ErrorCode::NoCrossing, "curves (" + std::to_string(a.pair.first) + "," +
                                               std::to_string(a.pair.second) + ") and (" +
                                               std::to_string(b.pair.first) + "," +
                                               std::to_string(b.pair.second) + ") do not cross on the grid");
    }
    const double mid = 0.5 * (grid.front() + grid.back());
    const auto centre = [&](const Crossing &c) { return 0.5 * (grid[c.lo] + grid[c.hi]); };
    const auto best = *std::min_element(crossings.begin(), crossings.end(), [&](const auto &x, const auto &y) {
        return std::abs(centre(x) - mid) < std::abs(centre(y) - mid);
    });

    IntersectionPoint out;
    out.n_label = std::max(a.pair.second, b.pair.second);
    out.multiple_crossings = crossings.size() > 1;
    if (best.lo == best.hi) {
        out.g_star = grid[best.lo];
        out.bracket_width = 0.0;
        return out;
    }

    const double g0 = grid[best.lo];
    const double g1 = grid[best.hi];
    const double d0 = diff[best.lo];
    const double d1 = diff[best.hi];
    const auto interp = [&](double g) { return d0 + (d1 - d0) * (g - g0) / (g1 - g0); };
    double lo = g0;
    double hi = g1;
    const bool rising = d0 < 0.0;
    while (hi - lo > kBracketTolerance) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) {
            break;
        }
        const double f = interp(m);
        if (f == 0.0) {
            lo = hi = m;
            break;
        }
        if ((f < 0.0) == rising) {
            lo = m;
        } else {
            hi = m;
        }
    }
    out.g_star = 0.5 * (lo + hi);
    out.bracket_width = hi - lo;
    return out;
}

double denergy_dg(const OperatorFamily &h_family, const OperatorFamily &dh_dg, double g,
                  const GroundSolution &ground) {
    const Matrix dh = dh_dg(g);
    const std::size_t dim = h_family ? h_family(g).dim() : dh.dim();
    if (dh.dim() != dim || ground.vector.size() != dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "ground vector of length " + std::to_string(ground.vector.size()) +
                        " for operator of dimension " + std::to_string(dh.dim()));
    }
    return dh.quadratic_form(ground.vector);
}

GammaCurve gamma_curve(const DeltaCurve &delta_e, const DeltaCurve &delta_de) {
    if (delta_e.pair != delta_de.pair) {
        throw Error(ErrorCode::GridMismatch, "gamma needs both delta curves for the same truncation pair");
    }
    require_same_grid(delta_e.g_grid, delta_de.g_grid);
    GammaCurve out;
    out.pair = delta_e.pair;
    out.g_grid = delta_e.g_grid;
    out.values.resize(out.g_grid.size());
    bool any = false;
    for (std::size_t i = 0; i < out.g_grid.size(); ++i) {
        const double den = delta_de.values[i] - delta_e.values[i];
        if (std::abs(den) >= kGammaHole) {
            out.values[i] = delta_e.values[i] / den;
            any = true;
        }
    }
    if (!any) {
        throw Error(ErrorCode::Degenerate, "gamma curve has no defined points");
    }
    return out;
}

double estimate_nu(double gamma_at_gc, double delta_at_gc) {
    if (delta_at_gc == 0.0) {
        throw Error(ErrorCode::DivisionByZero, "delta vanishes at the critical point");
    }
    return gamma_at_gc / delta_at_gc;
}

double interpolate(std::span<const double> grid, std::span<const double> values, double g) {
    if (grid.size() != values.size() || grid.size() < 2) {
        throw Error(ErrorCode::GridMismatch, "interpolation needs matching arrays of length >= 2");
    }
    const std::size_t i = segment_for(grid, g);
    const double t = (g - grid[i]) / (grid[i + 1] - grid[i]);
    return values[i] + t * (values[i + 1] - values[i]);
}

std::optional<double> interpolate(const GammaCurve &curve, double g) {
    if (curve.g_grid.size() < 2) {
        return std::nullopt;
    }
    const std::size_t i = segment_for(curve.g_grid, g);
    if (!curve.values[i] || !curve.values[i + 1]) {
        return std::nullopt;
    }
    const double t = (g - curve.g_grid[i]) / (curve.g_grid[i + 1] - curve.g_grid[i]);
    return *curve.values[i] + t * (*curve.values[i + 1] - *curve.values[i]);
}

}  // namespace qrmfss
