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
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qrmfss/eigensolver.hpp"
#include "qrmfss/operators.hpp"

namespace qrmfss {

using TruncationPair = std::pair<std::size_t, std::size_t>;

/// Which logarithm normalizes the energy ratio.
enum class DeltaConvention {
    /// log(Q_N/Q_N') / log(N'/N): for observables that vanish at the critical
    /// point, such as ground energies.
    EnergyScaling,
    /// log(Q_N/Q_N') / log(N/N'): the classical form for divergent Q.
    Classical,
};

struct DeltaCurve {
    TruncationPair pair;  ///< first < second
    std::vector<double> g_grid;
    std::vector<double> values;
};

struct IntersectionPoint {
    std::size_t n_label = 0;
    double g_star = 0.0;
    double bracket_width = 0.0;
    /// More than one sign change was found; the one nearest the grid
    /// midpoint was taken.
    bool multiple_crossings = false;
};

struct GammaCurve {
    TruncationPair pair;
    std::vector<double> g_grid;
    /// nullopt where Δ_dE - Δ_E vanishes.
    std::vector<std::optional<double>> values;
};

DeltaCurve delta_curve(std::span<const double> energies_n, std::span<const double> energies_n_prime,
                       std::size_t n, std::size_t n_prime, std::span<const double> g_grid,
                       DeltaConvention convention = DeltaConvention::EnergyScaling);

/// Crossing of two curves sampled on a common grid, from bisection on the
/// difference of their linear interpolants.
IntersectionPoint find_intersection(const DeltaCurve &a, const DeltaCurve &b);

using OperatorFamily = std::function<Matrix(double)>;

/// Hellmann–Feynman derivative vᵀ (∂H/∂g) v at a solved ground state.
double denergy_dg(const OperatorFamily &h_family, const OperatorFamily &dh_dg, double g,
                  const GroundSolution &ground);

GammaCurve gamma_curve(const DeltaCurve &delta_e, const DeltaCurve &delta_de);

double estimate_nu(double gamma_at_gc, double delta_at_gc);

/// Linear interpolation of a sampled curve; g outside the grid clamps to
/// the end segments.
double interpolate(std::span<const double> grid, std::span<const double> values, double g);

/// Same for a Γ curve; nullopt if either bracketing point is a hole.
std::optional<double> interpolate(const GammaCurve &curve, double g);

}  // namespace qrmfss
