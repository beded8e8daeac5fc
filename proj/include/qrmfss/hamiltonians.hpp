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

#include "qrmfss/operators.hpp"

namespace qrmfss {

/// Quantum Rabi model parameters. `lambda` is always derived from the
/// dimensionless coupling g = 2λ/√(ω0 Ω).
struct RabiParams {
    double omega0 = 1.0;
    double Omega = 0.0;
    double g = 0.0;
    double lambda = 0.0;

    static RabiParams from_coupling(double omega0, double Omega, double g);
    void validate() const;
};

struct AnalyticObservables {
    double e_g = 0.0;  ///< rescaled ground energy, units of ω0
    double n_g = 0.0;  ///< rescaled photon number
};

/// Normal-phase effective Hamiltonian ω0 a†a - (ω0 g²/4)(a+a†)², constant
/// term dropped.
Matrix build_h_np(std::size_t dim, double g, double omega0);

/// Superradiant-phase effective Hamiltonian ω0 a†a - (ω0/(4g⁴))(a+a†)²,
/// constant term dropped. Defined for every g > 0.
Matrix build_h_sp(std::size_t dim, double g, double omega0);

/// ∂H_np/∂g = -(ω0 g/2)(a+a†)²
Matrix build_dh_np_dg(std::size_t dim, double g, double omega0);

/// ∂H_sp/∂g = +(ω0/g⁵)(a+a†)²
Matrix build_dh_sp_dg(std::size_t dim, double g, double omega0);

/// (Ω/2)σz + ω0 a†a - λ σx (a+a†) in the spin⊗Fock ordering of operators.hpp.
Matrix build_h_rabi(std::size_t dim_fock, const RabiParams &params);

/// The even-parity block of H_Rabi is tridiagonal in the basis
/// |↓,0⟩, |↑,1⟩, |↓,2⟩, …; index m of this basis carries m photons.
struct TridiagonalSector {
    std::vector<double> diag;
    std::vector<double> off;
};

TridiagonalSector build_h_rabi_even_sector(std::size_t dim_fock, const RabiParams &params);

/// Closed-form rescaled energy and photon number in the Ω/ω0 → ∞ limit.
AnalyticObservables analytic_observables(double g, double omega0);

struct CurvePoint {
    double g = 0.0;
    double e_g = 0.0;
    double n_g = 0.0;
    double d2e_dg2 = 0.0;
};

struct CurveOptions {
    double omega0 = 1.0;
    double omega_ratio = 1e3;    ///< Ω/ω0
    std::size_t dim_fock = 0;    ///< 0 selects the cutoff automatically
    double max_top_occupation = 1e-8;
};

/// Rescaled observables of the full Rabi ground state over a uniform g grid.
/// Second derivatives are central differences on the grid; the two end
/// points reuse the adjacent interior stencil.
std::vector<CurvePoint> rescaled_curves(std::span<const double> g_grid, const CurveOptions &options);

}  // namespace qrmfss
