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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrmfss/extrapolate.hpp"
#include "qrmfss/fss.hpp"
#include "qrmfss/operators.hpp"
#include "qrmfss/rbm_params.hpp"

namespace qrmfss {

enum class Engine { Ed, RbmExact, RbmSampled };
enum class Phase { Np, Sp, Rabi };
/// Order in which an RBM sweep visits the grid.
enum class SweepDirection { Auto, Ascending, Descending };

const char *engine_name(Engine engine) noexcept;
const char *phase_name(Phase phase) noexcept;
const char *sweep_name(SweepDirection sweep) noexcept;
Engine parse_engine(const std::string &text);
Phase parse_phase(const std::string &text);
SweepDirection parse_sweep(const std::string &text);

struct FssOptions {
    Engine engine = Engine::Ed;
    Phase phase = Phase::Np;
    std::vector<std::size_t> truncations;
    double g_min = 0.5;
    double g_max = 1.5;
    double g_step = 1e-3;
    double omega0 = 1.0;

    double learning_rate = 0.01;
    std::size_t iterations = 30000;
    std::uint64_t shots = 8192;
    std::uint64_t seed = 0;
    /// 0 means m = n.
    std::size_t hidden_units = 0;
    SweepDirection sweep = SweepDirection::Auto;

    /// 0 means one worker per hardware thread.
    std::size_t workers = 0;
    /// Re-solve on a fine local grid around every coarse crossing.
    bool refine = true;
    /// Directory for per-cell RBM checkpoints. Empty disables them.
    std::string checkpoint_dir;

    /// ED defaults: N = 8…32 on [0.5, 1.5] step 1e-3.
    static FssOptions ed_defaults(Phase phase);
    /// RBM defaults: N = 8…16 on [0.9, 1.1] step 1e-2, no refinement.
    static FssOptions rbm_defaults(Engine engine, Phase phase);

    void validate() const;
};

/// g_min + i·g_step for i = 0 … round((g_max − g_min)/g_step).
std::vector<double> make_grid(double g_min, double g_max, double g_step);

/// Effective single-mode Hamiltonian of a phase and its coupling derivative.
Matrix phase_hamiltonian(Phase phase, std::size_t dim, double g, double omega0);
Matrix phase_dhamiltonian(Phase phase, std::size_t dim, double g, double omega0);

/// Ground energies and their g-derivatives, indexed [truncation][grid point].
struct EnergyTable {
    std::vector<std::size_t> truncations;
    std::vector<double> g_grid;
    std::vector<std::vector<double>> energy;
    std::vector<std::vector<double>> denergy;
};

/// ED ground energies for every (N, g), evaluated as a parallel map.
EnergyTable ed_energies(Phase phase, std::span<const std::size_t> truncations, std::span<const double> grid,
                        double omega0, std::size_t workers);

/// Trained RBM energies; one warm-started sweep per N, sweeps run in parallel.
/// `final_params` receives the converged parameters of every cell.
EnergyTable rbm_energies(const FssOptions &options, std::span<const double> grid,
                         std::vector<std::vector<RbmParams>> *final_params = nullptr);

/// Δ curves of consecutive truncations, (N_k, N_{k+1}).
std::vector<DeltaCurve> delta_curves(const EnergyTable &table, bool derivative = false,
                                     DeltaConvention convention = DeltaConvention::EnergyScaling);

struct FssResult {
    EnergyTable table;
    std::vector<DeltaCurve> deltas;
    std::vector<IntersectionPoint> intersections;
    BsaResult critical;
    /// BSA could not extrapolate; critical.limit holds the last intersection.
    bool extrapolation_fallback = false;
    std::vector<GammaCurve> gammas;
    std::optional<double> gamma_at_gc;
    std::optional<double> nu;
};

/// Energies → Δ curves → intersections of (N−4, N−2) × (N−2, N) → BSA on
/// h = 1/N → Γ and ν at g_c for the largest pair.
FssResult run_fss(const FssOptions &options);

/// Intersections and extrapolation from an already computed table.
/// With `refine`, each crossing is re-located on a grid 100× finer spanning
/// two coarse steps either side, using ED energies of `phase`.
FssResult analyze(EnergyTable table, Phase phase, double omega0, bool refine, std::size_t workers);

}  // namespace qrmfss
