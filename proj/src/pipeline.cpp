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


#include "qrmfss/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <thread>

#include "qrmfss/eigensolver.hpp"
#include "qrmfss/errors.hpp"
#include "qrmfss/hamiltonians.hpp"
#include "qrmfss/qcircuit.hpp"
#include "qrmfss/rbm.hpp"

namespace qrmfss {

const char *engine_name(Engine engine) noexcept {
    switch (engine) {
        case Engine::Ed: return "ed";
        case Engine::RbmExact: return "rbm-exact";
        case Engine::RbmSampled: return "rbm-sampled";
    }
    return "?";
}

const char *phase_name(Phase phase) noexcept {
    switch (phase) {
        case Phase::Np: return "np";
        case Phase::Sp: return "sp";
        case Phase::Rabi: return "rabi";
    }
    return "?";
}

const char *sweep_name(SweepDirection sweep) noexcept {
    switch (sweep) {
        case SweepDirection::Auto: return "auto";
        case SweepDirection::Ascending: return "ascending";
        case SweepDirection::Descending: return "descending";
    }
    return "?";
}

Engine parse_engine(const std::string &text) {
    if (text == "ed") return Engine::Ed;
    if (text == "rbm-exact") return Engine::RbmExact;
    if (text == "rbm-sampled") return Engine::RbmSampled;
    throw Error(ErrorCode::Config, "unknown engine '" + text + "'");
}

Phase parse_phase(const std::string &text) {
    if (text == "np") return Phase::Np;
    if (text == "sp") return Phase::Sp;
    if (text == "rabi") return Phase::Rabi;
    throw Error(ErrorCode::Config, "unknown phase '" + text + "'");
}

SweepDirection parse_sweep(const std::string &text) {
    if (text == "auto") return SweepDirection::Auto;
    if (text == "ascending") return SweepDirection::Ascending;
    if (text == "descending") return SweepDirection::Descending;
    throw Error(ErrorCode::Config, "unknown sweep direction '" + text + "'");
}

FssOptions FssOptions::ed_defaults(Phase phase) {
    FssOptions o;
    o.engine = Engine::Ed;
    o.phase = phase;
    for (std::size_t n = 8; n <= 32; n += 2) {
        o.truncations.push_back(n);
    }
    return o;
}

FssOptions FssOptions::rbm_defaults(Engine engine, Phase phase) {
    FssOptions o;
    o.engine = engine;
    o.phase = phase;
    o.truncations = {8, 10, 12, 14, 16};
    o.g_min = 0.9;
    o.g_max = 1.1;
    o.g_step = 1e-2;
    o.refine = false;
    return o;
}

void FssOptions::validate() const {
    if (phase == Phase::Rabi) {
        throw Error(ErrorCode::Config, "finite-size scaling runs on the np or sp effective Hamiltonians");
    }
    if (truncations.size() < 2) {
        throw Error(ErrorCode::Config, "need at least two truncations");
    }
    for (std::size_t i = 0; i < truncations.size(); ++i) {
        if (truncations[i] < 2) {
            throw Error(ErrorCode::Config, "truncations must be at least 2");
        }
        if (i > 0 && truncations[i] <= truncations[i - 1]) {
            throw Error(ErrorCode::Config, "truncations must be strictly increasing");
        }
    }
    if (!(g_step > 0.0) || !(g_min < g_max) || !std::isfinite(g_min) || !std::isfinite(g_max)) {
        throw Error(ErrorCode::Config, "need g_min < g_max and g_step > 0");
    }
    if (phase == Phase::Sp && !(g_min > 0.0)) {
        throw Error(ErrorCode::Config, "the sp Hamiltonian needs g > 0");
    }
    if (phase == Phase::Np && g_min < 0.0) {
        throw Error(ErrorCode::Config, "the np Hamiltonian needs g >= 0");
    }
    if (!(omega0 > 0.0)) {
        throw Error(ErrorCode::Config, "omega0 must be positive");
    }
    if (engine != Engine::Ed) {
        if (!(learning_rate > 0.0) || iterations == 0) {
            throw Error(ErrorCode::Config, "need lr > 0 and iters >= 1");
        }
        if (engine == Engine::RbmSampled && shots == 0) {
            throw Error(ErrorCode::Config, "shots must be at least 1");
        }
    }
}

std::vector<double> make_grid(double g_min, double g_max, double g_step) {
    if (!(g_step > 0.0) || !(g_min < g_max)) {
        throw Error(ErrorCode::Config, "need g_min < g_max and g_step > 0");
    }
    const auto count = static_cast<std::size_t>(std::llround((g_max - g_min) / g_step));
    std::vector<double> grid(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        grid[i] = g_min + static_cast<double>(i) * g_step;
    }
    return grid;
}

Matrix phase_hamiltonian(Phase phase, std::size_t dim, double g, double omega0) {
    switch (phase) {
        case Phase::Np: return build_h_np(dim, g, omega0);
        case Phase::Sp: return build_h_sp(dim, g, omega0);
        case Phase::Rabi: break;
    }
    throw Error(ErrorCode::Config, "no single-mode Hamiltonian for the rabi phase");
}

Matrix phase_dhamiltonian(Phase phase, std::size_t dim, double g, double omega0) {
    switch (phase) {
        case Phase::Np: return build_dh_np_dg(dim, g, omega0);
        case Phase::Sp: return build_dh_sp_dg(dim, g, omega0);
        case Phase::Rabi: break;
    }
    throw Error(ErrorCode::Config, "no single-mode Hamiltonian for the rabi phase");
}

namespace {

std::size_t resolve_workers(std::size_t requested, std::size_t tasks) {
    std::size_t w = requested;
    if (w == 0) {
        w = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    return std::max<std::size_t>(1, std::min(w, tasks));
}

// Runs task(0..count-1) on a pool; the first exception is rethrown.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)> &task) {
    const std::size_t nthreads = resolve_workers(workers, count);
    if (nthreads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    failed = true;
                }
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

EnergyTable empty_table(std::span<const std::size_t> truncations, std::span<const double> grid) {
    EnergyTable t;
    t.truncations.assign(truncations.begin(), truncations.end());
    t.g_grid.assign(grid.begin(), grid.end());
    t.energy.assign(truncations.size(), std::vector<double>(grid.size()));
    t.denergy.assign(truncations.size(), std::vector<double>(grid.size()));
    return t;
}

std::uint64_t task_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string checkpoint_path(const std::string &dir, std::size_t n, std::size_t g_index) {
    return (std::filesystem::path(dir) / ("rbm_N" + std::to_string(n) + "_g" + std::to_string(g_index) + ".json"))
        .string();
}

// Normalized physical amplitudes of a trained cell.
std::vector<double> cell_state(const RbmParams &params, const BasisEncoding &enc, const ProbabilitySource &source) {
    VariationalState state;
    if (const auto *s = std::get_if<SampledSource>(&source)) {
        const CircuitSpec circuit = build_gibbs_circuit(params);
        state = build_state(params, enc, empirical_q_to_p(sample(circuit, s->shots, s->seed), params));
    } else {
        state = build_state(params, enc);
    }
    state.amplitudes.resize(enc.fock_dim());
    return state.amplitudes;
}

}  // namespace

EnergyTable ed_energies(Phase phase, std::span<const std::size_t> truncations, std::span<const double> grid,
                        double omega0, std::size_t workers) {
    EnergyTable table = empty_table(truncations, grid);
    const std::size_t ng = grid.size();
    parallel_for(truncations.size() * ng, workers, [&](std::size_t cell) {
        const std::size_t k = cell / ng;
        const std::size_t i = cell % ng;
        const std::size_t dim = truncations[k];
        const double g = grid[i];
        const GroundSolution ground = ground_state(phase_hamiltonian(phase, dim, g, omega0));
        table.energy[k][i] = ground.energy;
        table.denergy[k][i] = denergy_dg([&](double x) { return phase_hamiltonian(phase, dim, x, omega0); },
                                         [&](double x) { return phase_dhamiltonian(phase, dim, x, omega0); }, g,
                                         ground);
    });
    return table;
}

EnergyTable rbm_energies(const FssOptions &options, std::span<const double> grid,
                         std::vector<std::vector<RbmParams>> *final_params) {
    options.validate();
    EnergyTable table = empty_table(options.truncations, grid);
    std::vector<std::vector<RbmParams>> params_out(options.truncations.size(),
                                                   std::vector<RbmParams>(grid.size()));

    SweepDirection dir = options.sweep;
    if (dir == SweepDirection::Auto) {
        // Start where the ground state is most structured.
        dir = options.phase == Phase::Np ? SweepDirection::Descending : SweepDirection::Ascending;
    }
    std::vector<std::size_t> order(grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = dir == SweepDirection::Ascending ? i : grid.size() - 1 - i;
    }
    if (!options.checkpoint_dir.empty()) {
        std::filesystem::create_directories(options.checkpoint_dir);
    }

    parallel_for(options.truncations.size(), options.workers, [&](std::size_t k) {
        const std::size_t dim = options.truncations[k];
        const BasisEncoding enc(dim);
        const std::size_t m = options.hidden_units == 0 ? enc.n_visible() : options.hidden_units;
        const std::uint64_t seed = task_seed(options.seed, k);
        RbmParams params = RbmParams::random(enc.n_visible(), m, seed);

        for (std::size_t step = 0; step < order.size(); ++step) {
            const std::size_t i = order[step];
            const double g = grid[i];
            const Matrix h = phase_hamiltonian(options.phase, dim, g, options.omega0);
            const std::uint64_t cell_seed = task_seed(seed, i);
            ProbabilitySource source = ExactSource{};
            if (options.engine == Engine::RbmSampled) {
                source = SampledSource{options.shots, task_seed(cell_seed, 1)};
            }

            bool resumed = false;
            const std::string cp_path =
                options.checkpoint_dir.empty() ? std::string() : checkpoint_path(options.checkpoint_dir, dim, i);
            if (!cp_path.empty() && std::filesystem::exists(cp_path)) {
                Checkpoint cp = load_checkpoint(cp_path);
                if (cp.seed == cell_seed && cp.iteration == options.iterations &&
                    cp.params.n_visible() == enc.n_visible() && cp.params.n_hidden() == m) {
                    params = std::move(cp.params);
                    resumed = true;
                }
            }
            if (!resumed) {
                TrainOptions train_opts;
                train_opts.learning_rate = options.learning_rate;
                train_opts.iterations = options.iterations;
                train_opts.source = source;
                train_opts.seed = cell_seed;
                params = train(h, enc, params, train_opts).params;
                if (!cp_path.empty()) {
                    save_checkpoint(cp_path, {params, cell_seed, options.iterations});
                }
            }

            const auto psi = cell_state(params, enc, source);
            const Matrix dh = phase_dhamiltonian(options.phase, dim, g, options.omega0);
            table.energy[k][i] = h.quadratic_form(psi);
            table.denergy[k][i] = dh.quadratic_form(psi);
            params_out[k][i] = params;
        }
    });
    if (final_params != nullptr) {
        *final_params = std::move(params_out);
    }
    return table;
}

std::vector<DeltaCurve> delta_curves(const EnergyTable &table, bool derivative, DeltaConvention convention) {
    const auto &data = derivative ? table.denergy : table.energy;
    std::vector<DeltaCurve> out;
    for (std::size_t k = 0; k + 1 < table.truncations.size(); ++k) {
        out.push_back(delta_curve(data[k], data[k + 1], table.truncations[k], table.truncations[k + 1],
                                  table.g_grid, convention));
    }
    return out;
}

namespace {

IntersectionPoint refine_crossing(const IntersectionPoint &coarse, Phase phase, double omega0,
                                  std::span<const std::size_t> dims, std::span<const double> grid,
                                  std::size_t workers) {
    const double step = grid[1] - grid[0];
    const double lo = std::max(grid.front(), coarse.g_star - 2.0 * step);
    const double hi = std::min(grid.back(), coarse.g_star + 2.0 * step);
    if (!(hi > lo)) {
        return coarse;
    }
    const auto fine = make_grid(lo, hi, step / 100.0);
    const EnergyTable t = ed_energies(phase, dims, fine, omega0, workers);
    const auto curves = delta_curves(t);
    try {
        IntersectionPoint p = find_intersection(curves[0], curves[1]);
        p.n_label = coarse.n_label;
        p.multiple_crossings = p.multiple_crossings || coarse.multiple_crossings;
        return p;
    } catch (const Error &) {
        return coarse;
    }
}

}  // namespace

FssResult analyze(EnergyTable table, Phase phase, double omega0, bool refine, std::size_t workers) {
    FssResult r;
    r.deltas = delta_curves(table);
    const auto &ns = table.truncations;
    for (std::size_t k = 2; k < ns.size(); ++k) {
        IntersectionPoint p = find_intersection(r.deltas[k - 2], r.deltas[k - 1]);
        p.n_label = ns[k];
        if (refine) {
            const std::size_t dims[3] = {ns[k - 2], ns[k - 1], ns[k]};
            p = refine_crossing(p, phase, omega0, dims, table.g_grid, workers);
        }
        r.intersections.push_back(p);
    }
    if (r.intersections.empty()) {
        throw Error(ErrorCode::InsufficientData, "need at least three truncations for an intersection");
    }

    std::vector<double> values;
    std::vector<double> h;
    for (const auto &p : r.intersections) {
        values.push_back(p.g_star);
        h.push_back(1.0 / static_cast<double>(p.n_label));
    }
    try {
        r.critical = bsa_limit(values, h);
    } catch (const ExtrapolationFailed &e) {
        r.critical = {e.fallback(), 0.0, 0.0, true};
        r.extrapolation_fallback = true;
    } catch (const Error &e) {
        if (e.code() != ErrorCode::InsufficientData) {
            throw;
        }
        r.critical = {values.back(), 0.0, 0.0, true};
        r.extrapolation_fallback = true;
    }

    // Γ and ν have no reference values; a failure here leaves them empty.
    // ν = Γ/Δ holds for the classical sign of Δ.
    try {
        const auto ecurves = delta_curves(table, false, DeltaConvention::Classical);
        const auto dcurves = delta_curves(table, true, DeltaConvention::Classical);
        for (std::size_t k = 0; k < dcurves.size(); ++k) {
            try {
                r.gammas.push_back(gamma_curve(ecurves[k], dcurves[k]));
            } catch (const Error &) {
            }
        }
        if (!r.gammas.empty() && r.gammas.back().pair == ecurves.back().pair) {
            const double gc = r.critical.limit;
            r.gamma_at_gc = interpolate(r.gammas.back(), gc);
            const double delta = interpolate(table.g_grid, ecurves.back().values, gc);
            if (r.gamma_at_gc) {
                r.nu = estimate_nu(*r.gamma_at_gc, delta);
            }
        }
    } catch (const Error &) {
    }
    r.table = std::move(table);
    return r;
}

FssResult run_fss(const FssOptions &options) {
    options.validate();
    const auto grid = make_grid(options.g_min, options.g_max, options.g_step);
    EnergyTable table = options.engine == Engine::Ed
                            ? ed_energies(options.phase, options.truncations, grid, options.omega0, options.workers)
                            : rbm_energies(options, grid);
    const bool refine = options.refine && options.engine == Engine::Ed;
    return analyze(std::move(table), options.phase, options.omega0, refine, options.workers);
}

}  // namespace qrmfss
