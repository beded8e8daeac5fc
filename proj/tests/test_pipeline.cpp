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
#include <filesystem>
#include <optional>

#include <gtest/gtest.h>

#include "qrmfss/eigensolver.hpp"
#include "qrmfss/errors.hpp"
#include "qrmfss/pipeline.hpp"

namespace qrmfss {
namespace {

std::optional<ErrorCode> code_of(const auto &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    return std::nullopt;
}

TEST(Grid, EndpointsAndCount) {
    const auto g = make_grid(0.5, 1.5, 1e-3);
    ASSERT_EQ(g.size(), 1001u);
    EXPECT_EQ(g.front(), 0.5);
    EXPECT_NEAR(g.back(), 1.5, 1e-12);
    EXPECT_NEAR(g[500], 1.0, 1e-12);
    EXPECT_EQ(make_grid(1.0, 1.2, 0.1).size(), 3u);
    EXPECT_EQ(code_of([] { make_grid(1.0, 1.0, 0.1); }), ErrorCode::Config);
}

TEST(Names, RoundTrip) {
    for (Engine e : {Engine::Ed, Engine::RbmExact, Engine::RbmSampled}) EXPECT_EQ(parse_engine(engine_name(e)), e);
    for (Phase p : {Phase::Np, Phase::Sp, Phase::Rabi}) EXPECT_EQ(parse_phase(phase_name(p)), p);
    for (SweepDirection s : {SweepDirection::Auto, SweepDirection::Ascending, SweepDirection::Descending})
        EXPECT_EQ(parse_sweep(sweep_name(s)), s);
    EXPECT_EQ(code_of([] { parse_engine("dmrg"); }), ErrorCode::Config);
    EXPECT_EQ(code_of([] { parse_phase("x"); }), ErrorCode::Config);
}

TEST(Options, Defaults) {
    const auto ed = FssOptions::ed_defaults(Phase::Sp);
    EXPECT_EQ(ed.truncations.front(), 8u);
    EXPECT_EQ(ed.truncations.back(), 32u);
    EXPECT_EQ(ed.truncations.size(), 13u);
    EXPECT_TRUE(ed.refine);
    EXPECT_NO_THROW(ed.validate());
    const auto rbm = FssOptions::rbm_defaults(Engine::RbmExact, Phase::Np);
    EXPECT_EQ(rbm.truncations, (std::vector<std::size_t>{8, 10, 12, 14, 16}));
    EXPECT_EQ(rbm.iterations, 30000u);
    EXPECT_DOUBLE_EQ(rbm.learning_rate, 0.01);
    EXPECT_FALSE(rbm.refine);
    EXPECT_NO_THROW(rbm.validate());
}

TEST(Options, Validation) {
    auto bad = [](auto mutate) {
        auto o = FssOptions::ed_defaults(Phase::Np);
        mutate(o);
        return code_of([&] { o.validate(); });
    };
    EXPECT_EQ(bad([](FssOptions &o) { o.truncations.clear(); }), ErrorCode::Config);
    EXPECT_EQ(bad([](FssOptions &o) { o.truncations = {8}; }), ErrorCode::Config);
    EXPECT_EQ(bad([](FssOptions &o) { o.truncations = {8, 8, 10}; }), ErrorCode::Config);
    EXPECT_EQ(bad([](FssOptions &o) { o.g_step = 0.0; }), ErrorCode::Config);
    EXPECT_EQ(bad([](FssOptions &o) { o.g_min = 2.0; }), ErrorCode::Config);
    EXPECT_EQ(bad([](FssOptions &o) { o.omega0 = -1.0; }), ErrorCode::Config);
    EXPECT_EQ(bad([](FssOptions &o) { o.phase = Phase::Rabi; }), ErrorCode::Config);
}

TEST(EdEnergies, MatchDirectDiagonalization) {
    const std::vector<std::size_t> ns{6, 9};
    const auto grid = make_grid(0.7, 1.3, 0.1);
    for (Phase phase : {Phase::Np, Phase::Sp}) {
        const auto t = ed_energies(phase, ns, grid, 1.0, 2);
        for (std::size_t a = 0; a < ns.size(); ++a) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const auto h = phase_hamiltonian(phase, ns[a], grid[i], 1.0);
                const auto ev = eigenvalues(h);
                EXPECT_NEAR(t.energy[a][i], ev.front(), 1e-12);
                const auto gs = ground_state(h);
                const auto dh = phase_dhamiltonian(phase, ns[a], grid[i], 1.0);
                EXPECT_NEAR(t.denergy[a][i], dh.quadratic_form(gs.vector), 1e-10);
            }
        }
    }
}

TEST(EdEnergies, WorkerCountDoesNotChangeResults) {
    const std::vector<std::size_t> ns{8, 10, 12};
    const auto grid = make_grid(0.9, 1.1, 0.02);
    const auto serial = ed_energies(Phase::Np, ns, grid, 1.0, 1);
    const auto parallel = ed_energies(Phase::Np, ns, grid, 1.0, 5);
    EXPECT_EQ(serial.energy, parallel.energy);
    EXPECT_EQ(serial.denergy, parallel.denergy);
}

TEST(DeltaCurves, ConsecutivePairs) {
    const std::vector<std::size_t> ns{8, 10, 12};
    const auto grid = make_grid(0.9, 1.1, 0.05);
    const auto t = ed_energies(Phase::Sp, ns, grid, 1.0, 0);
    const auto curves = delta_curves(t);
    ASSERT_EQ(curves.size(), 2u);
    EXPECT_EQ(curves[0].pair, (TruncationPair{8, 10}));
    EXPECT_EQ(curves[1].pair, (TruncationPair{10, 12}));
    const double want = std::log(t.energy[0][2] / t.energy[1][2]) / std::log(10.0 / 8.0);
    EXPECT_NEAR(curves[0].values[2], want, 1e-14);
    const auto classical = delta_curves(t, false, DeltaConvention::Classical);
    EXPECT_NEAR(classical[0].values[2], -want, 1e-14);
}

TEST(RunFss, SmallEdNormalPhase) {
    auto o = FssOptions::ed_defaults(Phase::Np);
    o.truncations = {10, 12, 14, 16, 18};
    o.g_min = 0.9;
    o.g_max = 1.1;
    o.g_step = 0.01;
    const auto r = run_fss(o);
    ASSERT_EQ(r.intersections.size(), 3u);
    EXPECT_EQ(r.intersections[0].n_label, 14u);
    EXPECT_EQ(r.intersections[2].n_label, 18u);
    for (const auto &p : r.intersections) EXPECT_NEAR(p.g_star, 1.0, 2e-2);
    EXPECT_NEAR(r.critical.limit, 1.0, 1e-2);
    ASSERT_EQ(r.deltas.size(), 4u);
}

TEST(RunFss, RefinementOnlyTightensTheBracket) {
    auto o = FssOptions::ed_defaults(Phase::Sp);
    o.truncations = {10, 12, 14};
    o.g_min = 0.9;
    o.g_max = 1.1;
    o.g_step = 0.01;
    o.refine = false;
    const auto coarse = run_fss(o);
    o.refine = true;
    const auto fine = run_fss(o);
    ASSERT_EQ(coarse.intersections.size(), 1u);
    ASSERT_EQ(fine.intersections.size(), 1u);
    EXPECT_LT(fine.intersections[0].bracket_width, coarse.intersections[0].bracket_width);
    EXPECT_NEAR(fine.intersections[0].g_star, coarse.intersections[0].g_star, 2e-2);
}

FssOptions tiny_rbm() {
    auto o = FssOptions::rbm_defaults(Engine::RbmExact, Phase::Np);
    o.truncations = {4, 6, 8};
    o.g_min = 0.9;
    o.g_max = 1.1;
    o.g_step = 0.1;
    o.iterations = 300;
    o.workers = 2;
    return o;
}

TEST(RbmEnergies, AboveEdAndDeterministic) {
    const auto o = tiny_rbm();
    const auto grid = make_grid(o.g_min, o.g_max, o.g_step);
    std::vector<std::vector<RbmParams>> params;
    const auto a = rbm_energies(o, grid, &params);
    const auto b = rbm_energies(o, grid);
    EXPECT_EQ(a.energy, b.energy);
    EXPECT_EQ(a.denergy, b.denergy);
    ASSERT_EQ(params.size(), 3u);
    ASSERT_EQ(params[0].size(), grid.size());
    EXPECT_EQ(params[2][0].n_visible(), 3u);
    const auto ed = ed_energies(o.phase, o.truncations, grid, o.omega0, 1);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_GE(a.energy[k][i], ed.energy[k][i] - 1e-12);
}

TEST(RbmEnergies, CheckpointsResumeIdentically) {
    const auto dir = std::filesystem::temp_directory_path() / "qrmfss_test_ckpt";
    std::filesystem::remove_all(dir);
    auto o = tiny_rbm();
    o.checkpoint_dir = dir.string();
    const auto grid = make_grid(o.g_min, o.g_max, o.g_step);
    const auto first = rbm_energies(o, grid);
    ASSERT_TRUE(std::filesystem::exists(dir / "rbm_N4_g0.json"));
    ASSERT_TRUE(std::filesystem::exists(dir / "rbm_N8_g2.json"));
    // Drop one cell so the resumed run has to train it again.
    std::filesystem::remove(dir / "rbm_N6_g1.json");
    const auto resumed = rbm_energies(o, grid);
    EXPECT_EQ(first.energy, resumed.energy);
    EXPECT_EQ(first.denergy, resumed.denergy);
    std::filesystem::remove_all(dir);
}

TEST(Analyze, TooFewIntersectionsFallsBack) {
    EnergyTable t = ed_energies(Phase::Np, std::vector<std::size_t>{8, 10, 12}, make_grid(0.9, 1.1, 0.01), 1.0, 0);
    const auto r = analyze(t, Phase::Np, 1.0, false, 0);
    ASSERT_EQ(r.intersections.size(), 1u);
    EXPECT_TRUE(r.extrapolation_fallback);
    EXPECT_EQ(r.critical.limit, r.intersections[0].g_star);
}

}  // namespace
}  // namespace qrmfss
