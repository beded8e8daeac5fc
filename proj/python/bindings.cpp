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


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrmfss/eigensolver.hpp"
#include "qrmfss/errors.hpp"
#include "qrmfss/extrapolate.hpp"
#include "qrmfss/fss.hpp"
#include "qrmfss/hamiltonians.hpp"
#include "qrmfss/pipeline.hpp"
#include "qrmfss/qcircuit.hpp"
#include "qrmfss/rbm.hpp"

namespace py = pybind11;
using namespace qrmfss;

namespace {

py::array_t<double> to_numpy(const Matrix &m) {
    py::array_t<double> out({m.dim(), m.dim()});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) view(i, j) = m(i, j);
    return out;
}

Matrix from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast> &a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
        throw Error(ErrorCode::DimensionMismatch, "expected a square 2-D array");
    }
    Matrix m(static_cast<std::size_t>(a.shape(0)));
    auto view = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
        for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = view(i, j);
    return m;
}

py::dict table_dict(const EnergyTable &t) {
    py::dict d;
    d["truncations"] = t.truncations;
    d["g"] = t.g_grid;
    d["energy"] = t.energy;
    d["denergy"] = t.denergy;
    return d;
}

py::dict result_dict(const FssResult &r) {
    py::dict d;
    d["table"] = table_dict(r.table);
    py::list deltas;
    for (const auto &c : r.deltas) deltas.append(py::make_tuple(c.pair.first, c.pair.second, c.values));
    d["deltas"] = deltas;
    py::list xs;
    for (const auto &p : r.intersections) xs.append(py::make_tuple(p.n_label, p.g_star, p.bracket_width));
    d["intersections"] = xs;
    d["g_c"] = r.critical.limit;
    d["omega_star"] = r.critical.omega_star;
    d["epsilon"] = r.critical.epsilon;
    d["extrapolation_fallback"] = r.extrapolation_fallback;
    d["gamma_at_gc"] = r.gamma_at_gc;
    d["nu"] = r.nu;
    return d;
}

}  // namespace

PYBIND11_MODULE(_qrmfss, m) {
    m.doc() = "Finite-size scaling of the quantum Rabi model";

    py::register_exception<Error>(m, "QrmfssError");

    py::enum_<Phase>(m, "Phase").value("NP", Phase::Np).value("SP", Phase::Sp).value("RABI", Phase::Rabi);
    py::enum_<Engine>(m, "Engine")
        .value("ED", Engine::Ed)
        .value("RBM_EXACT", Engine::RbmExact)
        .value("RBM_SAMPLED", Engine::RbmSampled);

    m.def("hamiltonian", [](Phase phase, std::size_t dim, double g, double omega0) {
        return to_numpy(phase_hamiltonian(phase, dim, g, omega0));
    }, py::arg("phase"), py::arg("dim"), py::arg("g"), py::arg("omega0") = 1.0);
    m.def("dhamiltonian", [](Phase phase, std::size_t dim, double g, double omega0) {
        return to_numpy(phase_dhamiltonian(phase, dim, g, omega0));
    }, py::arg("phase"), py::arg("dim"), py::arg("g"), py::arg("omega0") = 1.0);
    m.def("rabi_hamiltonian", [](std::size_t dim_fock, double omega0, double Omega, double g) {
        return to_numpy(build_h_rabi(dim_fock, RabiParams::from_coupling(omega0, Omega, g)));
    }, py::arg("dim_fock"), py::arg("omega0"), py::arg("Omega"), py::arg("g"));

    m.def("eigenvalues", [](py::array_t<double> h) { return eigenvalues(from_numpy(h)); }, py::arg("h"));
    m.def("ground_state", [](py::array_t<double> h) {
        const auto gs = ground_state(from_numpy(h));
        return py::make_tuple(gs.energy, gs.vector);
    }, py::arg("h"), "(energy, vector) of the lowest eigenpair");

    m.def("ed_energies", [](Phase phase, std::vector<std::size_t> ns, std::vector<double> grid, double omega0,
                            std::size_t workers) {
        py::gil_scoped_release release;
        auto t = ed_energies(phase, ns, grid, omega0, workers);
        py::gil_scoped_acquire acquire;
        return table_dict(t);
    }, py::arg("phase"), py::arg("truncations"), py::arg("grid"), py::arg("omega0") = 1.0, py::arg("workers") = 0);

    m.def("delta_curve", [](std::vector<double> e_n, std::vector<double> e_np, std::size_t n, std::size_t n_prime,
                            std::vector<double> grid, bool classical) {
        return delta_curve(e_n, e_np, n, n_prime, grid,
                           classical ? DeltaConvention::Classical : DeltaConvention::EnergyScaling)
            .values;
    }, py::arg("e_n"), py::arg("e_n_prime"), py::arg("n"), py::arg("n_prime"), py::arg("grid"),
          py::arg("classical") = false);

    m.def("bsa_limit", [](std::vector<double> values, std::vector<double> h) {
        const auto r = bsa_limit(values, h);
        py::dict d;
        d["limit"] = r.limit;
        d["omega_star"] = r.omega_star;
        d["epsilon"] = r.epsilon;
        d["truncated"] = r.truncated;
        return d;
    }, py::arg("values"), py::arg("h"));

    m.def("run_fss", [](Phase phase, Engine engine, std::vector<std::size_t> truncations, double g_min, double g_max,
                        double g_step, std::size_t iterations, std::uint64_t seed, bool refine, std::size_t workers) {
        FssOptions o = engine == Engine::Ed ? FssOptions::ed_defaults(phase) : FssOptions::rbm_defaults(engine, phase);
        if (!truncations.empty()) o.truncations = truncations;
        o.g_min = g_min;
        o.g_max = g_max;
        o.g_step = g_step;
        if (iterations != 0) o.iterations = iterations;
        o.seed = seed;
        o.refine = refine && engine == Engine::Ed;
        o.workers = workers;
        FssResult r;
        {
            py::gil_scoped_release release;
            r = run_fss(o);
        }
        return result_dict(r);
    }, py::arg("phase"), py::arg("engine") = Engine::Ed, py::arg("truncations") = std::vector<std::size_t>{},
          py::arg("g_min") = 0.5, py::arg("g_max") = 1.5, py::arg("g_step") = 1e-3, py::arg("iterations") = 0,
          py::arg("seed") = 0, py::arg("refine") = true, py::arg("workers") = 0);

    py::class_<RbmParams>(m, "RbmParams")
        .def(py::init([](std::vector<double> a, std::vector<double> b, double c, std::vector<double> d,
                         std::vector<double> w) {
                 RbmParams p{std::move(a), std::move(b), c, std::move(d), std::move(w)};
                 p.validate();
                 return p;
             }),
             py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), py::arg("w"))
        .def_static("random", &RbmParams::random, py::arg("n_visible"), py::arg("n_hidden"), py::arg("seed"))
        .def_readwrite("a", &RbmParams::a)
        .def_readwrite("b", &RbmParams::b)
        .def_readwrite("c", &RbmParams::c)
        .def_readwrite("d", &RbmParams::d)
        .def_readwrite("w", &RbmParams::w)
        .def_property_readonly("k", &RbmParams::k)
        .def_property_readonly("n_visible", &RbmParams::n_visible)
        .def_property_readonly("n_hidden", &RbmParams::n_hidden);

    m.def("rbm_probabilities", &probabilities, py::arg("params"));
    m.def("rbm_amplitudes", [](const RbmParams &p, std::size_t fock_dim) {
        return build_state(p, BasisEncoding(fock_dim)).amplitudes;
    }, py::arg("params"), py::arg("fock_dim"));
    m.def("rbm_energy", [](const RbmParams &p, py::array_t<double> h) {
        const Matrix hm = from_numpy(h);
        return energy(p, hm, BasisEncoding(hm.dim()));
    }, py::arg("params"), py::arg("h"));
    m.def("rbm_train", [](py::array_t<double> h, const RbmParams &init, double lr, std::size_t iterations) {
        const Matrix hm = from_numpy(h);
        TrainOptions o;
        o.learning_rate = lr;
        o.iterations = iterations;
        TrainResult r;
        {
            py::gil_scoped_release release;
            r = train(hm, BasisEncoding(hm.dim()), init, o);
        }
        return py::make_tuple(r.params, r.energy_trace);
    }, py::arg("h"), py::arg("init"), py::arg("learning_rate") = 0.01, py::arg("iterations") = 30000);

    m.def("postselected_distribution", [](const RbmParams &p) {
        const auto c = build_gibbs_circuit(p);
        const auto post = postselected_distribution(run_statevector(c), c);
        return py::make_tuple(post.distribution, post.success_probability);
    }, py::arg("params"), "(Q over the visible+hidden register, success probability)");
    m.def("sample_circuit", [](const RbmParams &p, std::uint64_t shots, std::uint64_t seed) {
        const auto batch = sample(build_gibbs_circuit(p), shots, seed);
        return py::make_tuple(batch.successes, batch.counts);
    }, py::arg("params"), py::arg("shots"), py::arg("seed") = 0);
    m.def("q_to_p", [](std::vector<double> q, std::size_t n, std::size_t m_hidden, double k) {
        return q_to_p(q, n, m_hidden, k);
    }, py::arg("q"), py::arg("n_visible"), py::arg("n_hidden"), py::arg("k"));
    m.def("gate_list", [](const RbmParams &p) { return export_gate_list(build_gibbs_circuit(p)); },
          py::arg("params"));
}
