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

#include "qrmfss/qcircuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "qrmfss/errors.hpp"

namespace qrmfss {

namespace {

double bias_angle(double bias, double k) {
    const double up = std::exp(bias / k);
    const double down = std::exp(-bias / k);
    return 2.0 * std::asin(std::sqrt(up / (up + down)));
}

double weight_angle(double w, int s, int h, double k) {
    const double p = std::exp((w * s * h - std::abs(w)) / k);
    return 2.0 * std::asin(std::sqrt(std::min(1.0, p)));
}

void add_x(CircuitSpec &c, std::size_t q) {
    c.gates.push_back({GateKind::X, {q, 0, 0}, 0.0});
    ++c.gate_counts.x;
}

// Uniform double in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

CircuitSpec build_gibbs_circuit(const RbmParams &params) {
    params.validate();
    const std::size_t n = params.n_visible();
    const std::size_t m = params.n_hidden();
    const double k = params.k();

    CircuitSpec c;
    c.n_visible = n;
    c.n_hidden = m;
    c.n_ancilla = n * m;

    for (std::size_t i = 0; i < n; ++i) {
        c.gates.push_back({GateKind::RY, {i, 0, 0}, bias_angle(params.a[i], k)});
        ++c.gate_counts.ry;
    }
    for (std::size_t j = 0; j < m; ++j) {
        c.gates.push_back({GateKind::RY, {n + j, 0, 0}, bias_angle(params.b[j], k)});
        ++c.gate_counts.ry;
    }

    // (visible bit, hidden bit) selected by each block.
    constexpr std::array<std::array<int, 2>, 4> kPatterns{{{1, 1}, {1, 0}, {0, 1}, {0, 0}}};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t vq = i;
            const std::size_t hq = n + j;
            const std::size_t aq = c.ancilla(i, j);
            bool v_flipped = false;
            bool h_flipped = false;
            for (const auto &pattern : kPatterns) {
                const bool want_v = pattern[0] == 0;
                const bool want_h = pattern[1] == 0;
                if (want_v != v_flipped) {
                    add_x(c, vq);
                    v_flipped = want_v;
                }
                if (want_h != h_flipped) {
                    add_x(c, hq);
                    h_flipped = want_h;
                }
                const int s = pattern[0] ? 1 : -1;
                const int h = pattern[1] ? 1 : -1;
                c.gates.push_back({GateKind::CCRY, {vq, hq, aq}, weight_angle(params.weight(i, j), s, h, k)});
                ++c.gate_counts.ccry;
            }
            if (v_flipped) {
                add_x(c, vq);
            }
            if (h_flipped) {
                add_x(c, hq);
            }
            ++c.gate_counts.controlled_sites;
        }
    }
    return c;
}

StateVector run_statevector(const CircuitSpec &circuit) {
    const std::size_t nq = circuit.n_qubits();
    if (nq > kMaxQubits) {
        throw Error(ErrorCode::Capacity, "circuit needs " + std::to_string(nq) + " qubits, limit is " +
                                             std::to_string(kMaxQubits));
    }
    const std::size_t dim = std::size_t{1} << nq;
    StateVector psi(dim, 0.0);
    psi[0] = 1.0;

    for (const Gate &gate : circuit.gates) {
        for (std::size_t q : gate.qubits) {
            if (q >= nq) {
                throw Error(ErrorCode::Capacity, "gate references qubit " + std::to_string(q));
            }
        }
        const std::size_t target = gate.kind == GateKind::CCRY ? gate.qubits[2] : gate.qubits[0];
        const std::size_t tbit = std::size_t{1} << target;
        std::size_t control_mask = 0;
        if (gate.kind == GateKind::CCRY) {
            control_mask = (std::size_t{1} << gate.qubits[0]) | (std::size_t{1} << gate.qubits[1]);
        }
        const double cs = std::cos(0.5 * gate.angle);
        const double sn = std::sin(0.5 * gate.angle);
        for (std::size_t i0 = 0; i0 < dim; ++i0) {
            if ((i0 & tbit) != 0 || (i0 & control_mask) != control_mask) {
                continue;
            }
            const std::size_t i1 = i0 | tbit;
            const std::complex<double> a0 = psi[i0];
            const std::complex<double> a1 = psi[i1];
            if (gate.kind == GateKind::X) {
                psi[i0] = a1;
                psi[i1] = a0;
            } else {
                psi[i0] = cs * a0 - sn * a1;
                psi[i1] = sn * a0 + cs * a1;
            }
        }
    }
    return psi;
}

std::vector<std::uint64_t> draw_counts(std::span<const double> probabilities, std::uint64_t shots,
                                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> u(shots);
    for (double &x : u) {
        x = unit_uniform(rng);
    }
    std::sort(u.begin(), u.end());

    double total = 0.0;
    for (double p : probabilities) {
        total += p;
    }
    std::vector<std::uint64_t> counts(probabilities.size(), 0);
    // Sweep the sorted uniforms through the running CDF.
    double cdf = 0.0;
    std::size_t next = 0;
    std::size_t last_nonzero = 0;
    for (std::size_t idx = 0; idx < probabilities.size() && next < u.size(); ++idx) {
        if (probabilities[idx] <= 0.0) {
            continue;
        }
        last_nonzero = idx;
        cdf += probabilities[idx] / total;
        while (next < u.size() && u[next] < cdf) {
            ++counts[idx];
            ++next;
        }
    }
    // Rounding can leave the CDF a hair below 1.
    counts[last_nonzero] += u.size() - next;
    return counts;
}

SampleBatch sample_state(const StateVector &state, const CircuitSpec &circuit, std::uint64_t shots,
                         std::uint64_t seed) {
    if (shots == 0) {
        throw Error(ErrorCode::EmptyPostselection, "shots must be at least 1");
    }
    std::vector<double> prob(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        prob[i] = std::norm(state[i]);
    }
    const auto counts = draw_counts(prob, shots, seed);

    const std::size_t reg_bits = circuit.n_visible + circuit.n_hidden;
    const std::uint64_t all_ones = (std::uint64_t{1} << circuit.n_ancilla) - 1;
    const std::uint64_t reg_mask = (std::uint64_t{1} << reg_bits) - 1;
    SampleBatch batch;
    batch.shots = shots;
    for (std::size_t idx = 0; idx < counts.size(); ++idx) {
        if (counts[idx] == 0) {
            continue;
        }
        if ((idx >> reg_bits) == all_ones) {
            batch.counts[idx & reg_mask] += counts[idx];
            batch.successes += counts[idx];
        }
    }
    if (batch.successes == 0) {
        throw Error(ErrorCode::EmptyPostselection, "no shot had every ancilla in |1>");
    }
    return batch;
}

SampleBatch sample(const CircuitSpec &circuit, std::uint64_t shots, std::uint64_t seed) {
    return sample_state(run_statevector(circuit), circuit, shots, seed);
}

Postselected postselected_distribution(const StateVector &state, const CircuitSpec &circuit) {
    const std::size_t reg_bits = circuit.n_visible + circuit.n_hidden;
    const std::size_t reg_dim = std::size_t{1} << reg_bits;
    const std::size_t all_ones = ((std::size_t{1} << circuit.n_ancilla) - 1) << reg_bits;
    if (state.size() != (std::size_t{1} << circuit.n_qubits())) {
        throw Error(ErrorCode::DimensionMismatch, "state does not match the circuit");
    }
    Postselected out;
    out.distribution.resize(reg_dim);
    for (std::size_t y = 0; y < reg_dim; ++y) {
        out.distribution[y] = std::norm(state[y | all_ones]);
        out.success_probability += out.distribution[y];
    }
    if (out.success_probability <= 0.0) {
        throw Error(ErrorCode::EmptyPostselection, "zero success probability");
    }
    for (double &p : out.distribution) {
        p /= out.success_probability;
    }
    return out;
}

std::vector<double> q_to_p(std::span<const double> q_joint, std::size_t n_visible, std::size_t n_hidden, double k) {
    const std::size_t vis_dim = std::size_t{1} << n_visible;
    if (q_joint.size() != (std::size_t{1} << (n_visible + n_hidden))) {
        throw Error(ErrorCode::DimensionMismatch, "joint distribution has the wrong size");
    }
    double q_total = 0.0;
    for (double q : q_joint) {
        q_total += q;
    }
    if (!(q_total > 0.0)) {
        throw Error(ErrorCode::EmptyPostselection, "empty distribution");
    }
    std::vector<double> p(vis_dim, 0.0);
    double total = 0.0;
    for (std::size_t y = 0; y < q_joint.size(); ++y) {
        const double q = q_joint[y] / q_total;
        const double weight = q > 0.0 ? std::pow(q, k) : 0.0;
        p[y & (vis_dim - 1)] += weight;
        total += weight;
    }
    for (double &x : p) {
        x /= total;
    }
    return p;
}

std::vector<double> empirical_q_to_p(const SampleBatch &batch, const RbmParams &params) {
    if (batch.successes == 0) {
        throw Error(ErrorCode::EmptyPostselection, "no successful shots");
    }
    const std::size_t n = params.n_visible();
    const std::size_t m = params.n_hidden();
    std::vector<double> q(std::size_t{1} << (n + m), 0.0);
    for (const auto &[y, count] : batch.counts) {
        if (y >= q.size()) {
            throw Error(ErrorCode::DimensionMismatch, "outcome outside the register");
        }
        q[y] = static_cast<double>(count) / static_cast<double>(batch.successes);
    }
    return q_to_p(q, n, m, params.k());
}

std::string export_gate_list(const CircuitSpec &circuit) {
    std::ostringstream out;
    char buf[64];
    for (const Gate &g : circuit.gates) {
        switch (g.kind) {
            case GateKind::RY:
                std::snprintf(buf, sizeof buf, "%.17g", g.angle);
                out << "RY " << g.qubits[0] << ' ' << buf << '\n';
                break;
            case GateKind::X:
                out << "X " << g.qubits[0] << '\n';
                break;
            case GateKind::CCRY:
                std::snprintf(buf, sizeof buf, "%.17g", g.angle);
                out << "CCRY " << g.qubits[0] << ' ' << g.qubits[1] << ' ' << g.qubits[2] << ' ' << buf << '\n';
                break;
        }
    }
    return out.str();
}

}  // namespace qrmfss
