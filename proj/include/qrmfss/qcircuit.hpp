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

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qrmfss/rbm_params.hpp"

namespace qrmfss {

enum class GateKind { RY, X, CCRY };

/// RY and X act on qubits[0]. CCRY rotates qubits[2] when qubits[0] and
/// qubits[1] are both |1⟩.
struct Gate {
    GateKind kind = GateKind::X;
    std::array<std::size_t, 3> qubits{};
    double angle = 0.0;
};

struct GateCounts {
    std::size_t ry = 0;
    std::size_t x = 0;
    std::size_t ccry = 0;
    /// One site per (visible, hidden) pair; each site holds four CCRY gates,
    /// one per control pattern.
    std::size_t controlled_sites = 0;
};

/// Qubit layout: visible 0..n-1, hidden n..n+m-1, ancilla for (i, j) at
/// n + m + i*m + j. Basis-state index bit q is qubit q.
struct CircuitSpec {
    std::size_t n_visible = 0;
    std::size_t n_hidden = 0;
    std::size_t n_ancilla = 0;
    std::vector<Gate> gates;
    GateCounts gate_counts;

    std::size_t n_qubits() const noexcept { return n_visible + n_hidden + n_ancilla; }
    std::size_t ancilla(std::size_t i, std::size_t j) const noexcept { return n_visible + n_hidden + i * n_hidden + j; }
};

using StateVector = std::vector<std::complex<double>>;

inline constexpr std::size_t kMaxQubits = 28;

/// Gibbs-sampling circuit for the rescaled distribution Q(y) ∝ exp(E(y)/k).
///
/// Single-qubit rotations put weight e^(±a_i/k) on |1⟩/|0⟩ of each
/// visible qubit (b_j for hidden). For every pair (i, j) the ancilla is rotated
/// by a doubly-controlled RY for each of the four control patterns, with
/// sin²(θ/2) = exp((w_ij s h - |w_ij|)/k) ≤ 1. Conditioning on all ancillas
/// reading 1 then leaves exactly Q on the visible and hidden register.
/// Patterns are visited in the order (1,1), (1,0), (0,1), (0,0) with X
/// conjugations toggled only where consecutive patterns differ.
CircuitSpec build_gibbs_circuit(const RbmParams &params);

/// Applies the gates in order to |0…0⟩.
StateVector run_statevector(const CircuitSpec &circuit);

struct SampleBatch {
    std::uint64_t shots = 0;
    std::uint64_t successes = 0;
    /// Register outcome y = σ bits | (h bits << n) → occurrences among the
    /// successful shots.
    std::map<std::uint64_t, std::uint64_t> counts;
};

/// Simulates the circuit and draws `shots` full measurements.
SampleBatch sample(const CircuitSpec &circuit, std::uint64_t shots, std::uint64_t seed);

/// Draws from an already simulated state.
SampleBatch sample_state(const StateVector &state, const CircuitSpec &circuit, std::uint64_t shots,
                         std::uint64_t seed);

/// Draws `shots` indices from a discrete distribution; returns occurrences
/// per index. Deterministic per seed.
std::vector<std::uint64_t> draw_counts(std::span<const double> probabilities, std::uint64_t shots,
                                       std::uint64_t seed);

/// Register distribution conditioned on every ancilla reading 1, computed
/// from the amplitudes. Also returns the success probability.
struct Postselected {
    std::vector<double> distribution;
    double success_probability = 0.0;
};
Postselected postselected_distribution(const StateVector &state, const CircuitSpec &circuit);

/// Q(y) → Q(y)^k, renormalized, marginalized over the hidden register.
std::vector<double> q_to_p(std::span<const double> q_joint, std::size_t n_visible, std::size_t n_hidden, double k);

/// Empirical Q from successful shots pushed through q_to_p with params.k().
std::vector<double> empirical_q_to_p(const SampleBatch &batch, const RbmParams &params);

/// One gate per line: `RY q θ`, `X q`, `CCRY q1 q2 q3 θ`.
std::string export_gate_list(const CircuitSpec &circuit);

}  // namespace qrmfss
