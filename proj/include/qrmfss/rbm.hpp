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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qrmfss/operators.hpp"
#include "qrmfss/rbm_params.hpp"

namespace qrmfss {

/// P(σ) from the closed-form hidden-layer trace.
struct ExactSource {};

/// P(σ) estimated from post-selected shots of the Gibbs-sampling circuit.
struct SampledSource {
    std::uint64_t shots = 8192;
    std::uint64_t seed = 0;
};

using ProbabilitySource = std::variant<ExactSource, SampledSource>;

struct VariationalState {
    /// Over all 2ⁿ strings; unphysical entries are zero. Unit norm.
    std::vector<double> amplitudes;
    /// ℓ₂ norm before normalization.
    double norm = 0.0;
};

/// Exact marginal P(σ), normalized over all 2ⁿ strings.
double probability(const RbmParams &params, std::span<const int> sigma);

/// The full exact distribution, indexed by string index.
std::vector<double> probabilities(const RbmParams &params);

/// tanh(c + Σ d_i σ_i)
double sign_value(const RbmParams &params, std::span<const int> sigma);

/// ψ(σ) ∝ √P(σ) s(σ) on physical strings, with the exact P.
VariationalState build_state(const RbmParams &params, const BasisEncoding &encoding);

/// Same with a supplied distribution over the 2ⁿ strings (sampled mode).
/// The distribution need not be normalized.
VariationalState build_state(const RbmParams &params, const BasisEncoding &encoding,
                             std::span<const double> distribution);

/// ψᵀHψ. H may be given on the physical N-dimensional space or already
/// embedded in the 2ⁿ space; unphysical rows and columns never contribute.
double energy(const RbmParams &params, const Matrix &h, const BasisEncoding &encoding,
              const ProbabilitySource &source = ExactSource{});

/// Central finite differences of `energy` in every parameter. Sampled mode
/// reuses the same seed, and therefore the same uniforms, on both sides of
/// each difference.
RbmParams gradient(const RbmParams &params, const Matrix &h, const BasisEncoding &encoding,
                   const ProbabilitySource &source = ExactSource{}, double step = 1e-4);

struct TrainOptions {
    double learning_rate = 0.01;
    std::size_t iterations = 30000;
    ProbabilitySource source = ExactSource{};
    /// Drives the per-iteration sampling seeds in sampled mode.
    std::uint64_t seed = 0;
    double fd_step = 1e-4;
};

struct TrainResult {
    RbmParams params;
    /// Energy at the start of each iteration.
    std::vector<double> energy_trace;
};

/// Plain gradient descent from `init` (a fresh random point or the converged
/// parameters of a neighbouring coupling).
TrainResult train(const Matrix &h, const BasisEncoding &encoding, const RbmParams &init,
                  const TrainOptions &options);

struct Checkpoint {
    RbmParams params;
    std::uint64_t seed = 0;
    std::uint64_t iteration = 0;
};

void save_checkpoint(const std::string &path, const Checkpoint &checkpoint);
Checkpoint load_checkpoint(const std::string &path);

std::string checkpoint_to_string(const Checkpoint &checkpoint);
Checkpoint checkpoint_from_string(const std::string &text);

}  // namespace qrmfss
