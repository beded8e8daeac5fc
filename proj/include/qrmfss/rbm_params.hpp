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
#include <vector>

namespace qrmfss {

/// Three-layer RBM: visible biases a, hidden biases b, weights w (n×m,
/// row-major) and the sign layer tanh(c + Σ d_i σ_i).
struct RbmParams {
    std::vector<double> a;
    std::vector<double> b;
    double c = 0.0;
    std::vector<double> d;
    std::vector<double> w;

    std::size_t n_visible() const noexcept { return a.size(); }
    std::size_t n_hidden() const noexcept { return b.size(); }

    double weight(std::size_t i, std::size_t j) const { return w[i * n_hidden() + j]; }
    double &weight(std::size_t i, std::size_t j) { return w[i * n_hidden() + j]; }

    /// Rescaling factor max(1, max_ij |w_ij| / 2), derived on every call.
    double k() const noexcept;

    static RbmParams zeros(std::size_t n_visible, std::size_t n_hidden);
    /// a, b, d, w uniform in [-0.05, 0.05]; c = 0.1.
    static RbmParams random(std::size_t n_visible, std::size_t n_hidden, std::uint64_t seed);

    /// Flattened layout: a, b, c, d, w.
    std::size_t parameter_count() const noexcept;
    std::vector<double> flatten() const;
    static RbmParams unflatten(std::size_t n_visible, std::size_t n_hidden, std::span<const double> flat);

    /// Consistent shapes, n ≥ 1, m ≥ 1, every entry finite.
    void validate() const;

    bool operator==(const RbmParams &) const = default;
};

/// Fock index x ∈ [0, N) ↔ spin string of n = ⌈log₂ N⌉ visible units:
/// bit i of x set ⇔ σ_i = +1. Strings with index ≥ N are unphysical.
class BasisEncoding {
  public:
    explicit BasisEncoding(std::size_t fock_dim);

    std::size_t fock_dim() const noexcept { return fock_dim_; }
    std::size_t n_visible() const noexcept { return n_visible_; }
    std::size_t n_strings() const noexcept { return std::size_t{1} << n_visible_; }

    bool is_physical(std::size_t index) const noexcept { return index < fock_dim_; }
    std::vector<int> spins(std::size_t index) const;
    std::size_t index(std::span<const int> sigma) const;

  private:
    std::size_t fock_dim_;
    std::size_t n_visible_;
};

/// σ_i = ±1 from bit i of `index`.
inline int spin_of(std::size_t index, std::size_t i) noexcept { return ((index >> i) & 1u) ? 1 : -1; }

}  // namespace qrmfss
