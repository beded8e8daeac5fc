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

#include "qrmfss/extrapolate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qrmfss/errors.hpp"

namespace qrmfss {

namespace {

// Differences below this many ulps of the sequence scale are rounding noise.
constexpr double kNoiseUlps = 64.0;

void validate(std::span<const double> values, std::span<const double> h_values, double omega) {
    if (values.size() < 3) {
        throw Error(ErrorCode::InsufficientData, "extrapolation needs at least 3 values");
    }
    if (h_values.size() != values.size()) {
        throw Error(ErrorCode::DimensionMismatch, "values and step sizes differ in length");
    }
    for (std::size_t i = 0; i < h_values.size(); ++i) {
        if (!(h_values[i] > 0.0) || (i > 0 && !(h_values[i] < h_values[i - 1]))) {
            throw Error(ErrorCode::InsufficientData, "step sizes must be positive and strictly decreasing");
        }
    }
    if (!(omega > 0.0)) {
        throw Error(ErrorCode::InvalidCoupling, "omega must be positive");
    }
}

double epsilon_of(const std::vector<std::vector<double>> &rows) {
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        if (it->size() >= 2) {
            return std::abs((*it)[it->size() - 1] - (*it)[it->size() - 2]);
        }
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace

BsaTableau bsa_tableau(std::span<const double> values, std::span<const double> h_values, double omega) {
    validate(values, h_values, omega);
    const std::size_t count = values.size();

    BsaTableau t;
    t.h_values.assign(h_values.begin(), h_values.end());
    t.omega = omega;
    t.rows.emplace_back(values.begin(), values.end());

    double scale = 0.0;
    for (double v : values) {
        scale = std::max(scale, std::abs(v));
    }
    const double noise = kNoiseUlps * std::numeric_limits<double>::epsilon() * scale;

    for (std::size_t m = 1; m < count; ++m) {
        const auto &prev = t.rows[m - 1];
        const std::vector<double> zeros(count - m + 2, 0.0);
        const auto &prev2 = (m >= 2) ? t.rows[m - 2] : zeros;
        std::vector<double> row(count - m);
        bool complete = true;
        for (std::size_t i = 0; i < count - m; ++i) {
            const double diff = prev[i + 1] - prev[i];
            if (diff == 0.0) {
                row[i] = prev[i + 1];
                continue;
            }
            const double den = prev[i + 1] - prev2[i + 1];
            if (std::abs(den) <= noise) {
                complete = false;
                break;
            }
            const double ratio = std::pow(h_values[i] / h_values[i + m], omega);
            const double bracket = ratio * (1.0 - diff / den) - 1.0;
            const double value = prev[i + 1] + diff / bracket;
            if (bracket == 0.0 || !std::isfinite(value)) {
                complete = false;
                break;
            }
            row[i] = value;
        }
        if (!complete) {
            t.truncated = true;
            break;
        }
        t.rows.push_back(std::move(row));
    }
    t.epsilon = epsilon_of(t.rows);
    return t;
}

BsaResult bsa_limit(std::span<const double> values, std::span<const double> h_values, const BsaSearch &search) {
    validate(values, h_values, 1.0);

    struct Eval {
        double omega;
        double epsilon;
        double limit;
        bool truncated;
    };
    const auto evaluate = [&](double omega) -> Eval {
        const BsaTableau t = bsa_tableau(values, h_values, omega);
        const double lim = t.limit();
        const double eps = std::isfinite(lim) ? t.epsilon : std::numeric_limits<double>::infinity();
        return {omega, eps, lim, t.truncated};
    };

    const auto steps =
        static_cast<std::size_t>(std::llround((search.omega_max - search.omega_min) / search.grid_step));
    Eval best{0.0, std::numeric_limits<double>::infinity(), 0.0, false};
    for (std::size_t k = 0; k <= steps; ++k) {
        const Eval e = evaluate(search.omega_min + static_cast<double>(k) * search.grid_step);
        if (e.epsilon < best.epsilon) {
            best = e;
        }
    }
    if (!std::isfinite(best.epsilon)) {
        throw ExtrapolationFailed("no exponent gives a finite tableau", values.back());
    }

    // Golden-section search on the bracket around the best grid point.
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = std::max(search.omega_min, best.omega - search.grid_step);
    double hi = std::min(search.omega_max, best.omega + search.grid_step);
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    Eval e1 = evaluate(x1);
    Eval e2 = evaluate(x2);
    while (hi - lo > search.refine_tolerance) {
        if (e1.epsilon <= e2.epsilon) {
            hi = x2;
            x2 = x1;
            e2 = e1;
            x1 = hi - kInvPhi * (hi - lo);
            e1 = evaluate(x1);
        } else {
            lo = x1;
            x1 = x2;
            e1 = e2;
            x2 = lo + kInvPhi * (hi - lo);
            e2 = evaluate(x2);
        }
    }
    const Eval refined = (e1.epsilon <= e2.epsilon) ? e1 : e2;
    if (refined.epsilon < best.epsilon) {
        best = refined;
    }
    return {best.limit, best.omega, best.epsilon, best.truncated};
}

}  // namespace qrmfss
