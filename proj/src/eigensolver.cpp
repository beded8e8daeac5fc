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

#include "qrmfss/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qrmfss/errors.hpp"

namespace qrmfss {

namespace {

constexpr int kMaxQlIterations = 64;

// Row-major n×n scratch matrix for the reduction.
class Dense {
  public:
    explicit Dense(std::size_t n) : n_(n), v_(n * n, 0.0) {}
    double &operator()(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }

  private:
    std::size_t n_;
    std::vector<double> v_;
};

void check_input(const Matrix &h) {
    if (h.dim() == 0) {
        throw Error(ErrorCode::InvalidDimension, "empty matrix");
    }
    const double scale = h.max_abs();
    if (h.max_asymmetry() > 1e-12 * scale) {
        throw Error(ErrorCode::NotSymmetric, "input matrix is not symmetric");
    }
}

// Householder reduction of the symmetric matrix held in v to tridiagonal
// form. On exit d is the diagonal, e[i] the sub-diagonal element (i, i-1)
// with e[0] = 0, and v holds the accumulated orthogonal transformation.
void tridiagonalize(std::size_t n, Dense &v, std::vector<double> &d, std::vector<double> &e) {
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
    }
    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) {
            scale += std::abs(d[k]);
        }
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] = 0.0;
            }
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (std::size_t k = j + 1; k < i; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) {
                e[j] -= hh * d[j];
            }
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k < i; ++k) {
                    v(k, j) -= (f * e[k] + g * d[k]);
                }
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) {
                d[k] = v(k, i + 1) / h;
            }
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) {
                    g += v(k, i + 1) * v(k, j);
                }
                for (std::size_t k = 0; k <= i; ++k) {
                    v(k, j) -= g * d[k];
                }
            }
        }
        for (std::size_t k = 0; k <= i; ++k) {
            v(k, i + 1) = 0.0;
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e) in the layout produced by
// tridiagonalize. Rotations are accumulated into v when it is non-null.
void ql_implicit(std::size_t n, std::vector<double> &d, std::vector<double> &e, Dense *v) {
    for (std::size_t i = 1; i < n; ++i) {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) {
                break;
            }
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > kMaxQlIterations) {
                    throw Error(ErrorCode::NoConvergence, "QL iteration did not converge");
                }
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) {
                    d[i] -= h;
                }
                f += h;

                p = d[m];
                double c = 1.0;
                double c2 = c;
                double c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0;
                double s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    h = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = h + s * (c * g + s * d[ii]);
                    if (v != nullptr) {
                        for (std::size_t k = 0; k < n; ++k) {
                            h = (*v)(k, ii + 1);
                            (*v)(k, ii + 1) = s * (*v)(k, ii) + c * h;
                            (*v)(k, ii) = c * (*v)(k, ii) - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

// Flip so the largest-magnitude component is positive (first one on ties).
void fix_sign(std::span<double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[best])) {
            best = i;
        }
    }
    if (v[best] < 0) {
        for (double &x : v) {
            x = -x;
        }
    }
}

double norm2(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x * x;
    }
    return std::sqrt(acc);
}

}  // namespace

Spectrum eigen_decompose(const Matrix &h) {
    check_input(h);
    const std::size_t n = h.dim();
    Dense v(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            v(i, j) = h(i, j);
        }
    }
    std::vector<double> d(n), e(n);
    tridiagonalize(n, v, d, e);
    ql_implicit(n, d, e, &v);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    Spectrum out;
    out.values.resize(n);
    out.vectors = Matrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = d[order[k]];
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

std::vector<double> eigenvalues(const Matrix &h) {
    check_input(h);
    const std::size_t n = h.dim();
    Dense v(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            v(i, j) = h(i, j);
        }
    }
    std::vector<double> d(n), e(n);
    tridiagonalize(n, v, d, e);
    ql_implicit(n, d, e, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

GroundSolution ground_state(const Matrix &h) {
    const Spectrum spec = eigen_decompose(h);
    const std::size_t n = h.dim();
    GroundSolution out;
    out.energy = spec.values.front();
    out.vector.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.vector[i] = spec.vectors(i, 0);
    }
    const double nrm = norm2(out.vector);
    for (double &x : out.vector) {
        x /= nrm;
    }
    fix_sign(out.vector);

    const auto hv = h.apply(out.vector);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = hv[i] - out.energy * out.vector[i];
        acc += r * r;
    }
    out.residual = std::sqrt(acc);
    return out;
}

GroundSolution ground_state_tridiagonal(std::span<const double> diag, std::span<const double> off) {
    const std::size_t n = diag.size();
    if (n == 0) {
        throw Error(ErrorCode::InvalidDimension, "empty matrix");
    }
    if (off.size() + 1 != n) {
        throw Error(ErrorCode::DimensionMismatch, "off-diagonal must have length dim-1");
    }

    std::vector<double> d(diag.begin(), diag.end());
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        e[i] = off[i - 1];
    }
    ql_implicit(n, d, e, nullptr);
    const double e0 = *std::min_element(d.begin(), d.end());

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        scale = std::max(scale, std::abs(diag[i]) + (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                                    (i + 1 < n ? std::abs(off[i]) : 0.0));
    }
    // T - shift·I is positive definite with a tiny smallest eigenvalue, so the
    // unpivoted LDLᵀ solve below is stable and each step is dominated by the
    // ground direction.
    const double shift = e0 - 1e-10 * std::max(1.0, scale);

    std::vector<double> x(n, 1.0);
    std::vector<double> diag_fact(n), rhs(n);
    diag_fact[0] = diag[0] - shift;
    for (std::size_t i = 1; i < n; ++i) {
        diag_fact[i] = (diag[i] - shift) - off[i - 1] * off[i - 1] / diag_fact[i - 1];
    }
    for (int sweep = 0; sweep < 3; ++sweep) {
        rhs = x;
        for (std::size_t i = 1; i < n; ++i) {
            rhs[i] -= off[i - 1] / diag_fact[i - 1] * rhs[i - 1];
        }
        x[n - 1] = rhs[n - 1] / diag_fact[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) {
            x[i] = (rhs[i] - off[i] * x[i + 1]) / diag_fact[i];
        }
        const double nrm = norm2(x);
        for (double &v : x) {
            v /= nrm;
        }
    }
    fix_sign(x);

    GroundSolution out;
    out.energy = e0;
    out.vector = std::move(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double hv = diag[i] * out.vector[i];
        if (i > 0) {
            hv += off[i - 1] * out.vector[i - 1];
        }
        if (i + 1 < n) {
            hv += off[i] * out.vector[i + 1];
        }
        const double r = hv - e0 * out.vector[i];
        acc += r * r;
    }
    out.residual = std::sqrt(acc);
    return out;
}

}  // namespace qrmfss
