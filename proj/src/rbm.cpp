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

#include "qrmfss/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qrmfss/errors.hpp"
#include "qrmfss/qcircuit.hpp"

namespace qrmfss {

// ---------------------------------------------------------------- params

double RbmParams::k() const noexcept {
    double wmax = 0.0;
    for (double x : w) {
        wmax = std::max(wmax, std::abs(x));
    }
    return std::max(1.0, wmax / 2.0);
}

RbmParams RbmParams::zeros(std::size_t n_visible, std::size_t n_hidden) {
    RbmParams p;
    p.a.assign(n_visible, 0.0);
    p.b.assign(n_hidden, 0.0);
    p.d.assign(n_visible, 0.0);
    p.w.assign(n_visible * n_hidden, 0.0);
    return p;
}

RbmParams RbmParams::random(std::size_t n_visible, std::size_t n_hidden, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto draw = [&] { return (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 0.1; };
    RbmParams p = zeros(n_visible, n_hidden);
    for (double &x : p.a) x = draw();
    for (double &x : p.b) x = draw();
    for (double &x : p.d) x = draw();
    for (double &x : p.w) x = draw();
    p.c = 0.1;
    return p;
}

std::size_t RbmParams::parameter_count() const noexcept { return a.size() + b.size() + 1 + d.size() + w.size(); }

std::vector<double> RbmParams::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    flat.insert(flat.end(), a.begin(), a.end());
    flat.insert(flat.end(), b.begin(), b.end());
    flat.push_back(c);
    flat.insert(flat.end(), d.begin(), d.end());
    flat.insert(flat.end(), w.begin(), w.end());
    return flat;
}

RbmParams RbmParams::unflatten(std::size_t n_visible, std::size_t n_hidden, std::span<const double> flat) {
    RbmParams p = zeros(n_visible, n_hidden);
    if (flat.size() != p.parameter_count()) {
        throw Error(ErrorCode::DimensionMismatch, "flat parameter vector has the wrong length");
    }
    auto it = flat.begin();
    std::copy_n(it, n_visible, p.a.begin());
    it += static_cast<std::ptrdiff_t>(n_visible);
    std::copy_n(it, n_hidden, p.b.begin());
    it += static_cast<std::ptrdiff_t>(n_hidden);
    p.c = *it++;
    std::copy_n(it, n_visible, p.d.begin());
    it += static_cast<std::ptrdiff_t>(n_visible);
    std::copy_n(it, n_visible * n_hidden, p.w.begin());
    return p;
}

void RbmParams::validate() const {
    if (a.empty() || b.empty()) {
        throw Error(ErrorCode::Encoding, "RBM needs at least one visible and one hidden unit");
    }
    if (d.size() != a.size() || w.size() != a.size() * b.size()) {
        throw Error(ErrorCode::Encoding, "inconsistent RBM parameter shapes");
    }
    const auto finite = [](const std::vector<double> &v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(a) || !finite(b) || !finite(d) || !finite(w) || !std::isfinite(c)) {
        throw Error(ErrorCode::Encoding, "non-finite RBM parameter");
    }
}

// -------------------------------------------------------------- encoding

BasisEncoding::BasisEncoding(std::size_t fock_dim) : fock_dim_(fock_dim), n_visible_(0) {
    if (fock_dim < 2) {
        throw Error(ErrorCode::InvalidDimension, "encoding needs at least two basis states");
    }
    while ((std::size_t{1} << n_visible_) < fock_dim) {
        ++n_visible_;
    }
}

std::vector<int> BasisEncoding::spins(std::size_t index) const {
    if (index >= n_strings()) {
        throw Error(ErrorCode::Encoding, "string index out of range");
    }
    std::vector<int> s(n_visible_);
    for (std::size_t i = 0; i < n_visible_; ++i) {
        s[i] = spin_of(index, i);
    }
    return s;
}

std::size_t BasisEncoding::index(std::span<const int> sigma) const {
    if (sigma.size() != n_visible_) {
        throw Error(ErrorCode::Encoding, "spin string has the wrong length");
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] == 1) {
            idx |= std::size_t{1} << i;
        } else if (sigma[i] != -1) {
            throw Error(ErrorCode::Encoding, "spins must be +1 or -1");
        }
    }
    return idx;
}

// ------------------------------------------------------------ evaluation

namespace {

// log(2 cosh t) without overflow.
double log_2cosh(double t) {
    const double at = std::abs(t);
    return at + std::log1p(std::exp(-2.0 * at));
}

void check_sigma(const RbmParams &params, std::span<const int> sigma) {
    if (sigma.size() != params.n_visible()) {
        throw Error(ErrorCode::Encoding, "spin string length " + std::to_string(sigma.size()) + " for " +
                                             std::to_string(params.n_visible()) + " visible units");
    }
    for (int s : sigma) {
        if (s != 1 && s != -1) {
            throw Error(ErrorCode::Encoding, "spins must be +1 or -1");
        }
    }
}

// Unnormalized log P(σ) for the string with the given index.
double log_weight(const RbmParams &p, std::size_t index) {
    const std::size_t n = p.n_visible();
    const std::size_t m = p.n_hidden();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += p.a[i] * spin_of(index, i);
    }
    for (std::size_t j = 0; j < m; ++j) {
        double theta = p.b[j];
        for (std::size_t i = 0; i < n; ++i) {
            theta += p.weight(i, j) * spin_of(index, i);
        }
        acc += log_2cosh(theta);
    }
    return acc;
}

double sign_of(const RbmParams &p, std::size_t index) {
    double acc = p.c;
    for (std::size_t i = 0; i < p.n_visible(); ++i) {
        acc += p.d[i] * spin_of(index, i);
    }
    return std::tanh(acc);
}

void require_encoding_match(const RbmParams &params, const BasisEncoding &encoding) {
    params.validate();
    if (params.n_visible() != encoding.n_visible()) {
        throw Error(ErrorCode::Encoding, "RBM has " + std::to_string(params.n_visible()) +
                                             " visible units, encoding needs " +
                                             std::to_string(encoding.n_visible()));
    }
}

VariationalState finish_state(std::vector<double> amp) {
    double norm2 = 0.0;
    for (double x : amp) {
        norm2 += x * x;
    }
    const double norm = std::sqrt(norm2);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw Error(ErrorCode::DegenerateState, "variational state has zero norm");
    }
    for (double &x : amp) {
        x /= norm;
    }
    return {std::move(amp), norm};
}

// Physical block of H, whatever space it was given on.
Matrix physical_block(const Matrix &h, const BasisEncoding &encoding) {
    const std::size_t n = encoding.fock_dim();
    if (h.dim() == n) {
        return h;
    }
    if (h.dim() != encoding.n_strings()) {
        throw Error(ErrorCode::DimensionMismatch, "Hamiltonian of dimension " + std::to_string(h.dim()) +
                                                      " for a basis of " + std::to_string(n) + " states");
    }
    Matrix block(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            block(i, j) = h(i, j);
        }
    }
    return block;
}

// Rayleigh quotient over the physical strings only; amplitudes need no
// normalization and P no partition function.
double rayleigh(const Matrix &h, std::span<const double> amp) {
    const std::size_t n = h.dim();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += h(i, j) * amp[j];
        }
        num += amp[i] * row;
        den += amp[i] * amp[i];
    }
    if (!(den > 0.0) || !std::isfinite(den)) {
        throw Error(ErrorCode::DegenerateState, "variational state has zero norm");
    }
    return num / den;
}

std::vector<double> exact_physical_amplitudes(const RbmParams &p, std::size_t fock_dim) {
    std::vector<double> logw(fock_dim);
    double lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < fock_dim; ++x) {
        logw[x] = log_weight(p, x);
        lmax = std::max(lmax, logw[x]);
    }
    std::vector<double> amp(fock_dim);
    for (std::size_t x = 0; x < fock_dim; ++x) {
        amp[x] = std::exp(0.5 * (logw[x] - lmax)) * sign_of(p, x);
    }
    return amp;
}

std::vector<double> sampled_distribution(const RbmParams &p, const SampledSource &source) {
    const CircuitSpec circuit = build_gibbs_circuit(p);
    const SampleBatch batch = sample(circuit, source.shots, source.seed);
    return empirical_q_to_p(batch, p);
}

std::vector<double> sampled_physical_amplitudes(const RbmParams &p, std::size_t fock_dim,
                                                std::span<const double> distribution) {
    std::vector<double> amp(fock_dim);
    for (std::size_t x = 0; x < fock_dim; ++x) {
        amp[x] = std::sqrt(std::max(0.0, distribution[x])) * sign_of(p, x);
    }
    return amp;
}

double physical_energy(const RbmParams &p, const Matrix &block, const ProbabilitySource &source) {
    if (const auto *sampled = std::get_if<SampledSource>(&source)) {
        const auto dist = sampled_distribution(p, *sampled);
        return rayleigh(block, sampled_physical_amplitudes(p, block.dim(), dist));
    }
    return rayleigh(block, exact_physical_amplitudes(p, block.dim()));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Exact-mode central differences. Each probe moves one parameter, so only
// the affected term of log P or of the sign argument is recomputed.
RbmParams exact_fd_gradient(const RbmParams &p, const Matrix &block, double step) {
    const std::size_t n = p.n_visible();
    const std::size_t m = p.n_hidden();
    const std::size_t dim = block.dim();

    std::vector<double> theta(dim * m), lc(dim * m), logw(dim), arg(dim);
    for (std::size_t x = 0; x < dim; ++x) {
        double acc = 0.0;
        double u = p.c;
        for (std::size_t i = 0; i < n; ++i) {
            acc += p.a[i] * spin_of(x, i);
            u += p.d[i] * spin_of(x, i);
        }
        for (std::size_t j = 0; j < m; ++j) {
            double t = p.b[j];
            for (std::size_t i = 0; i < n; ++i) {
                t += p.weight(i, j) * spin_of(x, i);
            }
            theta[x * m + j] = t;
            lc[x * m + j] = log_2cosh(t);
            acc += lc[x * m + j];
        }
        logw[x] = acc;
        arg[x] = u;
    }

    std::vector<double> lw(dim), ua(dim), amp(dim);
    const auto eval = [&] {
        const double lmax = *std::max_element(lw.begin(), lw.end());
        for (std::size_t x = 0; x < dim; ++x) {
            amp[x] = std::exp(0.5 * (lw[x] - lmax)) * std::tanh(ua[x]);
        }
        return rayleigh(block, amp);
    };
    // f(x, δ) gives the shifted (log weight, sign argument) of string x.
    const auto central = [&](auto &&shift) {
        double side[2];
        for (int k = 0; k < 2; ++k) {
            const double delta = k == 0 ? step : -step;
            for (std::size_t x = 0; x < dim; ++x) {
                shift(x, delta, lw[x], ua[x]);
            }
            side[k] = eval();
        }
        return (side[0] - side[1]) / (2.0 * step);
    };

    RbmParams g = RbmParams::zeros(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        g.a[i] = central([&](std::size_t x, double dl, double &l, double &u) {
            l = logw[x] + dl * spin_of(x, i);
            u = arg[x];
        });
    }
    for (std::size_t j = 0; j < m; ++j) {
        g.b[j] = central([&](std::size_t x, double dl, double &l, double &u) {
            l = logw[x] - lc[x * m + j] + log_2cosh(theta[x * m + j] + dl);
            u = arg[x];
        });
    }
    g.c = central([&](std::size_t x, double dl, double &l, double &u) {
        l = logw[x];
        u = arg[x] + dl;
    });
    for (std::size_t i = 0; i < n; ++i) {
        g.d[i] = central([&](std::size_t x, double dl, double &l, double &u) {
            l = logw[x];
            u = arg[x] + dl * spin_of(x, i);
        });
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            g.weight(i, j) = central([&](std::size_t x, double dl, double &l, double &u) {
                l = logw[x] - lc[x * m + j] + log_2cosh(theta[x * m + j] + dl * spin_of(x, i));
                u = arg[x];
            });
        }
    }
    return g;
}

RbmParams finite_difference_gradient(const RbmParams &params, const Matrix &block, const ProbabilitySource &source,
                                     double step) {
    if (std::holds_alternative<ExactSource>(source)) {
        return exact_fd_gradient(params, block, step);
    }
    const std::size_t n = params.n_visible();
    const std::size_t m = params.n_hidden();
    const auto flat = params.flatten();
    std::vector<double> grad(flat.size());

    // In sampled mode the sign-layer entries (c, d) do not enter the circuit,
    // so their probes share the base distribution.
    const auto *sampled = std::get_if<SampledSource>(&source);
    std::vector<double> base_dist;
    if (sampled != nullptr) {
        base_dist = sampled_distribution(params, *sampled);
    }
    const std::size_t sign_begin = n + m;
    const std::size_t sign_end = sign_begin + 1 + n;

    std::vector<double> probe = flat;
    for (std::size_t k = 0; k < flat.size(); ++k) {
        const auto eval = [&](double value) {
            probe[k] = value;
            const RbmParams p = RbmParams::unflatten(n, m, probe);
            if (sampled != nullptr && k >= sign_begin && k < sign_end) {
                return rayleigh(block, sampled_physical_amplitudes(p, block.dim(), base_dist));
            }
            return physical_energy(p, block, source);
        };
        const double up = eval(flat[k] + step);
        const double down = eval(flat[k] - step);
        probe[k] = flat[k];
        grad[k] = (up - down) / (2.0 * step);
    }
    return RbmParams::unflatten(n, m, grad);
}

}  // namespace

double probability(const RbmParams &params, std::span<const int> sigma) {
    params.validate();
    check_sigma(params, sigma);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] == 1) {
            idx |= std::size_t{1} << i;
        }
    }
    return probabilities(params)[idx];
}

std::vector<double> probabilities(const RbmParams &params) {
    params.validate();
    const std::size_t count = std::size_t{1} << params.n_visible();
    std::vector<double> logw(count);
    double lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < count; ++x) {
        logw[x] = log_weight(params, x);
        lmax = std::max(lmax, logw[x]);
    }
    double z = 0.0;
    std::vector<double> p(count);
    for (std::size_t x = 0; x < count; ++x) {
        p[x] = std::exp(logw[x] - lmax);
        z += p[x];
    }
    for (double &x : p) {
        x /= z;
    }
    return p;
}

double sign_value(const RbmParams &params, std::span<const int> sigma) {
    params.validate();
    check_sigma(params, sigma);
    double acc = params.c;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        acc += params.d[i] * sigma[i];
    }
    return std::tanh(acc);
}

VariationalState build_state(const RbmParams &params, const BasisEncoding &encoding) {
    return build_state(params, encoding, probabilities(params));
}

VariationalState build_state(const RbmParams &params, const BasisEncoding &encoding,
                             std::span<const double> distribution) {
    require_encoding_match(params, encoding);
    if (distribution.size() != encoding.n_strings()) {
        throw Error(ErrorCode::DimensionMismatch, "distribution must cover all 2^n strings");
    }
    std::vector<double> amp(encoding.n_strings(), 0.0);
    for (std::size_t x = 0; x < encoding.fock_dim(); ++x) {
        if (distribution[x] < 0.0) {
            throw Error(ErrorCode::Encoding, "negative probability");
        }
        amp[x] = std::sqrt(distribution[x]) * sign_of(params, x);
    }
    return finish_state(std::move(amp));
}

double energy(const RbmParams &params, const Matrix &h, const BasisEncoding &encoding,
              const ProbabilitySource &source) {
    require_encoding_match(params, encoding);
    return physical_energy(params, physical_block(h, encoding), source);
}

RbmParams gradient(const RbmParams &params, const Matrix &h, const BasisEncoding &encoding,
                   const ProbabilitySource &source, double step) {
    require_encoding_match(params, encoding);
    return finite_difference_gradient(params, physical_block(h, encoding), source, step);
}

TrainResult train(const Matrix &h, const BasisEncoding &encoding, const RbmParams &init,
                  const TrainOptions &options) {
    if (!(options.learning_rate > 0.0) || options.iterations == 0) {
        throw Error(ErrorCode::Config, "training needs a positive learning rate and at least one iteration");
    }
    require_encoding_match(init, encoding);
    const Matrix block = physical_block(h, encoding);

    const auto source_for = [&](std::size_t iteration) -> ProbabilitySource {
        if (const auto *s = std::get_if<SampledSource>(&options.source)) {
            return SampledSource{s->shots, mix_seed(options.seed ^ s->seed, iteration)};
        }
        return ExactSource{};
    };

    RbmParams params = init;
    try {
        (void)physical_energy(params, block, source_for(0));
    } catch (const Error &e) {
        if (e.code() != ErrorCode::DegenerateState) {
            throw;
        }
        params.c = 0.1;
        (void)physical_energy(params, block, source_for(0));
    }

    const std::size_t n = params.n_visible();
    const std::size_t m = params.n_hidden();
    TrainResult out;
    out.energy_trace.reserve(options.iterations);
    for (std::size_t it = 0; it < options.iterations; ++it) {
        const ProbabilitySource src = source_for(it);
        out.energy_trace.push_back(physical_energy(params, block, src));
        const auto grad = finite_difference_gradient(params, block, src, options.fd_step).flatten();
        auto flat = params.flatten();
        for (std::size_t k = 0; k < flat.size(); ++k) {
            flat[k] -= options.learning_rate * grad[k];
        }
        params = RbmParams::unflatten(n, m, flat);
    }
    out.params = std::move(params);
    return out;
}

// ------------------------------------------------------------ checkpoints

namespace {

constexpr const char *kCheckpointFormat = "qrmfss.rbm-checkpoint";

nlohmann::json named_array(const std::vector<double> &data, std::vector<std::size_t> shape) {
    return {{"shape", shape}, {"data", data}};
}

std::vector<double> read_array(const nlohmann::json &arrays, const char *name, std::size_t expected) {
    if (!arrays.contains(name)) {
        throw Error(ErrorCode::Io, std::string("checkpoint is missing array '") + name + "'");
    }
    auto data = arrays.at(name).at("data").get<std::vector<double>>();
    if (data.size() != expected) {
        throw Error(ErrorCode::Io, std::string("checkpoint array '") + name + "' has the wrong size");
    }
    return data;
}

}  // namespace

std::string checkpoint_to_string(const Checkpoint &cp) {
    cp.params.validate();
    const std::size_t n = cp.params.n_visible();
    const std::size_t m = cp.params.n_hidden();
    nlohmann::json arrays;
    arrays["a"] = named_array(cp.params.a, {n});
    arrays["b"] = named_array(cp.params.b, {m});
    arrays["c"] = named_array({cp.params.c}, {});
    arrays["d"] = named_array(cp.params.d, {n});
    arrays["w"] = named_array(cp.params.w, {n, m});
    arrays["seed"] = {{"shape", std::vector<std::size_t>{}}, {"data", {cp.seed}}};
    arrays["iteration"] = {{"shape", std::vector<std::size_t>{}}, {"data", {cp.iteration}}};
    const nlohmann::json doc = {{"format", kCheckpointFormat}, {"version", 1}, {"arrays", arrays}};
    return doc.dump(2) + "\n";
}

Checkpoint checkpoint_from_string(const std::string &text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::Io, std::string("checkpoint is not valid JSON: ") + e.what());
    }
    if (doc.value("format", "") != kCheckpointFormat) {
        throw Error(ErrorCode::Io, "not an RBM checkpoint");
    }
    try {
        const auto &arrays = doc.at("arrays");
        const auto shape = arrays.at("w").at("shape").get<std::vector<std::size_t>>();
        if (shape.size() != 2) {
            throw Error(ErrorCode::Io, "checkpoint weight matrix must be two-dimensional");
        }
        Checkpoint cp;
        cp.params.a = read_array(arrays, "a", shape[0]);
        cp.params.b = read_array(arrays, "b", shape[1]);
        cp.params.c = read_array(arrays, "c", 1)[0];
        cp.params.d = read_array(arrays, "d", shape[0]);
        cp.params.w = read_array(arrays, "w", shape[0] * shape[1]);
        cp.seed = arrays.at("seed").at("data").at(0).get<std::uint64_t>();
        cp.iteration = arrays.at("iteration").at("data").at(0).get<std::uint64_t>();
        cp.params.validate();
        return cp;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::Io, std::string("malformed checkpoint: ") + e.what());
    }
}

void save_checkpoint(const std::string &path, const Checkpoint &checkpoint) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path);
    }
    out << checkpoint_to_string(checkpoint);
}

Checkpoint load_checkpoint(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return checkpoint_from_string(buf.str());
}

}  // namespace qrmfss
