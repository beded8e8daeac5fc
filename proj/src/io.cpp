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


#include "qrmfss/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qrmfss/errors.hpp"

namespace qrmfss {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

double to_double(const std::string &key, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw Error(ErrorCode::Config, "'" + key + "' expects a number, got '" + text + "'");
    }
    return v;
}

std::uint64_t to_unsigned(const std::string &key, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || text[0] == '-' || end != text.c_str() + text.size() || errno == ERANGE) {
        throw Error(ErrorCode::Config, "'" + key + "' expects a non-negative integer, got '" + text + "'");
    }
    return v;
}

bool to_bool(const std::string &key, const std::string &text) {
    if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "off" || text == "no") return false;
    throw Error(ErrorCode::Config, "'" + key + "' expects true or false, got '" + text + "'");
}

std::vector<std::vector<std::string>> csv_rows(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        rows.push_back(split(line, ','));
    }
    return rows;
}

bool same_g(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

ConfigValues parse_config_text(const std::string &text) {
    ConfigValues values;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::Config, "line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw Error(ErrorCode::Config, "line " + std::to_string(lineno) + ": empty key");
        }
        values[key] = trim(line.substr(eq + 1));
    }
    return values;
}

ConfigValues read_config_file(const std::filesystem::path &path) { return parse_config_text(read_text_file(path)); }

std::vector<std::size_t> parse_size_list(const std::string &text) {
    std::vector<std::size_t> out;
    for (const auto &item : split(text, ',')) {
        const auto range = item.find("..");
        if (range != std::string::npos) {
            // lo..hi or lo..hi:step
            std::string hi_part = item.substr(range + 2);
            std::uint64_t stride = 2;
            if (const auto colon = hi_part.find(':'); colon != std::string::npos) {
                stride = to_unsigned("n_list", hi_part.substr(colon + 1));
                hi_part.erase(colon);
            }
            const auto lo = to_unsigned("n_list", item.substr(0, range));
            const auto hi = to_unsigned("n_list", hi_part);
            if (stride == 0 || hi < lo) {
                throw Error(ErrorCode::Config, "bad truncation range '" + item + "'");
            }
            for (auto v = lo; v <= hi; v += stride) {
                out.push_back(v);
            }
        } else {
            out.push_back(to_unsigned("n_list", item));
        }
    }
    return out;
}

RunConfig resolve_config(const std::string &command, const ConfigValues &values) {
    RunConfig c;
    c.command = command;
    const auto get = [&](const char *key) -> const std::string * {
        const auto it = values.find(key);
        return it == values.end() ? nullptr : &it->second;
    };
    const Engine engine = get("engine") ? parse_engine(*get("engine")) : Engine::Ed;
    Phase phase = command == "curves" ? Phase::Rabi : Phase::Np;
    if (get("phase")) {
        phase = parse_phase(*get("phase"));
    }
    c.fss = engine == Engine::Ed ? FssOptions::ed_defaults(phase) : FssOptions::rbm_defaults(engine, phase);
    if (command == "curves") {
        c.fss.g_min = 0.0;
        c.fss.g_max = 2.0;
        c.fss.g_step = 1e-2;
    }

    for (const auto &[key, value] : values) {
        if (key == "engine" || key == "phase") {
            continue;
        } else if (key == "n_list") {
            c.fss.truncations = parse_size_list(value);
        } else if (key == "g_min") {
            c.fss.g_min = to_double(key, value);
        } else if (key == "g_max") {
            c.fss.g_max = to_double(key, value);
        } else if (key == "g_step") {
            c.fss.g_step = to_double(key, value);
        } else if (key == "omega0") {
            c.fss.omega0 = to_double(key, value);
        } else if (key == "lr") {
            c.fss.learning_rate = to_double(key, value);
        } else if (key == "iters") {
            c.fss.iterations = to_unsigned(key, value);
        } else if (key == "shots") {
            c.fss.shots = to_unsigned(key, value);
        } else if (key == "seed") {
            c.fss.seed = to_unsigned(key, value);
        } else if (key == "workers") {
            c.fss.workers = to_unsigned(key, value);
        } else if (key == "hidden") {
            c.fss.hidden_units = to_unsigned(key, value);
        } else if (key == "sweep") {
            c.fss.sweep = parse_sweep(value);
        } else if (key == "refine") {
            c.fss.refine = to_bool(key, value);
        } else if (key == "resume") {
            c.fss.checkpoint_dir = value;
        } else if (key == "omega_ratio") {
            c.omega_ratio = to_double(key, value);
        } else if (key == "fock_dim") {
            c.fock_dim = to_unsigned(key, value);
        } else if (key == "out") {
            c.out_dir = value;
        } else if (key == "reference") {
            c.reference_dir = value;
        } else if (key == "run") {
            c.run_dir = value;
        } else if (key == "input") {
            c.input = value;
        } else {
            throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
        }
    }

    if (command == "fss") {
        c.fss.validate();
    } else if (command == "curves") {
        if (phase != Phase::Rabi) {
            throw Error(ErrorCode::Config, "curves needs phase = rabi");
        }
        if (!(c.omega_ratio > 0.0) || !(c.fss.omega0 > 0.0)) {
            throw Error(ErrorCode::Config, "omega_ratio and omega0 must be positive");
        }
        (void)make_grid(c.fss.g_min, c.fss.g_max, c.fss.g_step);
    } else if (command == "error-report") {
        if (c.reference_dir.empty() || c.run_dir.empty()) {
            throw Error(ErrorCode::Config, "error-report needs both reference and run directories");
        }
    } else if (command == "bsa") {
        if (c.input.empty()) {
            throw Error(ErrorCode::Config, "bsa needs an input CSV");
        }
    }
    return c;
}

nlohmann::json config_echo(const RunConfig &c) {
    nlohmann::json j;
    j["command"] = c.command;
    j["engine"] = engine_name(c.fss.engine);
    j["phase"] = phase_name(c.fss.phase);
    j["n_list"] = c.fss.truncations;
    j["g_min"] = c.fss.g_min;
    j["g_max"] = c.fss.g_max;
    j["g_step"] = c.fss.g_step;
    j["omega0"] = c.fss.omega0;
    j["lr"] = c.fss.learning_rate;
    j["iters"] = c.fss.iterations;
    j["shots"] = c.fss.shots;
    j["seed"] = c.fss.seed;
    j["hidden"] = c.fss.hidden_units;
    j["sweep"] = sweep_name(c.fss.sweep);
    j["refine"] = c.fss.refine;
    j["workers"] = c.fss.workers;
    j["resume"] = c.fss.checkpoint_dir;
    j["omega_ratio"] = c.omega_ratio;
    j["fock_dim"] = c.fock_dim;
    j["out"] = c.out_dir.string();
    return j;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string delta_curves_csv(Phase phase, const std::vector<DeltaCurve> &curves) {
    std::string out = "phase,N,N_prime,g,delta\n";
    for (const auto &c : curves) {
        for (std::size_t i = 0; i < c.g_grid.size(); ++i) {
            out += std::string(phase_name(phase)) + ',' + std::to_string(c.pair.first) + ',' +
                   std::to_string(c.pair.second) + ',' + format_double(c.g_grid[i]) + ',' +
                   format_double(c.values[i]) + '\n';
        }
    }
    return out;
}

std::string intersections_csv(const std::vector<IntersectionPoint> &points) {
    std::string out = "N,g_star,bracket_width\n";
    for (const auto &p : points) {
        out += std::to_string(p.n_label) + ',' + format_double(p.g_star) + ',' + format_double(p.bracket_width) + '\n';
    }
    return out;
}

std::string critical_point_json(const FssResult &result, const RunConfig &config) {
    nlohmann::json j;
    j["g_c"] = result.critical.limit;
    j["omega_star"] = result.critical.omega_star;
    j["epsilon"] = result.critical.epsilon;
    j["tableau_truncated"] = result.critical.truncated;
    j["extrapolation_fallback"] = result.extrapolation_fallback;
    j["engine"] = engine_name(config.fss.engine);
    j["phase"] = phase_name(config.fss.phase);
    j["gamma_at_gc"] = result.gamma_at_gc ? nlohmann::json(*result.gamma_at_gc) : nlohmann::json(nullptr);
    j["nu"] = result.nu ? nlohmann::json(*result.nu) : nlohmann::json(nullptr);
    j["config"] = config_echo(config);
    return j.dump(2) + "\n";
}

std::string observables_csv(const std::vector<CurvePoint> &points) {
    std::string out = "g,e_g,n_g,d2e_dg2\n";
    for (const auto &p : points) {
        out += format_double(p.g) + ',' + format_double(p.e_g) + ',' + format_double(p.n_g) + ',' +
               format_double(p.d2e_dg2) + '\n';
    }
    return out;
}

std::string gamma_curves_csv(const std::vector<GammaCurve> &curves) {
    std::string out = "N,N_prime,g,gamma\n";
    for (const auto &c : curves) {
        for (std::size_t i = 0; i < c.g_grid.size(); ++i) {
            out += std::to_string(c.pair.first) + ',' + std::to_string(c.pair.second) + ',' +
                   format_double(c.g_grid[i]) + ',' + (c.values[i] ? format_double(*c.values[i]) : "nan") + '\n';
        }
    }
    return out;
}

std::vector<DeltaCurve> parse_delta_curves_csv(const std::string &text) {
    const auto rows = csv_rows(text);
    if (rows.empty() || rows[0].size() != 5 || rows[0][0] != "phase") {
        throw Error(ErrorCode::Io, "not a delta_curves.csv file");
    }
    std::vector<DeltaCurve> curves;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto &row = rows[r];
        if (row.size() != 5) {
            throw Error(ErrorCode::Io, "delta_curves.csv row " + std::to_string(r) + " has the wrong width");
        }
        const TruncationPair pair{to_unsigned("N", row[1]), to_unsigned("N_prime", row[2])};
        if (curves.empty() || curves.back().pair != pair) {
            curves.push_back({pair, {}, {}});
        }
        curves.back().g_grid.push_back(to_double("g", row[3]));
        curves.back().values.push_back(to_double("delta", row[4]));
    }
    return curves;
}

std::vector<std::pair<double, double>> mean_percentage_error(const std::vector<DeltaCurve> &reference,
                                                             const std::vector<DeltaCurve> &run) {
    if (reference.empty() || reference.size() != run.size()) {
        throw Error(ErrorCode::GridMismatch, "runs have different sets of pair curves");
    }
    const auto &grid = reference.front().g_grid;
    for (std::size_t k = 0; k < reference.size(); ++k) {
        if (reference[k].pair != run[k].pair) {
            throw Error(ErrorCode::GridMismatch, "pair curves differ at position " + std::to_string(k));
        }
        for (const auto *c : {&reference[k], &run[k]}) {
            if (c->g_grid.size() != grid.size() ||
                !std::equal(grid.begin(), grid.end(), c->g_grid.begin(), same_g)) {
                throw Error(ErrorCode::GridMismatch, "coupling grids differ");
            }
        }
    }
    std::vector<std::pair<double, double>> rows;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < reference.size(); ++k) {
            const double ref = reference[k].values[i];
            if (ref == 0.0) {
                throw Error(ErrorCode::DivisionByZero, "reference delta vanishes at g = " + format_double(grid[i]));
            }
            sum += std::abs(ref - run[k].values[i]) / std::abs(ref) * 100.0;
        }
        rows.emplace_back(grid[i], sum / static_cast<double>(reference.size()));
    }
    return rows;
}

std::string error_csv(const std::vector<std::pair<double, double>> &rows) {
    std::string out = "g,mean_pct_error\n";
    for (const auto &[g, e] : rows) {
        out += format_double(g) + ',' + format_double(e) + '\n';
    }
    return out;
}

std::vector<std::pair<std::size_t, double>> parse_bsa_csv(const std::string &text) {
    auto rows = csv_rows(text);
    if (!rows.empty() && !rows[0].empty() && rows[0][0] == "N") {
        rows.erase(rows.begin());
    }
    std::vector<std::pair<std::size_t, double>> out;
    for (const auto &row : rows) {
        if (row.size() != 2) {
            throw Error(ErrorCode::Io, "expected N,value rows");
        }
        const auto n = to_unsigned("N", row[0]);
        if (n == 0) {
            throw Error(ErrorCode::Config, "N must be positive");
        }
        out.emplace_back(n, to_double("value", row[1]));
    }
    return out;
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_outputs(const std::filesystem::path &dir, const std::vector<std::pair<std::string, std::string>> &files) {
    std::vector<std::filesystem::path> written;
    try {
        std::filesystem::create_directories(dir);
        for (const auto &[name, content] : files) {
            const auto path = dir / name;
            written.push_back(path);
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            out << content;
            out.close();
            if (!out) {
                throw Error(ErrorCode::Io, "cannot write " + path.string());
            }
        }
    } catch (const std::filesystem::filesystem_error &e) {
        std::error_code ec;
        for (const auto &p : written) {
            std::filesystem::remove(p, ec);
        }
        throw Error(ErrorCode::Io, e.what());
    } catch (...) {
        std::error_code ec;
        for (const auto &p : written) {
            std::filesystem::remove(p, ec);
        }
        throw;
    }
}

}  // namespace qrmfss
