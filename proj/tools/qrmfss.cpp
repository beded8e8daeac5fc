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


// qrmfss: finite-size scaling of the quantum Rabi model from the command line.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrmfss/errors.hpp"
#include "qrmfss/extrapolate.hpp"
#include "qrmfss/hamiltonians.hpp"
#include "qrmfss/io.hpp"
#include "qrmfss/pipeline.hpp"

namespace {

using namespace qrmfss;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Flag values as typed, keyed like the config file.
struct Overrides {
    std::map<std::string, std::string> values;
    std::string config_path;
};

CLI::Option *add_flag(CLI::App *app, Overrides &ov, const std::string &flag, const std::string &key,
              const std::string &help) {
    return app->add_option_function<std::string>(
        flag, [&ov, key](const std::string &v) { ov.values[key] = v; }, help);
}

void add_common(CLI::App *app, Overrides &ov) {
    app->add_option("--config", ov.config_path, "key = value file; flags take precedence");
    add_flag(app, ov, "--out", "out", "output directory");
    add_flag(app, ov, "--workers", "workers", "worker threads (0 = all cores)");
}

void add_run_flags(CLI::App *app, Overrides &ov) {
    add_flag(app, ov, "--engine", "engine", "ed | rbm-exact | rbm-sampled");
    add_flag(app, ov, "--phase", "phase", "np | sp | rabi");
    add_flag(app, ov, "--n-list", "n_list", "truncations, e.g. 8,10,12 or 8..32");
    add_flag(app, ov, "--g-min", "g_min", "first coupling");
    add_flag(app, ov, "--g-max", "g_max", "last coupling");
    add_flag(app, ov, "--g-step", "g_step", "coupling step");
    add_flag(app, ov, "--omega0", "omega0", "field frequency");
    add_flag(app, ov, "--lr", "lr", "RBM learning rate");
    add_flag(app, ov, "--iters", "iters", "RBM iterations per coupling");
    add_flag(app, ov, "--shots", "shots", "shots per energy evaluation (rbm-sampled)");
    add_flag(app, ov, "--seed", "seed", "master seed");
    add_flag(app, ov, "--hidden", "hidden", "hidden units (0 = visible count)");
    add_flag(app, ov, "--sweep", "sweep", "auto | ascending | descending");
    add_flag(app, ov, "--refine", "refine", "re-solve around each crossing (ed)");
    add_flag(app, ov, "--resume", "resume", "checkpoint directory for RBM cells");
}

RunConfig load(const std::string &command, const Overrides &ov) {
    ConfigValues values;
    if (!ov.config_path.empty()) {
        values = read_config_file(ov.config_path);
    }
    for (const auto &[k, v] : ov.values) {
        values[k] = v;
    }
    return resolve_config(command, values);
}

void cmd_fss(const RunConfig &config) {
    const FssResult result = run_fss(config.fss);
    std::vector<std::pair<std::string, std::string>> files = {
        {"delta_curves.csv", delta_curves_csv(config.fss.phase, result.deltas)},
        {"intersections.csv", intersections_csv(result.intersections)},
        {"critical_point.json", critical_point_json(result, config)},
    };
    if (!result.gammas.empty()) {
        files.emplace_back("gamma_curves.csv", gamma_curves_csv(result.gammas));
    }
    write_outputs(config.out_dir, files);
    std::printf("g_c = %.10f  (omega* = %.4f, epsilon = %.3g)\n", result.critical.limit, result.critical.omega_star,
                result.critical.epsilon);
}

void cmd_curves(const RunConfig &config) {
    const auto grid = make_grid(config.fss.g_min, config.fss.g_max, config.fss.g_step);
    CurveOptions opts;
    opts.omega0 = config.fss.omega0;
    opts.omega_ratio = config.omega_ratio;
    opts.dim_fock = config.fock_dim;
    write_outputs(config.out_dir, {{"observables.csv", observables_csv(rescaled_curves(grid, opts))}});
}

void cmd_error_report(const RunConfig &config) {
    const auto ref = parse_delta_curves_csv(read_text_file(config.reference_dir / "delta_curves.csv"));
    const auto run = parse_delta_curves_csv(read_text_file(config.run_dir / "delta_curves.csv"));
    const auto rows = mean_percentage_error(ref, run);
    write_outputs(config.out_dir, {{"error.csv", error_csv(rows)}});
    double worst = 0.0;
    for (const auto &row : rows) {
        worst = std::max(worst, row.second);
    }
    std::printf("max mean percentage error %.4f%%\n", worst);
}

void cmd_bsa(const RunConfig &config) {
    const auto rows = parse_bsa_csv(read_text_file(config.input));
    std::vector<double> values;
    std::vector<double> h;
    for (const auto &[n, v] : rows) {
        values.push_back(v);
        h.push_back(1.0 / static_cast<double>(n));
    }
    const BsaResult r = bsa_limit(values, h);
    nlohmann::json j = {{"limit", r.limit}, {"omega_star", r.omega_star}, {"epsilon", r.epsilon},
                        {"tableau_truncated", r.truncated}, {"input", config.input.string()}};
    const std::string text = j.dump(2) + "\n";
    write_outputs(config.out_dir, {{"bsa.json", text}});
    std::fputs(text.c_str(), stdout);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Finite-size scaling of the quantum Rabi model"};
    app.require_subcommand(1);

    Overrides fss_ov, curves_ov, err_ov, bsa_ov;
    auto *fss = app.add_subcommand("fss", "locate the critical coupling");
    add_common(fss, fss_ov);
    add_run_flags(fss, fss_ov);

    auto *curves = app.add_subcommand("curves", "rescaled observables of the full Rabi model");
    add_common(curves, curves_ov);
    add_run_flags(curves, curves_ov);
    add_flag(curves, curves_ov, "--omega-ratio", "omega_ratio", "Omega / omega0");
    add_flag(curves, curves_ov, "--fock-dim", "fock_dim", "Fock cutoff (0 = automatic)");

    auto *err = app.add_subcommand("error-report", "compare the delta curves of two runs");
    add_common(err, err_ov);
    add_flag(err, err_ov, "--reference", "reference", "directory of the reference (ED) run")->required();
    add_flag(err, err_ov, "--run", "run", "directory of the run under test")->required();

    auto *bsa = app.add_subcommand("bsa", "extrapolate a CSV of N,value pairs to N -> infinity");
    add_common(bsa, bsa_ov);
    bsa->add_option_function<std::string>(
           "input", [&](const std::string &v) { bsa_ov.values["input"] = v; }, "CSV file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (fss->parsed()) {
            cmd_fss(load("fss", fss_ov));
        } else if (curves->parsed()) {
            cmd_curves(load("curves", curves_ov));
        } else if (err->parsed()) {
            cmd_error_report(load("error-report", err_ov));
        } else if (bsa->parsed()) {
            cmd_bsa(load("bsa", bsa_ov));
        }
    } catch (const Error &e) {
        std::cerr << e.what() << '\n';
        return is_config_error(e.code()) ? kExitConfig : kExitNumerical;
    } catch (const std::exception &e) {
        std::cerr << "internal_error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
