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
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qrmfss/fss.hpp"
#include "qrmfss/hamiltonians.hpp"
#include "qrmfss/pipeline.hpp"

namespace qrmfss {

/// Fully resolved settings of one CLI invocation.
struct RunConfig {
    std::string command = "fss";
    FssOptions fss = FssOptions::ed_defaults(Phase::Np);
    double omega_ratio = 1e3;
    std::size_t fock_dim = 0;
    std::filesystem::path out_dir = ".";
    std::filesystem::path reference_dir;
    std::filesystem::path run_dir;
    std::filesystem::path input;
};

using ConfigValues = std::map<std::string, std::string>;

/// `key = value` lines; `#` starts a comment; blank lines are skipped.
ConfigValues parse_config_text(const std::string &text);
ConfigValues read_config_file(const std::filesystem::path &path);

/// Engine and phase pick the defaults, every other key then overrides them.
/// Unknown keys and malformed values are config errors.
RunConfig resolve_config(const std::string &command, const ConfigValues &values);

nlohmann::json config_echo(const RunConfig &config);

/// `%.17g`
std::string format_double(double x);

std::vector<std::size_t> parse_size_list(const std::string &text);

std::string delta_curves_csv(Phase phase, const std::vector<DeltaCurve> &curves);
std::string intersections_csv(const std::vector<IntersectionPoint> &points);
std::string critical_point_json(const FssResult &result, const RunConfig &config);
std::string observables_csv(const std::vector<CurvePoint> &points);
std::string gamma_curves_csv(const std::vector<GammaCurve> &curves);

/// Parses a delta_curves.csv back into curves.
std::vector<DeltaCurve> parse_delta_curves_csv(const std::string &text);

/// Mean over pair curves of |Δ_ref − Δ_run| / |Δ_ref| × 100 at each g.
std::vector<std::pair<double, double>> mean_percentage_error(const std::vector<DeltaCurve> &reference,
                                                             const std::vector<DeltaCurve> &run);
std::string error_csv(const std::vector<std::pair<double, double>> &rows);

/// `N,value` rows, optional header.
std::vector<std::pair<std::size_t, double>> parse_bsa_csv(const std::string &text);

std::string read_text_file(const std::filesystem::path &path);

/// Writes every file or none: on failure the files already written are
/// removed and the error rethrown.
void write_outputs(const std::filesystem::path &dir,
                   const std::vector<std::pair<std::string, std::string>> &files);

}  // namespace qrmfss
