// Copyright 2026 The fpcool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fpcool/compare.hpp"
#include "fpcool/dynamics.hpp"
#include "fpcool/maxent.hpp"

namespace fpcool {

struct MaxEntControls {
    double k_sigma = 6.0;
    int n_points = 4001;
    double conv_tol = 0.01;
    int M_start = 2;
    int M_max = 8;
};

/// Everything needed to reproduce one refrigerator run.
struct ScenarioConfig {
    RefrigeratorParams params;
    double t_end = 30000.0;
    double dt = 0.005;
    std::size_t sample_every = 0;  // 0 selects default_sample_every
    double steady_tol = 1e-8;
    int n_sample_points = 9;
    double temp_spacing = 0.05;
    MaxEntControls maxent;
    int repetitions = 1;
    std::string seed_label;

    /// Throws InvalidArgument; returns the parameter warnings.
    std::vector<std::string> validate() const;

    std::size_t effective_sample_every() const;
    PercentileOptions percentile_options() const;

    static ScenarioConfig preset(Regime regime);
};

/// Reads the key = value preset format (sections [system], [baths],
/// [integrator], [sampling], [maxent], [thermometry], [run]).
ScenarioConfig parse_config(std::istream& in);

/// Loads a .cfg file, or the "config" block of a report.json.
ScenarioConfig load_config(const std::filesystem::path& path);

std::string format_config(const ScenarioConfig& config);

/// One sampled point along the cold-qubit temperature curve.
struct PointRecord {
    int index = 0;  // 1-based, in order of decreasing target temperature
    double T_target = 0.0;
    bool steady_point = false;
    std::optional<double> time_reached;
    std::optional<PercentileTable> final_percentiles;
    int M_used = 0;
    bool converged = false;
    std::vector<double> convergence_differences;
    std::optional<CoolingReport> cooling;
    std::vector<std::string> errors;

    bool ok() const { return errors.empty(); }
};

struct RunReport {
    ScenarioConfig config;
    std::vector<std::string> warnings;
    std::vector<std::string> errors;

    std::optional<Trajectory> trajectory;
    std::optional<double> steady_time;
    std::optional<double> steady_temperature;  // from the Liouvillian kernel
    std::optional<double> final_temperature;   // at t_end
    std::optional<double> steady_state_distance;

    std::optional<PercentileTable> initial_percentiles;
    int initial_M_used = 0;
    bool initial_converged = false;
    std::vector<double> initial_convergence_differences;

    std::vector<PointRecord> points;
    bool no_cooling_targets = false;

    /// 0 on full success, 2 when any point or summary step failed.
    int exit_code() const;
};

/// Target temperatures T_s + k * spacing for k = n-1 .. 0.
std::vector<double> target_temperatures(double steady_temperature, int n_points, double spacing);

/// Percentile table at a single temperature, keeping the highest successful
/// order if the tables never converge.
struct PercentileOutcome {
    std::optional<PercentileTable> table;
    int M_used = 0;
    bool converged = false;
    std::vector<double> differences;
    std::string error;
};
PercentileOutcome percentile_outcome(double E, double T, const PercentileOptions& options);

RunReport run_scenario(const ScenarioConfig& config);

/// Writes trajectory.csv, percentiles_<k>.csv, report.json and figure data;
/// returns the written paths.
std::vector<std::filesystem::path> emit_outputs(const RunReport& report,
                                                const std::filesystem::path& out_dir);

/// The full report as a JSON document.
std::string report_json(const RunReport& report);

/// CSV float formatting with 12 significant digits.
std::string format_number(double v);

/// Reads a two-column "i,Q" percentile table.
PercentileTable read_percentile_table(const std::filesystem::path& path);
void write_percentile_table(std::ostream& out, const PercentileTable& table);

std::string cooling_report_json(const CoolingReport& report);

}  // namespace fpcool
