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

#include "fpcool/scenario.hpp"

#include <cmath>
#include <cstdio>

#include "fpcool/error.hpp"
#include "fpcool/thermometry.hpp"

namespace fpcool {

namespace {

void require(bool ok, const std::string& message)
{
    if (!ok) {
        throw InvalidArgument("config: " + message);
    }
}

// Index of the first sample at or below the target.
std::optional<std::size_t> first_at_or_below(const std::vector<double>& temps, double target)
{
    for (std::size_t k = 0; k < temps.size(); ++k) {
        if (!std::isnan(temps[k]) && temps[k] <= target) {
            return k;
        }
    }
    return std::nullopt;
}

double interpolate_crossing(const Trajectory& traj, std::size_t k, double target)
{
    const double T0 = traj.cold_temps[k - 1];
    const double T = traj.cold_temps[k];
    if (std::isnan(T0) || T0 == T) {
        return traj.times[k];
    }
    const double frac = (T0 - target) / (T0 - T);
    return traj.times[k - 1] + frac * (traj.times[k] - traj.times[k - 1]);
}

// Earliest time at which the cold temperature falls to the target. The
// bracketing sample interval is re-integrated step by step so the result
// does not depend on the sampling stride.
std::optional<double> crossing_time(const Trajectory& traj, const ScenarioConfig& config, double target)
{
    const auto k = first_at_or_below(traj.cold_temps, target);
    if (!k) {
        return std::nullopt;
    }
    if (*k == 0) {
        return traj.times[0];
    }
    const Trajectory fine = evolve(config.params, traj.states[*k - 1], traj.times[*k - 1], traj.times[*k],
                                   config.dt, 1);
    const auto j = first_at_or_below(fine.cold_temps, target);
    if (!j || *j == 0) {
        return interpolate_crossing(traj, *k, target);
    }
    return interpolate_crossing(fine, *j, target);
}

}  // namespace

std::vector<std::string> ScenarioConfig::validate() const
{
    std::vector<std::string> warnings = params.validate();
    require(std::isfinite(t_end) && t_end >= 0.0, "t_end must be nonnegative");
    require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
    require(std::isfinite(steady_tol) && steady_tol > 0.0, "steady_tol must be positive");
    require(n_sample_points >= 1, "n_sample_points must be positive");
    require(std::isfinite(temp_spacing) && temp_spacing > 0.0, "temp_spacing must be positive");
    require(maxent.k_sigma > 0.0, "maxent.k_sigma must be positive");
    require(maxent.n_points >= 101, "maxent.n_points must be at least 101");
    require(maxent.conv_tol > 0.0, "maxent.conv_tol must be positive");
    require(maxent.M_start >= 2, "maxent.M_start must be at least 2");
    require(maxent.M_max > maxent.M_start, "maxent.M_max must exceed M_start");
    require(repetitions >= 1, "repetitions must be positive");
    return warnings;
}

std::size_t ScenarioConfig::effective_sample_every() const
{
    return sample_every > 0 ? sample_every : default_sample_every(t_end, dt);
}

PercentileOptions ScenarioConfig::percentile_options() const
{
    PercentileOptions o;
    o.k_sigma = maxent.k_sigma;
    o.n_points = maxent.n_points;
    o.tol = maxent.conv_tol;
    o.M_start = maxent.M_start;
    o.M_max = maxent.M_max;
    o.repetitions = repetitions;
    return o;
}

ScenarioConfig ScenarioConfig::preset(Regime regime)
{
    ScenarioConfig c;
    c.steady_tol = 3e-9;
    if (regime == Regime::Strong) {
        c.params = RefrigeratorParams::strong_preset();
        c.t_end = 30000.0;
        c.dt = 0.005;
        c.seed_label = "strong";
    } else {
        c.params = RefrigeratorParams::weak_preset();
        c.t_end = 4000.0;
        c.dt = 0.01;
        c.seed_label = "weak";
    }
    return c;
}

int RunReport::exit_code() const
{
    if (!errors.empty() || no_cooling_targets) {
        return 2;
    }
    for (const PointRecord& pt : points) {
        if (!pt.ok()) {
            return 2;
        }
    }
    return 0;
}

std::vector<double> target_temperatures(double steady_temperature, int n_points, double spacing)
{
    if (n_points < 1) {
        throw InvalidArgument("target_temperatures: n_points must be positive");
    }
    if (!(spacing > 0.0)) {
        throw InvalidArgument("target_temperatures: spacing must be positive");
    }
    std::vector<double> targets;
    targets.reserve(static_cast<std::size_t>(n_points));
    for (int k = n_points - 1; k >= 0; --k) {
        targets.push_back(steady_temperature + k * spacing);
    }
    return targets;
}

PercentileOutcome percentile_outcome(double E, double T, const PercentileOptions& options)
{
    PercentileOutcome out;
    try {
        const ConvergedPercentiles c = converged_percentiles(mvu_estimator(E, T), options);
        out.table = c.table;
        out.M_used = c.M_used;
        out.converged = true;
        out.differences = c.max_differences;
    } catch (const PercentileConvergenceError& e) {
        out.table = e.last_table();
        out.M_used = e.last_order();
        out.differences = e.differences();
        out.error = e.what();
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

RunReport run_scenario(const ScenarioConfig& config)
{
    RunReport report;
    report.config = config;
    report.warnings = config.validate();
    const RefrigeratorParams& p = config.params;
    const double E1 = p.energy[0];
    const double T1 = p.temperature[0];
    const PercentileOptions popts = config.percentile_options();

    try {
        report.trajectory = evolve(p, config.t_end, config.dt, config.effective_sample_every());
    } catch (const std::exception& e) {
        report.errors.push_back(std::string("integration failed: ") + e.what());
        return report;
    }
    const Trajectory& traj = *report.trajectory;
    report.final_temperature = traj.cold_temps.back();

    try {
        report.steady_time = detect_steady_time(traj, config.steady_tol);
    } catch (const std::exception& e) {
        report.errors.push_back(e.what());
    }

    try {
        const DensityMatrix steady = steady_state_direct(p);
        report.steady_temperature = local_temperature(steady.matrix(), 1, E1);
        report.steady_state_distance = frobenius_distance(steady.matrix(), traj.states.back().matrix());
    } catch (const std::exception& e) {
        report.warnings.push_back(std::string("direct steady state unavailable, using t_end state: ") +
                                  e.what());
        if (std::isfinite(traj.cold_temps.back())) {
            report.steady_temperature = traj.cold_temps.back();
        }
    }
    if (!report.steady_temperature) {
        report.errors.push_back("cold qubit has no finite steady temperature");
        return report;
    }
    if (!report.steady_time) {
        return report;
    }

    const PercentileOutcome initial = percentile_outcome(E1, T1, popts);
    report.initial_percentiles = initial.table;
    report.initial_M_used = initial.M_used;
    report.initial_converged = initial.converged;
    report.initial_convergence_differences = initial.differences;
    if (!initial.error.empty()) {
        report.errors.push_back("initial percentiles: " + initial.error);
    }

    const std::vector<double> targets =
        target_temperatures(*report.steady_temperature, config.n_sample_points, config.temp_spacing);
    bool any_target = false;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        PointRecord pt;
        pt.index = static_cast<int>(k) + 1;
        pt.T_target = targets[k];
        pt.steady_point = k + 1 == targets.size();

        if (pt.T_target >= T1 - 0.5 * config.temp_spacing) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "target %.6g is not below the initial temperature %.6g",
                          pt.T_target, T1);
            pt.errors.emplace_back(buf);
            report.points.push_back(std::move(pt));
            continue;
        }
        any_target = true;

        if (pt.steady_point) {
            pt.time_reached = report.steady_time;
        } else {
            pt.time_reached = crossing_time(traj, config, pt.T_target);
            if (!pt.time_reached) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "target temperature %.6g never attained on the trajectory",
                              pt.T_target);
                pt.errors.emplace_back(buf);
            }
        }

        const PercentileOutcome fin = percentile_outcome(E1, pt.T_target, popts);
        pt.final_percentiles = fin.table;
        pt.M_used = fin.M_used;
        pt.converged = fin.converged;
        pt.convergence_differences = fin.differences;
        if (!fin.error.empty()) {
            pt.errors.push_back(fin.error);
        }
        if (report.initial_percentiles && pt.final_percentiles) {
            pt.cooling = cooling_report(*report.initial_percentiles, *pt.final_percentiles);
        }
        report.points.push_back(std::move(pt));
    }
    report.no_cooling_targets = !any_target;
    if (report.no_cooling_targets) {
        report.warnings.push_back("no cooling targets found: the cold qubit never drops below T1");
    }
    return report;
}

}  // namespace fpcool
