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

// fpcool: three-qubit absorption refrigerator with finite-precision
// thermometry.
//
//   fpcool run --config configs/strong.cfg --out out/strong
//   fpcool steady --regime weak
//   fpcool percentiles --E 1 --T 0.9
//   fpcool compare --initial a.csv --final b.csv

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fpcool/compare.hpp"
#include "fpcool/dynamics.hpp"
#include "fpcool/scenario.hpp"
#include "fpcool/thermometry.hpp"

namespace {

struct ScenarioFlags {
    std::string config;
    std::string regime;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<double> tol;
    std::optional<int> repetitions;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f)
{
    auto* config = cmd->add_option("--config", f.config, "Scenario file (.cfg or report.json)");
    cmd->add_option("--regime", f.regime, "Use the built-in preset: strong or weak")
        ->check(CLI::IsMember({"strong", "weak"}))
        ->excludes(config);
    cmd->add_option("--dt", f.dt, "Override the RK4 step");
    cmd->add_option("--t-end", f.t_end, "Override the integration horizon");
    cmd->add_option("--tol", f.tol, "Override the steady-state tolerance");
    cmd->add_option("--repetitions", f.repetitions, "Measurement repetitions N");
}

fpcool::ScenarioConfig resolve(const ScenarioFlags& f)
{
    fpcool::ScenarioConfig c;
    if (!f.config.empty()) {
        c = fpcool::load_config(f.config);
    } else {
        c = fpcool::ScenarioConfig::preset(fpcool::regime_from_string(f.regime.empty() ? "strong" : f.regime));
    }
    if (f.dt) {
        if (c.sample_every > 0) {
            // keep the sample times fixed when only the step changes
            const double spacing = c.sample_every * c.dt;
            c.sample_every = static_cast<std::size_t>(std::max(1.0, std::round(spacing / *f.dt)));
        }
        c.dt = *f.dt;
    }
    if (f.t_end) {
        c.t_end = *f.t_end;
    }
    if (f.tol) {
        c.steady_tol = *f.tol;
    }
    if (f.repetitions) {
        c.repetitions = *f.repetitions;
    }
    return c;
}

void print_warnings(const std::vector<std::string>& warnings)
{
    for (const std::string& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
}

std::string fmt(double v)
{
    return fpcool::format_number(v);
}

int cmd_run(const ScenarioFlags& flags, const std::string& out_dir)
{
    const fpcool::ScenarioConfig config = resolve(flags);
    const fpcool::RunReport report = fpcool::run_scenario(config);
    print_warnings(report.warnings);
    for (const std::string& e : report.errors) {
        std::cerr << "error: " << e << '\n';
    }
    if (report.steady_temperature) {
        std::cout << "steady temperature  " << fmt(*report.steady_temperature) << '\n';
    }
    if (report.steady_time) {
        std::cout << "steady time         " << fmt(*report.steady_time) << '\n';
    }
    if (report.steady_state_distance) {
        std::cout << "kernel vs t_end     " << fmt(*report.steady_state_distance) << '\n';
    }
    for (const fpcool::PointRecord& pt : report.points) {
        std::cout << "point " << pt.index << "  T=" << fmt(pt.T_target);
        if (pt.time_reached) {
            std::cout << "  t=" << fmt(*pt.time_reached);
        }
        if (pt.cooling) {
            std::cout << "  M=" << pt.M_used << "  cooled="
                      << (pt.cooling->cooled ? "yes" : "no");
            if (pt.cooling->first_cooling_percentile) {
                std::cout << "  i*=" << *pt.cooling->first_cooling_percentile;
            }
        }
        std::cout << '\n';
        for (const std::string& e : pt.errors) {
            std::cerr << "  point " << pt.index << ": " << e << '\n';
        }
    }
    for (const auto& path : fpcool::emit_outputs(report, out_dir)) {
        std::cout << "wrote " << path.string() << '\n';
    }
    return report.exit_code();
}

int cmd_steady(const ScenarioFlags& flags)
{
    const fpcool::ScenarioConfig config = resolve(flags);
    print_warnings(config.validate());
    const fpcool::DensityMatrix rho = fpcool::steady_state_direct(config.params);
    for (int q = 1; q <= 3; ++q) {
        const double E = config.params.energy[static_cast<std::size_t>(q - 1)];
        std::cout << "T" << q << " " << fmt(fpcool::local_temperature(rho.matrix(), q, E)) << '\n';
    }
    std::cout << "residual " << fmt(fpcool::generator_residual(fpcool::liouvillian(config.params), rho.matrix()))
              << '\n';
    return 0;
}

int cmd_percentiles(double E, double T, const fpcool::PercentileOptions& opts, const std::string& out)
{
    const fpcool::PercentileOutcome r = fpcool::percentile_outcome(E, T, opts);
    if (!r.table) {
        std::cerr << "error: " << r.error << '\n';
        return 1;
    }
    if (!r.converged) {
        std::cerr << "warning: " << r.error << '\n';
    }
    std::cerr << "M_used " << r.M_used << '\n';
    if (out.empty()) {
        fpcool::write_percentile_table(std::cout, *r.table);
    } else {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "error: cannot open " << out << '\n';
            return 1;
        }
        fpcool::write_percentile_table(f, *r.table);
    }
    return r.converged ? 0 : 2;
}

int cmd_compare(const std::string& initial_path, const std::string& final_path)
{
    const fpcool::PercentileTable a = fpcool::read_percentile_table(initial_path);
    const fpcool::PercentileTable b = fpcool::read_percentile_table(final_path);
    const fpcool::CoolingReport r = fpcool::cooling_report(a, b);
    std::cout << "i,delta_Ti,comparison\n";
    for (int i = 1; i <= 49; ++i) {
        const auto c = fpcool::compare_patches(fpcool::percentile_patch(a, i), fpcool::percentile_patch(b, i));
        std::cout << i << ',' << fmt(r.magnitude(i)) << ',' << fpcool::to_string(c) << '\n';
    }
    std::cerr << "cooled " << (r.cooled ? "yes" : "no");
    if (r.first_cooling_percentile) {
        std::cerr << "  i*=" << *r.first_cooling_percentile
                  << "  monotone=" << (r.magnitudes_monotone ? "yes" : "no");
    }
    std::cerr << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Three-qubit absorption refrigerator with finite-precision thermometry"};
    app.require_subcommand(1);
    app.set_version_flag("--version", FPCOOL_VERSION_STRING);

    ScenarioFlags run_flags;
    std::string out_dir = "out";
    auto* run = app.add_subcommand("run", "Integrate, sample the cooling curve and write all outputs");
    add_scenario_flags(run, run_flags);
    run->add_option("--out", out_dir, "Output directory");

    ScenarioFlags steady_flags;
    auto* steady = app.add_subcommand("steady", "Steady state from the Liouvillian kernel");
    add_scenario_flags(steady, steady_flags);

    double E = 1.0;
    double T = 0.0;
    fpcool::PercentileOptions popts;
    std::string table_out;
    auto* pct = app.add_subcommand("percentiles", "MaxEnt percentiles of the estimator at (E, T)");
    pct->add_option("--E", E, "Qubit gap")->check(CLI::PositiveNumber);
    pct->add_option("--T", T, "Temperature")->required()->check(CLI::PositiveNumber);
    pct->add_option("--repetitions", popts.repetitions, "Measurement repetitions N")->check(CLI::PositiveNumber);
    pct->add_option("--tol", popts.tol, "Convergence tolerance between orders");
    pct->add_option("--M-max", popts.M_max, "Highest moment order");
    pct->add_option("--out", table_out, "Write the table to a file instead of stdout");

    std::string initial_path;
    std::string final_path;
    auto* cmp = app.add_subcommand("compare", "Compare two percentile tables");
    cmp->add_option("--initial", initial_path, "Initial table (i,Q)")->required()->check(CLI::ExistingFile);
    cmp->add_option("--final", final_path, "Final table (i,Q)")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            return cmd_run(run_flags, out_dir);
        }
        if (*steady) {
            return cmd_steady(steady_flags);
        }
        if (*pct) {
            return cmd_percentiles(E, T, popts, table_out);
        }
        return cmd_compare(initial_path, final_path);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return 1;
    }
}
