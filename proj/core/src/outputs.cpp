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

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Core>
#include <json.hpp>

#include "fpcool/error.hpp"
#include "fpcool/scenario.hpp"
#include "scenario_json.hpp"

namespace fpcool {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v)
{
    if (!v || !std::isfinite(*v)) {
        return nullptr;
    }
    return *v;
}

json table_json(const PercentileTable& t)
{
    json a = json::array();
    for (double q : t.values) {
        a.push_back(q);
    }
    return a;
}

json point_json(const PointRecord& pt)
{
    json j;
    j["index"] = pt.index;
    j["T_target"] = pt.T_target;
    j["steady_point"] = pt.steady_point;
    j["time_reached"] = optional_number(pt.time_reached);
    j["M_used"] = pt.M_used;
    j["converged"] = pt.converged;
    j["convergence_differences"] = pt.convergence_differences;
    j["final_percentiles"] = pt.final_percentiles ? table_json(*pt.final_percentiles) : json(nullptr);
    j["cooling"] = pt.cooling ? json::parse(cooling_report_json(*pt.cooling)) : json(nullptr);
    j["errors"] = pt.errors;
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& body,
                std::vector<std::filesystem::path>& manifest)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << body;
    out.close();
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
    manifest.push_back(path);
}

std::string trajectory_csv(const RunReport& report)
{
    const Trajectory& traj = *report.trajectory;
    const RefrigeratorParams& p = report.config.params;
    std::ostringstream os;
    os << "t,T1,T2,T3,trace_err,min_eig\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const ComplexMatrix& rho = traj.states[k].matrix();
        os << format_number(traj.times[k]);
        for (int q = 1; q <= 3; ++q) {
            os << ',' << format_number(local_temperature(rho, q, p.energy[static_cast<std::size_t>(q - 1)]));
        }
        const double trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
        os << ',' << format_number(trace_err) << ',' << format_number(eig_hermitian(rho).values.minCoeff())
           << '\n';
    }
    return os.str();
}

std::string percentile_csv(const PercentileTable& initial, const PercentileTable& final_table)
{
    std::ostringstream os;
    os << "i,initial_Qi,final_Qi,delta_Ti\n";
    for (int i = 1; i <= 99; ++i) {
        os << i << ',' << format_number(initial.at(i)) << ',' << format_number(final_table.at(i)) << ',';
        if (i < 50) {
            os << format_number(initial.at(i) - final_table.at(100 - i));
        }
        os << '\n';
    }
    return os.str();
}

std::string figure_a_csv(const RunReport& report)
{
    const Trajectory& traj = *report.trajectory;
    std::ostringstream os;
    os << "series,t,T1\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        os << "curve," << format_number(traj.times[k]) << ',' << format_number(traj.cold_temps[k]) << '\n';
    }
    for (const PointRecord& pt : report.points) {
        if (pt.time_reached) {
            os << "point," << format_number(*pt.time_reached) << ',' << format_number(pt.T_target) << '\n';
        }
    }
    return os.str();
}

std::string figure_b_csv(const RunReport& report)
{
    std::ostringstream os;
    os << "point,i,delta_Ti\n";
    for (const PointRecord& pt : report.points) {
        if (!pt.cooling) {
            continue;
        }
        for (int i = 1; i <= 49; ++i) {
            os << pt.index << ',' << i << ',' << format_number(pt.cooling->magnitude(i)) << '\n';
        }
    }
    return os.str();
}

}  // namespace

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string cooling_report_json(const CoolingReport& r)
{
    json j;
    j["magnitudes"] = r.magnitudes;
    j["first_cooling_percentile"] =
        r.first_cooling_percentile ? json(*r.first_cooling_percentile) : json(nullptr);
    j["cooled"] = r.cooled;
    j["magnitudes_monotone"] = r.magnitudes_monotone;
    return j.dump();
}

std::string report_json(const RunReport& report)
{
    const ScenarioConfig& c = report.config;
    json j;
    j["config"] = config_to_json(c);
    j["provenance"] = {
        {"fpcool_version", FPCOOL_VERSION},
        {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                              "." + std::to_string(EIGEN_MINOR_VERSION)},
        {"tolerances",
         {{"steady_tol", c.steady_tol},
          {"maxent_conv_tol", c.maxent.conv_tol},
          {"maxent_residual_tol", MaxEntOptions{}.residual_tol},
          {"renormalization_max", 1e-10}}},
    };
    j["warnings"] = report.warnings;
    j["errors"] = report.errors;

    json summary;
    summary["steady_time"] = optional_number(report.steady_time);
    summary["steady_temperature"] = optional_number(report.steady_temperature);
    summary["final_temperature"] = optional_number(report.final_temperature);
    summary["steady_state_distance"] = optional_number(report.steady_state_distance);
    if (report.trajectory) {
        summary["samples"] = report.trajectory->size();
        summary["steps"] = report.trajectory->steps;
        summary["max_correction"] = report.trajectory->max_correction;
    }
    j["summary"] = summary;

    j["initial"] = {
        {"T", c.params.temperature[0]},
        {"percentiles", report.initial_percentiles ? table_json(*report.initial_percentiles) : json(nullptr)},
        {"M_used", report.initial_M_used},
        {"converged", report.initial_converged},
        {"convergence_differences", report.initial_convergence_differences},
    };
    json points = json::array();
    for (const PointRecord& pt : report.points) {
        points.push_back(point_json(pt));
    }
    j["points"] = points;
    j["no_cooling_targets"] = report.no_cooling_targets;
    j["exit_code"] = report.exit_code();
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_outputs(const RunReport& report, const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
    }
    std::vector<std::filesystem::path> manifest;
    if (report.trajectory) {
        write_file(out_dir / "trajectory.csv", trajectory_csv(report), manifest);
    }
    if (report.initial_percentiles) {
        for (const PointRecord& pt : report.points) {
            if (pt.final_percentiles) {
                write_file(out_dir / ("percentiles_" + std::to_string(pt.index) + ".csv"),
                           percentile_csv(*report.initial_percentiles, *pt.final_percentiles), manifest);
            }
        }
    }
    if (report.trajectory) {
        const std::string stem = report.config.params.regime == Regime::Strong ? "figure1" : "figure2";
        write_file(out_dir / (stem + "a.csv"), figure_a_csv(report), manifest);
        if (!report.points.empty()) {
            write_file(out_dir / (stem + "b.csv"), figure_b_csv(report), manifest);
        }
    }
    write_file(out_dir / "report.json", report_json(report), manifest);
    return manifest;
}

void write_percentile_table(std::ostream& out, const PercentileTable& table)
{
    out << "i,Q\n";
    for (int i = 1; i <= 99; ++i) {
        out << i << ',' << format_number(table.at(i)) << '\n';
    }
}

PercentileTable read_percentile_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open percentile table " + path.string());
    }
    PercentileTable table;
    std::array<bool, 99> seen{};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || (lineno == 1 && !std::isdigit(static_cast<unsigned char>(line[0])))) {
            continue;  // header
        }
        const std::string where = path.string() + ":" + std::to_string(lineno);
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw InvalidArgument(where + ": expected 'i,Q'");
        }
        int i = 0;
        double q = 0.0;
        try {
            std::size_t used = 0;
            i = std::stoi(line.substr(0, comma), &used);
            q = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw InvalidArgument(where + ": malformed row '" + line + "'");
        }
        if (i < 1 || i > 99) {
            throw InvalidArgument(where + ": percentile index out of range");
        }
        table.at(i) = q;
        seen[static_cast<std::size_t>(i - 1)] = true;
    }
    for (int i = 1; i <= 99; ++i) {
        if (!seen[static_cast<std::size_t>(i - 1)]) {
            throw InvalidArgument(path.string() + ": missing percentile " + std::to_string(i));
        }
    }
    return table;
}

}  // namespace fpcool
