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

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpcool/error.hpp"
#include "fpcool/scenario.hpp"
#include "scenario_json.hpp"

namespace fpcool {

namespace {

double parse_double(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("config: '" + key + "' expects a number, got '" + text + "'");
    }
}

long long parse_integer(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("config: '" + key + "' expects an integer, got '" + text + "'");
    }
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;

Setter real(double ScenarioConfig::*field)
{
    return [field](ScenarioConfig& c, const std::string& k, const std::string& v) {
        c.*field = parse_double(k, v);
    };
}

Setter real_param(double RefrigeratorParams::*field)
{
    return [field](ScenarioConfig& c, const std::string& k, const std::string& v) {
        c.params.*field = parse_double(k, v);
    };
}

Setter array_param(std::array<double, 3> RefrigeratorParams::*field, std::size_t index)
{
    return [field, index](ScenarioConfig& c, const std::string& k, const std::string& v) {
        (c.params.*field)[index] = parse_double(k, v);
    };
}

Setter integer(int ScenarioConfig::*field)
{
    return [field](ScenarioConfig& c, const std::string& k, const std::string& v) {
        c.*field = static_cast<int>(parse_integer(k, v));
    };
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"system.E1", array_param(&RefrigeratorParams::energy, 0)},
        {"system.E2", array_param(&RefrigeratorParams::energy, 1)},
        {"system.E3", array_param(&RefrigeratorParams::energy, 2)},
        {"system.g", real_param(&RefrigeratorParams::g)},
        {"baths.T1", array_param(&RefrigeratorParams::temperature, 0)},
        {"baths.T2", array_param(&RefrigeratorParams::temperature, 1)},
        {"baths.T3", array_param(&RefrigeratorParams::temperature, 2)},
        {"baths.alpha1", array_param(&RefrigeratorParams::alpha, 0)},
        {"baths.alpha2", array_param(&RefrigeratorParams::alpha, 1)},
        {"baths.alpha3", array_param(&RefrigeratorParams::alpha, 2)},
        {"baths.Omega1", array_param(&RefrigeratorParams::cutoff, 0)},
        {"baths.Omega2", array_param(&RefrigeratorParams::cutoff, 1)},
        {"baths.Omega3", array_param(&RefrigeratorParams::cutoff, 2)},
        {"baths.Omega",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             const double cutoff = parse_double(k, v);
             c.params.cutoff = {cutoff, cutoff, cutoff};
         }},
        {"integrator.t_end", real(&ScenarioConfig::t_end)},
        {"integrator.dt", real(&ScenarioConfig::dt)},
        {"integrator.sample_every",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             const long long n = parse_integer(k, v);
             if (n < 0) {
                 throw InvalidArgument("config: sample_every must be nonnegative");
             }
             c.sample_every = static_cast<std::size_t>(n);
         }},
        {"integrator.steady_tol", real(&ScenarioConfig::steady_tol)},
        {"sampling.n_sample_points", integer(&ScenarioConfig::n_sample_points)},
        {"sampling.temp_spacing", real(&ScenarioConfig::temp_spacing)},
        {"maxent.k_sigma",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.maxent.k_sigma = parse_double(k, v);
         }},
        {"maxent.n_points",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.maxent.n_points = static_cast<int>(parse_integer(k, v));
         }},
        {"maxent.conv_tol",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.maxent.conv_tol = parse_double(k, v);
         }},
        {"maxent.M_start",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.maxent.M_start = static_cast<int>(parse_integer(k, v));
         }},
        {"maxent.M_max",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.maxent.M_max = static_cast<int>(parse_integer(k, v));
         }},
        {"thermometry.repetitions", integer(&ScenarioConfig::repetitions)},
        {"run.seed_label",
         [](ScenarioConfig& c, const std::string&, const std::string& v) { c.seed_label = v; }},
    };
    return table;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in)
{
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_config(in);
    } catch (const CLI::Error& e) {
        throw InvalidArgument(std::string("config: parse error: ") + e.what());
    }

    std::vector<std::pair<std::string, std::string>> entries;
    std::optional<Regime> regime;
    for (const CLI::ConfigItem& item : items) {
        if (item.name == "++" || item.name == "--") {
            continue;  // section markers
        }
        const std::string key = item.fullname();
        if (item.inputs.size() != 1) {
            throw InvalidArgument("config: '" + key + "' expects exactly one value");
        }
        if (key == "system.regime") {
            regime = regime_from_string(item.inputs.front());
            continue;
        }
        entries.emplace_back(key, item.inputs.front());
    }
    if (!regime) {
        throw InvalidArgument("config: missing 'regime' in [system]");
    }

    ScenarioConfig config = ScenarioConfig::preset(*regime);
    for (const auto& [key, value] : entries) {
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw InvalidArgument("config: unknown key '" + key + "'");
        }
        it->second(config, key, value);
    }
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open config file " + path.string());
    }
    if (path.extension() == ".json") {
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument("config: " + path.string() + ": " + e.what());
        }
        if (doc.contains("config")) {
            return config_from_json(doc.at("config"));
        }
        return config_from_json(doc);
    }
    try {
        return parse_config(in);
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(path.string() + ": " + e.what());
    }
}

nlohmann::json config_to_json(const ScenarioConfig& c)
{
    // Reuse the INI writer so both formats share one key set.
    std::istringstream in(format_config(c));
    nlohmann::json doc = nlohmann::json::object();
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_config(in)) {
        if (item.name == "++" || item.name == "--") {
            continue;
        }
        const std::string& section = item.parents.front();
        const std::string& text = item.inputs.front();
        if (item.name == "regime" || item.name == "seed_label") {
            doc[section][item.name] = text;
        } else if (text.find_first_of(".eEn") == std::string::npos) {
            doc[section][item.name] = std::stoll(text);
        } else {
            doc[section][item.name] = std::stod(text);
        }
    }
    // format_config rounds to 12 digits; keep the exact doubles here.
    const RefrigeratorParams& p = c.params;
    doc["system"]["g"] = p.g;
    for (std::size_t j = 0; j < 3; ++j) {
        const std::string n = std::to_string(j + 1);
        doc["system"]["E" + n] = p.energy[j];
        doc["baths"]["T" + n] = p.temperature[j];
        doc["baths"]["alpha" + n] = p.alpha[j];
        doc["baths"]["Omega" + n] = p.cutoff[j];
    }
    doc["integrator"]["t_end"] = c.t_end;
    doc["integrator"]["dt"] = c.dt;
    doc["integrator"]["steady_tol"] = c.steady_tol;
    doc["sampling"]["temp_spacing"] = c.temp_spacing;
    doc["maxent"]["k_sigma"] = c.maxent.k_sigma;
    doc["maxent"]["conv_tol"] = c.maxent.conv_tol;
    return doc;
}

ScenarioConfig config_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw InvalidArgument("config: JSON config must be an object of sections");
    }
    std::ostringstream ini;
    for (const auto& [section, body] : doc.items()) {
        if (!body.is_object()) {
            throw InvalidArgument("config: section '" + section + "' must be an object");
        }
        ini << '[' << section << "]\n";
        for (const auto& [key, value] : body.items()) {
            ini << key << " = ";
            if (value.is_string()) {
                ini << '"' << value.get<std::string>() << '"';
            } else if (value.is_number_integer()) {
                ini << value.get<long long>();
            } else if (value.is_number()) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", value.get<double>());
                ini << buf;
            } else {
                throw InvalidArgument("config: '" + section + "." + key + "' must be a string or number");
            }
            ini << '\n';
        }
    }
    std::istringstream in(ini.str());
    return parse_config(in);
}

std::string format_config(const ScenarioConfig& c)
{
    const RefrigeratorParams& p = c.params;
    std::ostringstream os;
    os << "[system]\n"
       << "regime = " << to_string(p.regime) << "\n"
       << "E1 = " << format_number(p.energy[0]) << "\n"
       << "E2 = " << format_number(p.energy[1]) << "\n"
       << "E3 = " << format_number(p.energy[2]) << "\n"
       << "g = " << format_number(p.g) << "\n\n"
       << "[baths]\n";
    for (std::size_t j = 0; j < 3; ++j) {
        os << "T" << j + 1 << " = " << format_number(p.temperature[j]) << "\n";
    }
    for (std::size_t j = 0; j < 3; ++j) {
        os << "alpha" << j + 1 << " = " << format_number(p.alpha[j]) << "\n";
    }
    for (std::size_t j = 0; j < 3; ++j) {
        os << "Omega" << j + 1 << " = " << format_number(p.cutoff[j]) << "\n";
    }
    os << "\n[integrator]\n"
       << "t_end = " << format_number(c.t_end) << "\n"
       << "dt = " << format_number(c.dt) << "\n"
       << "sample_every = " << c.sample_every << "\n"
       << "steady_tol = " << format_number(c.steady_tol) << "\n\n"
       << "[sampling]\n"
       << "n_sample_points = " << c.n_sample_points << "\n"
       << "temp_spacing = " << format_number(c.temp_spacing) << "\n\n"
       << "[maxent]\n"
       << "k_sigma = " << format_number(c.maxent.k_sigma) << "\n"
       << "n_points = " << c.maxent.n_points << "\n"
       << "conv_tol = " << format_number(c.maxent.conv_tol) << "\n"
       << "M_start = " << c.maxent.M_start << "\n"
       << "M_max = " << c.maxent.M_max << "\n\n"
       << "[thermometry]\n"
       << "repetitions = " << c.repetitions << "\n\n"
       << "[run]\n"
       << "seed_label = \"" << c.seed_label << "\"\n";
    return os.str();
}

}  // namespace fpcool
