// Copyright 2026 The qcoop Authors
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

#ifndef QCOOP_CONFIG_HPP_
#define QCOOP_CONFIG_HPP_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qcoop/ants.hpp"
#include "qcoop/butterflies.hpp"
#include "qcoop/correlation.hpp"
#include "qcoop/table.hpp"
#include "qcoop/theory.hpp"

// Experiment description in INI form:
//
//   [experiment]   scenario, runs, seed, threads
//   [ants]         strength_1, strength_2, f_min, z, g, n_attempts, modes
//   [butterflies]  initial_distance, step_length, lambda, threshold_fraction,
//                  n_directions, max_rounds, meet_distance, back_flight, modes
//   [sweep]        f_min, lambda            (comma-separated lists)
//   [quadrature]   grid_points
//
// Every key is optional; missing keys keep the defaults below.

namespace qcoop {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string scenario = "ants";
    std::int64_t runs = 1;
    std::uint64_t seed = 1;
    unsigned threads = 0;  ///< 0: hardware concurrency

    ants::AntScenarioConfig ants;
    std::vector<EntanglementMode> ant_modes{EntanglementMode::Triplet, EntanglementMode::Independent};

    butterflies::ButterflyScenarioConfig butterflies;
    std::vector<EntanglementMode> butterfly_modes{EntanglementMode::Singlet,
                                                  EntanglementMode::Independent};

    std::vector<double> f_min_list;
    std::vector<double> lambda_list;
    theory::QuadratureSpec quadrature;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

using boost::property_tree::ptree;

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

inline double get_double(const ptree& pt, const std::string& key, double fallback) {
    const auto v = pt.get_optional<std::string>(key);
    if (!v) return fallback;
    try {
        return parse_double(*v);
    } catch (const std::invalid_argument&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + *v + "'");
    }
}

template <typename Int>
Int get_int(const ptree& pt, const std::string& key, Int fallback) {
    const auto v = pt.get_optional<std::string>(key);
    if (!v) return fallback;
    Int out{};
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc{} || res.ptr != v->data() + v->size())
        throw ConfigError("config key '" + key + "': expected an integer, got '" + *v + "'");
    return out;
}

inline std::vector<double> get_double_list(const ptree& pt, const std::string& key,
                                           std::vector<double> fallback) {
    const auto v = pt.get_optional<std::string>(key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(*v)) {
        try {
            out.push_back(parse_double(item));
        } catch (const std::invalid_argument&) {
            throw ConfigError("config key '" + key + "': bad list entry '" + item + "'");
        }
    }
    return out;
}

inline std::vector<EntanglementMode> get_modes(const ptree& pt, const std::string& key,
                                               std::vector<EntanglementMode> fallback) {
    const auto v = pt.get_optional<std::string>(key);
    if (!v) return fallback;
    std::vector<EntanglementMode> out;
    try {
        for (const auto& item : split_list(*v)) out.push_back(parse_mode(item));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty mode list");
    return out;
}

inline std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_double(xs[i]);
    return out;
}

inline std::string join(const std::vector<EntanglementMode>& ms) {
    std::string out;
    for (std::size_t i = 0; i < ms.size(); ++i) out += (i ? "," : "") + std::string(to_string(ms[i]));
    return out;
}

}  // namespace detail

/// Builds a config from an already-parsed tree. Throws ConfigError.
inline ExperimentConfig config_from_tree(const boost::property_tree::ptree& pt) {
    using namespace detail;
    ExperimentConfig c;
    c.scenario = pt.get("experiment.scenario", c.scenario);
    c.runs = get_int(pt, "experiment.runs", c.runs);
    c.seed = get_int(pt, "experiment.seed", c.seed);
    c.threads = get_int(pt, "experiment.threads", c.threads);

    auto& a = c.ants;
    a.strength_1 = get_double(pt, "ants.strength_1", a.strength_1);
    a.strength_2 = get_double(pt, "ants.strength_2", a.strength_2);
    a.f_min = get_double(pt, "ants.f_min", a.f_min);
    a.z = get_double(pt, "ants.z", a.z);
    a.g = get_double(pt, "ants.g", a.g);
    a.n_attempts = get_int(pt, "ants.n_attempts", a.n_attempts);
    c.ant_modes = get_modes(pt, "ants.modes", c.ant_modes);
    a.mode = c.ant_modes.front();

    auto& b = c.butterflies;
    b.initial_distance = get_double(pt, "butterflies.initial_distance", b.initial_distance);
    b.step_length = get_double(pt, "butterflies.step_length", b.step_length);
    b.lambda = get_double(pt, "butterflies.lambda", b.lambda);
    b.threshold_fraction = get_double(pt, "butterflies.threshold_fraction", b.threshold_fraction);
    b.n_directions = get_int(pt, "butterflies.n_directions", b.n_directions);
    b.max_rounds = get_int(pt, "butterflies.max_rounds", b.max_rounds);
    if (pt.get_optional<std::string>("butterflies.meet_distance"))
        b.meet_distance = get_double(pt, "butterflies.meet_distance", 0.0);
    if (auto v = pt.get_optional<std::string>("butterflies.back_flight")) {
        try {
            b.back_flight = butterflies::parse_back_flight(*v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    c.butterfly_modes = get_modes(pt, "butterflies.modes", c.butterfly_modes);
    b.mode = c.butterfly_modes.front();

    c.f_min_list = get_double_list(pt, "sweep.f_min", c.f_min_list);
    c.lambda_list = get_double_list(pt, "sweep.lambda", c.lambda_list);
    c.quadrature.grid_points_per_axis =
        get_int(pt, "quadrature.grid_points", c.quadrature.grid_points_per_axis);

    if (c.scenario != "ants" && c.scenario != "butterflies")
        throw ConfigError("experiment.scenario must be 'ants' or 'butterflies'");
    if (c.runs < 1) throw ConfigError("experiment.runs must be at least 1");
    try {
        ants::validate(c.ants);
        butterflies::validate(c.butterflies);
        theory::validate(c.quadrature);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

inline boost::property_tree::ptree parse_ini(std::istream& in, const std::string& origin) {
    boost::property_tree::ptree pt;
    try {
        boost::property_tree::read_ini(in, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    return pt;
}

/// Applies "section.key=value" overrides on top of a parsed file.
inline void apply_overrides(boost::property_tree::ptree& pt, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || o.find('.') > eq)
            throw ConfigError("override '" + o + "' is not of the form section.key=value");
        pt.put(o.substr(0, eq), o.substr(eq + 1));
    }
}

inline ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {}) {
    std::istringstream in{std::string(text)};
    auto pt = parse_ini(in, "<string>");
    apply_overrides(pt, overrides);
    return config_from_tree(pt);
}

inline ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    auto pt = parse_ini(in, path);
    apply_overrides(pt, overrides);
    return config_from_tree(pt);
}

/// Serializes every field; parse_config(write_config(c)) == c.
inline std::string write_config(const ExperimentConfig& c) {
    using detail::join;
    std::ostringstream os;
    os << "[experiment]\n"
       << "scenario = " << c.scenario << "\n"
       << "runs = " << c.runs << "\n"
       << "seed = " << c.seed << "\n"
       << "threads = " << c.threads << "\n\n";
    const auto& a = c.ants;
    os << "[ants]\n"
       << "strength_1 = " << format_double(a.strength_1) << "\n"
       << "strength_2 = " << format_double(a.strength_2) << "\n"
       << "f_min = " << format_double(a.f_min) << "\n"
       << "z = " << format_double(a.z) << "\n"
       << "g = " << format_double(a.g) << "\n"
       << "n_attempts = " << a.n_attempts << "\n"
       << "modes = " << join(c.ant_modes) << "\n\n";
    const auto& b = c.butterflies;
    os << "[butterflies]\n"
       << "initial_distance = " << format_double(b.initial_distance) << "\n"
       << "step_length = " << format_double(b.step_length) << "\n"
       << "lambda = " << format_double(b.lambda) << "\n"
       << "threshold_fraction = " << format_double(b.threshold_fraction) << "\n"
       << "n_directions = " << b.n_directions << "\n"
       << "max_rounds = " << b.max_rounds << "\n";
    if (b.meet_distance) os << "meet_distance = " << format_double(*b.meet_distance) << "\n";
    os << "back_flight = " << to_string(b.back_flight) << "\n"
       << "modes = " << join(c.butterfly_modes) << "\n\n";
    os << "[sweep]\n";
    if (!c.f_min_list.empty()) os << "f_min = " << join(c.f_min_list) << "\n";
    if (!c.lambda_list.empty()) os << "lambda = " << join(c.lambda_list) << "\n";
    os << "\n[quadrature]\n"
       << "grid_points = " << c.quadrature.grid_points_per_axis << "\n";
    return os.str();
}

}  // namespace qcoop

#endif  // QCOOP_CONFIG_HPP_
