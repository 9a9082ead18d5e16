// Copyright 2026 The cliffproxy Authors
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

#include <algorithm>
#include <cstdio>
#include <tuple>
#include <cstdint>
#include <string>
#include <vector>

#include "cliffproxy/errors.hpp"
#include "cliffproxy/diamond.hpp"
#include "cliffproxy/estimators.hpp"
#include "cliffproxy/rng.hpp"
#include "json.hpp"

namespace cliffproxy::bench {

inline constexpr const char *kToolkitVersion = "0.1.0";

class ConfigError : public Error {
   public:
    explicit ConfigError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {
    }
    const std::vector<std::string> &problems() const {
        return problems_;
    }

   private:
    static std::string join(const std::vector<std::string> &p) {
        std::string s = "invalid config:";
        for (const auto &x : p) s += "\n  - " + x;
        return s;
    }
    std::vector<std::string> problems_;
};

inline const std::vector<std::string> &scenario_names() {
    static const std::vector<std::string> names{"uniformity", "accuracy", "spam-compare", "volumetric", "xeb-compare"};
    return names;
}

struct ExperimentConfig {
    std::string scenario = "uniformity";
    std::vector<size_t> widths;
    std::vector<size_t> depths;
    std::string circuit_kind = "both";  // disordered | periodic | both
    std::string topology = "ring";
    size_t targets = 20;
    size_t cliffordizations = 100;
    double two_qubit_budget = 1e-3;
    double one_qubit_budget = 1e-4;
    bool markovian = true;
    double prep_flip_min = 0, prep_flip_max = 0;
    double meas_flip_min = 0, meas_flip_max = 0;
    DfeConfig dfe{};
    size_t scrambler_depth = 4;
    size_t calib_shots = 1000;
    size_t randomizations = 20;
    size_t shots = 10000;
    std::vector<size_t> layer_depths{1, 2, 4, 8, 12, 16, 24};
    size_t threads = 0;  // 0: hardware concurrency
    uint64_t seed = 0;
    std::string output_dir = "out";
    bool paper_scale = false;
};

/// Scenario defaults, scaled down from the full study sizes unless
/// paper_scale is set.
inline ExperimentConfig scenario_defaults(const std::string &scenario, bool paper_scale = false) {
    ExperimentConfig c;
    c.scenario = scenario;
    c.paper_scale = paper_scale;
    if (scenario == "uniformity" || scenario == "accuracy") {
        c.widths = scenario == "uniformity" ? std::vector<size_t>{2, 3} : std::vector<size_t>{2};
        c.depths = {200};
        c.targets = paper_scale ? 100 : 20;
        c.cliffordizations = paper_scale ? 500 : 100;
    } else if (scenario == "spam-compare") {
        c.widths = {8};
        c.depths = {4, 8, 12, 16, 20};
        c.topology = "line";
        c.prep_flip_min = c.meas_flip_min = 0.01;
        c.prep_flip_max = c.meas_flip_max = 0.02;
        c.dfe = {50, 1, 1000};
        c.layer_depths = {1, 2, 4, 8, 12};
    } else if (scenario == "volumetric") {
        c.widths = {2, 4, 6, 8};
        c.depths = {2, 4, 8, 12};
        c.topology = "line";
        c.prep_flip_min = c.meas_flip_min = 0.01;
        c.prep_flip_max = c.meas_flip_max = 0.01;
        c.dfe = volumetric_default_config();
        c.layer_depths = {1, 2, 4, 8};
    } else if (scenario == "xeb-compare") {
        c.widths = {5};
        c.depths = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
        c.topology = "line";
        c.randomizations = 20;
        c.shots = 10000;
        c.cliffordizations = 20;
    }
    return c;
}

namespace detail {

template <typename T>
void read_field(const nlohmann::json &j, const char *key, T &out, std::vector<std::string> &problems) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const std::exception &) {
        problems.push_back(std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace detail

inline void validate_config(const ExperimentConfig &c) {
    std::vector<std::string> p;
    const auto &names = scenario_names();
    if (std::find(names.begin(), names.end(), c.scenario) == names.end()) p.push_back("unknown scenario '" + c.scenario + "'");
    if (c.widths.empty()) p.push_back("widths must not be empty");
    for (size_t n : c.widths) {
        if (n < 2 || n > kStatevectorQubitLimit) p.push_back("width " + std::to_string(n) + " outside [2, 14]");
    }
    if (c.depths.empty()) p.push_back("depths must not be empty");
    for (size_t d : c.depths) {
        if (d < 1) p.push_back("depths must be positive");
    }
    if (c.circuit_kind != "disordered" && c.circuit_kind != "periodic" && c.circuit_kind != "both") {
        p.push_back("circuit_kind must be disordered, periodic or both");
    }
    if (c.topology != "line" && c.topology != "ring") p.push_back("topology must be line or ring");
    if (c.targets < 1) p.push_back("targets must be at least 1");
    if (c.cliffordizations < 2) p.push_back("cliffordizations must be at least 2");
    if (!(c.two_qubit_budget >= 0 && c.two_qubit_budget < 1)) p.push_back("two_qubit_budget must lie in [0, 1)");
    if (!(c.one_qubit_budget >= 0 && c.one_qubit_budget < 1)) p.push_back("one_qubit_budget must lie in [0, 1)");
    for (auto [lo, hi, name] : {std::tuple{c.prep_flip_min, c.prep_flip_max, "prep_flip"},
                                std::tuple{c.meas_flip_min, c.meas_flip_max, "meas_flip"}}) {
        if (!(lo >= 0 && hi < 0.5 && lo <= hi)) p.push_back(std::string(name) + " range must satisfy 0 <= min <= max < 0.5");
    }
    if (c.dfe.num_paulis < 1 || c.dfe.num_twirls < 1 || c.dfe.shots_per_twirl < 1) p.push_back("dfe counts must be at least 1");
    if (c.scrambler_depth < 1) p.push_back("scrambler_depth must be at least 1");
    if (c.calib_shots < 100) p.push_back("calib_shots must be at least 100");
    if (c.randomizations < 1 || c.shots < 1) p.push_back("randomizations and shots must be at least 1");
    if (c.layer_depths.size() < 3) p.push_back("layer_depths needs at least three entries");
    if (c.output_dir.empty()) p.push_back("output_dir must not be empty");
    if (c.scenario == "accuracy") {
        for (size_t n : c.widths) {
            if (n > kDiamondQubitLimit) p.push_back("accuracy scenario supports widths up to 3");
        }
    }
    if (c.scenario == "uniformity" || c.scenario == "spam-compare") {
        for (size_t n : c.widths) {
            if (c.scenario == "uniformity" && n > kDefaultFoldLimit) p.push_back("uniformity widths must be foldable (<= 10)");
        }
    }
    if (!p.empty()) throw ConfigError(p);
}

/// Overlays JSON fields on the scenario defaults. Unknown keys are errors.
inline ExperimentConfig config_from_json(const nlohmann::json &j, const std::string &scenario_override = "",
                                         bool paper_scale = false) {
    std::vector<std::string> p;
    if (!j.is_object()) throw ConfigError({"config must be a JSON object"});
    std::string scenario = scenario_override;
    if (scenario.empty()) {
        if (j.contains("scenario") && j.at("scenario").is_string()) {
            scenario = j.at("scenario").get<std::string>();
        } else {
            throw ConfigError({"missing 'scenario'"});
        }
    }
    bool ps = paper_scale || j.value("paper_scale", false);
    ExperimentConfig c = scenario_defaults(scenario, ps);
    static const std::vector<std::string> known{
        "scenario",   "widths",          "depths",       "circuit_kind",   "topology",      "targets",
        "cliffordizations", "noise",     "spam",         "dfe",            "scrambler_depth", "calib_shots",
        "randomizations", "shots",       "layer_depths", "threads",        "seed",          "output_dir",
        "paper_scale"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) p.push_back("unknown field '" + it.key() + "'");
    }
    if (j.contains("scenario") && j.at("scenario").is_string() && !scenario_override.empty() &&
        j.at("scenario").get<std::string>() != scenario_override) {
        p.push_back("config scenario '" + j.at("scenario").get<std::string>() + "' does not match '" + scenario_override + "'");
    }
    detail::read_field(j, "widths", c.widths, p);
    detail::read_field(j, "depths", c.depths, p);
    detail::read_field(j, "circuit_kind", c.circuit_kind, p);
    detail::read_field(j, "topology", c.topology, p);
    detail::read_field(j, "targets", c.targets, p);
    detail::read_field(j, "cliffordizations", c.cliffordizations, p);
    detail::read_field(j, "scrambler_depth", c.scrambler_depth, p);
    detail::read_field(j, "calib_shots", c.calib_shots, p);
    detail::read_field(j, "randomizations", c.randomizations, p);
    detail::read_field(j, "shots", c.shots, p);
    detail::read_field(j, "layer_depths", c.layer_depths, p);
    detail::read_field(j, "threads", c.threads, p);
    detail::read_field(j, "seed", c.seed, p);
    detail::read_field(j, "output_dir", c.output_dir, p);
    if (j.contains("noise")) {
        const auto &n = j.at("noise");
        detail::read_field(n, "two_qubit_budget", c.two_qubit_budget, p);
        detail::read_field(n, "one_qubit_budget", c.one_qubit_budget, p);
        detail::read_field(n, "markovian", c.markovian, p);
    }
    if (j.contains("spam")) {
        const auto &s = j.at("spam");
        detail::read_field(s, "prep_flip_min", c.prep_flip_min, p);
        detail::read_field(s, "prep_flip_max", c.prep_flip_max, p);
        detail::read_field(s, "meas_flip_min", c.meas_flip_min, p);
        detail::read_field(s, "meas_flip_max", c.meas_flip_max, p);
    }
    if (j.contains("dfe")) {
        const auto &d = j.at("dfe");
        detail::read_field(d, "num_paulis", c.dfe.num_paulis, p);
        detail::read_field(d, "num_twirls", c.dfe.num_twirls, p);
        detail::read_field(d, "shots_per_twirl", c.dfe.shots_per_twirl, p);
    }
    if (!p.empty()) throw ConfigError(p);
    validate_config(c);
    return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig &c) {
    return {{"scenario", c.scenario},
            {"widths", c.widths},
            {"depths", c.depths},
            {"circuit_kind", c.circuit_kind},
            {"topology", c.topology},
            {"targets", c.targets},
            {"cliffordizations", c.cliffordizations},
            {"noise", {{"two_qubit_budget", c.two_qubit_budget}, {"one_qubit_budget", c.one_qubit_budget}, {"markovian", c.markovian}}},
            {"spam",
             {{"prep_flip_min", c.prep_flip_min},
              {"prep_flip_max", c.prep_flip_max},
              {"meas_flip_min", c.meas_flip_min},
              {"meas_flip_max", c.meas_flip_max}}},
            {"dfe", {{"num_paulis", c.dfe.num_paulis}, {"num_twirls", c.dfe.num_twirls}, {"shots_per_twirl", c.dfe.shots_per_twirl}}},
            {"scrambler_depth", c.scrambler_depth},
            {"calib_shots", c.calib_shots},
            {"randomizations", c.randomizations},
            {"shots", c.shots},
            {"layer_depths", c.layer_depths},
            {"threads", c.threads},
            {"seed", c.seed},
            {"output_dir", c.output_dir},
            {"paper_scale", c.paper_scale}};
}

/// Hash of the run-defining fields; output location and thread count do not
/// change results and are left out.
inline std::string config_hash(const ExperimentConfig &c) {
    nlohmann::json j = config_to_json(c);
    j.erase("output_dir");
    j.erase("threads");
    std::string text = j.dump() + "|" + kToolkitVersion;
    uint64_t h = cliffproxy::detail::fnv1a(text);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace cliffproxy::bench
