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


#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cliffproxy/bench/config.hpp"
#include "cliffproxy/bench/scenarios.hpp"
#include "cliffproxy/bench/svg.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

using namespace cliffproxy;
using namespace cliffproxy::bench;

ExperimentConfig load_config(const std::string &path, const std::string &scenario, bool paper_scale) {
    if (path.empty()) {
        ExperimentConfig c = scenario_defaults(scenario, paper_scale);
        validate_config(c);
        return c;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError({std::string("invalid JSON: ") + e.what()});
    } catch (const Error &e) {
        throw ConfigError({e.what()});
    }
    return config_from_json(j, scenario, paper_scale);
}

void report(const ConfigError &e) {
    std::cerr << "config error:\n";
    for (const auto &p : e.problems()) std::cerr << "  - " << p << "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Clifford proxy circuit benchmarking toolkit"};
    app.set_version_flag("--version", kToolkitVersion);
    app.require_subcommand(1);

    std::string scenario, config_path, out_dir;
    uint64_t seed = 0;
    bool have_seed = false, paper_scale = false;
    size_t threads = 0;
    bool have_threads = false;
    auto *run = app.add_subcommand("run", "Run a simulation study");
    run->add_option("scenario", scenario, "uniformity | accuracy | spam-compare | volumetric | xeb-compare")->required();
    run->add_option("--config", config_path, "Config JSON file");
    run->add_option("--seed", seed, "Master seed")->each([&](const std::string &) { have_seed = true; });
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--threads", threads, "Worker threads (0 = all cores)")->each([&](const std::string &) { have_threads = true; });
    run->add_flag("--paper-scale", paper_scale, "Use full-scale study parameters");

    std::string csv_path, kind_name, svg_path;
    auto *plot = app.add_subcommand("plot", "Render an SVG figure from a summary CSV");
    plot->add_option("csv", csv_path, "Summary CSV")->required();
    plot->add_option("--kind", kind_name, "hist | bars | scatter")->required();
    plot->add_option("--out", svg_path, "Output SVG (default: CSV path with .svg)");

    std::string validate_path;
    auto *validate = app.add_subcommand("validate", "Check a config file");
    validate->add_option("config", validate_path, "Config JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (*validate) {
        try {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(read_file(validate_path));
            } catch (const nlohmann::json::exception &e) {
                throw ConfigError({std::string("invalid JSON: ") + e.what()});
            } catch (const Error &e) {
                throw ConfigError({e.what()});
            }
            ExperimentConfig c = config_from_json(j);
            std::cout << "ok " << c.scenario << " " << config_hash(c) << "\n";
            return kExitOk;
        } catch (const ConfigError &e) {
            report(e);
            return kExitConfig;
        }
    }

    if (*plot) {
        FigureKind kind;
        try {
            kind = figure_kind_from_name(kind_name);
        } catch (const Error &e) {
            std::cerr << e.what() << "\n";
            return kExitConfig;
        }
        if (svg_path.empty()) svg_path = std::filesystem::path(csv_path).replace_extension(".svg").string();
        try {
            emit_figure(csv_path, kind, svg_path);
        } catch (const std::exception &e) {
            std::cerr << "plot failed: " << e.what() << "\n";
            return kExitRuntime;
        }
        std::cout << svg_path << "\n";
        return kExitOk;
    }

    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path, scenario, paper_scale);
        if (have_seed) cfg.seed = seed;
        if (have_threads) cfg.threads = threads;
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        validate_config(cfg);
    } catch (const ConfigError &e) {
        report(e);
        return kExitConfig;
    }
    try {
        RunManifest m = run_scenario(cfg);
        std::cout << m.scenario << " " << m.status << " " << m.config_hash << " -> " << cfg.output_dir << "\n";
    } catch (const std::exception &e) {
        std::cerr << "run failed: " << e.what() << "\n(partial results and manifest written to " << cfg.output_dir << ")\n";
        return kExitRuntime;
    }
    return kExitOk;
}
