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


#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cliffproxy/bench/scenarios.hpp"

using namespace cliffproxy;
using namespace cliffproxy::bench;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("cliffproxy_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ExperimentConfig tiny(const std::string &scenario, const fs::path &out) {
    ExperimentConfig c = scenario_defaults(scenario);
    c.output_dir = out.string();
    c.seed = 11;
    c.threads = 2;
    if (scenario == "uniformity" || scenario == "accuracy") {
        c.widths = {2};
        c.depths = {8};
        c.targets = 2;
        c.cliffordizations = 4;
    } else if (scenario == "xeb-compare") {
        c.widths = {3};
        c.depths = {2, 4};
        c.randomizations = 2;
        c.shots = 200;
        c.cliffordizations = 3;
        c.dfe = {8, 2, 50};
    } else {
        c.widths = {3};
        c.depths = {2, 4};
        c.dfe = {8, 2, 50};
        c.layer_depths = {1, 2, 4};
        c.cliffordizations = 3;
    }
    return c;
}

int run_cli(const std::string &args) {
    int rc = std::system((std::string(CLIFFPROXY_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(bench, parallel_for_fills_every_slot) {
    for (size_t threads : {1, 3, 8}) {
        std::vector<size_t> out(100, 0);
        parallel_for(out.size(), threads, [&](size_t i) { out[i] = i * i; });
        for (size_t i = 0; i < out.size(); i++) EXPECT_EQ(out[i], i * i);
    }
}

TEST(bench, parallel_for_rethrows) {
    std::atomic<int> done{0};
    EXPECT_THROW(parallel_for(50, 4,
                              [&](size_t i) {
                                  if (i == 7) throw Error("boom");
                                  done++;
                              }),
                 Error);
    EXPECT_LT(done.load(), 50);
}

TEST(bench, csv_round_trip) {
    CsvTable t{{"a", "b,c", "d"}, {{"1", "say \"hi\"", "line\nbreak"}, {"", "x", "3.5"}}};
    std::string text = to_csv(t);
    EXPECT_NE(text.find("\"b,c\""), std::string::npos);
    CsvTable back = parse_csv(text);
    EXPECT_EQ(back.header, t.header);
    EXPECT_EQ(back.rows, t.rows);
    EXPECT_THROW(parse_csv("a,b\n1\n"), Error);
}

TEST(bench, results_schema) {
    const CsvRow expect{"experiment_id", "protocol", "n", "depth", "randomization_id", "pauli", "estimate", "stderr", "shots", "seed"};
    EXPECT_EQ(results_header(), expect);
    ResultRow r;
    r.estimate = 0.1;
    CsvRow row = r.to_csv();
    ASSERT_EQ(row.size(), expect.size());
    EXPECT_EQ(std::stod(row[6]), 0.1);
}

TEST(bench, figures_render_and_refuse_empty) {
    fs::path dir = scratch("fig");
    CsvTable bars{summary_header(FigureKind::Bars), {{"4", "exact", "0.9", "0"}, {"4", "dfe", "0.89", "0.01"}}};
    write_file_atomic((dir / "b.csv").string(), to_csv(bars));
    emit_figure((dir / "b.csv").string(), FigureKind::Bars, (dir / "b.svg").string());
    std::string svg = read_file((dir / "b.svg").string());
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("exact"), std::string::npos);
    CsvTable hist{summary_header(FigureKind::Hist), {{"n=2", "1e-6"}, {"n=2", "3e-6"}, {"n=3", "2e-6"}}};
    EXPECT_NE(render_figure(hist, FigureKind::Hist).find("</svg>"), std::string::npos);
    CsvTable sc{summary_header(FigureKind::Scatter), {{"periodic", "0.1", "1e-8"}}};
    EXPECT_NE(render_figure(sc, FigureKind::Scatter).find("<circle"), std::string::npos);

    CsvTable empty{summary_header(FigureKind::Bars), {}};
    write_file_atomic((dir / "e.csv").string(), to_csv(empty));
    EXPECT_THROW(emit_figure((dir / "e.csv").string(), FigureKind::Bars, (dir / "e.svg").string()), Error);
    EXPECT_FALSE(fs::exists(dir / "e.svg"));
    EXPECT_THROW(render_figure(bars, FigureKind::Hist), Error);
    EXPECT_THROW(figure_kind_from_name("pie"), Error);
}

TEST(bench, config_parsing) {
    ExperimentConfig c = config_from_json(nlohmann::json::parse(
        R"({"scenario":"accuracy","widths":[2,3],"noise":{"two_qubit_budget":0.002},"dfe":{"num_paulis":7}})"));
    EXPECT_EQ(c.widths, (std::vector<size_t>{2, 3}));
    EXPECT_EQ(c.two_qubit_budget, 0.002);
    EXPECT_EQ(c.dfe.num_paulis, 7u);
    EXPECT_EQ(c.dfe.num_twirls, 32u);
    try {
        config_from_json(nlohmann::json::parse(R"({"scenario":"uniformity","bogus":1,"extra":2})"));
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.problems().size(), 2u);
    }
    try {
        ExperimentConfig bad = scenario_defaults("uniformity");
        bad.targets = 0;
        bad.topology = "torus";
        bad.widths = {1, 20};
        validate_config(bad);
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_GE(e.problems().size(), 4u);
    }
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"widths":[2]})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"scenario":"accuracy","widths":[4]})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"scenario":"accuracy","widths":"two"})")), ConfigError);
}

TEST(bench, scale_defaults) {
    ExperimentConfig small = scenario_defaults("uniformity"), full = scenario_defaults("uniformity", true);
    EXPECT_EQ(small.cliffordizations, 100u);
    EXPECT_EQ(full.cliffordizations, 500u);
    EXPECT_EQ(full.targets, 100u);
    ExperimentConfig spam = scenario_defaults("spam-compare");
    EXPECT_EQ(spam.widths, std::vector<size_t>{8});
    EXPECT_EQ(spam.scrambler_depth, 4u);
    ExperimentConfig x = scenario_defaults("xeb-compare");
    EXPECT_EQ(x.randomizations, 20u);
    EXPECT_EQ(x.shots, 10000u);
    for (const auto &s : scenario_names()) EXPECT_NO_THROW(validate_config(scenario_defaults(s)));
}

TEST(bench, config_hash_is_stable) {
    ExperimentConfig a = scenario_defaults("accuracy"), b = scenario_defaults("accuracy");
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.seed = 1;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(config_to_json(config_from_json(config_to_json(a))), config_to_json(a));
}

TEST(bench, scenarios_are_reproducible) {
    for (const auto &s : scenario_names()) {
        fs::path d1 = scratch(s + "_1"), d2 = scratch(s + "_2");
        ExperimentConfig c1 = tiny(s, d1), c2 = tiny(s, d2);
        c2.threads = 1;
        RunManifest m1 = run_scenario(c1), m2 = run_scenario(c2);
        EXPECT_EQ(m1.status, "complete");
        ASSERT_EQ(m1.files.size(), m2.files.size()) << s;
        for (size_t i = 0; i < m1.files.size(); i++) {
            EXPECT_EQ(m1.files[i].path, m2.files[i].path);
            EXPECT_EQ(m1.files[i].hash, m2.files[i].hash) << s << " " << m1.files[i].path;
        }
        EXPECT_TRUE(fs::exists(d1 / "manifest.json"));
        CsvTable res = parse_csv(read_file((d1 / "results.csv").string()));
        EXPECT_EQ(res.header, results_header());
        EXPECT_FALSE(res.rows.empty()) << s;
    }
}

TEST(bench, accuracy_columns) {
    fs::path d = scratch("acc_cols");
    run_scenario(tiny("accuracy", d));
    CsvTable t = parse_csv(read_file((d / "accuracy_targets.csv").string()));
    for (const char *col : {"diamond", "solver_gap", "mu_r", "abs_diff", "r_target", "r_bar"}) {
        EXPECT_NE(std::find(t.header.begin(), t.header.end(), col), t.header.end()) << col;
    }
    EXPECT_EQ(t.rows.size(), 4u);
    EXPECT_TRUE(fs::exists(d / "accuracy.svg"));
}

TEST(bench, cli_exit_codes) {
    fs::path d = scratch("cli");
    std::ofstream(d / "good.json") << R"({"scenario":"uniformity","widths":[2],"depths":[6],"targets":2,"cliffordizations":3})";
    std::ofstream(d / "bad.json") << R"({"scenario":"uniformity","bogus":1})";
    EXPECT_EQ(run_cli("--version"), 0);
    EXPECT_EQ(run_cli("validate " + (d / "good.json").string()), 0);
    EXPECT_EQ(run_cli("validate " + (d / "bad.json").string()), 2);
    EXPECT_EQ(run_cli("run uniformity --config " + (d / "good.json").string() + " --out " + (d / "o").string()), 0);
    EXPECT_TRUE(fs::exists(d / "o" / "uniformity.svg"));
    EXPECT_EQ(run_cli("run nonsense"), 2);
    EXPECT_EQ(run_cli("plot " + (d / "o" / "uniformity_summary.csv").string() + " --kind hist --out " +
                      (d / "re.svg").string()),
              0);
    EXPECT_EQ(read_file((d / "re.svg").string()), read_file((d / "o" / "uniformity.svg").string()));
    std::ofstream(d / "empty.csv") << "group,value\n";
    EXPECT_EQ(run_cli("plot " + (d / "empty.csv").string() + " --kind hist --out " + (d / "e.svg").string()), 3);
    EXPECT_FALSE(fs::exists(d / "e.svg"));
}
