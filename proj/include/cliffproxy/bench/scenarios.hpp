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

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cliffproxy/bench/config.hpp"
#include "cliffproxy/bench/csv.hpp"
#include "cliffproxy/bench/svg.hpp"
#include "cliffproxy/circuit.hpp"
#include "cliffproxy/dense.hpp"
#include "cliffproxy/diamond.hpp"
#include "cliffproxy/estimators.hpp"
#include "cliffproxy/noise.hpp"

namespace cliffproxy::bench {

/// Runs fn(i) for i in [0, count) on a small pool. Results must be written
/// to per-index slots; the first exception is rethrown after all workers stop.
inline void parallel_for(size_t count, size_t threads, const std::function<void(size_t)> &fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<size_t>(count, 1));
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
                return;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < threads; t++) pool.emplace_back(worker);
        for (auto &th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
}

struct FileEntry {
    std::string path;
    uint64_t bytes = 0;
    std::string hash;
};

struct RunManifest {
    std::string config_hash;
    std::string version = kToolkitVersion;
    std::string scenario;
    std::string status = "complete";
    std::vector<FileEntry> files;
    std::vector<std::pair<std::string, double>> timings;

    nlohmann::json to_json() const {
        nlohmann::json f = nlohmann::json::array();
        for (const auto &e : files) f.push_back({{"path", e.path}, {"bytes", e.bytes}, {"fnv1a", e.hash}});
        nlohmann::json t = nlohmann::json::object();
        for (const auto &[k, v] : timings) t[k] = v;
        return {{"config_hash", config_hash}, {"version", version}, {"scenario", scenario},
                {"status", status},           {"files", f},         {"timings_seconds", t}};
    }
};

/// Collects the outputs of one scenario run.
class RunOutput {
   public:
    explicit RunOutput(const ExperimentConfig &cfg) : cfg_(cfg), dir_(cfg.output_dir) {
        std::filesystem::create_directories(dir_);
        manifest_.config_hash = config_hash(cfg);
        manifest_.scenario = cfg.scenario;
    }

    std::vector<ResultRow> results;

    void write_table(const std::string &name, const CsvTable &t) {
        write(name, to_csv(t));
    }

    void write(const std::string &name, const std::string &content) {
        write_file_atomic((dir_ / name).string(), content);
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(cliffproxy::detail::fnv1a(content)));
        manifest_.files.push_back({name, content.size(), buf});
    }

    void summary(const std::string &stem, FigureKind kind, const std::vector<CsvRow> &rows) {
        CsvTable t{summary_header(kind), rows};
        write_table(stem + "_summary.csv", t);
        if (!rows.empty()) write(stem + ".svg", render_figure(t, kind));
    }

    void time(const std::string &label, double seconds) {
        manifest_.timings.push_back({label, seconds});
    }

    /// Results table and manifest; the manifest goes last and atomically.
    RunManifest finish(const std::string &status = "complete") {
        CsvTable t{results_header(), {}};
        for (const auto &r : results) t.rows.push_back(r.to_csv());
        write_table("results.csv", t);
        manifest_.status = status;
        write_file_atomic((dir_ / "manifest.json").string(), manifest_.to_json().dump(2) + "\n");
        return manifest_;
    }

   private:
    const ExperimentConfig &cfg_;
    std::filesystem::path dir_;
    RunManifest manifest_;
};

namespace detail {

inline Topology topology_of(const ExperimentConfig &c) {
    return c.topology == "ring" ? Topology::Ring : Topology::Line;
}

inline std::vector<std::string> kinds_of(const ExperimentConfig &c) {
    if (c.circuit_kind == "both") return {"disordered", "periodic"};
    return {c.circuit_kind};
}

inline std::string num(double v) {
    return exact_decimal(v);
}

struct Target {
    std::string id;
    size_t n = 0;
    std::string kind;
    size_t depth = 0;
    LayeredCircuit circuit;
    NoiseModel noise;
    uint64_t seed = 0;
};

/// Targets shared by the uniformity and accuracy studies; depths spread
/// evenly up to the largest configured depth.
inline std::vector<Target> study_targets(const ExperimentConfig &c) {
    std::vector<Target> out;
    const size_t max_depth = *std::max_element(c.depths.begin(), c.depths.end());
    for (size_t n : c.widths) {
        for (const auto &kind : kinds_of(c)) {
            for (size_t k = 0; k < c.targets; k++) {
                Target t;
                t.n = n;
                t.kind = kind;
                t.depth = std::max<size_t>(1, (max_depth * (k + 1) + c.targets / 2) / c.targets);
                t.id = "n" + std::to_string(n) + "-" + kind + "-" + std::to_string(k);
                t.seed = derive_seed(c.seed, "target", n, kind, k);
                Rng rng(t.seed);
                BrickworkSpec spec{n, t.depth, topology_of(c), 0, TwoQubitGate::CZ};
                t.circuit = kind == "periodic" ? sample_periodic(spec, GateKind::Haar, rng)
                                               : sample_brickwork(spec, GateKind::Haar, rng);
                t.noise = sample_error_model(t.circuit, rng, c.two_qubit_budget, c.one_qubit_budget, c.markovian);
                out.push_back(std::move(t));
            }
        }
    }
    return out;
}

/// Exact infidelities of the target's Cliffordizations.
inline std::vector<double> cliffordization_infidelities(const Target &t, size_t count) {
    std::vector<double> r;
    r.reserve(count);
    for (size_t i = 0; i < count; i++) {
        Rng rng = seed_derive(t.seed, "cliffordization", i);
        r.push_back(process_infidelity_exact(cliffordize(t.circuit, rng), t.noise));
    }
    return r;
}

inline SpamModel sample_spam(const ExperimentConfig &c, size_t n, Rng &rng) {
    SpamModel s = SpamModel::none(n);
    for (size_t q = 0; q < n; q++) {
        s.prep_flip[q] = rng.uniform(c.prep_flip_min, c.prep_flip_max);
        double m = rng.uniform(c.meas_flip_min, c.meas_flip_max);
        s.meas_flip_0to1[q] = m;
        s.meas_flip_1to0[q] = m;
    }
    return s;
}

inline void add_estimate(std::vector<ResultRow> &rows, const std::string &id, const std::string &protocol, size_t n,
                         size_t depth, size_t rid, const FidelityEstimate &e, size_t shots) {
    rows.push_back({id, protocol, n, depth, rid, "", e.mean, e.std_error, shots, e.seed});
    for (const auto &rec : e.records) rows.push_back({id, protocol + "/pauli", n, depth, rid, rec.pauli, rec.mean_parity, 0.0, rec.shots, e.seed});
}

inline void run_uniformity(const ExperimentConfig &c, RunOutput &out) {
    auto targets = study_targets(c);
    std::vector<std::vector<double>> r(targets.size());
    parallel_for(targets.size(), c.threads, [&](size_t i) { r[i] = cliffordization_infidelities(targets[i], c.cliffordizations); });
    CsvTable per{{"experiment_id", "n", "kind", "depth", "mu_r", "sigma_r", "cv"}, {}};
    std::vector<CsvRow> hist;
    for (size_t i = 0; i < targets.size(); i++) {
        const auto &t = targets[i];
        for (size_t k = 0; k < r[i].size(); k++) {
            out.results.push_back({t.id, "cliffordization-exact", t.n, t.depth, k, "", r[i][k], 0.0, 0, t.seed});
        }
        CvResult cv = coefficient_of_variation(r[i]);
        per.rows.push_back({t.id, std::to_string(t.n), t.kind, std::to_string(t.depth), num(cv.mean), num(cv.sd), num(cv.ratio)});
        hist.push_back({"n=" + std::to_string(t.n) + " " + t.kind, num(cv.ratio)});
    }
    out.write_table("uniformity_targets.csv", per);
    out.summary("uniformity", FigureKind::Hist, hist);
}

inline void run_accuracy(const ExperimentConfig &c, RunOutput &out) {
    auto targets = study_targets(c);
    struct Row {
        double dia = 0, gap = 0, mu = 0, sigma = 0, r_target = 0, r_bar = 0;
    };
    std::vector<Row> rows(targets.size());
    parallel_for(targets.size(), c.threads, [&](size_t i) {
        const auto &t = targets[i];
        auto r = cliffordization_infidelities(t, c.cliffordizations);
        CvResult cv = coefficient_of_variation(r);
        Ptm ideal = circuit_ptm(t.circuit);
        Ptm noisy = circuit_ptm(t.circuit, &t.noise);
        DiamondResult d = diamond_distance_detailed(ideal, noisy);
        rows[i] = {d.value, d.gap, cv.mean, cv.sd, 1.0 - process_fidelity(ideal, noisy), summed_layer_infidelity(t.circuit, t.noise)};
    });
    CsvTable per{{"experiment_id", "n", "kind", "depth", "diamond", "solver_gap", "mu_r", "abs_diff", "r_target", "r_bar"}, {}};
    std::vector<CsvRow> scatter;
    for (size_t i = 0; i < targets.size(); i++) {
        const auto &t = targets[i];
        const auto &x = rows[i];
        double diff = std::abs(x.dia - x.mu);
        out.results.push_back({t.id, "diamond-sdp", t.n, t.depth, 0, "", x.dia, x.gap, 0, t.seed});
        out.results.push_back({t.id, "cliffordization-mean", t.n, t.depth, 0, "", x.mu,
                               x.sigma / std::sqrt(static_cast<double>(c.cliffordizations)), 0, t.seed});
        out.results.push_back({t.id, "target-infidelity", t.n, t.depth, 0, "", x.r_target, 0.0, 0, t.seed});
        out.results.push_back({t.id, "summed-layer-infidelity", t.n, t.depth, 0, "", x.r_bar, 0.0, 0, t.seed});
        per.rows.push_back({t.id, std::to_string(t.n), t.kind, std::to_string(t.depth), num(x.dia), num(x.gap), num(x.mu),
                            num(diff), num(x.r_target), num(x.r_bar)});
        scatter.push_back({t.kind, num(x.dia), num(diff)});
    }
    out.write_table("accuracy_targets.csv", per);
    out.summary("accuracy", FigureKind::Scatter, scatter);
}

inline CsvRow bar(const std::string &group, const std::string &series, double v, double e) {
    return {group, series, num(v), num(e)};
}

inline void run_spam_compare(const ExperimentConfig &c, RunOutput &out) {
    struct Unit {
        size_t n, depth;
    };
    std::vector<Unit> units;
    for (size_t n : c.widths) {
        for (size_t d : c.depths) units.push_back({n, d});
    }
    std::vector<std::vector<std::pair<std::string, FidelityEstimate>>> res(units.size());
    parallel_for(units.size(), c.threads, [&](size_t i) {
        const auto [n, d] = units[i];
        Rng dev = seed_derive(c.seed, "device", n);
        NoiseModel device = sample_device_noise(n, Topology::Line, dev, {c.two_qubit_budget, c.one_qubit_budget});
        SpamModel spam = sample_spam(c, n, dev);
        Rng rng = seed_derive(c.seed, "depth", n, d);
        LayeredCircuit target = sample_brickwork({n, d, Topology::Line, 0, TwoQubitGate::CZ}, GateKind::Haar, rng);
        NoiseModel noise = device.bind(target);
        LayeredCircuit proxy = cliffordize(target, rng);
        DfeOptions o;
        o.randomization = Randomization::Combined;
        o.target = &target;
        Rng r1 = seed_derive(c.seed, "unmitigated", n, d), r2 = seed_derive(c.seed, "reference", n, d),
            r3 = seed_derive(c.seed, "readout", n, d), r4 = seed_derive(c.seed, "layer", n, d),
            r5 = seed_derive(c.seed, "exact", n, d);
        auto &v = res[i];
        v.push_back({"unmitigated", dfe(proxy, noise, spam, c.dfe, r1, o)});
        LayeredCircuit scr = scrambling_circuit(n, c.scrambler_depth, r2);
        ReferenceOptions ro;
        ro.dfe = o;
        v.push_back({"reference", dfe_with_reference(proxy, scr, noise, spam, c.dfe, r2, ro)});
        v.push_back({"readout", readout_mitigated_dfe(proxy, noise, spam, c.dfe, c.calib_shots, r3, o)});
        LayerFidelityResult lf = layer_fidelity_estimate(target, noise, c.layer_depths, c.dfe, r4, &spam);
        FidelityEstimate lfe;
        lfe.mean = lf.predicted_fidelity;
        lfe.std_error = lf.predicted_stderr;
        v.push_back({"layer-fidelity", lfe});
        if (n <= kDefaultFoldLimit) {
            std::vector<double> f;
            for (size_t k = 0; k < c.cliffordizations; k++) f.push_back(1.0 - process_infidelity_exact(cliffordize(target, r5), noise));
            CvResult cv = coefficient_of_variation(f);
            FidelityEstimate e;
            e.mean = cv.mean;
            e.std_error = cv.sd / std::sqrt(static_cast<double>(f.size()));
            v.push_back({"exact", e});
        }
    });
    std::vector<CsvRow> bars;
    for (size_t i = 0; i < units.size(); i++) {
        const auto [n, d] = units[i];
        std::string id = "n" + std::to_string(n) + "-d" + std::to_string(d);
        for (const auto &[name, e] : res[i]) {
            add_estimate(out.results, id, name, n, d, 0, e, name == "exact" ? 0 : c.dfe.total_shots());
            bars.push_back(bar((c.widths.size() > 1 ? "n=" + std::to_string(n) + " " : "") + "d=" + std::to_string(d), name,
                               e.mean, e.std_error));
        }
    }
    out.summary("spam_compare", FigureKind::Bars, bars);
}

inline void run_volumetric(const ExperimentConfig &c, RunOutput &out) {
    Rng rng(derive_seed(c.seed, "volumetric"));
    VolumetricOptions opt;
    opt.scrambler_depth = c.scrambler_depth;
    opt.calib_shots = c.calib_shots;
    opt.layer_depths = c.layer_depths;
    opt.exact_samples = std::min<size_t>(c.cliffordizations, 10);
    SpamLevels lv{0.5 * (c.prep_flip_min + c.prep_flip_max), 0.5 * (c.meas_flip_min + c.meas_flip_max)};
    auto cells = volumetric_run(c.widths, c.depths, {c.two_qubit_budget, c.one_qubit_budget}, lv, c.dfe, rng, opt);
    std::vector<CsvRow> bars;
    CsvTable failures{{"experiment_id", "method", "message"}, {}};
    for (const auto &cell : cells) {
        std::string id = "n" + std::to_string(cell.n) + "-d" + std::to_string(cell.depth);
        std::string group = "n=" + std::to_string(cell.n) + " d=" + std::to_string(cell.depth);
        for (auto [name, est] : {std::pair<const char *, const CellEstimate *>{"unmitigated", &cell.unmitigated},
                                 {"reference", &cell.reference},
                                 {"readout", &cell.readout},
                                 {"layer-fidelity", &cell.layer_fidelity},
                                 {"exact", &cell.exact}}) {
            if (!est->value) {
                failures.rows.push_back({id, name, est->failure});
                continue;
            }
            add_estimate(out.results, id, name, cell.n, cell.depth, 0, *est->value, c.dfe.total_shots());
            bars.push_back(bar(group, name, est->value->mean, est->value->std_error));
        }
    }
    out.write_table("volumetric_failures.csv", failures);
    out.summary("volumetric", FigureKind::Bars, bars);
}

inline void run_xeb_compare(const ExperimentConfig &c, RunOutput &out) {
    struct Unit {
        size_t n, depth, k;
    };
    std::vector<Unit> units;
    for (size_t n : c.widths) {
        for (size_t d : c.depths) {
            for (size_t k = 0; k < c.randomizations; k++) units.push_back({n, d, k});
        }
    }
    struct Res {
        FidelityEstimate xe, dfe_est;
        double exact = 0;
    };
    std::vector<Res> res(units.size());
    parallel_for(units.size(), c.threads, [&](size_t i) {
        const auto [n, d, k] = units[i];
        Rng dev = seed_derive(c.seed, "device", n);
        NoiseModel device = sample_device_noise(n, topology_of(c), dev, {c.two_qubit_budget, c.one_qubit_budget});
        SpamModel spam = sample_spam(c, n, dev);
        Rng rng = seed_derive(c.seed, "xeb", n, d, k);
        LayeredCircuit target = sample_brickwork({n, d, topology_of(c), 0, TwoQubitGate::CZ}, GateKind::Haar, rng);
        NoiseModel noise = device.bind(target);
        auto samples = statevector_simulate(target, &noise, rng, c.shots, &spam);
        res[i].xe = xeb_from_samples(samples, ideal_output_probs(target));
        double f = 0;
        for (size_t j = 0; j < c.cliffordizations; j++) f += 1.0 - process_infidelity_exact(cliffordize(target, rng), noise);
        res[i].exact = f / static_cast<double>(c.cliffordizations);
        DfeOptions o;
        o.randomization = Randomization::Combined;
        o.target = &target;
        res[i].dfe_est = dfe(cliffordize(target, rng), noise, spam, c.dfe, rng, o);
    });
    std::vector<CsvRow> bars;
    size_t i = 0;
    for (size_t n : c.widths) {
        for (size_t d : c.depths) {
            std::vector<double> xe, ex, df;
            for (size_t k = 0; k < c.randomizations; k++, i++) {
                std::string id = "n" + std::to_string(n) + "-d" + std::to_string(d);
                add_estimate(out.results, id, "xeb", n, d, k, res[i].xe, c.shots);
                out.results.push_back({id, "cliffordization-exact", n, d, k, "", res[i].exact, 0.0, 0, 0});
                add_estimate(out.results, id, "cliffordization-dfe", n, d, k, res[i].dfe_est, c.dfe.total_shots());
                xe.push_back(res[i].xe.mean);
                ex.push_back(res[i].exact);
                df.push_back(res[i].dfe_est.mean);
            }
            std::string group = (c.widths.size() > 1 ? "n=" + std::to_string(n) + " " : "") + "d=" + std::to_string(d);
            for (auto [name, v] : {std::pair<const char *, std::vector<double> *>{"xeb", &xe}, {"cliffordization-exact", &ex},
                                   {"cliffordization-dfe", &df}}) {
                double m = 0;
                for (double x : *v) m += x;
                m /= static_cast<double>(v->size());
                double se = v->size() > 1 ? cliffproxy::detail::sample_std(*v, m) / std::sqrt(static_cast<double>(v->size())) : 0.0;
                bars.push_back(bar(group, name, m, se));
            }
        }
    }
    out.summary("xeb_compare", FigureKind::Bars, bars);
}

}  // namespace detail

/// Executes one named study and writes its CSV tables, figures and manifest
/// into the configured output directory.
inline RunManifest run_scenario(const ExperimentConfig &cfg) {
    validate_config(cfg);
    RunOutput out(cfg);
    auto t0 = std::chrono::steady_clock::now();
    try {
        if (cfg.scenario == "uniformity") {
            detail::run_uniformity(cfg, out);
        } else if (cfg.scenario == "accuracy") {
            detail::run_accuracy(cfg, out);
        } else if (cfg.scenario == "spam-compare") {
            detail::run_spam_compare(cfg, out);
        } else if (cfg.scenario == "volumetric") {
            detail::run_volumetric(cfg, out);
        } else if (cfg.scenario == "xeb-compare") {
            detail::run_xeb_compare(cfg, out);
        }
    } catch (...) {
        out.time(cfg.scenario, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        out.finish("failed");
        throw;
    }
    out.time(cfg.scenario, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return out.finish();
}

}  // namespace cliffproxy::bench
