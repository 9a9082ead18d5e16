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
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cliffproxy/circuit.hpp"
#include "cliffproxy/dense.hpp"
#include "cliffproxy/errors.hpp"
#include "cliffproxy/noise.hpp"
#include "cliffproxy/pauli.hpp"
#include "cliffproxy/rng.hpp"

namespace cliffproxy {

struct DfeConfig {
    size_t num_paulis = 30;
    size_t num_twirls = 32;
    size_t shots_per_twirl = 100;

    void validate() const {
        if (num_paulis < 1 || num_twirls < 1) throw Error("DFE needs at least one Pauli and one twirl");
        if (shots_per_twirl < 1) throw Error("DFE needs at least one shot per twirl");
    }
    size_t total_shots() const {
        return num_paulis * num_twirls * shots_per_twirl;
    }
};

/// How each twirl instance is randomized.
enum class Randomization {
    None,        // the given Clifford circuit as is
    PauliFrame,  // fresh Pauli twirl of the given circuit
    Combined,    // fresh Cliffordization of `target`, then a Pauli twirl
};

struct DfeOptions {
    Randomization randomization = Randomization::PauliFrame;
    const LayeredCircuit *target = nullptr;
    /// Leading one-qubit layers copied from the Clifford circuit rather than
    /// redrawn in Combined mode (holds a scrambler prefix fixed).
    size_t frozen_one_qubit_layers = 0;
    /// Draw every fault of every shot instead of sampling the exact parity law.
    bool per_shot_faults = false;
    bool keep_records = false;
};

struct PauliRecord {
    std::string pauli;
    double mean_parity = 0;
    size_t shots = 0;
};

struct FidelityEstimate {
    double mean = 0;
    double std_error = 0;
    size_t num_samples = 0;
    std::string circuit_id;
    uint64_t seed = 0;
    std::vector<PauliRecord> records;
};

inline double pauli_space_size(size_t n) {
    return std::ldexp(1.0, static_cast<int>(2 * n));
}

inline double polarization_from_fidelity(double f, size_t n) {
    double d2 = pauli_space_size(n);
    return (d2 * f - 1.0) / (d2 - 1.0);
}

inline double fidelity_from_polarization(double p, size_t n) {
    return p + (1.0 - p) / pauli_space_size(n);
}

namespace detail {

/// Moves an observable from just after layer l to just before it.
inline void pull_back_through_layer(const LayeredCircuit &c, size_t l, PauliString &p) {
    if (LayeredCircuit::is_one_qubit_layer(l)) {
        const auto &layer = c.one_qubit_layer_at(l);
        for (size_t q = 0; q < c.n; q++) apply_clifford(p, q, one_qubit_clifford(layer[q].clifford_index()).inverse);
    } else {
        const auto &layer = c.entangling_layer_at(l);
        for (auto [a, b] : layer.pairs) apply_two_qubit(p, layer.gate, a, b);
    }
}

/// Everything a shot's parity depends on for one (observable, instance).
struct ParityModel {
    PauliString prepared;                      // back-propagated observable
    std::vector<PauliString> observable_at;    // observable seen by the fault after layer l
    std::vector<LayerErrorChannel> channels;
    double expectation = 1;                    // exact E[parity]
};

inline ParityModel parity_model(const LayeredCircuit &c, const NoiseModel &noise, const SpamModel &spam,
                                const PauliString &p, bool keep_layers) {
    ParityModel m;
    const size_t L = c.num_layers();
    PauliString cur = p;
    cur.set_phase(0);
    if (keep_layers) {
        m.observable_at.resize(L, cur);
        m.channels.resize(L);
    }
    for (size_t l = L; l-- > 0;) {
        LayerErrorChannel ch = layer_channel(c, noise, l);
        m.expectation *= ch.eigenvalue(cur);
        if (keep_layers) {
            m.observable_at[l] = cur;
            m.channels[l] = std::move(ch);
        }
        pull_back_through_layer(c, l, cur);
    }
    cur.set_phase(0);
    for (size_t q = 0; q < c.n; q++) {
        if (cur.get(q)) m.expectation *= 1.0 - 2.0 * spam.prep_flip[q];
        if (p.get(q)) m.expectation *= 1.0 - 2.0 * spam.twirled_meas_flip(q);
    }
    m.prepared = cur;
    return m;
}

/// Mean of `shots` signed parities for one instance.
inline double sample_mean_parity(const LayeredCircuit &c, const NoiseModel &noise, const SpamModel &spam,
                                 const PauliString &p, size_t shots, bool per_shot, Rng &rng) {
    ParityModel m = parity_model(c, noise, spam, p, per_shot);
    if (!per_shot) {
        double flip = std::clamp(0.5 * (1.0 - m.expectation), 0.0, 1.0);
        uint64_t neg = rng.binomial(shots, flip);
        return 1.0 - 2.0 * static_cast<double>(neg) / static_cast<double>(shots);
    }
    long total = 0;
    for (size_t s = 0; s < shots; s++) {
        bool flip = false;
        for (size_t l = 0; l < m.channels.size(); l++) {
            PauliString f = m.channels[l].sample(rng);
            if (!commutes(f, m.observable_at[l])) flip = !flip;
        }
        for (size_t q = 0; q < c.n; q++) {
            if (m.prepared.get(q) && rng.bernoulli(spam.prep_flip[q])) flip = !flip;
            if (p.get(q) && rng.bernoulli(spam.twirled_meas_flip(q))) flip = !flip;
        }
        total += flip ? -1 : 1;
    }
    return static_cast<double>(total) / static_cast<double>(shots);
}

inline double sample_std(const std::vector<double> &v, double mean) {
    if (v.size() < 2) return 0;
    double s = 0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

/// Shared DFE loop. `scale` maps an observable to the factor its measured
/// parity is divided by (1 for plain DFE).
inline FidelityEstimate dfe_core(const LayeredCircuit &circuit, const NoiseModel &noise, const SpamModel &spam,
                                 const DfeConfig &config, Rng &rng, const DfeOptions &opt,
                                 const std::function<double(const PauliString &)> &scale) {
    config.validate();
    require_clifford(circuit);
    noise.check_covers(circuit);
    spam.validate(circuit.n);
    if (opt.randomization == Randomization::Combined) {
        if (!opt.target) throw Error("combined randomization needs the target circuit");
        if (opt.target->n != circuit.n || opt.target->depth() != circuit.depth()) {
            throw Error("target circuit does not match the Clifford circuit's layout");
        }
    }
    const size_t n = circuit.n;
    const uint64_t base = rng.next_u64();
    std::vector<double> per_pauli;
    FidelityEstimate est;
    est.seed = base;
    for (size_t k = 0; k < config.num_paulis; k++) {
        Rng prng = seed_derive(base, "pauli", k);
        PauliString p = sample_uniform_nonidentity(n, prng);
        double sum = 0;
        for (size_t t = 0; t < config.num_twirls; t++) {
            Rng trng = seed_derive(base, "pauli", k, "twirl", t);
            LayeredCircuit instance;
            switch (opt.randomization) {
                case Randomization::None: instance = circuit; break;
                case Randomization::PauliFrame: instance = pauli_twirl(circuit, trng); break;
                case Randomization::Combined: {
                    LayeredCircuit fresh = cliffordize(*opt.target, trng);
                    for (size_t j = 0; j < std::min(opt.frozen_one_qubit_layers, fresh.one_qubit_layers.size()); j++) {
                        fresh.one_qubit_layers[j] = circuit.one_qubit_layers[j];
                    }
                    instance = pauli_twirl(fresh, trng);
                    break;
                }
            }
            sum += sample_mean_parity(instance, noise, spam, p, config.shots_per_twirl, opt.per_shot_faults, trng);
        }
        double mean = sum / static_cast<double>(config.num_twirls) / scale(p);
        per_pauli.push_back(mean);
        if (opt.keep_records) est.records.push_back({p.str(), mean, config.num_twirls * config.shots_per_twirl});
    }
    double m = 0;
    for (double v : per_pauli) m += v;
    m /= static_cast<double>(per_pauli.size());
    const double d2 = pauli_space_size(n);
    const double w = (d2 - 1.0) / d2;
    est.mean = 1.0 / d2 + w * m;
    double sd = sample_std(per_pauli, m);
    if (per_pauli.size() < 2) {
        // One observable: fall back to the shot-noise bound.
        sd = std::sqrt(std::max(0.0, 1.0 - m * m) / static_cast<double>(config.num_twirls * config.shots_per_twirl));
        est.std_error = w * sd;
    } else {
        est.std_error = w * sd / std::sqrt(static_cast<double>(per_pauli.size()));
    }
    est.num_samples = per_pauli.size();
    return est;
}

}  // namespace detail

/// Direct fidelity estimation of a Clifford circuit: sample non-identity
/// observables, back-propagate, and average measured parities.
inline FidelityEstimate dfe(const LayeredCircuit &circuit, const NoiseModel &noise, const SpamModel &spam,
                            const DfeConfig &config, Rng &rng, const DfeOptions &opt = {}) {
    return detail::dfe_core(circuit, noise, spam, config, rng, opt, [](const PauliString &) { return 1.0; });
}

/// Noise model of concatenate(first, second): the two models side by side,
/// with a noiseless joining layer.
inline NoiseModel concatenate_noise(const NoiseModel &first, const NoiseModel &second) {
    if (first.n != second.n) throw DimensionError("noise models of different widths");
    NoiseModel m;
    m.n = first.n;
    m.markovian = first.markovian && second.markovian;
    m.entangling = first.entangling;
    m.entangling.emplace_back();
    m.entangling.insert(m.entangling.end(), second.entangling.begin(), second.entangling.end());
    m.single = first.single;
    m.single.insert(m.single.end(), second.single.begin(), second.single.end());
    m.coupler_table = first.coupler_table;
    m.coupler_table.insert(second.coupler_table.begin(), second.coupler_table.end());
    m.qubit_table = first.qubit_table;
    return m;
}

struct ReferenceOptions {
    double floor = 0.01;
    DfeOptions dfe;
    /// Noise of the scrambler; when absent the markovian `noise` is rebound.
    const NoiseModel *scrambler_noise = nullptr;
};

/// SPAM removal with a scrambled reference: F(C o L) / F(L).
inline FidelityEstimate dfe_with_reference(const LayeredCircuit &circuit, const LayeredCircuit &scrambler,
                                           const NoiseModel &noise, const SpamModel &spam, const DfeConfig &config,
                                           Rng &rng, const ReferenceOptions &opt = {}) {
    require_clifford(scrambler);
    NoiseModel lnoise = opt.scrambler_noise ? *opt.scrambler_noise : noise.bind(scrambler);
    LayeredCircuit full = concatenate(scrambler, circuit);
    NoiseModel fnoise = concatenate_noise(lnoise, noise);

    DfeOptions num_opt = opt.dfe;
    LayeredCircuit full_target;
    if (num_opt.randomization == Randomization::Combined) {
        if (!num_opt.target) throw Error("combined randomization needs the target circuit");
        full_target = concatenate(scrambler, *num_opt.target);
        num_opt.target = &full_target;
        num_opt.frozen_one_qubit_layers = scrambler.one_qubit_layers.size();
    }
    Rng num_rng = seed_derive(rng.next_u64(), "numerator");
    Rng ref_rng = seed_derive(rng.next_u64(), "reference");
    FidelityEstimate num = dfe(full, fnoise, spam, config, num_rng, num_opt);
    DfeOptions ref_opt = opt.dfe;
    if (ref_opt.randomization == Randomization::Combined) ref_opt.randomization = Randomization::PauliFrame;
    FidelityEstimate ref = dfe(scrambler, lnoise, spam, config, ref_rng, ref_opt);
    if (ref.mean <= opt.floor) {
        throw ReferenceTooNoisyError("reference fidelity " + std::to_string(ref.mean) + " is below the floor " +
                                     std::to_string(opt.floor));
    }
    FidelityEstimate out;
    out.mean = num.mean / ref.mean;
    double rn = num.mean != 0 ? num.std_error / num.mean : 0.0;
    double rr = ref.std_error / ref.mean;
    out.std_error = std::abs(out.mean) * std::sqrt(rn * rn + rr * rr);
    out.num_samples = num.num_samples + ref.num_samples;
    out.seed = num.seed;
    out.records = std::move(num.records);
    return out;
}

/// Per-qubit readout calibration from all-zeros and all-ones preparations.
struct ReadoutCalibration {
    std::vector<double> e0;  // P(read 1 | prepared 0)
    std::vector<double> e1;  // P(read 0 | prepared 1)
};

inline ReadoutCalibration calibrate_readout(const SpamModel &spam, size_t calib_shots, Rng &rng) {
    if (calib_shots < 100) throw Error("readout calibration needs at least 100 shots");
    ReadoutCalibration cal;
    for (size_t q = 0; q < spam.size(); q++) {
        double pp = spam.prep_flip[q];
        double p01 = pp * (1 - spam.meas_flip_1to0[q]) + (1 - pp) * spam.meas_flip_0to1[q];
        double p10 = pp * (1 - spam.meas_flip_0to1[q]) + (1 - pp) * spam.meas_flip_1to0[q];
        cal.e0.push_back(static_cast<double>(rng.binomial(calib_shots, p01)) / static_cast<double>(calib_shots));
        cal.e1.push_back(static_cast<double>(rng.binomial(calib_shots, p10)) / static_cast<double>(calib_shots));
        if (cal.e0.back() + cal.e1.back() >= 1.0) throw Error("singular readout confusion matrix on qubit " + std::to_string(q));
    }
    return cal;
}

/// DFE with tensored confusion-matrix inversion on each parity. Prep flips
/// enter the calibration too and are corrected on the measured support.
inline FidelityEstimate readout_mitigated_dfe(const LayeredCircuit &circuit, const NoiseModel &noise,
                                              const SpamModel &spam, const DfeConfig &config, size_t calib_shots,
                                              Rng &rng, const DfeOptions &opt = {}) {
    spam.validate(circuit.n);
    Rng cal_rng = seed_derive(rng.next_u64(), "calibration");
    ReadoutCalibration cal = calibrate_readout(spam, calib_shots, cal_rng);
    auto scale = [&](const PauliString &p) {
        double s = 1;
        for (size_t q = 0; q < p.size(); q++) {
            if (p.get(q)) s *= 1.0 - cal.e0[q] - cal.e1[q];
        }
        return s;
    };
    Rng dfe_rng = seed_derive(rng.next_u64(), "dfe");
    return detail::dfe_core(circuit, noise, spam, config, dfe_rng, opt, scale);
}

struct LayerFit {
    EntanglingLayer layer;
    size_t occurrences = 0;
    double polarization = 1;
    double polarization_stderr = 0;
    double amplitude = 1;
    size_t excluded_points = 0;
    std::vector<size_t> depths;
    std::vector<FidelityEstimate> points;
};

struct LayerFidelityResult {
    std::vector<LayerFit> layers;
    double predicted_polarization = 1;
    double predicted_fidelity = 1;
    double predicted_stderr = 0;
};

/// Distinct entangling layers of a circuit (by gate and pair set) with their counts.
inline std::vector<std::pair<EntanglingLayer, size_t>> distinct_layers(const LayeredCircuit &c) {
    std::vector<std::pair<EntanglingLayer, size_t>> out;
    for (const auto &layer : c.entangling_layers) {
        if (layer.pairs.empty()) continue;
        auto it = std::find_if(out.begin(), out.end(), [&](const auto &e) { return e.first == layer; });
        if (it == out.end()) {
            out.push_back({layer, 1});
        } else {
            it->second++;
        }
    }
    return out;
}

/// Weighted least squares of log(f) = log(A) + m log(p).
inline void fit_decay(LayerFit &fit, size_t n) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t used = 0;
    fit.excluded_points = 0;
    for (size_t k = 0; k < fit.depths.size(); k++) {
        double f = polarization_from_fidelity(fit.points[k].mean, n);
        double sf = fit.points[k].std_error * pauli_space_size(n) / (pauli_space_size(n) - 1);
        if (!(f > 0)) {
            fit.excluded_points++;
            continue;
        }
        double var = std::max((sf / f) * (sf / f), 1e-16);
        double w = 1.0 / var, x = static_cast<double>(fit.depths[k]), y = std::log(f);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
        used++;
    }
    if (used < 2) throw Error("decay fit needs at least two positive estimates");
    double det = sw * sxx - sx * sx;
    if (!(det > 0)) throw Error("decay fit is degenerate");
    double b = (sw * sxy - sx * sy) / det;
    double a = (sxx * sy - sx * sxy) / det;
    fit.polarization = std::exp(b);
    fit.amplitude = std::exp(a);
    fit.polarization_stderr = fit.polarization * std::sqrt(sw / det);
}

/// Benchmarks each distinct entangling layer of `circuit` by repeating it
/// between random Clifford layers, fits exponential decays, and predicts the
/// circuit's fidelity from the layer polarizations.
inline LayerFidelityResult layer_fidelity_estimate(const LayeredCircuit &circuit, const NoiseModel &noise,
                                                   const std::vector<size_t> &depths, const DfeConfig &config,
                                                   Rng &rng, const SpamModel *spam = nullptr) {
    if (depths.size() < 3) throw Error("layer fidelity needs at least three depths");
    if (!noise.markovian) throw Error("layer fidelity assumes markovian noise");
    const size_t n = circuit.n;
    SpamModel sp = spam ? *spam : SpamModel::none(n);
    LayerFidelityResult res;
    const uint64_t base = rng.next_u64();
    size_t idx = 0;
    double log_pred = 0, rel_var = 0;
    for (const auto &[layer, count] : distinct_layers(circuit)) {
        LayerFit fit;
        fit.layer = layer;
        fit.occurrences = count;
        for (size_t m : depths) {
            LayeredCircuit seq;
            seq.n = n;
            seq.one_qubit_layers.assign(m + 1, std::vector<OneQubitGateSpec>(n, OneQubitGateSpec::clifford(0)));
            seq.entangling_layers.assign(m, layer);
            NoiseModel sn = noise.bind(seq);
            Rng r = seed_derive(base, "layer", idx, "depth", m);
            DfeOptions o;
            o.randomization = Randomization::Combined;
            o.target = &seq;
            fit.depths.push_back(m);
            fit.points.push_back(dfe(seq, sn, sp, config, r, o));
        }
        fit_decay(fit, n);
        log_pred += static_cast<double>(count) * std::log(fit.polarization);
        double rel = fit.polarization_stderr / fit.polarization;
        rel_var += static_cast<double>(count * count) * rel * rel;
        res.layers.push_back(std::move(fit));
        idx++;
    }
    res.predicted_polarization = std::exp(log_pred);
    res.predicted_fidelity = fidelity_from_polarization(res.predicted_polarization, n);
    res.predicted_stderr = res.predicted_polarization * std::sqrt(rel_var) * (1.0 - 1.0 / pauli_space_size(n));
    return res;
}

namespace detail {

inline double xeb_denominator(const std::vector<double> &p_ideal) {
    double s = 0, s2 = 0;
    for (double p : p_ideal) {
        s += p;
        s2 += p * p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw Error("ideal probabilities do not sum to 1");
    double denom = static_cast<double>(p_ideal.size()) * s2 - 1.0;
    if (std::abs(denom) < 1e-9) throw Error("cross-entropy is undefined for a flat ideal distribution");
    return denom;
}

}  // namespace detail

/// Normalized linear cross-entropy (2^n p_exp.p_ideal - 1) / (2^n p_ideal.p_ideal - 1).
inline double xeb(const std::vector<double> &p_exp, const std::vector<double> &p_ideal) {
    if (p_exp.size() != p_ideal.size()) throw DimensionError("probability vectors differ in length");
    double denom = detail::xeb_denominator(p_ideal);
    double dot = 0;
    for (size_t i = 0; i < p_ideal.size(); i++) dot += p_exp[i] * p_ideal[i];
    return (static_cast<double>(p_ideal.size()) * dot - 1.0) / denom;
}

/// Same statistic from raw samples: p_exp.p_ideal is the sample mean of p_ideal(x).
inline FidelityEstimate xeb_from_samples(const std::vector<uint64_t> &bitstrings, const std::vector<double> &p_ideal) {
    if (bitstrings.empty()) throw Error("no samples");
    double denom = detail::xeb_denominator(p_ideal);
    const double D = static_cast<double>(p_ideal.size());
    std::vector<double> v;
    v.reserve(bitstrings.size());
    for (uint64_t b : bitstrings) {
        if (b >= p_ideal.size()) throw DimensionError("bitstring outside the ideal distribution");
        v.push_back(p_ideal[b]);
    }
    double m = 0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    FidelityEstimate e;
    e.mean = (D * m - 1.0) / denom;
    e.std_error = D * detail::sample_std(v, m) / std::sqrt(static_cast<double>(v.size())) / std::abs(denom);
    e.num_samples = v.size();
    return e;
}

inline double xeb(const std::vector<uint64_t> &bitstrings, const std::vector<double> &p_ideal) {
    return xeb_from_samples(bitstrings, p_ideal).mean;
}

struct CvResult {
    double mean = 0;
    double sd = 0;
    double ratio = 0;
};

inline CvResult coefficient_of_variation(const std::vector<double> &samples) {
    if (samples.size() < 2) throw Error("coefficient of variation needs at least two samples");
    double m = 0;
    for (double x : samples) m += x;
    m /= static_cast<double>(samples.size());
    if (m == 0) throw Error("coefficient of variation is undefined for zero mean");
    double sd = detail::sample_std(samples, m);
    return {m, sd, sd / m};
}

struct VolumetricOptions {
    size_t scrambler_depth = 4;
    size_t calib_shots = 1000;
    size_t exact_samples = 10;
    std::vector<size_t> layer_depths{1, 2, 4, 8};
    size_t fold_limit = kDefaultFoldLimit;
};

/// Uniform symmetric SPAM flip levels applied to every qubit.
struct SpamLevels {
    double prep = 0;
    double meas = 0;
};

/// 50 randomizations of 1000 shots each.
inline DfeConfig volumetric_default_config() {
    return {50, 1, 1000};
}

struct CellEstimate {
    std::optional<FidelityEstimate> value;
    std::string failure;
};

struct VolumetricCell {
    size_t n = 0;
    size_t depth = 0;
    CellEstimate unmitigated;
    CellEstimate reference;
    CellEstimate readout;
    CellEstimate layer_fidelity;
    CellEstimate exact;
};

namespace detail {

template <typename F>
CellEstimate guarded(F &&f) {
    CellEstimate c;
    try {
        c.value = f();
    } catch (const std::exception &e) {
        c.failure = e.what();
    }
    return c;
}

}  // namespace detail

/// Width x depth sweep of Haar brickwork targets on a line device. Each
/// randomization is a fresh Cliffordization with its own observable.
inline std::vector<VolumetricCell> volumetric_run(const std::vector<size_t> &widths, const std::vector<size_t> &depths,
                                                  const NoiseBudget &budget, const SpamLevels &spam_levels,
                                                  const DfeConfig &config, Rng &rng, const VolumetricOptions &opt = {}) {
    config.validate();
    std::vector<VolumetricCell> cells;
    const uint64_t base = rng.next_u64();
    for (size_t n : widths) {
        if (n < 2 || n > kStatevectorQubitLimit) throw DimensionError("volumetric widths must lie in [2, 14]");
        Rng dev = seed_derive(base, "device", n);
        NoiseModel device = sample_device_noise(n, Topology::Line, dev, budget);
        SpamModel spam = SpamModel::symmetric(std::vector<double>(n, spam_levels.prep), std::vector<double>(n, spam_levels.meas));
        for (size_t d : depths) {
            Rng r = seed_derive(base, "cell", n, d);
            VolumetricCell cell;
            cell.n = n;
            cell.depth = d;
            LayeredCircuit target = sample_brickwork({n, d, Topology::Line, 0, TwoQubitGate::CZ}, GateKind::Haar, r);
            NoiseModel noise = device.bind(target);
            LayeredCircuit proxy = cliffordize(target, r);
            DfeOptions o;
            o.randomization = Randomization::Combined;
            o.target = &target;
            const uint64_t s1 = r.next_u64(), s2 = r.next_u64(), s3 = r.next_u64(), s4 = r.next_u64(), s5 = r.next_u64();
            cell.unmitigated = detail::guarded([&] {
                Rng rr(s1);
                return dfe(proxy, noise, spam, config, rr, o);
            });
            cell.reference = detail::guarded([&] {
                Rng rr(s2);
                LayeredCircuit scr = scrambling_circuit(n, opt.scrambler_depth, rr);
                ReferenceOptions ro;
                ro.dfe = o;
                return dfe_with_reference(proxy, scr, noise, spam, config, rr, ro);
            });
            cell.readout = detail::guarded([&] {
                Rng rr(s3);
                return readout_mitigated_dfe(proxy, noise, spam, config, opt.calib_shots, rr, o);
            });
            cell.layer_fidelity = detail::guarded([&] {
                Rng rr(s4);
                LayerFidelityResult lf = layer_fidelity_estimate(target, noise, opt.layer_depths, config, rr, &spam);
                FidelityEstimate e;
                e.mean = lf.predicted_fidelity;
                e.std_error = lf.predicted_stderr;
                e.num_samples = lf.layers.size();
                return e;
            });
            cell.exact = detail::guarded([&]() -> FidelityEstimate {
                if (n > opt.fold_limit) throw FoldLimitError("exact fidelity skipped above the folding limit");
                Rng rr(s5);
                std::vector<double> f;
                for (size_t k = 0; k < opt.exact_samples; k++) {
                    f.push_back(1.0 - process_infidelity_exact(cliffordize(target, rr), noise, opt.fold_limit));
                }
                double m = 0;
                for (double x : f) m += x;
                m /= static_cast<double>(f.size());
                FidelityEstimate e;
                e.mean = m;
                e.std_error = f.size() > 1 ? detail::sample_std(f, m) / std::sqrt(static_cast<double>(f.size())) : 0.0;
                e.num_samples = f.size();
                return e;
            });
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

}  // namespace cliffproxy
