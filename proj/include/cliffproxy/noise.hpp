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
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cliffproxy/circuit.hpp"
#include "cliffproxy/errors.hpp"
#include "cliffproxy/pauli.hpp"
#include "cliffproxy/rng.hpp"
#include "json.hpp"

namespace cliffproxy {

/// Pauli error distribution of one gate. One-qubit entries describe a single
/// X(pi/2) pulse. Index 0 is "no error"; two-qubit codes are c_a | c_b << 2
/// for the pair (a, b).
struct GateNoise {
    int arity = 1;
    std::array<double, 16> probs{1.0};

    static GateNoise noiseless(int arity) {
        GateNoise g;
        g.arity = arity;
        g.probs.fill(0.0);
        g.probs[0] = 1.0;
        return g;
    }

    size_t num_labels() const {
        return arity == 1 ? 4 : 16;
    }

    /// Total error probability 1 - p(identity).
    double total_error() const {
        double s = 0;
        for (size_t k = 1; k < num_labels(); k++) s += probs[k];
        return s;
    }

    bool operator==(const GateNoise &) const = default;
};

/// Label string for a local code, e.g. "X" or "ZY" (first qubit leftmost).
inline std::string local_label(int arity, size_t code) {
    std::string s;
    for (int k = 0; k < arity; k++) s.push_back(letter_char(static_cast<uint8_t>((code >> (2 * k)) & 3)));
    return s;
}

inline size_t local_code(const std::string &label) {
    size_t code = 0;
    for (size_t k = 0; k < label.size(); k++) {
        uint8_t c;
        switch (label[k]) {
            case 'I': c = 0; break;
            case 'X': c = 1; break;
            case 'Z': c = 2; break;
            case 'Y': c = 3; break;
            default: throw Error("invalid Pauli label: " + label);
        }
        code |= static_cast<size_t>(c) << (2 * k);
    }
    return code;
}

/// Same physical error seen from the reversed pair (b, a).
inline GateNoise swap_orientation(const GateNoise &g) {
    if (g.arity != 2) return g;
    GateNoise out = g;
    for (size_t code = 0; code < 16; code++) out.probs[((code & 3) << 2) | (code >> 2)] = g.probs[code];
    return out;
}

/// Classical bit flips at the circuit boundary.
struct SpamModel {
    std::vector<double> prep_flip;
    std::vector<double> meas_flip_0to1;
    std::vector<double> meas_flip_1to0;

    static SpamModel none(size_t n) {
        return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    }
    static SpamModel symmetric(std::vector<double> prep, std::vector<double> meas) {
        return {std::move(prep), meas, meas};
    }

    size_t size() const {
        return prep_flip.size();
    }

    bool is_noiseless() const {
        for (size_t q = 0; q < size(); q++) {
            if (prep_flip[q] != 0 || meas_flip_0to1[q] != 0 || meas_flip_1to0[q] != 0) return false;
        }
        return true;
    }

    /// Flip probability seen by a parity after measurement twirling.
    double twirled_meas_flip(size_t q) const {
        return 0.5 * (meas_flip_0to1[q] + meas_flip_1to0[q]);
    }

    void validate(size_t n) const {
        if (prep_flip.size() != n || meas_flip_0to1.size() != n || meas_flip_1to0.size() != n) {
            throw DimensionError("SPAM model does not cover every qubit");
        }
        for (size_t q = 0; q < n; q++) {
            for (double p : {prep_flip[q], meas_flip_0to1[q], meas_flip_1to0[q]}) {
                if (!(p >= 0 && p < 0.5)) throw Error("SPAM flip probabilities must lie in [0, 1/2)");
            }
        }
    }
};

/// Each two-qubit gate: total ~ U[0, two_q_budget]; each X(pi/2) pulse:
/// total ~ U[0, one_q_budget]; totals split by a flat Dirichlet draw.
struct NoiseBudget {
    double two_qubit = 1e-3;
    double one_qubit = 1e-4;
};

inline QubitPair coupler_key(QubitPair p) {
    return {std::min(p.first, p.second), std::max(p.first, p.second)};
}

/// Pauli-stochastic noise bound to the layer positions of one circuit.
struct NoiseModel {
    size_t n = 0;
    bool markovian = true;
    /// [entangling layer][pair index in that layer]
    std::vector<std::vector<GateNoise>> entangling;
    /// [one-qubit layer][qubit], the per-pulse noise of that gate
    std::vector<std::vector<GateNoise>> single;
    /// Device tables used by bind(); populated in markovian mode.
    std::map<QubitPair, GateNoise> coupler_table;
    std::vector<GateNoise> qubit_table;

    static NoiseModel noiseless(const LayeredCircuit &c) {
        NoiseModel m;
        m.n = c.n;
        m.markovian = true;
        for (size_t q = 0; q < c.n; q++) m.qubit_table.push_back(GateNoise::noiseless(1));
        for (const auto &layer : c.entangling_layers) {
            for (auto p : layer.pairs) m.coupler_table[coupler_key(p)] = GateNoise::noiseless(2);
        }
        return m.bind(c);
    }

    /// Same device tables attached to the positions of another circuit.
    NoiseModel bind(const LayeredCircuit &c) const {
        if (!markovian) throw Error("only markovian noise models can be rebound to a new circuit");
        if (c.n != n) throw DimensionError("noise model and circuit widths differ");
        NoiseModel m = *this;
        m.entangling.clear();
        m.single.clear();
        for (const auto &layer : c.entangling_layers) {
            std::vector<GateNoise> row;
            for (auto p : layer.pairs) {
                auto it = coupler_table.find(coupler_key(p));
                if (it == coupler_table.end()) {
                    throw Error("no noise entry for coupler (" + std::to_string(p.first) + "," +
                                std::to_string(p.second) + ")");
                }
                row.push_back(p.first < p.second ? it->second : swap_orientation(it->second));
            }
            m.entangling.push_back(std::move(row));
        }
        for (size_t j = 0; j < c.one_qubit_layers.size(); j++) m.single.push_back(qubit_table);
        return m;
    }

    void check_covers(const LayeredCircuit &c) const {
        if (c.n != n || entangling.size() != c.entangling_layers.size() || single.size() != c.one_qubit_layers.size()) {
            throw Error("noise model does not cover the circuit");
        }
        for (size_t j = 0; j < entangling.size(); j++) {
            if (entangling[j].size() != c.entangling_layers[j].pairs.size()) throw Error("missing noise entry in entangling layer");
        }
        for (const auto &row : single) {
            if (row.size() != n) throw Error("missing one-qubit noise entry");
        }
    }
};

namespace detail {

inline void check_budget(double b) {
    if (!(b >= 0 && b < 1)) throw Error("noise budget must lie in [0, 1)");
}

inline GateNoise sample_gate_noise(int arity, double budget, Rng &rng) {
    GateNoise g = GateNoise::noiseless(arity);
    const size_t k = g.num_labels() - 1;
    double total = budget * rng.uniform();
    std::array<double, 15> w{};
    double s = 0;
    for (size_t i = 0; i < k; i++) {
        w[i] = -std::log1p(-rng.uniform());
        s += w[i];
    }
    // Flat Dirichlet split; all rates vanish for a zero budget.
    double assigned = 0;
    for (size_t i = 0; i + 1 < k; i++) {
        g.probs[i + 1] = total * w[i] / s;
        assigned += g.probs[i + 1];
    }
    g.probs[k] = std::max(0.0, total - assigned);
    g.probs[0] = 1.0 - total;
    return g;
}

}  // namespace detail

/// Markovian tables for every coupler and qubit of a line or ring device.
inline NoiseModel sample_device_noise(size_t n, Topology topology, Rng &rng, NoiseBudget budget = {}) {
    detail::check_budget(budget.two_qubit);
    detail::check_budget(budget.one_qubit);
    NoiseModel m;
    m.n = n;
    m.markovian = true;
    std::set<QubitPair> couplers;
    for (int parity = 0; parity < 2; parity++) {
        for (auto p : brick_pairs(n, parity, topology)) couplers.insert(coupler_key(p));
    }
    for (auto p : couplers) m.coupler_table[p] = detail::sample_gate_noise(2, budget.two_qubit, rng);
    for (size_t q = 0; q < n; q++) m.qubit_table.push_back(detail::sample_gate_noise(1, budget.one_qubit, rng));
    return m;
}

/// Random Pauli noise for a circuit. Markovian models reuse one table entry
/// per coupler and per qubit; otherwise every layer position is fresh.
inline NoiseModel sample_error_model(const LayeredCircuit &c, Rng &rng, double two_q_budget = 1e-3,
                                     double one_q_budget = 1e-4, bool markovian = true) {
    detail::check_budget(two_q_budget);
    detail::check_budget(one_q_budget);
    NoiseModel m;
    m.n = c.n;
    m.markovian = markovian;
    if (markovian) {
        std::set<QubitPair> couplers;
        for (const auto &layer : c.entangling_layers) {
            for (auto p : layer.pairs) couplers.insert(coupler_key(p));
        }
        for (auto p : couplers) m.coupler_table[p] = detail::sample_gate_noise(2, two_q_budget, rng);
        for (size_t q = 0; q < c.n; q++) m.qubit_table.push_back(detail::sample_gate_noise(1, one_q_budget, rng));
        return m.bind(c);
    }
    for (const auto &layer : c.entangling_layers) {
        std::vector<GateNoise> row;
        for (size_t k = 0; k < layer.pairs.size(); k++) row.push_back(detail::sample_gate_noise(2, two_q_budget, rng));
        m.entangling.push_back(std::move(row));
    }
    for (size_t j = 0; j < c.one_qubit_layers.size(); j++) {
        std::vector<GateNoise> row;
        for (size_t q = 0; q < c.n; q++) row.push_back(detail::sample_gate_noise(1, one_q_budget, rng));
        m.single.push_back(std::move(row));
    }
    return m;
}

/// Independent local Pauli distribution on one or two qubits.
struct LocalFactor {
    int arity = 1;
    std::array<size_t, 2> qubits{0, 0};
    std::array<double, 16> probs{1.0};

    size_t num_labels() const {
        return arity == 1 ? 4 : 16;
    }
    /// Restriction of p to this factor's qubits as a local code.
    size_t restrict_code(const PauliString &p) const {
        size_t code = p.get(qubits[0]);
        if (arity == 2) code |= static_cast<size_t>(p.get(qubits[1])) << 2;
        return code;
    }
    /// Probability that the local fault anticommutes with the local code.
    double anticommute_probability(size_t code) const {
        double q = 0;
        for (size_t f = 1; f < num_labels(); f++) {
            if (probs[f] != 0 && local_anticommutes(f, code)) q += probs[f];
        }
        return q;
    }
    static bool local_anticommutes(size_t a, size_t b) {
        // Symplectic product of packed codes: x_a z_b + z_a x_b per qubit.
        size_t xa = a & 0x5, za = (a >> 1) & 0x5, xb = b & 0x5, zb = (b >> 1) & 0x5;
        return std::popcount((xa & zb) ^ (za & xb)) & 1;
    }
    size_t sample(Rng &rng) const {
        double u = rng.uniform();
        double acc = 0;
        for (size_t f = 0; f < num_labels(); f++) {
            acc += probs[f];
            if (u < acc) return f;
        }
        // Rounding remainder goes to the most likely label.
        return static_cast<size_t>(std::max_element(probs.begin(), probs.begin() + num_labels()) - probs.begin());
    }
};

/// Product-structured Pauli channel acting after one circuit layer.
struct LayerErrorChannel {
    size_t n = 0;
    std::vector<LocalFactor> factors;

    double identity_probability() const {
        double p = 1;
        for (const auto &f : factors) p *= f.probs[0];
        return p;
    }

    /// Eigenvalue of the channel on observable p: E(p) = lambda p.
    double eigenvalue(const PauliString &p) const {
        double lambda = 1;
        for (const auto &f : factors) lambda *= 1.0 - 2.0 * f.anticommute_probability(f.restrict_code(p));
        return lambda;
    }

    PauliString sample(Rng &rng) const {
        PauliString fault(n);
        for (const auto &f : factors) {
            size_t code = f.sample(rng);
            if (code == 0) continue;
            fault.set(f.qubits[0], static_cast<uint8_t>(code & 3));
            if (f.arity == 2) fault.set(f.qubits[1], static_cast<uint8_t>(code >> 2));
        }
        return fault;
    }

    /// Dense global distribution over x | z << n labels.
    PauliChannel to_dense() const;
};

namespace detail {

/// Per-gate channel of a one-qubit gate whose two X(pi/2) pulses each carry
/// `pulse` noise, moved to the end of the gate.
inline std::array<double, 16> compiled_one_qubit_noise(const OneQubitGateSpec &g, const GateNoise &pulse) {
    std::array<double, 16> out{};
    std::array<uint8_t, 4> late{0, 1, 2, 3}, early{0, 1, 2, 3};
    if (g.is_clifford()) {
        const auto &c = one_qubit_clifford(g.clifford_index());
        late = c.late_fault_map;
        early = c.early_fault_map;
    }
    for (size_t f1 = 0; f1 < 4; f1++) {
        if (pulse.probs[f1] == 0) continue;
        for (size_t f2 = 0; f2 < 4; f2++) {
            if (pulse.probs[f2] == 0) continue;
            out[late[f2] ^ early[f1]] += pulse.probs[f1] * pulse.probs[f2];
        }
    }
    return out;
}

}  // namespace detail

/// Error channel after layer l of the alternating sequence (even l: one-qubit
/// layer l/2, odd l: entangling layer (l-1)/2). Idle qubits are noiseless.
inline LayerErrorChannel layer_channel(const LayeredCircuit &c, const NoiseModel &noise, size_t l) {
    if (l >= c.num_layers()) throw Error("layer index out of range");
    LayerErrorChannel ch;
    ch.n = c.n;
    if (LayeredCircuit::is_one_qubit_layer(l)) {
        size_t j = l / 2;
        if (j >= noise.single.size() || noise.single[j].size() != c.n) throw Error("missing one-qubit noise entry");
        const auto &layer = c.one_qubit_layers[j];
        for (size_t q = 0; q < c.n; q++) {
            LocalFactor f;
            f.arity = 1;
            f.qubits = {q, q};
            f.probs = detail::compiled_one_qubit_noise(layer[q], noise.single[j][q]);
            ch.factors.push_back(f);
        }
    } else {
        size_t j = l / 2;
        if (j >= noise.entangling.size() || noise.entangling[j].size() != c.entangling_layers[j].pairs.size()) {
            throw Error("missing entangling noise entry");
        }
        const auto &layer = c.entangling_layers[j];
        for (size_t k = 0; k < layer.pairs.size(); k++) {
            LocalFactor f;
            f.arity = 2;
            f.qubits = {layer.pairs[k].first, layer.pairs[k].second};
            f.probs = noise.entangling[j][k].probs;
            ch.factors.push_back(f);
        }
    }
    return ch;
}

/// Sum of per-layer process infidelities.
inline double summed_layer_infidelity(const LayeredCircuit &c, const NoiseModel &noise) {
    double s = 0;
    for (size_t l = 0; l < c.num_layers(); l++) s += 1.0 - layer_channel(c, noise, l).identity_probability();
    return s;
}

namespace detail {

/// x | z << n embedding of a local code.
inline uint64_t embed_local(const LocalFactor &f, size_t code, size_t n) {
    uint64_t idx = 0;
    for (int k = 0; k < f.arity; k++) {
        uint64_t c = (code >> (2 * k)) & 3;
        size_t q = f.qubits[k];
        if (c & 1) idx |= uint64_t{1} << q;
        if (c & 2) idx |= uint64_t{1} << (q + n);
    }
    return idx;
}

inline void convolve_factor(std::vector<double> &dist, const LocalFactor &f, size_t n, std::vector<double> &scratch) {
    scratch.assign(dist.size(), 0.0);
    for (size_t code = 0; code < f.num_labels(); code++) {
        double p = f.probs[code];
        if (p == 0) continue;
        uint64_t e = embed_local(f, code, n);
        for (size_t i = 0; i < dist.size(); i++) scratch[i ^ e] += p * dist[i];
    }
    dist.swap(scratch);
}

/// Label permutation induced by forward conjugation through layer l.
inline void conjugate_distribution(std::vector<double> &dist, const LayeredCircuit &c, size_t l,
                                   std::vector<double> &scratch) {
    const size_t n = c.n;
    scratch.assign(dist.size(), 0.0);
    const uint64_t mask = (uint64_t{1} << n) - 1;
    if (LayeredCircuit::is_one_qubit_layer(l)) {
        const auto &layer = c.one_qubit_layer_at(l);
        std::vector<const OneQubitClifford *> gates(n);
        for (size_t q = 0; q < n; q++) gates[q] = &one_qubit_clifford(layer[q].clifford_index());
        for (size_t i = 0; i < dist.size(); i++) {
            if (dist[i] == 0) continue;
            uint64_t x = i & mask, z = i >> n, nx = 0, nz = 0;
            for (size_t q = 0; q < n; q++) {
                uint8_t code = static_cast<uint8_t>(((x >> q) & 1) | (((z >> q) & 1) << 1));
                uint8_t img = gates[q]->image[code];
                nx |= static_cast<uint64_t>(img & 1) << q;
                nz |= static_cast<uint64_t>((img >> 1) & 1) << q;
            }
            scratch[nx | (nz << n)] += dist[i];
        }
    } else {
        const auto &layer = c.entangling_layer_at(l);
        for (size_t i = 0; i < dist.size(); i++) {
            if (dist[i] == 0) continue;
            uint64_t x = i & mask, z = i >> n;
            for (auto [a, b] : layer.pairs) {
                uint64_t xa = (x >> a) & 1, xb = (x >> b) & 1, za = (z >> a) & 1, zb = (z >> b) & 1;
                if (layer.gate == TwoQubitGate::CZ) {
                    za ^= xb;
                    zb ^= xa;
                } else {
                    xb ^= xa;
                    za ^= zb;
                }
                x = (x & ~(uint64_t{1} << a) & ~(uint64_t{1} << b)) | (xa << a) | (xb << b);
                z = (z & ~(uint64_t{1} << a) & ~(uint64_t{1} << b)) | (za << a) | (zb << b);
            }
            scratch[x | (z << n)] += dist[i];
        }
    }
    dist.swap(scratch);
}

}  // namespace detail

inline PauliChannel LayerErrorChannel::to_dense() const {
    PauliChannel ch = PauliChannel::identity(n);
    std::vector<double> scratch;
    for (const auto &f : factors) detail::convolve_factor(ch.probs, f, n, scratch);
    return ch;
}

constexpr size_t kDefaultFoldLimit = 10;

/// Exact end-of-circuit Pauli channel of a noisy Clifford circuit: every
/// layer error is pushed through the downstream layers and convolved.
inline PauliChannel fold_to_end(const LayeredCircuit &c, const NoiseModel &noise, size_t limit = kDefaultFoldLimit) {
    require_clifford(c);
    if (c.n > limit) {
        throw FoldLimitError("exact folding is limited to " + std::to_string(limit) + " qubits (got " +
                             std::to_string(c.n) + "); use Monte Carlo fault sampling instead");
    }
    noise.check_covers(c);
    PauliChannel ch = PauliChannel::identity(c.n);
    std::vector<double> scratch;
    for (size_t l = 0; l < c.num_layers(); l++) {
        detail::conjugate_distribution(ch.probs, c, l, scratch);
        LayerErrorChannel e = layer_channel(c, noise, l);
        for (const auto &f : e.factors) {
            bool trivial = f.probs[0] == 1.0;
            if (!trivial) detail::convolve_factor(ch.probs, f, c.n, scratch);
        }
    }
    return ch;
}

inline double process_infidelity_exact(const LayeredCircuit &c, const NoiseModel &noise,
                                       size_t limit = kDefaultFoldLimit) {
    return 1.0 - fold_to_end(c, noise, limit).identity_probability();
}

/// One fault per layer drawn from that layer's error channel.
inline std::vector<PauliString> sample_fault(const LayeredCircuit &c, const NoiseModel &noise, Rng &rng) {
    noise.check_covers(c);
    std::vector<PauliString> faults;
    faults.reserve(c.num_layers());
    for (size_t l = 0; l < c.num_layers(); l++) faults.push_back(layer_channel(c, noise, l).sample(rng));
    return faults;
}

/// Pushes per-layer faults to the end of a Clifford circuit and multiplies them.
inline PauliString total_fault(const LayeredCircuit &c, const std::vector<PauliString> &faults) {
    require_clifford(c);
    PauliString total(c.n);
    for (size_t l = 0; l < c.num_layers(); l++) {
        // Conjugate the running product through layer l, then append.
        if (LayeredCircuit::is_one_qubit_layer(l)) {
            const auto &layer = c.one_qubit_layer_at(l);
            for (size_t q = 0; q < c.n; q++) apply_clifford(total, q, layer[q].clifford_index());
        } else {
            const auto &layer = c.entangling_layer_at(l);
            for (auto [a, b] : layer.pairs) apply_two_qubit(total, layer.gate, a, b);
        }
        total = multiply(faults[l], total);
    }
    total.set_phase(0);
    return total;
}

inline nlohmann::json gate_noise_to_json(const GateNoise &g) {
    nlohmann::json rates = nlohmann::json::object();
    for (size_t k = 1; k < g.num_labels(); k++) {
        if (g.probs[k] != 0) rates[local_label(g.arity, k)] = exact_decimal(g.probs[k]);
    }
    return {{"arity", g.arity}, {"rates", rates}};
}

inline GateNoise gate_noise_from_json(const nlohmann::json &j) {
    GateNoise g = GateNoise::noiseless(j.at("arity").get<int>());
    if (g.arity != 1 && g.arity != 2) throw Error("gate noise arity must be 1 or 2");
    double total = 0;
    for (auto it = j.at("rates").begin(); it != j.at("rates").end(); ++it) {
        if (it.key().size() != static_cast<size_t>(g.arity)) throw Error("rate label arity mismatch: " + it.key());
        size_t code = local_code(it.key());
        if (code == 0) throw Error("identity label is implied, not listed");
        g.probs[code] = parse_decimal(it.value().get<std::string>());
        if (g.probs[code] < 0) throw Error("negative Pauli rate");
        total += g.probs[code];
    }
    if (total > 1) throw Error("gate error rates exceed 1");
    g.probs[0] = 1.0 - total;
    return g;
}

inline nlohmann::json noise_to_json(const NoiseModel &m) {
    nlohmann::json j;
    j["n"] = m.n;
    j["markovian"] = m.markovian;
    auto table = [](const std::vector<std::vector<GateNoise>> &rows) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto &row : rows) {
            nlohmann::json r = nlohmann::json::array();
            for (const auto &g : row) r.push_back(gate_noise_to_json(g));
            out.push_back(r);
        }
        return out;
    };
    j["entangling"] = table(m.entangling);
    j["single"] = table(m.single);
    nlohmann::json couplers = nlohmann::json::array();
    for (const auto &[p, g] : m.coupler_table) couplers.push_back({{"pair", {p.first, p.second}}, {"noise", gate_noise_to_json(g)}});
    j["couplers"] = couplers;
    nlohmann::json qubits = nlohmann::json::array();
    for (const auto &g : m.qubit_table) qubits.push_back(gate_noise_to_json(g));
    j["qubits"] = qubits;
    return j;
}

inline NoiseModel noise_from_json(const nlohmann::json &j) {
    NoiseModel m;
    m.n = j.at("n").get<size_t>();
    m.markovian = j.at("markovian").get<bool>();
    auto table = [](const nlohmann::json &rows) {
        std::vector<std::vector<GateNoise>> out;
        for (const auto &row : rows) {
            std::vector<GateNoise> r;
            for (const auto &g : row) r.push_back(gate_noise_from_json(g));
            out.push_back(std::move(r));
        }
        return out;
    };
    m.entangling = table(j.at("entangling"));
    m.single = table(j.at("single"));
    for (const auto &c : j.value("couplers", nlohmann::json::array())) {
        m.coupler_table[{c.at("pair").at(0).get<size_t>(), c.at("pair").at(1).get<size_t>()}] =
            gate_noise_from_json(c.at("noise"));
    }
    for (const auto &q : j.value("qubits", nlohmann::json::array())) m.qubit_table.push_back(gate_noise_from_json(q));
    return m;
}

}  // namespace cliffproxy
