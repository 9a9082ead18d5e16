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
#include <charconv>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cliffproxy/clifford.hpp"
#include "cliffproxy/errors.hpp"
#include "cliffproxy/pauli.hpp"
#include "cliffproxy/rng.hpp"
#include "json.hpp"

namespace cliffproxy {

struct CliffordGate {
    int index = 0;
    bool operator==(const CliffordGate &) const = default;
};

/// Z(phi1) X(pi/2) Z(phi2) X(pi/2) Z(phi3), angles in radians.
struct EulerGate {
    double phi1 = 0, phi2 = 0, phi3 = 0;
    bool operator==(const EulerGate &) const = default;
};

struct OneQubitGateSpec {
    std::variant<CliffordGate, EulerGate> kind;

    static OneQubitGateSpec clifford(int index) {
        return {CliffordGate{index}};
    }
    static OneQubitGateSpec euler(double a, double b, double c) {
        return {EulerGate{a, b, c}};
    }

    bool is_clifford() const {
        return std::holds_alternative<CliffordGate>(kind);
    }
    int clifford_index() const {
        if (!is_clifford()) throw NotCliffordError("circuit is not Cliffordized");
        return std::get<CliffordGate>(kind).index;
    }
    EulerAngles angles() const {
        if (is_clifford()) return euler_angles(clifford_index());
        const auto &e = std::get<EulerGate>(kind);
        return {e.phi1, e.phi2, e.phi3};
    }
    Mat2 matrix() const {
        if (is_clifford()) return one_qubit_clifford(clifford_index()).matrix;
        const auto &e = std::get<EulerGate>(kind);
        return euler_matrix(e.phi1, e.phi2, e.phi3);
    }
    bool operator==(const OneQubitGateSpec &) const = default;
};

using QubitPair = std::pair<size_t, size_t>;

struct EntanglingLayer {
    TwoQubitGate gate = TwoQubitGate::CZ;
    std::vector<QubitPair> pairs;
    bool operator==(const EntanglingLayer &) const = default;
};

/// U_0, C_1, U_1, ..., C_L, U_L: full one-qubit layers alternating with
/// layers of disjoint two-qubit Clifford gates. Idle qubits get no gate.
struct LayeredCircuit {
    size_t n = 0;
    std::vector<std::vector<OneQubitGateSpec>> one_qubit_layers;
    std::vector<EntanglingLayer> entangling_layers;

    /// Number of entangling layers L.
    size_t depth() const {
        return entangling_layers.size();
    }
    /// Total layers in the alternating sequence, 2L + 1.
    size_t num_layers() const {
        return one_qubit_layers.size() + entangling_layers.size();
    }
    static bool is_one_qubit_layer(size_t l) {
        return l % 2 == 0;
    }
    const std::vector<OneQubitGateSpec> &one_qubit_layer_at(size_t l) const {
        return one_qubit_layers[l / 2];
    }
    const EntanglingLayer &entangling_layer_at(size_t l) const {
        return entangling_layers[l / 2];
    }

    bool is_clifford() const {
        for (const auto &layer : one_qubit_layers) {
            for (const auto &g : layer) {
                if (!g.is_clifford()) return false;
            }
        }
        return true;
    }

    /// Throws unless the structural invariants hold.
    void validate() const {
        if (one_qubit_layers.size() != entangling_layers.size() + 1) {
            throw Error("circuit must begin and end with a one-qubit layer");
        }
        for (const auto &layer : one_qubit_layers) {
            if (layer.size() != n) throw DimensionError("one-qubit layer does not cover every qubit");
            for (const auto &g : layer) {
                if (g.is_clifford() && (g.clifford_index() < 0 || g.clifford_index() >= 24)) {
                    throw Error("Clifford index out of range");
                }
            }
        }
        for (const auto &layer : entangling_layers) {
            std::vector<bool> used(n, false);
            for (auto [a, b] : layer.pairs) {
                if (a >= n || b >= n) throw DimensionError("entangling pair outside register");
                if (a == b || used[a] || used[b]) throw Error("entangling layer touches a qubit twice");
                used[a] = used[b] = true;
            }
        }
    }

    bool operator==(const LayeredCircuit &) const = default;
};

inline void require_clifford(const LayeredCircuit &c) {
    if (!c.is_clifford()) throw NotCliffordError("circuit is not Cliffordized");
}

/// Forward image C P C^dagger of a Pauli through a Clifford circuit.
inline PauliString conjugate_forward(const LayeredCircuit &c, PauliString p) {
    require_clifford(c);
    require_same_size(p, PauliString(c.n));
    for (size_t l = 0; l < c.num_layers(); l++) {
        if (LayeredCircuit::is_one_qubit_layer(l)) {
            const auto &layer = c.one_qubit_layer_at(l);
            for (size_t q = 0; q < c.n; q++) apply_clifford(p, q, layer[q].clifford_index());
        } else {
            const auto &layer = c.entangling_layer_at(l);
            for (auto [a, b] : layer.pairs) apply_two_qubit(p, layer.gate, a, b);
        }
    }
    return p;
}

/// C^dagger P C: the observable to prepare so that P is measured at the output.
inline PauliString backpropagate(const LayeredCircuit &c, PauliString p) {
    require_clifford(c);
    require_same_size(p, PauliString(c.n));
    for (size_t l = c.num_layers(); l-- > 0;) {
        if (LayeredCircuit::is_one_qubit_layer(l)) {
            const auto &layer = c.one_qubit_layer_at(l);
            for (size_t q = 0; q < c.n; q++) {
                apply_clifford(p, q, one_qubit_clifford(layer[q].clifford_index()).inverse);
            }
        } else {
            const auto &layer = c.entangling_layer_at(l);
            for (auto it = layer.pairs.rbegin(); it != layer.pairs.rend(); ++it) {
                apply_two_qubit(p, layer.gate, it->first, it->second);
            }
        }
    }
    return p;
}

inline CliffordTableau circuit_tableau(const LayeredCircuit &c) {
    require_clifford(c);
    CliffordTableau t(c.n);
    for (size_t l = 0; l < c.num_layers(); l++) {
        if (LayeredCircuit::is_one_qubit_layer(l)) {
            const auto &layer = c.one_qubit_layer_at(l);
            for (size_t q = 0; q < c.n; q++) t.then_one_qubit(q, layer[q].clifford_index());
        } else {
            const auto &layer = c.entangling_layer_at(l);
            for (auto [a, b] : layer.pairs) t.then_two_qubit(layer.gate, a, b);
        }
    }
    return t;
}

enum class GateKind { Haar, Clifford };
enum class Topology { Line, Ring };

struct BrickworkSpec {
    size_t n = 2;
    size_t layer_pairs = 1;
    Topology topology = Topology::Line;
    /// Parity of the first entangling layer: 0 pairs (0,1),(2,3),...
    int first_parity = 0;
    TwoQubitGate gate = TwoQubitGate::CZ;
};

/// Brick pattern of the given parity. Ring adds (n-1, 0) on odd layers when
/// n is even; odd rings use plain line bricks.
inline std::vector<QubitPair> brick_pairs(size_t n, int parity, Topology topology) {
    std::vector<QubitPair> pairs;
    for (size_t a = static_cast<size_t>(parity & 1); a + 1 < n; a += 2) pairs.emplace_back(a, a + 1);
    if (topology == Topology::Ring && (parity & 1) && n % 2 == 0 && n >= 2) pairs.emplace_back(n - 1, 0);
    return pairs;
}

/// Haar-random SU(2) element from a uniform unit quaternion, as Euler angles.
inline OneQubitGateSpec haar_su2(Rng &rng) {
    double q[4];
    double norm = 0;
    do {
        norm = 0;
        for (double &v : q) {
            v = rng.normal();
            norm += v * v;
        }
    } while (norm < 1e-300);
    norm = std::sqrt(norm);
    std::complex<double> alpha(q[0] / norm, q[1] / norm), beta(q[2] / norm, q[3] / norm);
    Mat2 u;
    u << alpha, -std::conj(beta), beta, std::conj(alpha);
    EulerAngles e = euler_from_unitary(u);
    return OneQubitGateSpec::euler(e.phi1, e.phi2, e.phi3);
}

inline OneQubitGateSpec sample_one_qubit_gate(GateKind kind, Rng &rng) {
    if (kind == GateKind::Haar) return haar_su2(rng);
    return OneQubitGateSpec::clifford(static_cast<int>(rng.below(24)));
}

inline std::vector<OneQubitGateSpec> sample_one_qubit_layer(size_t n, GateKind kind, Rng &rng) {
    std::vector<OneQubitGateSpec> layer;
    layer.reserve(n);
    for (size_t q = 0; q < n; q++) layer.push_back(sample_one_qubit_gate(kind, rng));
    return layer;
}

inline void check_brickwork_spec(const BrickworkSpec &spec) {
    if (spec.n < 2) throw DimensionError("brickwork circuits need at least two qubits");
    if (spec.layer_pairs < 1) throw Error("brickwork circuits need at least one layer pair");
}

/// Disordered brickwork: independent one-qubit layers between brick layers.
inline LayeredCircuit sample_brickwork(const BrickworkSpec &spec, GateKind kind, Rng &rng) {
    check_brickwork_spec(spec);
    LayeredCircuit c;
    c.n = spec.n;
    c.one_qubit_layers.push_back(sample_one_qubit_layer(spec.n, kind, rng));
    for (size_t j = 0; j < spec.layer_pairs; j++) {
        int parity = static_cast<int>((j + static_cast<size_t>(spec.first_parity)) & 1);
        c.entangling_layers.push_back({spec.gate, brick_pairs(spec.n, parity, spec.topology)});
        c.one_qubit_layers.push_back(sample_one_qubit_layer(spec.n, kind, rng));
    }
    return c;
}

inline OneQubitGateSpec identity_gate(GateKind kind) {
    if (kind == GateKind::Clifford) return OneQubitGateSpec::clifford(0);
    EulerAngles e = euler_angles(0);
    return OneQubitGateSpec::euler(e.phi1, e.phi2, e.phi3);
}

/// Periodic circuit: one sampled (brick layer, one-qubit layer) pair repeated
/// layer_pairs times after an identity first layer, so the circuit is exactly
/// the layer_pairs-th power of the sampled pair.
inline LayeredCircuit sample_periodic(const BrickworkSpec &spec, GateKind kind, Rng &rng) {
    check_brickwork_spec(spec);
    int parity = static_cast<int>(rng.below(2));
    EntanglingLayer ent{spec.gate, brick_pairs(spec.n, parity, spec.topology)};
    auto layer = sample_one_qubit_layer(spec.n, kind, rng);
    LayeredCircuit c;
    c.n = spec.n;
    c.one_qubit_layers.emplace_back(spec.n, identity_gate(kind));
    for (size_t j = 0; j < spec.layer_pairs; j++) {
        c.entangling_layers.push_back(ent);
        c.one_qubit_layers.push_back(layer);
    }
    return c;
}

/// Replaces every one-qubit gate by an independent uniform Clifford.
inline LayeredCircuit cliffordize(const LayeredCircuit &c, Rng &rng) {
    LayeredCircuit out = c;
    for (auto &layer : out.one_qubit_layers) {
        for (auto &g : layer) g = OneQubitGateSpec::clifford(static_cast<int>(rng.below(24)));
    }
    return out;
}

namespace detail {

/// gate' = after * gate * before, with letters given as (x | z << 1) codes.
inline OneQubitGateSpec sandwich_paulis(const OneQubitGateSpec &g, uint8_t after, uint8_t before) {
    if (g.is_clifford()) {
        int idx = compose_clifford(pauli_clifford_index(after),
                                   compose_clifford(g.clifford_index(), pauli_clifford_index(before)));
        return OneQubitGateSpec::clifford(idx);
    }
    if (after == 0 && before == 0) return g;
    Mat2 m = letter_matrix(after) * g.matrix() * letter_matrix(before);
    EulerAngles e = euler_from_unitary(m);
    return OneQubitGateSpec::euler(e.phi1, e.phi2, e.phi3);
}

}  // namespace detail

/// Randomized compiling: a uniform Pauli frame P before every entangling
/// layer C and its image C P C^dagger after it, both merged into the
/// neighbouring one-qubit layers. The logical operation is unchanged.
inline LayeredCircuit pauli_twirl(const LayeredCircuit &c, Rng &rng) {
    LayeredCircuit out = c;
    const size_t L = c.depth();
    std::vector<std::vector<uint8_t>> after(L + 1, std::vector<uint8_t>(c.n, 0));
    std::vector<std::vector<uint8_t>> before(L + 1, std::vector<uint8_t>(c.n, 0));
    for (size_t j = 0; j < L; j++) {
        PauliString frame(c.n);
        for (size_t q = 0; q < c.n; q++) frame.set(q, static_cast<uint8_t>(rng.below(4)));
        PauliString image = frame;
        for (auto [a, b] : c.entangling_layers[j].pairs) apply_two_qubit(image, c.entangling_layers[j].gate, a, b);
        for (size_t q = 0; q < c.n; q++) {
            after[j][q] = frame.get(q);
            before[j + 1][q] = image.get(q);
        }
    }
    for (size_t j = 0; j <= L; j++) {
        for (size_t q = 0; q < c.n; q++) {
            out.one_qubit_layers[j][q] = detail::sandwich_paulis(c.one_qubit_layers[j][q], after[j][q], before[j][q]);
        }
    }
    return out;
}

/// Clifford brickwork scrambler on a line.
inline LayeredCircuit scrambling_circuit(size_t n, size_t depth, Rng &rng) {
    if (depth < 1) throw Error("scrambling circuit depth must be at least 1");
    return sample_brickwork({n, depth, Topology::Line, 0, TwoQubitGate::CZ}, GateKind::Clifford, rng);
}

/// `first` followed by `second`, joined by an empty entangling layer so both
/// keep their own one-qubit layers.
inline LayeredCircuit concatenate(const LayeredCircuit &first, const LayeredCircuit &second) {
    if (first.n != second.n) throw DimensionError("cannot concatenate circuits of different widths");
    LayeredCircuit out = first;
    out.entangling_layers.push_back({TwoQubitGate::CZ, {}});
    out.one_qubit_layers.insert(out.one_qubit_layers.end(), second.one_qubit_layers.begin(),
                                second.one_qubit_layers.end());
    out.entangling_layers.insert(out.entangling_layers.end(), second.entangling_layers.begin(),
                                 second.entangling_layers.end());
    return out;
}

/// Shortest decimal string that parses back to the identical double.
inline std::string exact_decimal(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_decimal(const std::string &s) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw Error("invalid decimal string: " + s);
    return v;
}

/// {n, layers: [{type: "1q", gates: [...]}, {type: "2q", gate: "CZ", pairs: [[a, b], ...]}]}.
/// One-qubit gates are "C<index>" or an array of three decimal-string angles.
inline nlohmann::json circuit_to_json(const LayeredCircuit &c) {
    nlohmann::json layers = nlohmann::json::array();
    for (size_t l = 0; l < c.num_layers(); l++) {
        if (LayeredCircuit::is_one_qubit_layer(l)) {
            nlohmann::json gates = nlohmann::json::array();
            for (const auto &g : c.one_qubit_layer_at(l)) {
                if (g.is_clifford()) {
                    gates.push_back("C" + std::to_string(g.clifford_index()));
                } else {
                    const auto &e = std::get<EulerGate>(g.kind);
                    gates.push_back({exact_decimal(e.phi1), exact_decimal(e.phi2), exact_decimal(e.phi3)});
                }
            }
            layers.push_back({{"type", "1q"}, {"gates", gates}});
        } else {
            const auto &e = c.entangling_layer_at(l);
            nlohmann::json pairs = nlohmann::json::array();
            for (auto [a, b] : e.pairs) pairs.push_back({a, b});
            layers.push_back({{"type", "2q"}, {"gate", two_qubit_gate_name(e.gate)}, {"pairs", pairs}});
        }
    }
    return {{"n", c.n}, {"layers", layers}};
}

inline LayeredCircuit circuit_from_json(const nlohmann::json &j) {
    LayeredCircuit c;
    c.n = j.at("n").get<size_t>();
    const auto &layers = j.at("layers");
    for (size_t l = 0; l < layers.size(); l++) {
        const auto &layer = layers[l];
        std::string type = layer.at("type").get<std::string>();
        if ((type == "1q") != LayeredCircuit::is_one_qubit_layer(l)) {
            throw Error("circuit layers must alternate starting and ending with 1q");
        }
        if (type == "1q") {
            std::vector<OneQubitGateSpec> gates;
            for (const auto &g : layer.at("gates")) {
                if (g.is_string()) {
                    std::string s = g.get<std::string>();
                    if (s.size() < 2 || s[0] != 'C') throw Error("invalid one-qubit gate: " + s);
                    gates.push_back(OneQubitGateSpec::clifford(std::stoi(s.substr(1))));
                } else {
                    gates.push_back(OneQubitGateSpec::euler(parse_decimal(g.at(0).get<std::string>()),
                                                            parse_decimal(g.at(1).get<std::string>()),
                                                            parse_decimal(g.at(2).get<std::string>())));
                }
            }
            c.one_qubit_layers.push_back(std::move(gates));
        } else if (type == "2q") {
            EntanglingLayer e;
            e.gate = two_qubit_gate_from_name(layer.value("gate", std::string("CZ")));
            for (const auto &p : layer.at("pairs")) e.pairs.emplace_back(p.at(0).get<size_t>(), p.at(1).get<size_t>());
            c.entangling_layers.push_back(std::move(e));
        } else {
            throw Error("unknown layer type: " + type);
        }
    }
    c.validate();
    return c;
}

}  // namespace cliffproxy
