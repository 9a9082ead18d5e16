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

#include <array>
#include <cmath>
#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cliffproxy/errors.hpp"
#include "cliffproxy/rng.hpp"

namespace cliffproxy {

/// One-qubit Pauli letter packed as (x | z << 1): I=0, X=1, Z=2, Y=3.
enum class Letter : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

constexpr char letter_char(uint8_t code) {
    return "IXZY"[code & 3];
}

/// Index of a letter in the (I, X, Y, Z) ordering used by transfer matrices.
constexpr int letter_ixyz(uint8_t code) {
    constexpr int table[4] = {0, 1, 3, 2};
    return table[code & 3];
}

constexpr uint8_t letter_from_ixyz(int k) {
    constexpr uint8_t table[4] = {0, 1, 3, 2};
    return table[k & 3];
}

/// i-exponent of the product of two letters: a * b = i^g (a xor b).
constexpr int letter_product_phase(uint8_t a, uint8_t b) {
    bool x1 = a & 1, z1 = a & 2, x2 = b & 1, z2 = b & 2;
    bool pos = (x1 && !z1 && x2 && z2) || (x1 && z1 && !x2 && z2) || (!x1 && z1 && x2 && !z2);
    bool neg = (x1 && z1 && x2 && !z2) || (!x1 && z1 && x2 && z2) || (x1 && !z1 && !x2 && z2);
    return pos ? 1 : (neg ? 3 : 0);
}

/// Signed n-qubit Pauli operator i^phase * (P_0 (x) P_1 (x) ... ) with
/// Hermitian letters P_q, stored as bit-packed x and z vectors.
class PauliString {
   public:
    PauliString() = default;

    explicit PauliString(size_t num_qubits)
        : n_(num_qubits), xs_(num_words(num_qubits), 0), zs_(num_words(num_qubits), 0), phase_(0) {
    }

    static PauliString identity(size_t num_qubits) {
        return PauliString(num_qubits);
    }

    /// Parses the canonical text form: optional sign ("+", "-", U+2212, "i",
    /// "-i") followed by letters from {I, X, Y, Z}, qubit 0 leftmost.
    static PauliString parse(std::string_view text);

    size_t size() const {
        return n_;
    }

    uint8_t get(size_t q) const {
        uint64_t m = uint64_t{1} << (q & 63);
        return static_cast<uint8_t>(((xs_[q >> 6] & m) ? 1 : 0) | ((zs_[q >> 6] & m) ? 2 : 0));
    }

    void set(size_t q, uint8_t code) {
        uint64_t m = uint64_t{1} << (q & 63);
        xs_[q >> 6] = (code & 1) ? (xs_[q >> 6] | m) : (xs_[q >> 6] & ~m);
        zs_[q >> 6] = (code & 2) ? (zs_[q >> 6] | m) : (zs_[q >> 6] & ~m);
    }

    void set(size_t q, Letter l) {
        set(q, static_cast<uint8_t>(l));
    }

    /// Power of i multiplying the tensor product of Hermitian letters.
    uint8_t phase() const {
        return phase_;
    }
    void set_phase(uint8_t log_i) {
        phase_ = log_i & 3;
    }
    bool is_hermitian() const {
        return (phase_ & 1) == 0;
    }
    /// +1 or -1; only meaningful for Hermitian strings.
    int sign() const {
        return phase_ == 2 ? -1 : 1;
    }
    void negate() {
        phase_ = (phase_ + 2) & 3;
    }

    bool is_identity_string() const {
        for (size_t w = 0; w < xs_.size(); w++) {
            if (xs_[w] | zs_[w]) return false;
        }
        return true;
    }

    size_t weight() const {
        size_t c = 0;
        for (size_t w = 0; w < xs_.size(); w++) c += std::popcount(xs_[w] | zs_[w]);
        return c;
    }

    const std::vector<uint64_t> &xs() const {
        return xs_;
    }
    const std::vector<uint64_t> &zs() const {
        return zs_;
    }
    std::vector<uint64_t> &xs() {
        return xs_;
    }
    std::vector<uint64_t> &zs() {
        return zs_;
    }

    /// Same letters, phase ignored.
    bool same_letters(const PauliString &o) const {
        return n_ == o.n_ && xs_ == o.xs_ && zs_ == o.zs_;
    }

    bool operator==(const PauliString &o) const = default;

    std::string str() const;

    /// Packs the letters into x | z << n for n <= 32.
    uint64_t dense_index() const {
        return xs_.empty() ? 0 : (xs_[0] | (zs_[0] << n_));
    }
    static PauliString from_dense_index(size_t num_qubits, uint64_t index) {
        PauliString p(num_qubits);
        uint64_t mask = num_qubits >= 64 ? ~uint64_t{0} : ((uint64_t{1} << num_qubits) - 1);
        if (!p.xs_.empty()) {
            p.xs_[0] = index & mask;
            p.zs_[0] = (index >> num_qubits) & mask;
        }
        return p;
    }

    static size_t num_words(size_t n) {
        return (n + 63) / 64;
    }

   private:
    size_t n_ = 0;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
    uint8_t phase_ = 0;
};

inline void require_same_size(const PauliString &a, const PauliString &b) {
    if (a.size() != b.size()) {
        throw DimensionError("Pauli strings act on " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()) + " qubits");
    }
}

/// Product P * Q with exact phase tracking.
inline PauliString multiply(const PauliString &p, const PauliString &q) {
    require_same_size(p, q);
    PauliString out(p.size());
    int pos = 0, neg = 0;
    for (size_t w = 0; w < p.xs().size(); w++) {
        uint64_t x1 = p.xs()[w], z1 = p.zs()[w], x2 = q.xs()[w], z2 = q.zs()[w];
        uint64_t y1 = x1 & z1, y2 = x2 & z2;
        uint64_t ox1 = x1 & ~z1, oz1 = z1 & ~x1, ox2 = x2 & ~z2, oz2 = z2 & ~x2;
        // XY = iZ, YZ = iX, ZX = iY and their reverses.
        pos += std::popcount((ox1 & y2) | (y1 & oz2) | (oz1 & ox2));
        neg += std::popcount((y1 & ox2) | (oz1 & y2) | (ox1 & oz2));
        out.xs()[w] = x1 ^ x2;
        out.zs()[w] = z1 ^ z2;
    }
    out.set_phase(static_cast<uint8_t>((p.phase() + q.phase() + pos - neg + 4 * (neg + 1)) & 3));
    return out;
}

inline PauliString inverse(const PauliString &p) {
    PauliString out = p;
    out.set_phase(static_cast<uint8_t>((4 - p.phase()) & 3));
    return out;
}

/// True iff the symplectic form sum(x_P z_Q + z_P x_Q) is even.
inline bool commutes(const PauliString &p, const PauliString &q) {
    require_same_size(p, q);
    uint64_t acc = 0;
    for (size_t w = 0; w < p.xs().size(); w++) {
        acc ^= (p.xs()[w] & q.zs()[w]) ^ (p.zs()[w] & q.xs()[w]);
    }
    return (std::popcount(acc) & 1) == 0;
}

/// Uniform draw over the 4^n - 1 non-identity strings, phase +1.
inline PauliString sample_uniform_nonidentity(size_t n, Rng &rng) {
    if (n == 0) throw DimensionError("cannot sample a Pauli on zero qubits");
    PauliString p(n);
    size_t tail = n & 63;
    uint64_t last_mask = tail == 0 ? ~uint64_t{0} : ((uint64_t{1} << tail) - 1);
    do {
        for (size_t w = 0; w < p.xs().size(); w++) {
            uint64_t mask = (w + 1 == p.xs().size()) ? last_mask : ~uint64_t{0};
            p.xs()[w] = rng.next_u64() & mask;
            p.zs()[w] = rng.next_u64() & mask;
        }
    } while (p.is_identity_string());
    return p;
}

inline std::string PauliString::str() const {
    std::string s;
    switch (phase_) {
        case 1: s = "i"; break;
        case 2: s = "-"; break;
        case 3: s = "-i"; break;
        default: break;
    }
    s.reserve(s.size() + n_);
    for (size_t q = 0; q < n_; q++) s.push_back(letter_char(get(q)));
    return s;
}

inline PauliString PauliString::parse(std::string_view text) {
    uint8_t phase = 0;
    if (text.starts_with("\xE2\x88\x92")) {
        phase = 2;
        text.remove_prefix(3);
    } else if (text.starts_with("-")) {
        phase = 2;
        text.remove_prefix(1);
    } else if (text.starts_with("+")) {
        text.remove_prefix(1);
    }
    if (text.starts_with("i")) {
        phase = (phase + 1) & 3;
        text.remove_prefix(1);
    }
    PauliString p(text.size());
    for (size_t q = 0; q < text.size(); q++) {
        switch (text[q]) {
            case 'I': case '_': break;
            case 'X': p.set(q, Letter::X); break;
            case 'Y': p.set(q, Letter::Y); break;
            case 'Z': p.set(q, Letter::Z); break;
            default:
                throw Error("invalid Pauli character '" + std::string(1, text[q]) + "' at position " +
                            std::to_string(q));
        }
    }
    p.set_phase(phase);
    return p;
}

/// Preparation label for one qubit of a product Pauli eigenstate.
enum class StateLabel : uint8_t { ZPlus, ZMinus, XPlus, XMinus, YPlus, YMinus };

struct EigenstatePrep {
    std::vector<StateLabel> labels;
};

/// Product state with <P> = +1. Identity qubits get Z+; a -1 sign is absorbed
/// by flipping the first non-identity qubit.
inline EigenstatePrep eigenstate_spec(const PauliString &p) {
    if (!p.is_hermitian()) throw Error("eigenstate requested for a non-Hermitian Pauli " + p.str());
    if (p.sign() < 0 && p.is_identity_string()) {
        throw Error("-I has no +1 eigenstate");
    }
    EigenstatePrep prep;
    prep.labels.resize(p.size(), StateLabel::ZPlus);
    bool flip = p.sign() < 0;
    for (size_t q = 0; q < p.size(); q++) {
        uint8_t c = p.get(q);
        StateLabel l = StateLabel::ZPlus;
        switch (c) {
            case 1: l = StateLabel::XPlus; break;
            case 2: l = StateLabel::ZPlus; break;
            case 3: l = StateLabel::YPlus; break;
            default: continue;
        }
        if (flip) {
            l = static_cast<StateLabel>(static_cast<uint8_t>(l) + 1);
            flip = false;
        }
        prep.labels[q] = l;
    }
    return prep;
}

/// Amplitudes (a0, a1) of a one-qubit preparation label.
inline std::array<std::complex<double>, 2> state_amplitudes(StateLabel l) {
    const double h = 1.0 / std::sqrt(2.0);
    using C = std::complex<double>;
    switch (l) {
        case StateLabel::ZPlus: return {C(1, 0), C(0, 0)};
        case StateLabel::ZMinus: return {C(0, 0), C(1, 0)};
        case StateLabel::XPlus: return {C(h, 0), C(h, 0)};
        case StateLabel::XMinus: return {C(h, 0), C(-h, 0)};
        case StateLabel::YPlus: return {C(h, 0), C(0, h)};
        case StateLabel::YMinus: return {C(h, 0), C(0, -h)};
    }
    return {C(1, 0), C(0, 0)};
}

/// Probability distribution over unsigned n-qubit Pauli labels, dense,
/// indexed by x | z << n.
struct PauliChannel {
    size_t n = 0;
    std::vector<double> probs;

    static PauliChannel identity(size_t num_qubits) {
        PauliChannel c;
        c.n = num_qubits;
        c.probs.assign(size_t{1} << (2 * num_qubits), 0.0);
        c.probs[0] = 1.0;
        return c;
    }

    double identity_probability() const {
        return probs.empty() ? 0.0 : probs[0];
    }

    double total() const {
        double s = 0;
        for (double p : probs) s += p;
        return s;
    }

    /// Throws unless probabilities are non-negative and sum to 1 within tol.
    void validate(double tol = 1e-12) const {
        for (double p : probs) {
            if (!(p >= -tol) || p > 1 + tol) throw Error("Pauli channel probability out of range");
        }
        if (std::abs(total() - 1.0) > tol) throw Error("Pauli channel probabilities do not sum to 1");
    }

    double prob(const PauliString &p) const {
        return probs.at(p.dense_index());
    }
};

}  // namespace cliffproxy
