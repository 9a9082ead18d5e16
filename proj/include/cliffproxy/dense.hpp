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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <vector>

#include "cliffproxy/circuit.hpp"
#include "cliffproxy/errors.hpp"
#include "cliffproxy/noise.hpp"
#include "cliffproxy/pauli.hpp"

namespace cliffproxy {

using cd = std::complex<double>;

constexpr size_t kPtmQubitLimit = 4;
constexpr size_t kStatevectorQubitLimit = 14;

inline size_t pow4(size_t n) {
    return size_t{1} << (2 * n);
}

/// Pauli transfer matrix. Basis is lexicographic in (I, X, Y, Z) with qubit 0
/// the most significant digit; entries are Tr(P_i E(P_j)) / 2^n.
struct Ptm {
    size_t n = 0;
    Eigen::MatrixXd m;

    static Ptm identity(size_t n) {
        return {n, Eigen::MatrixXd::Identity(pow4(n), pow4(n))};
    }

    /// `later` applied after this map.
    Ptm then(const Ptm &later) const {
        if (later.n != n) throw DimensionError("PTM sizes differ");
        return {n, later.m * m};
    }

    bool is_trace_preserving(double tol = 1e-10) const {
        if (std::abs(m(0, 0) - 1.0) > tol) return false;
        for (Eigen::Index j = 1; j < m.cols(); j++) {
            if (std::abs(m(0, j)) > tol) return false;
        }
        return true;
    }
};

/// Unsigned Pauli for PTM basis index i.
inline PauliString ptm_basis_pauli(size_t n, size_t i) {
    PauliString p(n);
    for (size_t q = n; q-- > 0;) {
        p.set(q, letter_from_ixyz(static_cast<int>(i & 3)));
        i >>= 2;
    }
    return p;
}

inline size_t ptm_index(const PauliString &p) {
    size_t i = 0;
    for (size_t q = 0; q < p.size(); q++) i = (i << 2) | static_cast<size_t>(letter_ixyz(p.get(q)));
    return i;
}

/// Dense matrix of a (possibly phased) Pauli; qubit q is bit q of the basis index.
inline Eigen::MatrixXcd pauli_matrix(const PauliString &p) {
    const size_t n = p.size();
    const size_t d = size_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    static const cd ipow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    for (size_t b = 0; b < d; b++) {
        // P|b> = coeff |b ^ x>; each Y contributes i * (-1)^bit, each Z (-1)^bit.
        size_t out = b;
        int ph = p.phase();
        for (size_t q = 0; q < n; q++) {
            uint8_t c = p.get(q);
            bool bit = (b >> q) & 1;
            if (c & 1) out ^= size_t{1} << q;
            if (c == 3) ph += 1;
            if ((c & 2) && bit) ph += 2;
        }
        m(out, b) = ipow[ph & 3];
    }
    return m;
}

namespace detail {

inline void require_ptm_size(size_t n) {
    if (n > kPtmQubitLimit) {
        throw DimensionError("dense transfer matrices are limited to " + std::to_string(kPtmQubitLimit) + " qubits");
    }
}

inline Eigen::MatrixXcd embed_one_qubit(size_t n, size_t q, const Mat2 &g) {
    const size_t d = size_t{1} << n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, d);
    const size_t bit = size_t{1} << q;
    for (size_t b = 0; b < d; b++) {
        size_t b0 = b & ~bit;
        int in = (b >> q) & 1;
        u(b0, b) += g(0, in);
        u(b0 | bit, b) += g(1, in);
    }
    return u;
}

}  // namespace detail

inline Eigen::MatrixXcd one_qubit_layer_unitary(size_t n, const std::vector<OneQubitGateSpec> &layer) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(size_t{1} << n, size_t{1} << n);
    for (size_t q = 0; q < n; q++) u = detail::embed_one_qubit(n, q, layer[q].matrix()) * u;
    return u;
}

inline Eigen::MatrixXcd entangling_layer_unitary(size_t n, const EntanglingLayer &layer) {
    const size_t d = size_t{1} << n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, d);
    for (size_t b = 0; b < d; b++) {
        size_t out = b;
        double sign = 1;
        for (auto [a, c] : layer.pairs) {
            bool ba = (out >> a) & 1, bc = (out >> c) & 1;
            if (layer.gate == TwoQubitGate::CZ) {
                if (ba && bc) sign = -sign;
            } else if (ba) {
                out ^= size_t{1} << c;
            }
        }
        u(out, b) = sign;
    }
    return u;
}

inline Eigen::MatrixXcd layer_unitary(const LayeredCircuit &c, size_t l) {
    return LayeredCircuit::is_one_qubit_layer(l) ? one_qubit_layer_unitary(c.n, c.one_qubit_layer_at(l))
                                                 : entangling_layer_unitary(c.n, c.entangling_layer_at(l));
}

inline Eigen::MatrixXcd circuit_unitary(const LayeredCircuit &c) {
    if (c.n > 10) throw DimensionError("dense unitaries are limited to 10 qubits");
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(size_t{1} << c.n, size_t{1} << c.n);
    for (size_t l = 0; l < c.num_layers(); l++) u = layer_unitary(c, l) * u;
    return u;
}

inline Ptm unitary_ptm(const Eigen::MatrixXcd &u, size_t n) {
    detail::require_ptm_size(n);
    const size_t d = size_t{1} << n, N = pow4(n);
    std::vector<Eigen::MatrixXcd> paulis(N);
    for (size_t i = 0; i < N; i++) paulis[i] = pauli_matrix(ptm_basis_pauli(n, i));
    Ptm r{n, Eigen::MatrixXd::Zero(N, N)};
    for (size_t j = 0; j < N; j++) {
        Eigen::MatrixXcd a = u * paulis[j] * u.adjoint();
        for (size_t i = 0; i < N; i++) {
            // Tr(P_i A) with P_i a monomial matrix.
            cd t = (paulis[i].transpose().array() * a.array()).sum();
            r.m(i, j) = t.real() / static_cast<double>(d);
        }
    }
    return r;
}

/// Diagonal of a Pauli channel's PTM: lambda_P = sum_F p_F (-1)^{<F,P>}.
inline Eigen::VectorXd pauli_eigenvalues(const PauliChannel &ch) {
    const size_t n = ch.n, N = pow4(n);
    // Walsh-Hadamard transform over the 2n symplectic bits, in x | z << n labels.
    std::vector<double> w = ch.probs;
    for (size_t h = 1; h < N; h <<= 1) {
        for (size_t i = 0; i < N; i += 2 * h) {
            for (size_t k = i; k < i + h; k++) {
                double a = w[k], b = w[k + h];
                w[k] = a + b;
                w[k + h] = a - b;
            }
        }
    }
    // w[s] = sum_F p_F (-1)^{F.s}; the symplectic form swaps x and z.
    const uint64_t mask = (uint64_t{1} << n) - 1;
    Eigen::VectorXd lambda(N);
    for (size_t i = 0; i < N; i++) {
        PauliString p = ptm_basis_pauli(n, i);
        uint64_t idx = p.dense_index();
        uint64_t swapped = ((idx & mask) << n) | (idx >> n);
        lambda(i) = w[swapped];
    }
    return lambda;
}

inline Ptm pauli_channel_ptm(const PauliChannel &ch) {
    detail::require_ptm_size(ch.n);
    return {ch.n, pauli_eigenvalues(ch).asDiagonal()};
}

/// Inverse of pauli_eigenvalues: recovers channel probabilities from a PTM diagonal.
inline PauliChannel pauli_channel_from_diagonal(size_t n, const Eigen::VectorXd &diag) {
    const size_t N = pow4(n);
    const uint64_t mask = (uint64_t{1} << n) - 1;
    std::vector<double> w(N);
    for (size_t i = 0; i < N; i++) {
        uint64_t idx = ptm_basis_pauli(n, i).dense_index();
        w[((idx & mask) << n) | (idx >> n)] = diag(i);
    }
    for (size_t h = 1; h < N; h <<= 1) {
        for (size_t i = 0; i < N; i += 2 * h) {
            for (size_t k = i; k < i + h; k++) {
                double a = w[k], b = w[k + h];
                w[k] = a + b;
                w[k + h] = a - b;
            }
        }
    }
    PauliChannel ch{n, std::vector<double>(N)};
    for (size_t i = 0; i < N; i++) ch.probs[i] = w[i] / static_cast<double>(N);
    return ch;
}

namespace detail {

inline Eigen::MatrixXd kron(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

/// Tensor product of one-qubit PTMs, qubit 0 first.
inline Ptm product_ptm(const std::vector<Eigen::Matrix4d> &locals) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(1, 1);
    for (const auto &l : locals) m = kron(m, l);
    return {locals.size(), m};
}

}  // namespace detail

/// Independent X flips before the circuit.
inline Ptm prep_flip_ptm(const SpamModel &spam) {
    std::vector<Eigen::Matrix4d> locals;
    for (double p : spam.prep_flip) {
        Eigen::Matrix4d l = Eigen::Matrix4d::Identity();
        l(2, 2) = l(3, 3) = 1 - 2 * p;
        locals.push_back(l);
    }
    return detail::product_ptm(locals);
}

/// Readout confusion as a pre-measurement map: dephasing followed by
/// classical flips 0->1 and 1->0.
inline Ptm measurement_ptm(const SpamModel &spam) {
    std::vector<Eigen::Matrix4d> locals;
    for (size_t q = 0; q < spam.size(); q++) {
        double e01 = spam.meas_flip_0to1[q], e10 = spam.meas_flip_1to0[q];
        Eigen::Matrix4d l = Eigen::Matrix4d::Zero();
        l(0, 0) = 1;
        l(3, 0) = e10 - e01;
        l(3, 3) = 1 - e01 - e10;
        locals.push_back(l);
    }
    return detail::product_ptm(locals);
}

/// PTM of the whole circuit; layer errors follow their layers when noise is
/// given and SPAM maps bracket the circuit when spam is given.
inline Ptm circuit_ptm(const LayeredCircuit &c, const NoiseModel *noise = nullptr, const SpamModel *spam = nullptr) {
    detail::require_ptm_size(c.n);
    c.validate();
    if (noise) noise->check_covers(c);
    Ptm r = Ptm::identity(c.n);
    if (spam) {
        spam->validate(c.n);
        r = prep_flip_ptm(*spam);
    }
    for (size_t l = 0; l < c.num_layers(); l++) {
        r = r.then(unitary_ptm(layer_unitary(c, l), c.n));
        if (noise) r = r.then(pauli_channel_ptm(layer_channel(c, *noise, l).to_dense()));
    }
    if (spam) r = r.then(measurement_ptm(*spam));
    return r;
}

inline double process_fidelity(const Ptm &ideal, const Ptm &noisy) {
    if (ideal.n != noisy.n || ideal.m.rows() != noisy.m.rows() || ideal.m.cols() != noisy.m.cols()) {
        throw DimensionError("PTM shapes differ");
    }
    return (ideal.m.transpose() * noisy.m).trace() / static_cast<double>(pow4(ideal.n));
}

inline double average_fidelity(double f_pro, size_t n) {
    const double d = std::ldexp(1.0, static_cast<int>(n));
    const double lo = -1.0 / (d * d - 1.0);
    if (!(f_pro >= lo - 1e-12 && f_pro <= 1.0 + 1e-12)) throw Error("process fidelity out of range");
    return (d * f_pro + 1.0) / (d + 1.0);
}

/// Choi matrix sum_ab |a><b| (x) E(|a><b|), input factor first; trace 2^n.
inline Eigen::MatrixXcd choi_from_ptm(const Ptm &r) {
    const size_t n = r.n, d = size_t{1} << n, N = pow4(n);
    std::vector<Eigen::MatrixXcd> paulis(N);
    for (size_t i = 0; i < N; i++) paulis[i] = pauli_matrix(ptm_basis_pauli(n, i));
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (size_t jj = 0; jj < N; jj++) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
        for (size_t i = 0; i < N; i++) {
            if (r.m(i, jj) != 0) out += r.m(i, jj) * paulis[i];
        }
        Eigen::MatrixXcd pt = paulis[jj].transpose();
        for (size_t a = 0; a < d; a++) {
            for (size_t b = 0; b < d; b++) {
                if (pt(a, b) != cd(0)) j.block(a * d, b * d, d, d) += pt(a, b) * out;
            }
        }
    }
    return j / static_cast<double>(d);
}

/// Output distribution of the PTM acting on |0...0><0...0|.
inline std::vector<double> output_probs_from_ptm(const Ptm &r) {
    const size_t n = r.n, d = size_t{1} << n, N = pow4(n);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(N);
    std::vector<size_t> zlike;
    for (size_t i = 0; i < N; i++) {
        bool diag = true;
        for (size_t k = i; k; k >>= 2) diag = diag && ((k & 3) == 0 || (k & 3) == 3);
        if (diag) {
            c(i) = 1;
            zlike.push_back(i);
        }
    }
    Eigen::VectorXd out = r.m * c;
    std::vector<double> probs(d, 0.0);
    for (size_t b = 0; b < d; b++) {
        double s = 0;
        for (size_t i : zlike) {
            int parity = 0;
            for (size_t q = 0; q < n; q++) {
                size_t digit = (i >> (2 * (n - 1 - q))) & 3;
                if (digit == 3 && ((b >> q) & 1)) parity ^= 1;
            }
            s += parity ? -out(i) : out(i);
        }
        probs[b] = s / static_cast<double>(d);
    }
    return probs;
}

inline void write_matrix_csv(std::ostream &os, const Eigen::MatrixXd &m) {
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < m.cols(); j++) os << (j ? "," : "") << exact_decimal(m(i, j));
        os << "\n";
    }
}

inline void write_matrix_csv(std::ostream &os, const Eigen::MatrixXcd &m) {
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            os << (j ? "," : "") << exact_decimal(m(i, j).real()) << (m(i, j).imag() < 0 ? "" : "+")
               << exact_decimal(m(i, j).imag()) << "i";
        }
        os << "\n";
    }
}

/// 2^n amplitudes; qubit q is bit q of the index.
class Statevector {
   public:
    explicit Statevector(size_t n) : n_(n), amps_(size_t{1} << n, cd(0)) {
        if (n > kStatevectorQubitLimit) {
            throw DimensionError("statevector simulation is capped at " + std::to_string(kStatevectorQubitLimit) +
                                 " qubits (2^n amplitudes)");
        }
        amps_[0] = 1;
    }

    size_t size() const {
        return n_;
    }
    const std::vector<cd> &amplitudes() const {
        return amps_;
    }
    std::vector<cd> &amplitudes() {
        return amps_;
    }

    double norm() const {
        double s = 0;
        for (auto a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

    void apply_one_qubit(size_t q, const Mat2 &g) {
        const size_t bit = size_t{1} << q;
        for (size_t b = 0; b < amps_.size(); b++) {
            if (b & bit) continue;
            cd a0 = amps_[b], a1 = amps_[b | bit];
            amps_[b] = g(0, 0) * a0 + g(0, 1) * a1;
            amps_[b | bit] = g(1, 0) * a0 + g(1, 1) * a1;
        }
    }

    void apply_two_qubit(TwoQubitGate gate, size_t a, size_t c) {
        const size_t ba = size_t{1} << a, bc = size_t{1} << c;
        for (size_t b = 0; b < amps_.size(); b++) {
            if (gate == TwoQubitGate::CZ) {
                if ((b & ba) && (b & bc)) amps_[b] = -amps_[b];
            } else if ((b & ba) && !(b & bc)) {
                std::swap(amps_[b], amps_[b | bc]);
            }
        }
    }

    void apply_pauli(const PauliString &p) {
        for (size_t q = 0; q < n_; q++) {
            uint8_t code = p.get(q);
            if (code) apply_one_qubit(q, letter_matrix(code));
        }
    }

    void apply_layer(const LayeredCircuit &c, size_t l) {
        if (LayeredCircuit::is_one_qubit_layer(l)) {
            const auto &layer = c.one_qubit_layer_at(l);
            for (size_t q = 0; q < n_; q++) apply_one_qubit(q, layer[q].matrix());
        } else {
            const auto &layer = c.entangling_layer_at(l);
            for (auto [a, b] : layer.pairs) apply_two_qubit(layer.gate, a, b);
        }
    }

    std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (size_t b = 0; b < amps_.size(); b++) p[b] = std::norm(amps_[b]);
        return p;
    }

   private:
    size_t n_;
    std::vector<cd> amps_;
};

inline std::vector<double> ideal_output_probs(const LayeredCircuit &c) {
    c.validate();
    Statevector s(c.n);
    for (size_t l = 0; l < c.num_layers(); l++) s.apply_layer(c, l);
    return s.probabilities();
}

namespace detail {

inline uint64_t sample_index(const std::vector<double> &cumulative, Rng &rng) {
    double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return static_cast<uint64_t>(it - cumulative.begin());
}

inline std::vector<double> cumulative(const std::vector<double> &p) {
    std::vector<double> c(p.size());
    double s = 0;
    for (size_t i = 0; i < p.size(); i++) c[i] = (s += p[i]);
    return c;
}

}  // namespace detail

/// Monte Carlo shots: exact gates, one sampled Pauli fault after every layer,
/// SPAM flips at the boundaries. Bit q of each result is qubit q.
inline std::vector<uint64_t> statevector_simulate(const LayeredCircuit &c, const NoiseModel *noise, Rng &rng,
                                                  size_t shots, const SpamModel *spam = nullptr) {
    c.validate();
    if (c.n > kStatevectorQubitLimit) {
        throw DimensionError("statevector simulation is capped at " + std::to_string(kStatevectorQubitLimit) + " qubits");
    }
    if (noise) noise->check_covers(c);
    if (spam) spam->validate(c.n);
    const size_t L = c.num_layers();
    std::vector<LayerErrorChannel> channels;
    if (noise) {
        for (size_t l = 0; l < L; l++) channels.push_back(layer_channel(c, *noise, l));
    }
    // Prep flips are X faults on |0...0>, so the cached trajectories below
    // only apply when no flip fires.
    std::vector<Statevector> prefix;
    prefix.reserve(L + 1);
    prefix.emplace_back(c.n);
    for (size_t l = 0; l < L; l++) {
        prefix.push_back(prefix.back());
        prefix.back().apply_layer(c, l);
    }
    const auto ideal_cdf = detail::cumulative(prefix.back().probabilities());

    std::vector<uint64_t> out;
    out.reserve(shots);
    std::vector<PauliString> faults;
    for (size_t s = 0; s < shots; s++) {
        PauliString prep(c.n);
        if (spam) {
            for (size_t q = 0; q < c.n; q++) {
                if (rng.bernoulli(spam->prep_flip[q])) prep.set(q, 1);
            }
        }
        faults.clear();
        size_t first = L;
        for (size_t l = 0; l < channels.size(); l++) {
            faults.push_back(channels[l].sample(rng));
            if (first == L && !faults.back().is_identity_string()) first = l;
        }
        uint64_t bits;
        if (prep.is_identity_string() && first == L) {
            bits = detail::sample_index(ideal_cdf, rng);
        } else {
            size_t start = prep.is_identity_string() ? first + 1 : 0;
            Statevector sv = prefix[start];
            if (!prep.is_identity_string()) sv.apply_pauli(prep);
            for (size_t l = 0; l < L; l++) {
                if (l >= start) sv.apply_layer(c, l);
                if (l + 1 >= start && l < faults.size() && !faults[l].is_identity_string()) sv.apply_pauli(faults[l]);
            }
            bits = detail::sample_index(detail::cumulative(sv.probabilities()), rng);
        }
        if (spam) {
            for (size_t q = 0; q < c.n; q++) {
                bool one = (bits >> q) & 1;
                if (rng.bernoulli(one ? spam->meas_flip_1to0[q] : spam->meas_flip_0to1[q])) bits ^= uint64_t{1} << q;
            }
        }
        out.push_back(bits);
    }
    return out;
}

}  // namespace cliffproxy
