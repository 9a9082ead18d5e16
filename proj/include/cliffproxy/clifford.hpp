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
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cliffproxy/errors.hpp"
#include "cliffproxy/pauli.hpp"

namespace cliffproxy {

using Mat2 = Eigen::Matrix2cd;

inline Mat2 rz(double phi) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::polar(1.0, -phi / 2);
    m(1, 1) = std::polar(1.0, phi / 2);
    return m;
}

inline Mat2 rx_half_pi() {
    const double h = 1.0 / std::sqrt(2.0);
    Mat2 m;
    m << std::complex<double>(h, 0), std::complex<double>(0, -h), std::complex<double>(0, -h),
        std::complex<double>(h, 0);
    return m;
}

/// Operator Z(phi1) X(pi/2) Z(phi2) X(pi/2) Z(phi3); Z(phi3) acts first.
inline Mat2 euler_matrix(double phi1, double phi2, double phi3) {
    Mat2 x = rx_half_pi();
    return rz(phi1) * x * rz(phi2) * x * rz(phi3);
}

/// |Tr(A^dagger B)| / 2, equal to 1 iff the unitaries agree up to phase.
inline double phase_overlap(const Mat2 &a, const Mat2 &b) {
    return std::abs((a.adjoint() * b).trace()) / 2.0;
}

inline Mat2 letter_matrix(uint8_t code) {
    using C = std::complex<double>;
    Mat2 m = Mat2::Zero();
    switch (code & 3) {
        case 0: m << C(1), C(0), C(0), C(1); break;
        case 1: m << C(0), C(1), C(1), C(0); break;
        case 2: m << C(1), C(0), C(0), C(-1); break;
        case 3: m << C(0), C(0, -1), C(0, 1), C(0); break;
    }
    return m;
}

struct EulerAngles {
    double phi1 = 0, phi2 = 0, phi3 = 0;
};

/// Angles with euler_matrix(angles) equal to `u` up to global phase.
/// Each angle is normalized to (-pi, pi].
inline EulerAngles euler_from_unitary(const Mat2 &u) {
    using std::numbers::pi;
    std::complex<double> det = u.determinant();
    Mat2 s = u / std::sqrt(det);
    // s = [[alpha, -conj(beta)], [beta, conj(alpha)]].
    std::complex<double> alpha = s(0, 0), beta = s(1, 0);
    double sa = std::abs(alpha), sb = std::abs(beta);
    double phi2 = 2.0 * std::atan2(sa, sb);
    double sum = sa > 1e-14 ? -pi - 2.0 * std::arg(alpha) : 0.0;
    double diff = sb > 1e-14 ? 2.0 * std::arg(beta) + pi : 0.0;
    auto wrap = [](double a) {
        a = std::remainder(a, 2 * pi);
        if (a <= -pi) a += 2 * pi;
        return a;
    };
    return {wrap((sum + diff) / 2), wrap(phi2), wrap((sum - diff) / 2)};
}

/// One element of the 24-element one-qubit Clifford group (modulo phase).
struct OneQubitClifford {
    int index = 0;
    Mat2 matrix;
    /// Forward conjugation U P U^dagger = sign * image for each letter code.
    std::array<uint8_t, 4> image{};
    std::array<int8_t, 4> image_sign{};
    int inverse = 0;
    EulerAngles euler;
    /// Letter maps moving the two X(pi/2) faults of the fixed decomposition
    /// to the end of the gate: after-second-pulse faults pass Z(phi1), and
    /// after-first-pulse faults pass Z(phi1) X(pi/2) Z(phi2).
    std::array<uint8_t, 4> late_fault_map{};
    std::array<uint8_t, 4> early_fault_map{};
};

namespace detail {

inline void conjugation_table(const Mat2 &u, std::array<uint8_t, 4> &img, std::array<int8_t, 4> &sgn) {
    for (uint8_t c = 0; c < 4; c++) {
        Mat2 m = u * letter_matrix(c) * u.adjoint();
        bool found = false;
        for (uint8_t d = 0; d < 4 && !found; d++) {
            std::complex<double> t = (letter_matrix(d) * m).trace() / 2.0;
            if (std::abs(t.real() - 1) < 1e-9) {
                img[c] = d, sgn[c] = 1, found = true;
            } else if (std::abs(t.real() + 1) < 1e-9) {
                img[c] = d, sgn[c] = -1, found = true;
            }
        }
        if (!found) throw NotCliffordError("matrix does not conjugate Paulis to Paulis");
    }
}

struct CliffordTable {
    std::vector<OneQubitClifford> elements;
    std::array<std::array<int, 24>, 24> product{};  // product[a][b] = a * b (b acts first)

    CliffordTable() {
        using std::numbers::pi;
        const double h = 1.0 / std::sqrt(2.0);
        Mat2 hm, sm;
        hm << h, h, h, -h;
        sm << 1, 0, 0, std::complex<double>(0, 1);
        std::vector<Mat2> mats{Mat2::Identity()};
        for (size_t k = 0; k < mats.size(); k++) {
            for (const Mat2 &g : {hm, sm}) {
                Mat2 cand = g * mats[k];
                bool seen = false;
                for (const Mat2 &m : mats) seen = seen || phase_overlap(m, cand) > 1 - 1e-9;
                if (!seen) mats.push_back(cand);
            }
        }
        if (mats.size() != 24) throw Error("Clifford closure did not produce 24 elements");
        const double angles[4] = {0, pi / 2, pi, -pi / 2};
        elements.resize(24);
        for (int i = 0; i < 24; i++) {
            OneQubitClifford &c = elements[i];
            c.index = i;
            c.matrix = mats[i];
            conjugation_table(mats[i], c.image, c.image_sign);
            bool found = false;
            for (double a : angles) {
                for (double b : angles) {
                    for (double d : angles) {
                        if (!found && phase_overlap(euler_matrix(a, b, d), mats[i]) > 1 - 1e-12) {
                            c.euler = {a, b, d};
                            found = true;
                        }
                    }
                }
            }
            if (!found) throw Error("no fixed-length Euler form for Clifford " + std::to_string(i));
            std::array<int8_t, 4> unused{};
            conjugation_table(rz(c.euler.phi1), c.late_fault_map, unused);
            conjugation_table(rz(c.euler.phi1) * rx_half_pi() * rz(c.euler.phi2), c.early_fault_map, unused);
        }
        for (int a = 0; a < 24; a++) {
            for (int b = 0; b < 24; b++) product[a][b] = find(mats[a] * mats[b]);
        }
        for (int a = 0; a < 24; a++) {
            for (int b = 0; b < 24; b++) {
                if (product[a][b] == 0) elements[a].inverse = b;
            }
        }
    }

    int find(const Mat2 &u) const {
        for (const auto &e : elements) {
            if (phase_overlap(e.matrix, u) > 1 - 1e-9) return e.index;
        }
        return -1;
    }
};

}  // namespace detail

inline const detail::CliffordTable &clifford_table() {
    static const detail::CliffordTable table;
    return table;
}

inline const OneQubitClifford &one_qubit_clifford(int index) {
    if (index < 0 || index >= 24) throw Error("one-qubit Clifford index out of range: " + std::to_string(index));
    return clifford_table().elements[index];
}

/// Index of the Clifford equal to `u` up to phase, or -1.
inline int clifford_index_of(const Mat2 &u) {
    return clifford_table().find(u);
}

inline int compose_clifford(int later, int earlier) {
    return clifford_table().product[later][earlier];
}

/// Index of the Clifford equal to a Pauli letter.
inline int pauli_clifford_index(uint8_t code) {
    static const std::array<int, 4> idx = [] {
        std::array<int, 4> r{};
        for (uint8_t c = 0; c < 4; c++) r[c] = clifford_index_of(letter_matrix(c));
        return r;
    }();
    return idx[code & 3];
}

inline EulerAngles euler_angles(int clifford_index) {
    return one_qubit_clifford(clifford_index).euler;
}

/// Named Clifford gate indices.
namespace gates {
inline int identity() {
    return 0;
}
inline int hadamard() {
    const double h = 1.0 / std::sqrt(2.0);
    Mat2 m;
    m << h, h, h, -h;
    return clifford_index_of(m);
}
inline int phase_s() {
    Mat2 m;
    m << 1, 0, 0, std::complex<double>(0, 1);
    return clifford_index_of(m);
}
inline int sqrt_x() {
    return clifford_index_of(rx_half_pi());
}
}  // namespace gates

/// In-place forward conjugation P -> C P C^dagger by a one-qubit Clifford.
inline void apply_clifford(PauliString &p, size_t q, int clifford_index) {
    uint8_t c = p.get(q);
    if (c == 0) return;
    const OneQubitClifford &g = one_qubit_clifford(clifford_index);
    p.set(q, g.image[c]);
    if (g.image_sign[c] < 0) p.negate();
}

/// In-place conjugation by CZ (self-inverse).
inline void apply_cz(PauliString &p, size_t a, size_t b) {
    uint8_t ca = p.get(a), cb = p.get(b);
    bool xa = ca & 1, za = ca & 2, xb = cb & 1, zb = cb & 2;
    if (xa && xb && (za != zb)) p.negate();
    za ^= xb;
    zb ^= xa;
    p.set(a, static_cast<uint8_t>(xa | (za << 1)));
    p.set(b, static_cast<uint8_t>(xb | (zb << 1)));
}

/// In-place conjugation by CNOT with control c and target t (self-inverse).
inline void apply_cnot(PauliString &p, size_t c, size_t t) {
    uint8_t cc = p.get(c), ct = p.get(t);
    bool xc = cc & 1, zc = cc & 2, xt = ct & 1, zt = ct & 2;
    if (xc && zt && (xt == zc)) p.negate();
    xt ^= xc;
    zc ^= zt;
    p.set(c, static_cast<uint8_t>(xc | (zc << 1)));
    p.set(t, static_cast<uint8_t>(xt | (zt << 1)));
}

enum class TwoQubitGate : uint8_t { CZ, CNOT };

inline std::string two_qubit_gate_name(TwoQubitGate g) {
    return g == TwoQubitGate::CZ ? "CZ" : "CNOT";
}

inline TwoQubitGate two_qubit_gate_from_name(const std::string &name) {
    if (name == "CZ") return TwoQubitGate::CZ;
    if (name == "CNOT" || name == "CX") return TwoQubitGate::CNOT;
    throw Error("unknown two-qubit gate: " + name);
}

inline void apply_two_qubit(PauliString &p, TwoQubitGate g, size_t a, size_t b) {
    if (g == TwoQubitGate::CZ) {
        apply_cz(p, a, b);
    } else {
        apply_cnot(p, a, b);
    }
}

/// Stabilizer tableau of an n-qubit Clifford C: the images C X_k C^dagger
/// and C Z_k C^dagger of every generator, signs included.
class CliffordTableau {
   public:
    explicit CliffordTableau(size_t n = 0) : n_(n) {
        for (size_t k = 0; k < n; k++) {
            PauliString x(n), z(n);
            x.set(k, Letter::X);
            z.set(k, Letter::Z);
            xs_.push_back(std::move(x));
            zs_.push_back(std::move(z));
        }
    }

    static CliffordTableau identity(size_t n) {
        return CliffordTableau(n);
    }

    static CliffordTableau from_images(std::vector<PauliString> x_images, std::vector<PauliString> z_images) {
        CliffordTableau t;
        t.n_ = x_images.size();
        t.xs_ = std::move(x_images);
        t.zs_ = std::move(z_images);
        return t;
    }

    /// Single gate on `qubits` of an n-qubit register. Names: CZ, CNOT, H, S,
    /// X, Y, Z, SX (the X(pi/2) pulse) and C0..C23 for the indexed Cliffords.
    static CliffordTableau from_gate(const std::string &name, const std::vector<size_t> &qubits, size_t n);

    size_t size() const {
        return n_;
    }
    const PauliString &x_image(size_t k) const {
        return xs_[k];
    }
    const PauliString &z_image(size_t k) const {
        return zs_[k];
    }

    /// Applies a gate after everything already in the tableau.
    void then_one_qubit(size_t q, int clifford_index) {
        for (auto &r : xs_) apply_clifford(r, q, clifford_index);
        for (auto &r : zs_) apply_clifford(r, q, clifford_index);
    }
    void then_two_qubit(TwoQubitGate g, size_t a, size_t b) {
        for (auto &r : xs_) apply_two_qubit(r, g, a, b);
        for (auto &r : zs_) apply_two_qubit(r, g, a, b);
    }

    /// Signed image C P C^dagger.
    PauliString conjugate(const PauliString &p) const {
        if (p.size() != n_) throw DimensionError("tableau and Pauli sizes differ");
        PauliString out(n_);
        uint8_t phase = p.phase();
        for (size_t q = 0; q < n_; q++) {
            uint8_t c = p.get(q);
            if (c == 3) phase += 1;  // Y = i X Z
            if (c & 1) out = multiply(out, xs_[q]);
            if (c & 2) out = multiply(out, zs_[q]);
        }
        out.set_phase(static_cast<uint8_t>((out.phase() + phase) & 3));
        return out;
    }

    /// Tableau of the symplectic and sign-exact inverse C^dagger.
    CliffordTableau inverse() const {
        CliffordTableau inv(n_);
        auto solve = [&](const PauliString &g) {
            PauliString q(n_);
            for (size_t k = 0; k < n_; k++) {
                bool xk = !commutes(g, zs_[k]);
                bool zk = !commutes(g, xs_[k]);
                q.set(k, static_cast<uint8_t>(xk | (zk << 1)));
            }
            PauliString back = conjugate(q);
            if (!back.same_letters(g)) throw Error("tableau is not symplectic");
            if (back.phase() != g.phase()) q.negate();
            return q;
        };
        for (size_t k = 0; k < n_; k++) {
            PauliString x(n_), z(n_);
            x.set(k, Letter::X);
            z.set(k, Letter::Z);
            inv.xs_[k] = solve(x);
            inv.zs_[k] = solve(z);
        }
        return inv;
    }

    /// True when every row satisfies the symplectic commutation relations
    /// and carries a Hermitian sign.
    bool is_symplectic() const {
        for (size_t a = 0; a < n_; a++) {
            if (!xs_[a].is_hermitian() || !zs_[a].is_hermitian()) return false;
            for (size_t b = 0; b < n_; b++) {
                if (!commutes(xs_[a], xs_[b]) || !commutes(zs_[a], zs_[b])) return false;
                if (commutes(xs_[a], zs_[b]) != (a != b)) return false;
            }
        }
        return true;
    }

    bool operator==(const CliffordTableau &o) const = default;

   private:
    size_t n_;
    std::vector<PauliString> xs_;
    std::vector<PauliString> zs_;
};

/// Tableau of "first, then second", i.e. the Clifford second * first.
inline CliffordTableau compose(const CliffordTableau &first, const CliffordTableau &second) {
    if (first.size() != second.size()) throw DimensionError("tableau sizes differ");
    std::vector<PauliString> xs, zs;
    for (size_t k = 0; k < first.size(); k++) {
        xs.push_back(second.conjugate(first.x_image(k)));
        zs.push_back(second.conjugate(first.z_image(k)));
    }
    return CliffordTableau::from_images(std::move(xs), std::move(zs));
}

inline CliffordTableau inverse(const CliffordTableau &t) {
    return t.inverse();
}

inline CliffordTableau CliffordTableau::from_gate(const std::string &name, const std::vector<size_t> &qubits,
                                                  size_t n) {
    for (size_t q : qubits) {
        if (q >= n) throw DimensionError("gate qubit " + std::to_string(q) + " outside register of " + std::to_string(n));
    }
    CliffordTableau t(n);
    if (name == "CZ" || name == "CNOT" || name == "CX") {
        if (qubits.size() != 2) throw Error(name + " needs two qubits");
        if (qubits[0] == qubits[1]) throw Error(name + " applied to overlapping qubits");
        t.then_two_qubit(two_qubit_gate_from_name(name), qubits[0], qubits[1]);
        return t;
    }
    if (qubits.size() != 1) throw Error(name + " needs one qubit");
    int idx = -1;
    if (name == "H") {
        idx = gates::hadamard();
    } else if (name == "S") {
        idx = gates::phase_s();
    } else if (name == "X") {
        idx = pauli_clifford_index(1);
    } else if (name == "Y") {
        idx = pauli_clifford_index(3);
    } else if (name == "Z") {
        idx = pauli_clifford_index(2);
    } else if (name == "SX") {
        idx = gates::sqrt_x();
    } else if (name.size() >= 2 && name[0] == 'C' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
        idx = std::stoi(name.substr(1));
        if (idx < 0 || idx >= 24) idx = -1;
    }
    if (idx < 0) throw Error("unknown gate name: " + name);
    t.then_one_qubit(qubits[0], idx);
    return t;
}

}  // namespace cliffproxy
