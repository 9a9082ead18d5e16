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

#include <cmath>

#include "cliffproxy/dense.hpp"
#include "cliffproxy/sdp.hpp"

namespace cliffproxy {

constexpr size_t kDiamondQubitLimit = 3;

struct DiamondOptions {
    double gap_tol = 1e-9;
    int max_iterations = 150;
};

struct DiamondResult {
    double value = 0;
    double gap = 0;
    int iterations = 0;
};

/// Half diamond norm of a Hermiticity-preserving, trace-annihilating map
/// given by its Choi matrix (input factor first):
///   min t  s.t.  t I >= Tr_out Z,  Z >= J,  Z >= 0.
inline DiamondResult half_diamond_norm_of_choi(const Eigen::MatrixXcd &j, size_t d, const DiamondOptions &opt = {}) {
    const size_t D = d * d;
    if (static_cast<size_t>(j.rows()) != D || static_cast<size_t>(j.cols()) != D) throw DimensionError("Choi matrix has the wrong size");
    sdp::Problem p;
    p.block_sizes = {d, D, D};
    p.c = {Eigen::MatrixXcd::Zero(d, d), -j, Eigen::MatrixXcd::Zero(D, D)};

    std::vector<sdp::Entry> at;
    for (size_t k = 0; k < d; k++) at.push_back({0, k, k, -1.0});
    p.a.push_back(at);

    // Z = sum_k z_k B_k over a Hermitian basis of D x D matrices.
    auto push_basis = [&](size_t r, size_t c, cd v_rc) {
        std::vector<sdp::Entry> e;
        auto add = [&](size_t row, size_t col, cd v) {
            if (row % d == col % d) e.push_back({0, row / d, col / d, v});
            e.push_back({1, row, col, -v});
            e.push_back({2, row, col, -v});
        };
        add(r, c, v_rc);
        if (r != c) add(c, r, std::conj(v_rc));
        p.a.push_back(e);
    };
    for (size_t r = 0; r < D; r++) {
        push_basis(r, r, 1.0);
        for (size_t c = r + 1; c < D; c++) {
            push_basis(r, c, 1.0);
            push_basis(r, c, cd(0, 1));
        }
    }
    p.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.a.size()));
    p.b(0) = -1.0;

    sdp::Options so;
    so.gap_tol = opt.gap_tol;
    so.feas_tol = opt.gap_tol;
    so.max_iterations = opt.max_iterations;
    sdp::Result r = sdp::solve(p, so);
    if (!r.converged) throw SolverError("diamond-norm SDP did not converge", r.gap);
    return {-0.5 * (r.primal_objective + r.dual_objective), r.gap, r.iterations};
}

/// Diamond distance (half the diamond norm of the difference) between two
/// channels given as transfer matrices.
inline DiamondResult diamond_distance_detailed(const Ptm &ideal, const Ptm &noisy, const DiamondOptions &opt = {}) {
    if (ideal.n != noisy.n) throw DimensionError("PTM sizes differ");
    if (ideal.n > kDiamondQubitLimit) {
        throw DimensionError("diamond distance is limited to " + std::to_string(kDiamondQubitLimit) + " qubits");
    }
    Ptm diff{ideal.n, noisy.m - ideal.m};
    Eigen::MatrixXcd j = choi_from_ptm(diff);
    j = 0.5 * (j + j.adjoint()).eval();
    DiamondResult r = half_diamond_norm_of_choi(j, size_t{1} << ideal.n, opt);
    r.value = std::max(0.0, r.value);
    return r;
}

inline double diamond_distance(const Ptm &ideal, const Ptm &noisy, const DiamondOptions &opt = {}) {
    return diamond_distance_detailed(ideal, noisy, opt).value;
}

/// Closed form for a Pauli error channel: 1 - p_I.
inline double pauli_channel_diamond(const PauliChannel &ch) {
    ch.validate();
    return 1.0 - ch.identity_probability();
}

}  // namespace cliffproxy
