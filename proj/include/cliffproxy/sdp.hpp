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
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "cliffproxy/errors.hpp"

namespace cliffproxy::sdp {

using cd = std::complex<double>;
using Block = Eigen::MatrixXcd;

/// One nonzero of a constraint matrix. Hermitian constraints list both
/// (row, col) and (col, row).
struct Entry {
    size_t block;
    size_t row;
    size_t col;
    cd value;
};

/// Block-diagonal complex Hermitian SDP in standard form:
///   primal  min <C, X>  s.t. <A_i, X> = b_i,  X >= 0
///   dual    max b.y     s.t. C - sum_i y_i A_i = S >= 0
/// with <A, X> = Re Tr(A X).
struct Problem {
    std::vector<size_t> block_sizes;
    std::vector<Block> c;
    std::vector<std::vector<Entry>> a;
    Eigen::VectorXd b;
};

struct Options {
    double gap_tol = 1e-10;
    double feas_tol = 1e-10;
    int max_iterations = 100;
    double step_fraction = 0.95;
};

struct Result {
    std::vector<Block> x;
    std::vector<Block> s;
    Eigen::VectorXd y;
    double primal_objective = 0;
    double dual_objective = 0;
    double gap = 0;
    double primal_infeasibility = 0;
    double dual_infeasibility = 0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

inline double inner(const std::vector<Entry> &a, const std::vector<Block> &k) {
    double s = 0;
    for (const auto &e : a) s += (e.value * k[e.block](e.col, e.row)).real();
    return s;
}

inline double inner(const std::vector<Block> &p, const std::vector<Block> &q) {
    double s = 0;
    for (size_t k = 0; k < p.size(); k++) s += (p[k].conjugate().cwiseProduct(q[k])).sum().real();
    return s;
}

inline void add_scaled(std::vector<Block> &out, const std::vector<Entry> &a, double y) {
    for (const auto &e : a) out[e.block](e.row, e.col) += y * e.value;
}

inline std::vector<Block> zeros(const std::vector<size_t> &sizes) {
    std::vector<Block> out;
    for (size_t n : sizes) out.push_back(Block::Zero(n, n));
    return out;
}

inline Block hermitian_part(const Block &m) {
    return 0.5 * (m + m.adjoint());
}

inline Block inverse_hpd(const Block &m) {
    Eigen::LLT<Block> llt(m);
    if (llt.info() != Eigen::Success) throw SolverError("iterate left the positive cone", std::numeric_limits<double>::infinity());
    return llt.solve(Block::Identity(m.rows(), m.cols()));
}

/// Largest step in (0, 1] keeping m + alpha dm positive definite, before damping.
inline double max_step(const std::vector<Block> &m, const std::vector<Block> &dm) {
    double alpha = 1.0;
    for (size_t k = 0; k < m.size(); k++) {
        Eigen::LLT<Block> llt(m[k]);
        Block l = llt.matrixL();
        Block linv = l.triangularView<Eigen::Lower>().solve(Block::Identity(l.rows(), l.cols()));
        Block w = hermitian_part(linv * dm[k] * linv.adjoint());
        Eigen::SelfAdjointEigenSolver<Block> es(w, Eigen::EigenvaluesOnly);
        double lmin = es.eigenvalues().minCoeff();
        if (lmin < 0) alpha = std::min(alpha, -1.0 / lmin);
    }
    return alpha;
}

}  // namespace detail

/// Infeasible primal-dual path following with the HKM search direction and a
/// Mehrotra predictor-corrector step.
inline Result solve(const Problem &p, const Options &opt = {}) {
    const size_t m = p.a.size();
    const size_t nb = p.block_sizes.size();
    if (p.c.size() != nb || static_cast<size_t>(p.b.size()) != m) throw Error("SDP problem data sizes are inconsistent");
    size_t total_dim = 0;
    for (size_t s : p.block_sizes) total_dim += s;

    // Group constraint entries by block for the Schur complement.
    std::vector<std::vector<std::vector<Entry>>> by_block(nb, std::vector<std::vector<Entry>>(m));
    for (size_t i = 0; i < m; i++) {
        for (const auto &e : p.a[i]) by_block[e.block][i].push_back(e);
    }

    double cnorm = 0;
    for (const auto &blk : p.c) cnorm = std::max(cnorm, blk.cwiseAbs().maxCoeff());
    const double scale = 1.0 + cnorm;

    Result r;
    r.x = detail::zeros(p.block_sizes);
    r.s = detail::zeros(p.block_sizes);
    for (size_t k = 0; k < nb; k++) {
        r.x[k].setIdentity();
        r.s[k] = scale * Block::Identity(p.block_sizes[k], p.block_sizes[k]);
    }
    r.y = Eigen::VectorXd::Zero(m);

    auto residuals = [&](std::vector<Block> &rd, Eigen::VectorXd &rp) {
        rp.resize(m);
        for (size_t i = 0; i < m; i++) rp(i) = p.b(i) - detail::inner(p.a[i], r.x);
        rd = p.c;
        for (size_t k = 0; k < nb; k++) rd[k] -= r.s[k];
        for (size_t i = 0; i < m; i++) detail::add_scaled(rd, p.a[i], -r.y(i));
    };

    const double bnorm = 1.0 + p.b.norm();
    std::vector<Block> rd;
    Eigen::VectorXd rp;
    for (int it = 0; it < opt.max_iterations; it++) {
        residuals(rd, rp);
        double rdn = 0;
        for (const auto &blk : rd) rdn = std::max(rdn, blk.norm());
        r.primal_objective = detail::inner(p.c, r.x);
        r.dual_objective = p.b.dot(r.y);
        r.gap = std::abs(r.primal_objective - r.dual_objective);
        r.primal_infeasibility = rp.norm() / bnorm;
        r.dual_infeasibility = rdn / scale;
        r.iterations = it;
        double rel_gap = r.gap / (1.0 + std::abs(r.primal_objective) + std::abs(r.dual_objective));
        if (rel_gap <= opt.gap_tol && r.gap <= 10 * opt.gap_tol && r.primal_infeasibility <= opt.feas_tol &&
            r.dual_infeasibility <= opt.feas_tol) {
            r.converged = true;
            return r;
        }

        const double mu = detail::inner(r.x, r.s) / static_cast<double>(total_dim);
        std::vector<Block> sinv(nb);
        for (size_t k = 0; k < nb; k++) sinv[k] = detail::inverse_hpd(r.s[k]);

        // M_ij = Re Tr(A_i X A_j S^-1), assembled from sparse entries.
        Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m, m);
        for (size_t k = 0; k < nb; k++) {
            const Block &x = r.x[k];
            const Block &si = sinv[k];
            const auto &ents = by_block[k];
            for (size_t i = 0; i < m; i++) {
                if (ents[i].empty()) continue;
                for (size_t j = i; j < m; j++) {
                    if (ents[j].empty()) continue;
                    cd acc = 0;
                    for (const auto &ei : ents[i]) {
                        for (const auto &ej : ents[j]) acc += ei.value * x(ei.col, ej.row) * ej.value * si(ej.col, ei.row);
                    }
                    schur(i, j) += acc.real();
                }
            }
        }
        schur = Eigen::MatrixXd(schur.selfadjointView<Eigen::Upper>());
        Eigen::LLT<Eigen::MatrixXd> chol(schur);
        Eigen::LDLT<Eigen::MatrixXd> ldlt;
        bool use_llt = chol.info() == Eigen::Success;
        if (!use_llt) ldlt.compute(schur);

        // X Rd S^-1 is fixed across the predictor and corrector solves.
        std::vector<Block> x_rd_sinv(nb);
        for (size_t k = 0; k < nb; k++) x_rd_sinv[k] = r.x[k] * rd[k] * sinv[k];

        auto direction = [&](const std::vector<Block> &rc, std::vector<Block> &dx, Eigen::VectorXd &dy,
                             std::vector<Block> &ds) {
            std::vector<Block> t(nb);
            for (size_t k = 0; k < nb; k++) t[k] = rc[k] - x_rd_sinv[k];
            Eigen::VectorXd rhs(m);
            for (size_t i = 0; i < m; i++) rhs(i) = rp(i) - detail::inner(p.a[i], t);
            dy = use_llt ? Eigen::VectorXd(chol.solve(rhs)) : Eigen::VectorXd(ldlt.solve(rhs));
            ds = rd;
            for (size_t i = 0; i < m; i++) detail::add_scaled(ds, p.a[i], -dy(i));
            dx.resize(nb);
            for (size_t k = 0; k < nb; k++) dx[k] = detail::hermitian_part(rc[k] - r.x[k] * ds[k] * sinv[k]);
        };

        // Predictor.
        std::vector<Block> rc(nb), dx, ds;
        Eigen::VectorXd dy;
        for (size_t k = 0; k < nb; k++) rc[k] = -r.x[k];
        direction(rc, dx, dy, ds);
        double ap = std::min(1.0, opt.step_fraction * detail::max_step(r.x, dx));
        double ad = std::min(1.0, opt.step_fraction * detail::max_step(r.s, ds));
        double mu_aff = 0;
        for (size_t k = 0; k < nb; k++) {
            Block xa = r.x[k] + ap * dx[k], sa = r.s[k] + ad * ds[k];
            mu_aff += (xa.conjugate().cwiseProduct(sa)).sum().real();
        }
        mu_aff /= static_cast<double>(total_dim);
        double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

        // Corrector.
        for (size_t k = 0; k < nb; k++) rc[k] = sigma * mu * sinv[k] - r.x[k] - dx[k] * ds[k] * sinv[k];
        direction(rc, dx, dy, ds);
        ap = std::min(1.0, opt.step_fraction * detail::max_step(r.x, dx));
        ad = std::min(1.0, opt.step_fraction * detail::max_step(r.s, ds));
        for (size_t k = 0; k < nb; k++) {
            r.x[k] = detail::hermitian_part(r.x[k] + ap * dx[k]);
            r.s[k] = detail::hermitian_part(r.s[k] + ad * ds[k]);
        }
        r.y += ad * dy;
    }
    residuals(rd, rp);
    r.primal_objective = detail::inner(p.c, r.x);
    r.dual_objective = p.b.dot(r.y);
    r.gap = std::abs(r.primal_objective - r.dual_objective);
    r.iterations = opt.max_iterations;
    return r;
}

}  // namespace cliffproxy::sdp
