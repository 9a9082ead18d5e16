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

#include <cmath>

#include "cliffproxy/circuit.hpp"
#include "cliffproxy/dense.hpp"
#include "test_util.hpp"

using namespace cliffproxy;

namespace {

BrickworkSpec spec(size_t n, size_t pairs, Topology t = Topology::Line) {
    return {n, pairs, t, 0, TwoQubitGate::CZ};
}

double binom(size_t n, size_t k) {
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

}  // namespace

TEST(circuit, brickwork_pattern_on_a_line) {
    Rng rng(1);
    LayeredCircuit c = sample_brickwork(spec(5, 4), GateKind::Haar, rng);
    std::vector<QubitPair> even{{0, 1}, {2, 3}}, odd{{1, 2}, {3, 4}};
    ASSERT_EQ(c.depth(), 4u);
    EXPECT_EQ(c.one_qubit_layers.size(), 5u);
    EXPECT_EQ(c.num_layers(), 9u);
    for (size_t j = 0; j < 4; j++) EXPECT_EQ(c.entangling_layers[j].pairs, j % 2 ? odd : even);
    EXPECT_NO_THROW(c.validate());
    EXPECT_FALSE(c.is_clifford());
}

TEST(circuit, brickwork_on_a_ring) {
    EXPECT_EQ(brick_pairs(4, 1, Topology::Ring), (std::vector<QubitPair>{{1, 2}, {3, 0}}));
    EXPECT_EQ(brick_pairs(4, 0, Topology::Ring), (std::vector<QubitPair>{{0, 1}, {2, 3}}));
    EXPECT_EQ(brick_pairs(5, 1, Topology::Ring), brick_pairs(5, 1, Topology::Line));
    Rng rng(2);
    for (size_t n = 2; n <= 7; n++) {
        for (size_t d = 1; d <= 5; d++) {
            LayeredCircuit c = sample_brickwork(spec(n, d, Topology::Ring), GateKind::Clifford, rng);
            EXPECT_EQ(c.depth(), d);
            EXPECT_EQ(c.one_qubit_layers.size(), d + 1);
            EXPECT_NO_THROW(c.validate());
        }
    }
}

TEST(circuit, brickwork_preconditions) {
    Rng rng(3);
    EXPECT_THROW(sample_brickwork(spec(1, 2), GateKind::Haar, rng), DimensionError);
    EXPECT_THROW(sample_brickwork(spec(3, 0), GateKind::Haar, rng), Error);
}

TEST(circuit, validation_catches_structural_errors) {
    Rng rng(4);
    LayeredCircuit c = sample_brickwork(spec(4, 2), GateKind::Clifford, rng);
    LayeredCircuit bad = c;
    bad.entangling_layers[0].pairs.push_back({1, 2});
    EXPECT_THROW(bad.validate(), Error);
    bad = c;
    bad.one_qubit_layers.pop_back();
    EXPECT_THROW(bad.validate(), Error);
    bad = c;
    bad.one_qubit_layers[1].pop_back();
    EXPECT_THROW(bad.validate(), Error);
    bad = c;
    bad.entangling_layers[1].pairs[0] = {2, 9};
    EXPECT_THROW(bad.validate(), Error);
    bad = c;
    bad.entangling_layers[1].pairs[0] = {3, 3};
    EXPECT_THROW(bad.validate(), Error);
}

TEST(circuit, clifford_gates_are_uniform) {
    Rng rng(5);
    std::vector<size_t> counts(24, 0);
    size_t total = 0;
    for (int t = 0; t < 500; t++) {
        LayeredCircuit c = sample_brickwork(spec(4, 4), GateKind::Clifford, rng);
        EXPECT_TRUE(c.is_clifford());
        for (const auto &layer : c.one_qubit_layers) {
            for (const auto &g : layer) {
                counts[g.clifford_index()]++;
                total++;
            }
        }
    }
    ASSERT_EQ(total, 10000u);
    for (size_t k = 0; k < 24; k++) {
        EXPECT_GT(counts[k], 0u);
        EXPECT_LT(std::abs(testutil::zscore(counts[k], total, 1.0 / 24)), 5.0);
    }
}

TEST(circuit, periodic_circuits_repeat_one_layer_pair) {
    Rng rng(6);
    LayeredCircuit c = sample_periodic(spec(5, 6), GateKind::Haar, rng);
    ASSERT_EQ(c.depth(), 6u);
    for (size_t j = 1; j < c.depth(); j++) EXPECT_EQ(c.entangling_layers[j], c.entangling_layers[0]);
    for (size_t j = 2; j < c.one_qubit_layers.size(); j++) EXPECT_EQ(c.one_qubit_layers[j], c.one_qubit_layers[1]);
    Eigen::MatrixXcd first = one_qubit_layer_unitary(5, c.one_qubit_layers[0]);
    EXPECT_LT(testutil::phase_distance(first, Eigen::MatrixXcd::Identity(32, 32)), 1e-12);
}

TEST(circuit, periodic_single_pair_draws_a_fresh_layer) {
    Rng rng(7);
    std::vector<size_t> counts(24, 0);
    for (int t = 0; t < 2400; t++) {
        LayeredCircuit c = sample_periodic(spec(3, 1), GateKind::Clifford, rng);
        ASSERT_EQ(c.depth(), 1u);
        EXPECT_TRUE(c.entangling_layers[0].pairs == brick_pairs(3, 0, Topology::Line) ||
                    c.entangling_layers[0].pairs == brick_pairs(3, 1, Topology::Line));
        counts[c.one_qubit_layers[1][0].clifford_index()]++;
    }
    EXPECT_GT(testutil::chi_square_pvalue(counts, std::vector<double>(24, 1.0 / 24)), 1e-3);
}

TEST(circuit, periodic_tableau_squares) {
    for (uint64_t s = 0; s < 20; s++) {
        Rng a(s), b(s);
        LayeredCircuit ck = sample_periodic(spec(6, 3), GateKind::Clifford, a);
        LayeredCircuit c2k = sample_periodic(spec(6, 6), GateKind::Clifford, b);
        CliffordTableau tk = circuit_tableau(ck);
        EXPECT_EQ(circuit_tableau(c2k), compose(tk, tk));
    }
}

TEST(circuit, cliffordize_keeps_entangling_layers) {
    Rng rng(8);
    LayeredCircuit target = sample_brickwork(spec(6, 10, Topology::Ring), GateKind::Haar, rng);
    for (int t = 0; t < 10; t++) {
        LayeredCircuit c = cliffordize(target, rng);
        EXPECT_EQ(c.entangling_layers, target.entangling_layers);
        EXPECT_EQ(c.one_qubit_layers.size(), target.one_qubit_layers.size());
        EXPECT_TRUE(c.is_clifford());
        EXPECT_NO_THROW(require_clifford(c));
    }
    EXPECT_THROW(require_clifford(target), NotCliffordError);
}

TEST(circuit, pauli_twirl_preserves_clifford_tableau) {
    Rng rng(9);
    for (int t = 0; t < 50; t++) {
        auto g = t % 2 ? TwoQubitGate::CNOT : TwoQubitGate::CZ;
        LayeredCircuit c = testutil::random_clifford_brickwork(6, 8, rng, g);
        LayeredCircuit tw = pauli_twirl(c, rng);
        EXPECT_EQ(tw.entangling_layers, c.entangling_layers);
        EXPECT_EQ(circuit_tableau(tw), circuit_tableau(c));
    }
}

TEST(circuit, pauli_twirl_preserves_dense_unitary) {
    Rng rng(10);
    for (int t = 0; t < 30; t++) {
        size_t n = 2 + rng.below(2);
        LayeredCircuit c = sample_brickwork(spec(n, 5), GateKind::Haar, rng);
        LayeredCircuit tw = pauli_twirl(c, rng);
        EXPECT_LT(testutil::phase_distance(circuit_unitary(tw), circuit_unitary(c)), 1e-10);
    }
}

TEST(circuit, twirling_diagonalizes_coherent_layer_error) {
    // U0, CZ, [E], U1 with a coherent E; the twirled layer error averages to
    // its Pauli-diagonal part with residual off-diagonals of order 1/sqrt(N).
    Rng rng(11);
    LayeredCircuit c = sample_brickwork(spec(2, 1), GateKind::Haar, rng);
    Eigen::MatrixXcd small = Eigen::MatrixXcd::Identity(4, 4);
    {
        // exp(-i 0.05 (ZZ + 0.5 XI)) built from its spectral decomposition
        PauliString zz = PauliString::parse("ZZ"), xi = PauliString::parse("XI");
        Eigen::MatrixXcd h = 0.05 * (pauli_matrix(zz) + 0.5 * pauli_matrix(xi));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        Eigen::VectorXcd ph(4);
        for (int k = 0; k < 4; k++) ph(k) = std::polar(1.0, -es.eigenvalues()(k));
        small = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    }
    Ptm err = unitary_ptm(small, 2);
    Ptm u0 = unitary_ptm(layer_unitary(c, 0), 2), cz = unitary_ptm(layer_unitary(c, 1), 2), u1 = unitary_ptm(layer_unitary(c, 2), 2);
    auto offdiag = [](const Eigen::MatrixXd &m) {
        Eigen::MatrixXd o = m;
        o.diagonal().setZero();
        return o.cwiseAbs().maxCoeff();
    };
    auto average = [&](size_t samples) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(16, 16);
        for (size_t s = 0; s < samples; s++) {
            LayeredCircuit tw = pauli_twirl(c, rng);
            Eigen::MatrixXd r = unitary_ptm(layer_unitary(tw, 2), 2).m * err.m * cz.m * unitary_ptm(layer_unitary(tw, 0), 2).m;
            acc += u1.m.transpose() * r * (cz.m * u0.m).transpose();
        }
        return Eigen::MatrixXd(acc / static_cast<double>(samples));
    };
    const double raw = offdiag(err.m);
    ASSERT_GT(raw, 0.05);
    Eigen::MatrixXd few = average(125), many = average(2000);
    EXPECT_LT(offdiag(many), 5.0 * raw / std::sqrt(2000.0));
    EXPECT_LT(offdiag(many), offdiag(few));
    EXPECT_LT((many.diagonal() - err.m.diagonal()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(circuit, scrambler_spreads_pauli_weight) {
    Rng rng(12);
    const size_t n = 10, samples = 10000;
    std::vector<double> hist(n + 1, 0.0), exact(n + 1, 0.0);
    const double total = std::pow(4.0, n) - 1;
    for (size_t w = 1; w <= n; w++) exact[w] = binom(n, w) * std::pow(3.0, w) / total;
    for (size_t s = 0; s < samples; s++) {
        LayeredCircuit l = scrambling_circuit(n, 4, rng);
        EXPECT_EQ(l.depth(), 4u);
        PauliString p = conjugate_forward(l, sample_uniform_nonidentity(n, rng));
        hist[p.weight()] += 1.0 / samples;
    }
    double tv = 0;
    for (size_t w = 0; w <= n; w++) tv += 0.5 * std::abs(hist[w] - exact[w]);
    EXPECT_LT(tv, 0.05);
    EXPECT_THROW(scrambling_circuit(n, 0, rng), Error);
}

TEST(circuit, haar_moments) {
    Rng rng(13);
    const size_t draws = 100000;
    double sz = 0, sp = 0, sp2 = 0, worst = 0;
    for (size_t i = 0; i < draws; i++) {
        Mat2 u = haar_su2(rng).matrix();
        worst = std::max(worst, (u * u.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff());
        double p0 = std::norm(u(0, 0));
        sz += 2 * p0 - 1;
        sp += p0;
        sp2 += p0 * p0;
    }
    double mean_p = sp / draws;
    EXPECT_LT(worst, 1e-12);
    // <Z> and |<0|U|0>|^2 are uniform on [-1, 1] and [0, 1] for Haar U.
    EXPECT_LT(std::abs(sz / draws) / (std::sqrt(1.0 / 3.0) / std::sqrt(draws)), 5.0);
    EXPECT_LT(std::abs(mean_p - 0.5) / (std::sqrt(1.0 / 12.0) / std::sqrt(draws)), 5.0);
    EXPECT_NEAR(sp2 / draws, 1.0 / 3.0, 0.01);
}

TEST(circuit, concatenation) {
    Rng rng(14);
    LayeredCircuit a = testutil::random_clifford_brickwork(4, 3, rng), b = testutil::random_clifford_brickwork(4, 2, rng);
    LayeredCircuit ab = concatenate(a, b);
    EXPECT_EQ(ab.depth(), 6u);
    EXPECT_TRUE(ab.entangling_layers[3].pairs.empty());
    EXPECT_NO_THROW(ab.validate());
    EXPECT_EQ(circuit_tableau(ab), compose(circuit_tableau(a), circuit_tableau(b)));
    EXPECT_THROW(concatenate(a, testutil::random_clifford_brickwork(3, 1, rng)), DimensionError);
}

TEST(circuit, decimal_strings_round_trip) {
    Rng rng(15);
    for (int i = 0; i < 1000; i++) {
        double v = rng.normal() * std::pow(10.0, rng.uniform(-20, 5));
        EXPECT_EQ(parse_decimal(exact_decimal(v)), v);
    }
    EXPECT_THROW(parse_decimal("0.5x"), Error);
}

TEST(circuit, json_round_trip) {
    Rng rng(16);
    LayeredCircuit haar = sample_brickwork(spec(4, 3, Topology::Ring), GateKind::Haar, rng);
    LayeredCircuit cl = testutil::random_clifford_brickwork(5, 4, rng, TwoQubitGate::CNOT);
    for (const auto &c : {haar, cl}) {
        nlohmann::json j = circuit_to_json(c);
        EXPECT_EQ(circuit_from_json(nlohmann::json::parse(j.dump())), c);
    }
    nlohmann::json bad = circuit_to_json(cl);
    bad["layers"].erase(bad["layers"].size() - 1);
    EXPECT_THROW(circuit_from_json(bad), Error);
}
