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

#include "cliffproxy/dense.hpp"
#include "cliffproxy/estimators.hpp"
#include "cliffproxy/noise.hpp"
#include "test_util.hpp"

using namespace cliffproxy;

namespace {

LayeredCircuit haar_brickwork(size_t n, size_t depth, Rng &rng, Topology t = Topology::Line) {
    return sample_brickwork({n, depth, t, 0, TwoQubitGate::CZ}, GateKind::Haar, rng);
}

LayeredCircuit identity_circuit(size_t n) {
    LayeredCircuit c;
    c.n = n;
    c.one_qubit_layers.emplace_back(n, OneQubitGateSpec::clifford(0));
    return c;
}

double mean_exact_fidelity(const LayeredCircuit &target, const NoiseModel &noise, size_t samples, Rng &rng) {
    double f = 0;
    for (size_t k = 0; k < samples; k++) f += 1.0 - process_infidelity_exact(cliffordize(target, rng), noise);
    return f / static_cast<double>(samples);
}

}  // namespace

TEST(estimators, default_config_budget) {
    DfeConfig c;
    EXPECT_EQ(c.num_paulis, 30u);
    EXPECT_EQ(c.num_twirls, 32u);
    EXPECT_EQ(c.shots_per_twirl, 100u);
    EXPECT_EQ(c.total_shots(), 96000u);
    EXPECT_THROW((DfeConfig{0, 1, 1}.validate()), Error);
    DfeConfig v = volumetric_default_config();
    EXPECT_EQ(v.num_paulis * v.num_twirls, 50u);
    EXPECT_EQ(v.shots_per_twirl, 1000u);
}

TEST(estimators, polarization_round_trip) {
    for (size_t n : {1, 3, 8}) {
        for (double f : {1.0, 0.9, 0.5}) EXPECT_NEAR(fidelity_from_polarization(polarization_from_fidelity(f, n), n), f, 1e-15);
    }
    EXPECT_DOUBLE_EQ(polarization_from_fidelity(0.25, 1), 0.0);
}

TEST(estimators, noiseless_dfe_is_exactly_one) {
    Rng rng(1);
    LayeredCircuit c = testutil::random_clifford_brickwork(5, 10, rng);
    for (auto mode : {Randomization::None, Randomization::PauliFrame}) {
        DfeOptions o;
        o.randomization = mode;
        FidelityEstimate e = dfe(c, NoiseModel::noiseless(c), SpamModel::none(5), {10, 4, 50}, rng, o);
        EXPECT_EQ(e.mean, 1.0);
        EXPECT_EQ(e.std_error, 0.0);
    }
}

TEST(estimators, dfe_preconditions) {
    Rng rng(2);
    LayeredCircuit haar = haar_brickwork(3, 2, rng);
    EXPECT_THROW(dfe(haar, NoiseModel::noiseless(haar), SpamModel::none(3), {}, rng), NotCliffordError);
    LayeredCircuit c = cliffordize(haar, rng);
    DfeOptions o;
    o.randomization = Randomization::Combined;
    EXPECT_THROW(dfe(c, NoiseModel::noiseless(c), SpamModel::none(3), {}, rng, o), Error);
    EXPECT_THROW(dfe(c, NoiseModel::noiseless(c), SpamModel::none(2), {}, rng), DimensionError);
}

TEST(estimators, dfe_is_deterministic_per_seed) {
    Rng r0(3);
    LayeredCircuit c = testutil::random_clifford_brickwork(4, 8, r0);
    NoiseModel m = sample_error_model(c, r0, 1e-2, 1e-3);
    DfeOptions o;
    o.keep_records = true;
    Rng a(77), b(77);
    FidelityEstimate ea = dfe(c, m, SpamModel::none(4), {8, 4, 50}, a, o), eb = dfe(c, m, SpamModel::none(4), {8, 4, 50}, b, o);
    EXPECT_EQ(ea.mean, eb.mean);
    EXPECT_EQ(ea.std_error, eb.std_error);
    ASSERT_EQ(ea.records.size(), 8u);
    for (size_t k = 0; k < 8; k++) EXPECT_EQ(ea.records[k].pauli, eb.records[k].pauli);
}

TEST(estimators, dfe_is_unbiased) {
    Rng rng(4);
    LayeredCircuit target = haar_brickwork(4, 20, rng);
    LayeredCircuit c = cliffordize(target, rng);
    NoiseModel m = sample_error_model(c, rng);
    const double exact = 1.0 - process_infidelity_exact(c, m);
    double sum = 0, var = 0;
    size_t inside = 0;
    const size_t seeds = 12;
    for (size_t s = 0; s < seeds; s++) {
        Rng r = seed_derive(4, "seed", s);
        FidelityEstimate e = dfe(c, m, SpamModel::none(4), DfeConfig{}, r);
        sum += e.mean;
        var += e.std_error * e.std_error;
        inside += std::abs(e.mean - exact) <= 3 * e.std_error;
    }
    double mean = sum / seeds, se = std::sqrt(var) / seeds;
    EXPECT_LT(std::abs(mean - exact), 3 * se);
    EXPECT_GE(inside, seeds - 1);
}

TEST(estimators, per_shot_faults_agree_with_exact_parities) {
    Rng rng(5);
    LayeredCircuit c = testutil::random_clifford_brickwork(4, 6, rng);
    NoiseModel m = sample_error_model(c, rng, 0.05, 0.01);
    SpamModel spam = SpamModel::symmetric({0.01, 0.02, 0.0, 0.03}, {0.02, 0.0, 0.01, 0.01});
    DfeOptions fast, slow;
    slow.per_shot_faults = true;
    Rng a(1), b(1);
    FidelityEstimate ef = dfe(c, m, spam, {40, 4, 200}, a, fast), es = dfe(c, m, spam, {40, 4, 200}, b, slow);
    EXPECT_LT(std::abs(ef.mean - es.mean), 4 * std::hypot(ef.std_error, es.std_error));
}

TEST(estimators, parity_expectation_matches_dense) {
    // Gate noise from the dense PTM; SPAM attenuates each qubit in the support.
    Rng rng(6);
    LayeredCircuit c = testutil::random_clifford_brickwork(3, 4, rng);
    NoiseModel m = sample_error_model(c, rng, 0.1, 0.02, false);
    SpamModel spam = SpamModel::symmetric({0.02, 0.05, 0.01}, {0.03, 0.01, 0.04});
    Ptm noisy = circuit_ptm(c, &m);
    for (int t = 0; t < 20; t++) {
        PauliString p = sample_uniform_nonidentity(3, rng);
        PauliString prep = backpropagate(c, p);
        double expect = prep.sign();
        prep.set_phase(0);
        expect *= noisy.m(ptm_index(p), ptm_index(prep));
        for (size_t q = 0; q < 3; q++) {
            if (prep.get(q)) expect *= 1 - 2 * spam.prep_flip[q];
            if (p.get(q)) expect *= 1 - spam.meas_flip_0to1[q] - spam.meas_flip_1to0[q];
        }
        EXPECT_NEAR(detail::parity_model(c, m, spam, p, false).expectation, expect, 1e-12) << p.str();
    }
}

TEST(estimators, reference_identity_is_exact) {
    LayeredCircuit id = identity_circuit(4);
    ReferenceOptions ro;
    NoiseModel none = NoiseModel::noiseless(id);
    ro.scrambler_noise = &none;
    Rng rng(7);
    FidelityEstimate e = dfe_with_reference(id, id, none, SpamModel::none(4), {10, 2, 50}, rng, ro);
    EXPECT_EQ(e.mean, 1.0);
}

TEST(estimators, reference_removes_spam_on_noiseless_circuit) {
    Rng rng(8);
    const size_t n = 8;
    LayeredCircuit c = testutil::random_clifford_brickwork(n, 6, rng);
    NoiseModel dev = sample_device_noise(n, Topology::Line, rng, {0.0, 0.0});
    SpamModel spam = SpamModel::symmetric(std::vector<double>(n, 0.02), std::vector<double>(n, 0.02));
    LayeredCircuit scr = scrambling_circuit(n, 4, rng);
    FidelityEstimate e = dfe_with_reference(c, scr, dev.bind(c), spam, {30, 8, 100}, rng);
    EXPECT_LT(std::abs(e.mean - 1.0), 3 * e.std_error);
    FidelityEstimate raw = dfe(c, dev.bind(c), spam, {30, 8, 100}, rng);
    EXPECT_LT(raw.mean, 0.95);
}

TEST(estimators, reference_tracks_exact_fidelity) {
    Rng rng(9);
    const size_t n = 6;
    NoiseModel dev = sample_device_noise(n, Topology::Line, rng, {4e-3, 4e-4});
    SpamModel spam = SpamModel::symmetric(std::vector<double>(n, 0.015), std::vector<double>(n, 0.015));
    LayeredCircuit target = haar_brickwork(n, 12, rng);
    NoiseModel noise = dev.bind(target);
    LayeredCircuit proxy = cliffordize(target, rng);
    const double exact = mean_exact_fidelity(target, noise, 20, rng);
    DfeOptions o;
    o.randomization = Randomization::Combined;
    o.target = &target;
    ReferenceOptions ro;
    ro.dfe = o;
    FidelityEstimate e = dfe_with_reference(proxy, scrambling_circuit(n, 4, rng), noise, spam, {30, 16, 100}, rng, ro);
    EXPECT_LT(std::abs(e.mean - exact), 3 * e.std_error) << e.mean << " vs " << exact;
}

TEST(estimators, reference_floor) {
    Rng rng(10);
    const size_t n = 4;
    LayeredCircuit c = testutil::random_clifford_brickwork(n, 2, rng);
    NoiseModel dev = sample_device_noise(n, Topology::Line, rng, {0.0, 0.0});
    SpamModel spam = SpamModel::symmetric(std::vector<double>(n, 0.45), std::vector<double>(n, 0.45));
    ReferenceOptions ro;
    ro.floor = 0.5;
    EXPECT_THROW(dfe_with_reference(c, scrambling_circuit(n, 4, rng), dev.bind(c), spam, {10, 2, 50}, rng, ro),
                 ReferenceTooNoisyError);
}

TEST(estimators, readout_mitigation_with_readout_only_spam) {
    Rng rng(11);
    const size_t n = 6;
    LayeredCircuit c = testutil::random_clifford_brickwork(n, 4, rng);
    NoiseModel none = NoiseModel::noiseless(c);
    SpamModel spam = SpamModel::none(n);
    for (size_t q = 0; q < n; q++) {
        spam.meas_flip_0to1[q] = 0.01 + 0.005 * q;
        spam.meas_flip_1to0[q] = 0.03;
    }
    FidelityEstimate e = readout_mitigated_dfe(c, none, spam, {30, 8, 200}, 100000, rng);
    EXPECT_LT(std::abs(e.mean - 1.0), 3 * e.std_error + 2e-3);
    EXPECT_THROW(readout_mitigated_dfe(c, none, spam, {30, 8, 200}, 10, rng), Error);
}

TEST(estimators, readout_mitigation_without_spam_matches_dfe) {
    Rng rng(12);
    LayeredCircuit c = testutil::random_clifford_brickwork(5, 10, rng);
    NoiseModel m = sample_error_model(c, rng, 1e-2, 1e-3);
    Rng a(3), b(3);
    FidelityEstimate plain = dfe(c, m, SpamModel::none(5), {30, 8, 100}, a);
    FidelityEstimate mit = readout_mitigated_dfe(c, m, SpamModel::none(5), {30, 8, 100}, 1000, b);
    EXPECT_LT(std::abs(plain.mean - mit.mean), 4 * std::hypot(plain.std_error, mit.std_error));
}

TEST(estimators, readout_mitigation_raises_wide_estimates) {
    Rng rng(13);
    const size_t n = 15;
    NoiseModel dev = sample_device_noise(n, Topology::Line, rng);
    SpamModel spam = SpamModel::symmetric(std::vector<double>(n, 0.01), std::vector<double>(n, 0.02));
    for (size_t d : {4, 8, 12}) {
        LayeredCircuit target = haar_brickwork(n, d, rng);
        LayeredCircuit proxy = cliffordize(target, rng);
        NoiseModel noise = dev.bind(target);
        Rng a = seed_derive(13, d, "u"), b = seed_derive(13, d, "m");
        FidelityEstimate raw = dfe(proxy, noise, spam, {30, 4, 100}, a);
        FidelityEstimate mit = readout_mitigated_dfe(proxy, noise, spam, {30, 4, 100}, 2000, b);
        EXPECT_LT(raw.mean, mit.mean) << d;
    }
}

TEST(estimators, layer_fidelity_without_noise) {
    Rng rng(14);
    LayeredCircuit target = haar_brickwork(4, 6, rng);
    NoiseModel m = NoiseModel::noiseless(target);
    LayerFidelityResult r = layer_fidelity_estimate(target, m, {1, 2, 4}, {10, 2, 50}, rng);
    ASSERT_EQ(r.layers.size(), 2u);
    for (const auto &l : r.layers) EXPECT_NEAR(l.polarization, 1.0, 1e-12);
    EXPECT_NEAR(r.predicted_fidelity, 1.0, 1e-12);
    EXPECT_THROW(layer_fidelity_estimate(target, m, {1, 2}, {10, 2, 50}, rng), Error);
    NoiseModel fresh = sample_error_model(target, rng, 1e-3, 1e-4, false);
    EXPECT_THROW(layer_fidelity_estimate(target, fresh, {1, 2, 4}, {10, 2, 50}, rng), Error);
}

TEST(estimators, distinct_layers_of_brickwork) {
    Rng rng(15);
    auto layers = distinct_layers(haar_brickwork(5, 7, rng));
    ASSERT_EQ(layers.size(), 2u);
    EXPECT_EQ(layers[0].second, 4u);
    EXPECT_EQ(layers[1].second, 3u);
}

TEST(estimators, fitted_layer_polarization_matches_folding) {
    Rng rng(16);
    const size_t n = 4;
    NoiseModel dev = sample_device_noise(n, Topology::Line, rng, {2e-2, 2e-3});
    LayeredCircuit target = haar_brickwork(n, 1, rng);
    NoiseModel noise = dev.bind(target);
    const std::vector<size_t> depths{1, 2, 4, 8, 16};
    LayerFidelityResult r = layer_fidelity_estimate(target, noise, depths, {30, 16, 100}, rng);
    ASSERT_EQ(r.layers.size(), 1u);
    // The same decay fit applied to exact sequence fidelities.
    LayerFit exact;
    exact.depths = depths;
    for (size_t m : depths) {
        LayeredCircuit seq;
        seq.n = n;
        seq.one_qubit_layers.assign(m + 1, std::vector<OneQubitGateSpec>(n, OneQubitGateSpec::clifford(0)));
        seq.entangling_layers.assign(m, r.layers[0].layer);
        FidelityEstimate f;
        f.mean = mean_exact_fidelity(seq, dev.bind(seq), 40, rng);
        f.std_error = 1e-6;
        exact.points.push_back(f);
    }
    fit_decay(exact, n);
    EXPECT_LT(std::abs(r.layers[0].polarization - exact.polarization), 3 * r.layers[0].polarization_stderr + 1e-4);
}

TEST(estimators, layer_fidelity_predicts_circuit_fidelity) {
    Rng rng(17);
    const size_t n = 4;
    for (int s = 0; s < 3; s++) {
        NoiseModel dev = sample_device_noise(n, Topology::Line, rng);
        LayeredCircuit target = haar_brickwork(n, 20, rng);
        NoiseModel noise = dev.bind(target);
        double exact = mean_exact_fidelity(target, noise, 10, rng);
        LayerFidelityResult r = layer_fidelity_estimate(target, noise, {1, 2, 4, 8, 16, 24}, {30, 8, 100}, rng);
        EXPECT_LT(std::abs(r.predicted_fidelity - exact) / exact, 0.05);
    }
}

TEST(estimators, xeb_fixed_points) {
    Rng rng(18);
    LayeredCircuit c = haar_brickwork(4, 6, rng);
    auto p = ideal_output_probs(c);
    EXPECT_NEAR(xeb(p, p), 1.0, 1e-12);
    EXPECT_NEAR(xeb(std::vector<double>(16, 1.0 / 16), p), 0.0, 1e-12);
    EXPECT_THROW(xeb(std::vector<double>(16, 1.0 / 16), std::vector<double>(16, 1.0 / 16)), Error);
    EXPECT_THROW(xeb(std::vector<double>(8, 1.0 / 8), p), DimensionError);
}

TEST(estimators, xeb_from_noiseless_samples) {
    Rng rng(19);
    LayeredCircuit c = haar_brickwork(5, 10, rng);
    auto p = ideal_output_probs(c);
    auto s = statevector_simulate(c, nullptr, rng, 20000);
    FidelityEstimate e = xeb_from_samples(s, p);
    EXPECT_LT(std::abs(e.mean - 1.0), 4 * e.std_error);
    EXPECT_THROW(xeb_from_samples({}, p), Error);
    EXPECT_THROW(xeb_from_samples({1u << 6}, p), DimensionError);
}

TEST(estimators, coefficient_of_variation) {
    CvResult c = coefficient_of_variation({2.5, 2.5, 2.5});
    EXPECT_EQ(c.ratio, 0.0);
    CvResult h = coefficient_of_variation({1.0, 3.0});
    EXPECT_DOUBLE_EQ(h.mean, 2.0);
    EXPECT_DOUBLE_EQ(h.sd, std::sqrt(2.0));
    EXPECT_NEAR(h.ratio, 0.7071, 1e-4);
    EXPECT_THROW(coefficient_of_variation({1.0}), Error);
}

TEST(estimators, cliffordization_infidelities_are_uniform) {
    Rng rng(20);
    LayeredCircuit target = haar_brickwork(3, 60, rng, Topology::Ring);
    NoiseModel noise = sample_error_model(target, rng);
    std::vector<double> r;
    for (int k = 0; k < 100; k++) r.push_back(process_infidelity_exact(cliffordize(target, rng), noise));
    EXPECT_LT(coefficient_of_variation(r).ratio, 2e-5);
}

TEST(estimators, volumetric_without_noise) {
    Rng rng(21);
    VolumetricOptions o;
    o.exact_samples = 2;
    auto cells = volumetric_run({2, 3}, {1, 3}, {0.0, 0.0}, {0.0, 0.0}, {10, 1, 100}, rng, o);
    ASSERT_EQ(cells.size(), 4u);
    for (const auto &c : cells) {
        for (const CellEstimate *e : {&c.unmitigated, &c.reference, &c.readout, &c.layer_fidelity, &c.exact}) {
            ASSERT_TRUE(e->value.has_value()) << e->failure;
            EXPECT_LE(std::abs(e->value->mean - 1.0), e->value->std_error + 1e-12);
        }
    }
    EXPECT_THROW(volumetric_run({1}, {1}, {}, {}, {10, 1, 100}, rng), DimensionError);
}

TEST(estimators, volumetric_mitigation_tracks_exact) {
    Rng rng(22);
    VolumetricOptions o;
    o.exact_samples = 10;
    auto cells = volumetric_run({2, 4, 8}, {4, 8}, {1e-3, 1e-4}, {0.01, 0.01}, volumetric_default_config(), rng, o);
    for (const auto &c : cells) {
        ASSERT_TRUE(c.reference.value && c.exact.value && c.unmitigated.value);
        double exact = c.exact.value->mean;
        EXPECT_LT(std::abs(c.reference.value->mean - exact), 3 * c.reference.value->std_error + 1e-3)
            << c.n << " " << c.depth;
        EXPECT_LT(c.unmitigated.value->mean, exact);
    }
}

TEST(estimators, volumetric_reports_fold_limit) {
    Rng rng(23);
    VolumetricOptions o;
    o.fold_limit = 3;
    o.exact_samples = 1;
    auto cells = volumetric_run({4}, {2}, {1e-3, 1e-4}, {}, {10, 1, 100}, rng, o);
    ASSERT_EQ(cells.size(), 1u);
    EXPECT_FALSE(cells[0].exact.value.has_value());
    EXPECT_NE(cells[0].exact.failure.find("folding"), std::string::npos);
    EXPECT_TRUE(cells[0].unmitigated.value.has_value());
}
