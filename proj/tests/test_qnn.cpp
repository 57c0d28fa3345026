/* Copyright 2026 The QNNSim Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include <catch2/catch_amalgamated.hpp>

#include <qnnsim/qnn.hpp>

#include <cmath>
#include <random>

#include "oracle.hpp"

using namespace qnnsim;

namespace {

constexpr double kTol = 1e-12;

std::vector<std::uint8_t> random_pattern(int n, std::mt19937_64 &rng) {
    std::vector<std::uint8_t> p(n);
    for (auto &b : p) b = rng() & 1;
    return p;
}

std::vector<std::uint8_t> negated(const std::vector<std::uint8_t> &p) {
    auto out = p;
    for (auto &b : out) b ^= 1;
    return out;
}

// Reference evaluation through explicit full-size matrices (n <= 4 qubits).
std::vector<cdouble> circuit_oracle(const QnnModel &model,
                                    const std::vector<std::uint8_t> &pattern) {
    const int N = model.arch.n_data_qubits, n = N + 1;
    auto state = build_input(pattern).amplitudes;
    auto h0 = oracle::embed_1q(gates::hadamard().m, n, 0);
    state = oracle::matvec(h0, state);
    for (int j = 0; j < model.arch.n_layers(); ++j)
        for (int k = 0; k < N; ++k) {
            const double th = model.params.at(j, k);
            const auto g = model.arch.layers[j] == LayerKind::XX ? gates::xx(th)
                                                                 : gates::zz(th);
            state = oracle::matvec(oracle::embed_2q(g.m, n, 0, k + 1), state);
        }
    return oracle::matvec(h0, state);
}

} // namespace

TEST_CASE("architecture string grammar") {
    auto a = parse_architecture("XX-ZZ", 4);
    REQUIRE(a.n_layers() == 2);
    REQUIRE(a.layers[0] == LayerKind::XX);
    REQUIRE(a.layers[1] == LayerKind::ZZ);
    REQUIRE(a.to_string() == "XX-ZZ");
    REQUIRE(a.n_params() == 8);

    REQUIRE(parse_architecture("zz-xx-zz", 2).to_string() == "ZZ-XX-ZZ");
    REQUIRE(parse_architecture("ZZ", 16).n_params() == 16);

    REQUIRE_THROWS_AS(parse_architecture("XY", 2), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_architecture("", 2), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_architecture("XX", 0), std::invalid_argument);
}

TEST_CASE("build_input encodes |1,x>") {
    auto s = build_input({0});
    REQUIRE(s.n_qubits == 2);
    REQUIRE(s.amplitudes[2] == cdouble{1.0, 0.0});

    s = build_input({1, 1});
    REQUIRE(s.n_qubits == 3);
    REQUIRE(s.amplitudes[7] == cdouble{1.0, 0.0});

    std::vector<std::uint8_t> zeros(16, 0);
    s = build_input(zeros);
    REQUIRE(s.amplitudes[std::uint64_t{1} << 16] == cdouble{1.0, 0.0});
}

TEST_CASE("zero angles make the circuit an identity") {
    std::mt19937_64 rng(3);
    for (auto arch : {"XX", "ZZ", "XX-ZZ"}) {
        auto model = make_model(arch, 3);
        auto pattern = random_pattern(3, rng);
        auto in = build_input(pattern);
        auto out = apply_circuit(in, model);
        double diff = 0;
        for (std::size_t i = 0; i < in.size(); ++i)
            diff = std::max(diff, std::abs(out.amplitudes[i] - in.amplitudes[i]));
        REQUIRE(diff < kTol);
    }
}

TEST_CASE("N=1 closed forms") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);

    SECTION("arch ZZ on |1,0>: readout Z expectation is -cos(t)") {
        for (int rep = 0; rep < 20; ++rep) {
            const double t = ang(rng);
            auto model = make_model("ZZ", 1);
            model.params.at(0, 0) = t;
            REQUIRE(forward(model, {0}) == Catch::Approx(-std::cos(t)).margin(1e-12));
        }
    }

    SECTION("arch ZZ-XX on |1,0>: final amplitudes match the closed form") {
        for (int rep = 0; rep < 20; ++rep) {
            const double t2 = ang(rng), t1 = ang(rng);
            auto model = make_model("ZZ-XX", 1);
            model.params.at(0, 0) = t2; // ZZ acts first
            model.params.at(1, 0) = t1;
            auto out = apply_circuit(build_input({0}), model);
            const double c1 = std::cos(t1 / 2), s1 = std::sin(t1 / 2);
            const double c2 = std::cos(t2 / 2), s2 = std::sin(t2 / 2);
            const cdouble expect[4] = {cdouble{0, -1} * c1 * s2, -s1 * s2, c1 * c2,
                                       cdouble{0, 1} * s1 * c2};
            for (int i = 0; i < 4; ++i)
                REQUIRE(std::abs(out.amplitudes[i] - expect[i]) < 1e-12);
        }
    }
}

TEST_CASE("apply_circuit matches the dense matrix oracle on small registers") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    for (auto arch : {"XX", "ZZ", "XX-ZZ", "ZZ-XX", "XX-ZZ-XX"}) {
        for (int N : {1, 2, 3}) {
            auto model = make_model(arch, N);
            for (auto &v : model.params.values) v = ang(rng);
            auto pattern = random_pattern(N, rng);
            auto got = apply_circuit(build_input(pattern), model);
            auto ref = circuit_oracle(model, pattern);
            for (std::size_t i = 0; i < ref.size(); ++i)
                REQUIRE(std::abs(got.amplitudes[i] - ref[i]) < kTol);
        }
    }
}

TEST_CASE("fused ZZ layer equals the per-gate diagonal product") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    for (int N : {1, 4, 9}) {
        std::vector<double> th(N);
        for (auto &t : th) t = ang(rng);

        StateVector fused(N + 1);
        std::normal_distribution<double> gauss;
        for (auto &a : fused.amplitudes) a = {gauss(rng), gauss(rng)};
        const double nrm = fused.norm();
        for (auto &a : fused.amplitudes) a /= nrm;
        StateVector pergate = fused;

        std::vector<cdouble> table;
        detail::apply_zz_layer_fused(fused, th.data(), table);
        for (int k = 0; k < N; ++k) apply_2q(pergate, gates::zz(th[k]), 0, k + 1);

        for (std::size_t i = 0; i < fused.size(); ++i)
            REQUIRE(std::abs(fused.amplitudes[i] - pergate.amplitudes[i]) < 1e-12);
    }
}

TEST_CASE("forward") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);

    SECTION("identity circuit measures Z on |1>: always -1") {
        auto model = make_model("XX-ZZ", 4);
        REQUIRE(forward(model, {0, 1, 1, 0}) == Catch::Approx(-1.0).margin(kTol));
    }

    SECTION("pure XX architecture pins the logit at -1 for any angles") {
        auto model = make_model("XX", 5);
        for (int rep = 0; rep < 10; ++rep) {
            for (auto &v : model.params.values) v = ang(rng);
            auto p = random_pattern(5, rng);
            REQUIRE(forward(model, p) == Catch::Approx(-1.0).margin(1e-9));
        }
    }

    SECTION("ZZ-containing architectures: f(x) == f(negate(x))") {
        for (auto arch : {"ZZ", "XX-ZZ", "ZZ-XX"}) {
            auto model = make_model(arch, 6);
            for (int rep = 0; rep < 10; ++rep) {
                for (auto &v : model.params.values) v = ang(rng);
                auto p = random_pattern(6, rng);
                REQUIRE(std::abs(forward(model, p) - forward(model, negated(p))) < 1e-9);
            }
        }
    }

    SECTION("logit stays in [-1, 1]") {
        auto model = make_model("XX-ZZ-XX", 4);
        for (int rep = 0; rep < 20; ++rep) {
            for (auto &v : model.params.values) v = ang(rng);
            const double f = forward(model, random_pattern(4, rng));
            REQUIRE(f >= -1.0 - kTol);
            REQUIRE(f <= 1.0 + kTol);
        }
    }

    SECTION("width mismatch rejected") {
        auto model = make_model("ZZ", 3);
        REQUIRE_THROWS_AS(forward(model, {0, 1}), std::invalid_argument);
    }
}

TEST_CASE("forward_sampled") {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);

    auto model = make_model("XX-ZZ", 3);
    for (auto &v : model.params.values) v = ang(rng);
    auto p = random_pattern(3, rng);

    const double exact = forward(model, p);
    const double est = forward_sampled(model, p, 100000, 11);
    REQUIRE(std::abs(est - exact) <= 0.02);
    REQUIRE(forward_sampled(model, p, 5000, 7) == forward_sampled(model, p, 5000, 7));

    auto trivial = make_model("XX-ZZ", 3); // all angles zero: deterministic -1
    REQUIRE(forward_sampled(trivial, p, 3, 99) == -1.0);

    REQUIRE_THROWS_AS(forward_sampled(model, p, 0, 1), std::invalid_argument);
}

TEST_CASE("features") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);

    SECTION("identity circuit: Z feature k equals 1 - 2 x_k") {
        auto model = make_model("XX-ZZ", 4);
        std::vector<std::uint8_t> p = {1, 0, 0, 1};
        auto g = features(model, p);
        for (int k = 0; k < 4; ++k)
            REQUIRE(g[k] == Catch::Approx(1.0 - 2.0 * p[k]).margin(kTol));
    }

    SECTION("Z features are antisymmetric under negation") {
        auto model = make_model("XX-ZZ", 5);
        for (int rep = 0; rep < 10; ++rep) {
            for (auto &v : model.params.values) v = ang(rng);
            auto p = random_pattern(5, rng);
            auto gx = features(model, p);
            auto gn = features(model, negated(p));
            for (int k = 0; k < 5; ++k) REQUIRE(std::abs(gx[k] + gn[k]) < 1e-9);
        }
    }

    SECTION("X features vanish identically") {
        auto model = make_model("XX-ZZ", 4, Pauli::X);
        for (int rep = 0; rep < 10; ++rep) {
            for (auto &v : model.params.values) v = ang(rng);
            for (double g : features(model, random_pattern(4, rng)))
                REQUIRE(std::abs(g) < 1e-9);
        }
    }
}

TEST_CASE("predict thresholds at zero with ties to +1") {
    // arch XX pins f = -1 -> class -1
    auto model = make_model("XX", 2);
    model.params.at(0, 0) = 0.4;
    REQUIRE(predict(model, {0, 1}) == -1);

    // all-zero angles with Z measurement: f = -1 -> -1
    auto zero = make_model("ZZ", 2);
    REQUIRE(predict(zero, {1, 0}) == -1);

    // X measurement of the identity circuit gives exactly 0 -> tie-break +1
    auto tie = make_model("ZZ", 2, Pauli::X);
    REQUIRE(forward(tie, {1, 0}) == Catch::Approx(0.0).margin(kTol));
    REQUIRE(predict(tie, {1, 0}) == 1);
}

TEST_CASE("local coupling mode factorizes the readout") {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    auto model = make_model("XX-ZZ", 4);
    model.coupling = CouplingMode::local;
    for (auto &v : model.params.values) v = ang(rng);

    // the readout marginal no longer depends on the data pattern
    const double f0 = forward(model, {0, 0, 0, 0});
    for (int rep = 0; rep < 8; ++rep)
        REQUIRE(forward(model, random_pattern(4, rng)) ==
                Catch::Approx(f0).margin(1e-12));

    // but it is a genuinely different circuit from the entangling one
    auto ent = model;
    ent.coupling = CouplingMode::entangling;
    bool differs = false;
    for (int rep = 0; rep < 8 && !differs; ++rep)
        differs = std::abs(forward(ent, random_pattern(4, rng)) - f0) > 0.05;
    REQUIRE(differs);
}
