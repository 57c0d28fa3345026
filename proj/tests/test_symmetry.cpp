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

#include <qnnsim/symmetry.hpp>
#include <qnnsim/train.hpp>

#include <cmath>
#include <sstream>

using namespace qnnsim;
using namespace qnnsim::sym;

TEST_CASE("check_theorem1") {
    SECTION("ZZ-bearing architectures pass the equality claim") {
        auto r = check_theorem1("XX-ZZ", 8, 200, 1, 1e-9);
        REQUIRE(r.claim == Claim::equal);
        REQUIRE(r.pass);
        REQUIRE(r.max_deviation <= 1e-9);

        auto r2 = check_theorem1("ZZ", 4, 200, 2, 1e-9);
        REQUIRE(r2.pass);
    }

    SECTION("pure XX downgrades to the constant -1 claim and still passes") {
        auto r = check_theorem1("XX", 4, 200, 3, 1e-9);
        REQUIRE(r.claim == Claim::constant);
        REQUIRE(r.constant_value == -1.0);
        REQUIRE(r.pass);
    }

    SECTION("deterministic per seed") {
        auto a = check_theorem1("ZZ-XX", 4, 50, 9, 1e-9);
        auto b = check_theorem1("ZZ-XX", 4, 50, 9, 1e-9);
        REQUIRE(a.max_deviation == b.max_deviation);
    }

    SECTION("an impossible tolerance reports failure") {
        auto r = check_theorem1("XX-ZZ", 3, 20, 5, -1.0);
        REQUIRE_FALSE(r.pass);
    }
}

TEST_CASE("check_theorem2") {
    auto rz = check_theorem2("XX-ZZ", 8, 200, 11, 1e-9);
    REQUIRE(rz.claim == Claim::antisymmetric);
    REQUIRE(rz.pass);

    auto ry = check_theorem2("XX-ZZ", 4, 200, 12, 1e-9, Pauli::Y);
    REQUIRE(ry.claim == Claim::antisymmetric);
    REQUIRE(ry.pass);

    auto rx = check_theorem2("XX-ZZ", 4, 200, 13, 1e-9, Pauli::X);
    REQUIRE(rx.claim == Claim::zero);
    REQUIRE(rx.pass);
}

TEST_CASE("table 1 grid holds at every cell") {
    for (int n : {2, 4}) {
        auto grid = check_table1_grid(n, 150, 17, 1e-9);
        REQUIRE(grid.size() == 12);
        for (const auto &r : grid) {
            INFO("(" << r.architecture << ", " << pauli_name(r.measurement) << ")");
            REQUIRE(r.pass);
        }
        // spot-check the claims mirror the published rows
        REQUIRE(grid[0].claim == Claim::constant); // (XX, Z) -> -1
        REQUIRE(grid[0].constant_value == -1.0);
        REQUIRE(grid[1].claim == Claim::constant); // (XX, X) -> 0
        REQUIRE(grid[1].constant_value == 0.0);
        REQUIRE(grid[2].claim == Claim::constant); // (XX, Y) -> 0
        REQUIRE(grid[3].claim == Claim::equal);    // (ZZ, Z)
        REQUIRE(grid[4].claim == Claim::constant); // (ZZ, X) -> 0
        REQUIRE(grid[5].claim == Claim::antisymmetric); // (ZZ, Y)
        REQUIRE(grid[6].claim == Claim::equal);    // (XX-ZZ, Z)
        REQUIRE(grid[11].claim == Claim::antisymmetric); // (ZZ-XX, Y)
    }
}

TEST_CASE("table 2 grid holds for Z, X, Y") {
    auto grid = check_table2_grid(4, 150, 23, 1e-9);
    REQUIRE(grid.size() == 3);
    REQUIRE(grid[0].claim == Claim::antisymmetric);
    REQUIRE(grid[1].claim == Claim::zero);
    REQUIRE(grid[2].claim == Claim::antisymmetric);
    for (const auto &r : grid) REQUIRE(r.pass);
}

TEST_CASE("theorem checks hold at initialisation, mid-training, convergence") {
    auto train_set = data::synthetic_dataset(4, 120, "mask-parity", 5);
    train::TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.seed = 8;
    cfg.early_stop_patience = 0;

    std::mt19937_64 rng(41);
    for (int epochs : {0, 2, 25}) {
        cfg.epochs = epochs;
        auto result = train::fit(make_model("XX-ZZ", 4), train_set, nullptr, cfg);
        for (int rep = 0; rep < 50; ++rep) {
            data::BinaryPattern x(4);
            for (auto &b : x) b = rng() & 1;
            const double fx = forward(result.model, x);
            const double fn = forward(result.model, data::negate(x));
            REQUIRE(std::abs(fx - fn) <= 1e-9);
            auto gx = features(result.model, x);
            auto gn = features(result.model, data::negate(x));
            for (int k = 0; k < 4; ++k) REQUIRE(std::abs(gx[k] + gn[k]) <= 1e-9);
        }
    }
}

TEST_CASE("logit_pair_stats on random models is at floating-point scale") {
    auto ds = data::synthetic_dataset(6, 120, "mask-parity", 19);
    auto model = make_model("XX-ZZ", 6);
    model.params = random_parameters(model.arch, -M_PI, M_PI, 99);
    auto s = logit_pair_stats(model, ds);
    REQUIRE(s.n_pairs == 120);
    REQUIRE(std::abs(s.mean_diff) <= 1e-12);
    REQUIRE(s.std_diff <= 1e-12);
}

TEST_CASE("feature_pair_stats reports opposite vectors") {
    auto ds = data::synthetic_dataset(5, 80, "mask-parity", 29);
    auto model = make_model("XX-ZZ", 5);
    model.params = random_parameters(model.arch, -1.0, 1.0, 77);
    auto s = feature_pair_stats(model, ds);
    REQUIRE(s.max_pair_norm <= 1e-9);
    REQUIRE(s.mean_cosine == Catch::Approx(-1.0).margin(1e-6));
    REQUIRE(s.mean_pearson == Catch::Approx(-1.0).margin(1e-6));
    REQUIRE(s.skipped_pairs == 0);

    // X-measured features are identically zero: every pair is skipped
    auto mx = make_model("XX-ZZ", 5, Pauli::X);
    mx.params = model.params;
    auto sx = feature_pair_stats(mx, ds);
    REQUIRE(sx.skipped_pairs == sx.n_pairs);
    REQUIRE(std::isnan(sx.mean_cosine));
}

TEST_CASE("bell_probabilities") {
    auto comp = bell_probabilities(BellBasis::computational);
    REQUIRE(comp[0] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(comp[1] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(comp[2] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(comp[3] == Catch::Approx(0.5).margin(1e-12));

    auto four = bell_probabilities(BellBasis::fourier);
    REQUIRE(four[0] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(four[1] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(four[2] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(four[3] == Catch::Approx(0.5).margin(1e-12));

    REQUIRE(comp[0] + comp[1] + comp[2] + comp[3] == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(four[0] + four[1] + four[2] + four[3] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("report serialisation") {
    auto grid = check_table2_grid(3, 10, 31, 1e-9);
    auto j = reports_to_json(grid);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 3);
    REQUIRE(j[0]["architecture"] == "XX-ZZ");
    REQUIRE(j[0]["claim"] == "antisymmetric");
    REQUIRE(j[0]["pass"].is_boolean());
    REQUIRE(j[0]["max_deviation"].is_number());
    REQUIRE(j[0].contains("tolerance"));

    auto cell = check_theorem1("XX", 3, 10, 32, 1e-9);
    auto jc = report_to_json(cell);
    REQUIRE(jc["claim"] == "constant");
    REQUIRE(jc["constant"] == -1.0);

    std::ostringstream table;
    print_reports(table, grid);
    REQUIRE(table.str().find("architecture") != std::string::npos);
    REQUIRE(table.str().find("pass") != std::string::npos);
}
