// SPDX-License-Identifier: Apache-2.0
//
// prachlab: collision detection for the cellular-IoT random access channel
// Copyright (C) 2026 prachlab contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "prach/preamble.hpp"

using namespace prach;

TEST_CASE("root sequence starts at 1 and matches the closed form for n=3") {
    ZcConfig small{3, 1, 1};
    const Eigen::VectorXcd z = zadoff_chu_root(small);
    CHECK(std::abs(z(0) - std::complex<double>(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(z(1) - std::polar(1.0, -2.0 * M_PI / 3.0)) < 1e-15);
    CHECK(std::abs(z(2) - std::complex<double>(1.0, 0.0)) < 1e-15);

    ZcConfig dflt{};
    CHECK(std::abs(zadoff_chu_root(dflt)(0) - std::complex<double>(1.0, 0.0)) < 1e-15);
}

TEST_CASE("constant modulus for the default root") {
    const Eigen::VectorXcd z = zadoff_chu_root(ZcConfig{});
    double worst = 0.0;
    for (int m = 0; m < z.size(); ++m) worst = std::max(worst, std::abs(std::abs(z(m)) - 1.0));
    CHECK(worst <= 1e-12);
}

TEST_CASE("invalid configs are rejected") {
    CHECK_THROWS_AS(zadoff_chu_root(ZcConfig{838, 1, 13}), std::invalid_argument);   // even length
    CHECK_THROWS_AS(zadoff_chu_root(ZcConfig{839, 0, 13}), std::invalid_argument);   // root too small
    CHECK_THROWS_AS(zadoff_chu_root(ZcConfig{839, 839, 13}), std::invalid_argument); // root too large
    CHECK_THROWS_AS(zadoff_chu_root(ZcConfig{839, 1, 0}), std::invalid_argument);    // zero stride
}

TEST_CASE("cyclic shift semantics") {
    ZcConfig cfg{};
    const Eigen::VectorXcd z = zadoff_chu_root(cfg);

    SUBCASE("shift zero is the identity") {
        CHECK((cyclic_shift(z, 0, cfg) - z).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("v=2 indexes m+26") {
        const Eigen::VectorXcd x = cyclic_shift(z, 2, cfg);
        for (int m : {0, 1, 100, 838}) CHECK(x(m) == z((m + 26) % cfg.n_zc));
    }
    SUBCASE("two shifts by 1 equal one shift by 2") {
        const Eigen::VectorXcd once = cyclic_shift(cyclic_shift(z, 1, cfg), 1, cfg);
        CHECK((once - cyclic_shift(z, 2, cfg)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("out-of-range shifts throw") {
        CHECK_THROWS_AS(cyclic_shift(z, -1, cfg), std::out_of_range);
        CHECK_THROWS_AS(cyclic_shift(z, cfg.num_shifts(), cfg), std::out_of_range);
    }
    SUBCASE("shift is a permutation of the samples") {
        const Eigen::VectorXcd x = cyclic_shift(z, 7, cfg);
        std::vector<int> hits(cfg.n_zc, 0);
        for (int m = 0; m < cfg.n_zc; ++m) {
            // every output sample must be some input sample exactly
            bool found = false;
            for (int j = 0; j < cfg.n_zc && !found; ++j) {
                if (x(m) == z(j) && !hits[j]) {
                    hits[j] = 1;
                    found = true;
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("zero correlation zone: distinct shifts are orthogonal at lag zero") {
    ZcConfig cfg{};
    const Eigen::VectorXcd z = zadoff_chu_root(cfg);
    const Eigen::VectorXcd a = cyclic_shift(z, 3, cfg);
    for (int v : {0, 1, 17, 63}) {
        if (v == 3) continue;
        const Eigen::VectorXcd b = cyclic_shift(z, v, cfg);
        CHECK(std::abs(oracles::periodic_xcorr(a, b, 0)) <= 1e-9 * cfg.n_zc);
    }
}

TEST_CASE("autocorrelation vanishes at sampled nonzero lags") {
    ZcConfig cfg{};
    const Eigen::VectorXcd z = zadoff_chu_root(cfg);
    for (int lag : {1, 2, 13, 100, 419, 838})
        CHECK(std::abs(oracles::periodic_xcorr(z, z, lag)) <= 1e-9 * cfg.n_zc);
}

TEST_CASE("cross-root correlation is flat at sqrt(n) for sampled lags") {
    ZcConfig a_cfg{};
    ZcConfig b_cfg{};
    b_cfg.root_u = 34;
    const Eigen::VectorXcd a = zadoff_chu_root(a_cfg);
    const Eigen::VectorXcd b = zadoff_chu_root(b_cfg);
    const double expected = std::sqrt(839.0);
    for (int lag : {0, 1, 5, 100, 421, 838}) {
        const double mag = std::abs(oracles::periodic_xcorr(a, b, lag));
        CHECK(std::abs(mag - expected) / expected <= 1e-6);
    }
}
