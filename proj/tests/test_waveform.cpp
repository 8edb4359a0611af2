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

#include "prach/fft.hpp"
#include "prach/preamble.hpp"
#include "prach/rng.hpp"
#include "prach/simulator.hpp"
#include "prach/waveform.hpp"

using namespace prach;

namespace {
const PrachConfig kCfg{};
}

TEST_CASE("modulation basics") {
    SUBCASE("all-zero input gives an all-zero waveform") {
        const Eigen::VectorXcd wave = modulate_prach(Eigen::VectorXcd::Zero(839), kCfg);
        CHECK(wave.cwiseAbs().maxCoeff() == 0.0);
        CHECK(wave.size() == kCfg.cp_len + kCfg.pdp_len);
    }
    SUBCASE("active part preserves the input energy") {
        const Eigen::VectorXcd x = zadoff_chu_root(kCfg.zc);
        const Eigen::VectorXcd active = modulate_active(x, kCfg);
        CHECK(std::abs(active.squaredNorm() - x.squaredNorm()) / x.squaredNorm() <= 1e-9);
    }
    SUBCASE("strip CP, transform and de-map recovers the sequence spectrum") {
        const Eigen::VectorXcd x = zadoff_chu_root(kCfg.zc);
        const Eigen::VectorXcd wave = modulate_prach(x, kCfg);
        const Eigen::VectorXcd spectrum = dft(Eigen::VectorXcd(wave.tail(kCfg.pdp_len)));
        const Eigen::VectorXcd recovered = spectrum.segment(kCfg.map_start(), kCfg.zc.n_zc);
        CHECK((recovered - dft(x)).cwiseAbs().maxCoeff() <= 1e-9);
    }
    SUBCASE("length mismatch throws") {
        CHECK_THROWS_AS(modulate_prach(Eigen::VectorXcd::Zero(100), kCfg), std::invalid_argument);
    }
}

TEST_CASE("delay_to_samples arithmetic") {
    CHECK(delay_to_samples(0.0, kCfg) == 0);
    CHECK(delay_to_samples(300.0, kCfg) == 2);
    CHECK(delay_to_samples(790.0, kCfg) == 5);
    CHECK_THROWS_AS(delay_to_samples(-1.0, kCfg), std::invalid_argument);
}

TEST_CASE("channel identity and pure delay") {
    Eigen::VectorXcd wave(8);
    for (int i = 0; i < 8; ++i) wave(i) = std::complex<double>(i + 1.0, -i);

    ChannelRealization identity;
    identity.taps.push_back({0, {1.0, 0.0}, {}, {}, 1.0});

    SUBCASE("single unit tap, zero delay: output equals input") {
        const Eigen::VectorXcd out = apply_channel_realization(wave, identity, 0);
        CHECK((out - wave).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("delay by 5 shifts and zero-pads") {
        const Eigen::VectorXcd out = apply_channel_realization(wave, identity, 5);
        CHECK(out.size() == wave.size() + 5);
        CHECK(out.head(5).cwiseAbs().maxCoeff() == 0.0);
        CHECK((out.tail(8) - wave).cwiseAbs().maxCoeff() == 0.0);
        CHECK(std::abs(out.squaredNorm() - wave.squaredNorm()) == 0.0);  // pure delay keeps energy
    }
}

TEST_CASE("pedestrian profile conserves mean energy over realizations") {
    const ChannelProfile epa = ChannelProfile::epa();
    Eigen::VectorXcd wave = Eigen::VectorXcd::Zero(64);
    wave(0) = 1.0;  // unit-energy probe
    double total = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t)
        total += apply_channel(wave, epa, 0, kCfg, derive_seed(99, t)).squaredNorm();
    CHECK(std::abs(total / trials - 1.0) <= 0.03);
}

TEST_CASE("doppler threshold picks the fading model") {
    ChannelProfile p = ChannelProfile::epa();
    CHECK_FALSE(realize_channel(p, kCfg, 1).time_varying);  // 5 Hz * 800 us << 0.1
    p.doppler_hz = 70.0;
    CHECK_FALSE(realize_channel(p, kCfg, 1).time_varying);  // 0.056 still below
    p.doppler_hz = 200.0;
    const ChannelRealization fast = realize_channel(p, kCfg, 1);
    CHECK(fast.time_varying);
    // sum-of-sinusoids energy stays near the normalized tap powers
    double e = 0.0;
    const int probes = 4000;
    for (int i = 0; i < probes; ++i) {
        const ChannelRealization r = realize_channel(p, kCfg, derive_seed(5, i));
        for (const auto& tap : r.taps) e += std::norm(r.gain_at(tap, 100));
    }
    CHECK(std::abs(e / probes - 1.0) <= 0.05);
}

TEST_CASE("awgn contract") {
    Eigen::VectorXcd wave = Eigen::VectorXcd::Zero(1000000);
    SUBCASE("infinite snr sentinel disables noise") {
        Eigen::VectorXcd small = Eigen::VectorXcd::Constant(16, std::complex<double>(1.0, 1.0));
        const Eigen::VectorXcd out = add_awgn(small, std::numeric_limits<double>::infinity(), 3);
        CHECK((out - small).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("measured power matches 0 dB within 1%") {
        const Eigen::VectorXcd noisy = add_awgn(wave, 0.0, 17);
        CHECK(std::abs(noisy.squaredNorm() / wave.size() - 1.0) <= 0.01);
    }
    SUBCASE("same seed reproduces the same bytes") {
        Eigen::VectorXcd small = Eigen::VectorXcd::Zero(64);
        const Eigen::VectorXcd a = add_awgn(small, 10.0, 1234);
        const Eigen::VectorXcd b = add_awgn(small, 10.0, 1234);
        CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("channel profiles parse from scenario text") {
    SUBCASE("named profile with doppler override") {
        const ScenarioConfig cfg = parse_scenario_config_text("profile = ETU\ndoppler_hz = 35\n", "inline");
        CHECK(cfg.profile.name == "ETU");
        CHECK(cfg.profile.doppler_hz == 35.0);
        CHECK(cfg.profile.tap_delays_ns.size() == 9);
    }
    SUBCASE("custom tap tables") {
        const ScenarioConfig cfg = parse_scenario_config_text(
            "profile = custom\ntap_delays_ns = 0,100,500\ntap_powers_db = 0,-3,-6\ndoppler_hz = 0\n",
            "inline");
        CHECK(cfg.profile.tap_delays_ns == std::vector<double>{0, 100, 500});
        CHECK(cfg.profile.tap_powers_db == std::vector<double>{0, -3, -6});
    }
    SUBCASE("unknown keys are parse errors") {
        CHECK_THROWS_AS(parse_scenario_config_text("bogus = 1\n", "inline"), ParseError);
    }
}
