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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "prach/rng.hpp"
#include "prach/simulator.hpp"

using namespace prach;

namespace {

ScenarioConfig noiseless_cfg() {
    ScenarioConfig cfg;
    cfg.total_ues = 0;
    cfg.n_raos = 1;
    cfg.snr_db = std::numeric_limits<double>::infinity();
    cfg.profile = ChannelProfile{};  // single tap, no doppler
    cfg.n_antennas = 1;
    return cfg;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string serialize(const Dataset& rows) {
    const std::string p = temp_path("prach_serialize_probe.csv");
    write_dataset(rows, p);
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("arrival histogram") {
    ScenarioConfig cfg;
    SUBCASE("zero UEs gives an all-zero histogram") {
        cfg.total_ues = 0;
        const auto hist = draw_arrival_slots(cfg);
        CHECK(std::accumulate(hist.begin(), hist.end(), 0) == 0);
    }
    SUBCASE("histogram conserves the UE count") {
        cfg.total_ues = 5000;
        cfg.n_raos = 137;
        const auto hist = draw_arrival_slots(cfg);
        CHECK(static_cast<int>(hist.size()) == 137);
        CHECK(std::accumulate(hist.begin(), hist.end(), 0) == 5000);
    }
    SUBCASE("mean arrival position matches the Beta(3,4) mean 3/7") {
        cfg.total_ues = 100000;
        cfg.n_raos = 1000;
        const auto hist = draw_arrival_slots(cfg);
        double mean_slot = 0.0;
        for (int r = 0; r < cfg.n_raos; ++r) mean_slot += static_cast<double>(r) * hist[r];
        mean_slot /= cfg.total_ues;
        CHECK(std::abs(mean_slot / cfg.n_raos - 3.0 / 7.0) <= 0.01 * (3.0 / 7.0) + 0.5 / cfg.n_raos);
    }
}

TEST_CASE("single-opportunity simulation honors the labeling rule") {
    ScenarioConfig cfg = noiseless_cfg();
    SUBCASE("one user cannot collide and lands in its preamble's bin") {
        const RaoOutcome out = simulate_rao_ues({{12, 300.0}}, cfg, 42);
        REQUIRE(out.rows.size() == 1);
        CHECK(out.rows[0].label == 0);
        CHECK(out.rows[0].bin_index == 12);
        CHECK(out.truth_count[12] == 1);
    }
    SUBCASE("two users on one preamble make a single collision row") {
        const RaoOutcome out = simulate_rao_ues({{7, 100.0}, {7, 600.0}}, cfg, 42);
        REQUIRE(out.rows.size() == 1);
        CHECK(out.rows[0].bin_index == 7);
        CHECK(out.rows[0].label == 1);
    }
    SUBCASE("distinct preambles: two clean rows, offsets equal the delays") {
        const RaoOutcome out = simulate_rao_ues({{2, 300.0}, {9, 790.0}}, cfg, 42, 0, 0, true);
        REQUIRE(out.rows.size() == 2);
        CHECK(out.rows[0].label == 0);
        CHECK(out.rows[1].label == 0);
        // strongest profile sample inside each bin sits at the UE's delay
        const auto& pdp = *out.pdp;
        auto peak_offset = [&](int bin) {
            int best = 0;
            for (int j = 1; j < 24; ++j)
                if (pdp.power(bin * 24 + j) > pdp.power(bin * 24 + best)) best = j;
            return best;
        };
        CHECK(peak_offset(2) == delay_to_samples(300.0, cfg.prach));
        CHECK(peak_offset(9) == delay_to_samples(790.0, cfg.prach));
    }
    SUBCASE("preamble outside the pool is rejected") {
        CHECK_THROWS_AS(simulate_rao_ues({{54, 10.0}}, cfg, 1), std::invalid_argument);
    }
}

TEST_CASE("scenario runs") {
    SUBCASE("no UEs, one opportunity: empty dataset") {
        ScenarioConfig cfg = noiseless_cfg();
        const ScenarioResult r = run_scenario(cfg);
        CHECK(r.rows.empty());
    }
    SUBCASE("worker count does not change the bytes") {
        ScenarioConfig cfg;
        cfg.total_ues = 300;
        cfg.n_raos = 24;
        cfg.seed = 99;
        const std::string one = serialize(run_scenario(cfg, 1).rows);
        const std::string eight = serialize(run_scenario(cfg, 8).rows);
        CHECK(one == eight);
        CHECK_FALSE(one.empty());
    }
    SUBCASE("labels agree with ground-truth multiplicity") {
        ScenarioConfig cfg;
        cfg.total_ues = 600;
        cfg.n_raos = 12;
        cfg.seed = 5;
        const auto hist = draw_arrival_slots(cfg);
        for (int r = 0; r < cfg.n_raos; ++r) {
            const std::uint64_t rao_seed = derive_seed(cfg.seed, 0x1000 + static_cast<std::uint64_t>(r));
            const RaoOutcome out = simulate_rao(hist[r], cfg, rao_seed, 0, r);
            int used = 0;
            for (int p = 0; p < cfg.n_preambles; ++p) used += out.truth_count[p] >= 1;
            CHECK(static_cast<int>(out.rows.size()) == used);
            for (const auto& row : out.rows)
                CHECK(row.label == (out.truth_count[row.bin_index] >= 2 ? 1 : 0));
        }
    }
    SUBCASE("desk-scale pedestrian run lands in the collision-share band") {
        ScenarioConfig cfg;
        cfg.total_ues = 7500;
        cfg.n_raos = 50;
        cfg.seed = 7;
        const ScenarioResult r = run_scenario(cfg, 2);
        long ones = 0;
        for (const auto& row : r.rows) ones += row.label;
        const double share = static_cast<double>(ones) / static_cast<double>(r.rows.size());
        CHECK(share >= 0.60);
        CHECK(share <= 0.90);
    }
    SUBCASE("collision share grows with the UE count") {
        ScenarioConfig cfg;
        cfg.n_raos = 10;
        double prev = -1.0;
        for (int ues : {150, 400, 1200}) {
            double mean_share = 0.0;
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                cfg.total_ues = ues;
                cfg.seed = 1000 + seed;
                const ScenarioResult r = run_scenario(cfg, 2);
                long ones = 0;
                for (const auto& row : r.rows) ones += row.label;
                mean_share += r.rows.empty() ? 0.0 : static_cast<double>(ones) / r.rows.size();
            }
            mean_share /= 20.0;
            CHECK(mean_share > prev);
            prev = mean_share;
        }
    }
}

TEST_CASE("dataset CSV round trip and validation") {
    SUBCASE("empty list writes a header-only file") {
        const std::string p = temp_path("prach_empty.csv");
        write_dataset({}, p);
        std::ifstream in(p);
        std::string line;
        CHECK(std::getline(in, line));
        CHECK(line == dataset_header());
        CHECK_FALSE(std::getline(in, line));
        CHECK(read_dataset(p).empty());
    }
    SUBCASE("synthetic rows survive a round trip exactly") {
        Dataset rows(3);
        for (int i = 0; i < 3; ++i) {
            rows[i].event_id = i;
            rows[i].slot_id = 10 * i;
            rows[i].bin_index = 63 - i;
            for (int j = 0; j < kNumFeatures; ++j) rows[i].features[j] = std::pow(1.7, j - i) * 1e-3;
            rows[i].label = i % 2;
        }
        const std::string p = temp_path("prach_roundtrip.csv");
        write_dataset(rows, p);
        const Dataset back = read_dataset(p);
        REQUIRE(back.size() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(back[i].event_id == rows[i].event_id);
            CHECK(back[i].slot_id == rows[i].slot_id);
            CHECK(back[i].bin_index == rows[i].bin_index);
            CHECK(back[i].label == rows[i].label);
            for (int j = 0; j < kNumFeatures; ++j) CHECK(back[i].features[j] == rows[i].features[j]);
        }
    }
    SUBCASE("wrong column count names the expectation") {
        const std::string p = temp_path("prach_badcols.csv");
        std::ofstream out(p);
        out << dataset_header() << "\n";
        out << "0,0,1";
        for (int j = 0; j < 23; ++j) out << ",1.0";
        out << ",0\n";  // 27 value columns only
        out.close();
        try {
            read_dataset(p);
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(std::string(e.what()).find("28") != std::string::npos);
        }
    }
    SUBCASE("malformed values report the line number") {
        const std::string p = temp_path("prach_badval.csv");
        std::ofstream out(p);
        out << dataset_header() << "\n";
        out << "0,0,1";
        for (int j = 0; j < 24; ++j) out << ",x";
        out << ",0\n";
        out.close();
        try {
            read_dataset(p);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(":2") != std::string::npos);
        }
    }
    SUBCASE("missing file raises IoError") {
        CHECK_THROWS_AS(read_dataset("/nonexistent/nope.csv"), IoError);
    }
}

TEST_CASE("scenario config file parsing") {
    const ScenarioConfig cfg = parse_scenario_config_text(
        "# comment\n"
        "label = DS1\n"
        "profile = EPA\n"
        "cell_radius_m = 790\n"
        "total_ues = 7500\n"
        "n_raos = 50\n"
        "n_preambles = 54\n"
        "n_antennas = 2\n"
        "snr_db = 10\n"
        "seed = 7\n",
        "inline");
    CHECK(cfg.label == "DS1");
    CHECK(cfg.profile.name == "EPA");
    CHECK(cfg.total_ues == 7500);
    CHECK(cfg.seed == 7);
    CHECK_THROWS_AS(parse_scenario_config_text("total_ues = many\n", "inline"), ParseError);
    CHECK_THROWS_AS(parse_scenario_config("/nonexistent/ds.cfg"), IoError);
}
