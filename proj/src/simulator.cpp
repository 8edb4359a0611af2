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

#include "prach/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "prach/fft.hpp"
#include "prach/parallel.hpp"
#include "prach/preamble.hpp"
#include "prach/rng.hpp"

namespace prach {

namespace {

// seed stream tags; every random decision inside one opportunity hangs off
// the opportunity seed so scheduling cannot change the outcome
constexpr std::uint64_t kStreamSelection = 0x5E1;
constexpr std::uint64_t kStreamChannel = 0xC4A;
constexpr std::uint64_t kStreamNoise = 0x401;
constexpr std::uint64_t kStreamRao = 0x9A0;

struct TxContext {
    Eigen::VectorXcd root_spectrum;  // n_zc bins, unitary DFT of the root
    Eigen::VectorXcd root_active;    // pdp_len samples
};

TxContext make_tx_context(const ScenarioConfig& cfg) {
    TxContext ctx;
    const Eigen::VectorXcd root = zadoff_chu_root(cfg.prach.zc);
    ctx.root_spectrum = dft(root);
    ctx.root_active = modulate_active(root, cfg.prach);
    return ctx;
}

double beta_draw(Rng& rng, int a, int b) {
    // a-th order statistic of a+b-1 uniforms
    const int n = a + b - 1;
    std::vector<double> u(n);
    for (auto& v : u) v = rng.uniform();
    std::nth_element(u.begin(), u.begin() + (a - 1), u.end());
    return u[a - 1];
}

RaoOutcome simulate_rao_impl(const std::vector<UeTransmission>& ues, const ScenarioConfig& cfg,
                             const TxContext& ctx, std::uint64_t rao_seed, long event_id, long slot_id,
                             bool keep_pdp) {
    const PrachConfig& prach = cfg.prach;
    const int margin = delay_to_samples(cfg.cell_radius_m, prach) + 16;
    const int buf_len = prach.cp_len + prach.pdp_len + margin;

    std::vector<Eigen::VectorXcd> antennas(cfg.n_antennas, Eigen::VectorXcd::Zero(buf_len));

    for (std::size_t i = 0; i < ues.size(); ++i) {
        const auto& ue = ues[i];
        if (ue.preamble_v < 0 || ue.preamble_v >= cfg.n_preambles)
            throw std::invalid_argument("simulate_rao: preamble index outside the contention pool");
        const Eigen::VectorXcd wave = preamble_waveform(ctx.root_active, ue.preamble_v, prach);
        const int delay = delay_to_samples(ue.distance_m, prach);
        for (int a = 0; a < cfg.n_antennas; ++a) {
            const std::uint64_t link_seed =
                derive_seed(rao_seed, kStreamChannel + i * static_cast<std::uint64_t>(cfg.n_antennas) + a);
            const Eigen::VectorXcd faded = apply_channel(wave, cfg.profile, delay, prach, link_seed);
            antennas[a].head(faded.size()) += faded;
        }
    }
    for (int a = 0; a < cfg.n_antennas; ++a)
        antennas[a] = add_awgn(antennas[a], cfg.snr_db, derive_seed(rao_seed, kStreamNoise + a));

    RaoOutcome out;
    PowerDelayProfile pdp = compute_pdp(antennas, ctx.root_spectrum, prach);
    const ThresholdEstimate thr = estimate_threshold(pdp, cfg.pfa);
    out.peaks = detect_peaks(pdp, thr.threshold, cfg.min_peak_distance);

    out.truth_count.assign(cfg.n_preambles, 0);
    for (const auto& ue : ues) out.truth_count[ue.preamble_v]++;

    for (int p = 0; p < cfg.n_preambles; ++p) {
        if (out.truth_count[p] == 0) continue;
        DatasetRow row;
        row.event_id = event_id;
        row.slot_id = slot_id;
        row.bin_index = p;
        for (int j = 0; j < kNumFeatures; ++j) row.features[j] = pdp.power(p * pdp.bin_size + j);
        row.label = out.truth_count[p] >= 2 ? 1 : 0;
        out.rows.push_back(row);
    }
    if (keep_pdp) out.pdp = std::move(pdp);
    return out;
}

std::vector<UeTransmission> draw_ues(int active_ues, const ScenarioConfig& cfg, std::uint64_t rao_seed) {
    Rng rng(derive_seed(rao_seed, kStreamSelection));
    std::vector<UeTransmission> ues(active_ues);
    for (auto& ue : ues) {
        ue.preamble_v = rng.uniform_int(cfg.n_preambles);
        ue.distance_m = cfg.cell_radius_m * std::sqrt(rng.uniform());
    }
    return ues;
}

}  // namespace

void ScenarioConfig::validate() const {
    profile.validate();
    prach.validate();
    if (n_preambles < 1 || n_preambles > prach.n_bins())
        throw std::invalid_argument("ScenarioConfig: n_preambles must be in [1, " +
                                    std::to_string(prach.n_bins()) + "]");
    if (total_ues < 0) throw std::invalid_argument("ScenarioConfig: total_ues must be >= 0");
    if (n_raos < 1) throw std::invalid_argument("ScenarioConfig: n_raos must be >= 1");
    if (!(cell_radius_m > 0.0)) throw std::invalid_argument("ScenarioConfig: cell_radius_m must be > 0");
    if (n_antennas < 1) throw std::invalid_argument("ScenarioConfig: n_antennas must be >= 1");
    if (beta_a < 1 || beta_b < 1) throw std::invalid_argument("ScenarioConfig: beta parameters must be >= 1");
    if (!(pfa > 0.0 && pfa < 1.0)) throw std::invalid_argument("ScenarioConfig: pfa must be in (0, 1)");
    if (min_peak_distance < 1) throw std::invalid_argument("ScenarioConfig: min_peak_distance must be >= 1");
    if (prach.bin_size() != kNumFeatures)
        throw std::invalid_argument("ScenarioConfig: bin size must equal the 24-column feature schema");
}

std::vector<int> draw_arrival_slots(const ScenarioConfig& cfg) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, kStreamRao));
    std::vector<int> histogram(cfg.n_raos, 0);
    for (int u = 0; u < cfg.total_ues; ++u) {
        const double t = beta_draw(rng, cfg.beta_a, cfg.beta_b);
        int slot = static_cast<int>(t * cfg.n_raos);
        slot = std::min(slot, cfg.n_raos - 1);
        histogram[slot]++;
    }
    return histogram;
}

RaoOutcome simulate_rao_ues(const std::vector<UeTransmission>& ues, const ScenarioConfig& cfg,
                            std::uint64_t rao_seed, long event_id, long slot_id, bool keep_pdp) {
    cfg.validate();
    const TxContext ctx = make_tx_context(cfg);
    return simulate_rao_impl(ues, cfg, ctx, rao_seed, event_id, slot_id, keep_pdp);
}

RaoOutcome simulate_rao(int active_ues, const ScenarioConfig& cfg, std::uint64_t rao_seed, long event_id,
                        long slot_id, bool keep_pdp) {
    if (active_ues < 0) throw std::invalid_argument("simulate_rao: active_ues must be >= 0");
    cfg.validate();
    const TxContext ctx = make_tx_context(cfg);
    return simulate_rao_impl(draw_ues(active_ues, cfg, rao_seed), cfg, ctx, rao_seed, event_id, slot_id,
                             keep_pdp);
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, int jobs, long event_id, bool keep_sample_pdp) {
    cfg.validate();
    const TxContext ctx = make_tx_context(cfg);
    const std::vector<int> arrivals = draw_arrival_slots(cfg);

    std::vector<RaoOutcome> outcomes(cfg.n_raos);
    parallel_for(cfg.n_raos, jobs, [&](int r) {
        const std::uint64_t rao_seed = derive_seed(cfg.seed, 0x1000 + static_cast<std::uint64_t>(r));
        const auto ues = draw_ues(arrivals[r], cfg, rao_seed);
        outcomes[r] = simulate_rao_impl(ues, cfg, ctx, rao_seed, event_id, r, keep_sample_pdp);
    });

    ScenarioResult result;
    for (int r = 0; r < cfg.n_raos; ++r) {
        auto& o = outcomes[r];
        result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
        if (keep_sample_pdp && !result.sample_pdp && !o.rows.empty()) result.sample_pdp = o.pdp;
    }
    return result;
}

namespace {

std::vector<double> parse_double_list(const std::string& value, const std::string& key,
                                      const std::string& origin) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ParseError(origin + ": bad numeric list for key '" + key + "'");
        }
    }
    if (out.empty()) throw ParseError(origin + ": empty list for key '" + key + "'");
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

ScenarioConfig parse_scenario_config_text(const std::string& text, const std::string& origin) {
    ScenarioConfig cfg;
    bool doppler_set = false;
    double doppler = 0.0;
    std::optional<std::vector<double>> custom_delays, custom_powers;

    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string where = origin + ":" + std::to_string(line_no);

        try {
            if (key == "label") cfg.label = value;
            else if (key == "profile") {
                if (value == "EPA") cfg.profile = ChannelProfile::epa();
                else if (value == "ETU") cfg.profile = ChannelProfile::etu();
                else if (value == "custom") cfg.profile = ChannelProfile{};
                else throw ParseError(where + ": profile must be EPA, ETU or custom");
            } else if (key == "doppler_hz") { doppler = std::stod(value); doppler_set = true; }
            else if (key == "tap_delays_ns") custom_delays = parse_double_list(value, key, where);
            else if (key == "tap_powers_db") custom_powers = parse_double_list(value, key, where);
            else if (key == "cell_radius_m") cfg.cell_radius_m = std::stod(value);
            else if (key == "total_ues") cfg.total_ues = std::stoi(value);
            else if (key == "n_preambles") cfg.n_preambles = std::stoi(value);
            else if (key == "n_antennas") cfg.n_antennas = std::stoi(value);
            else if (key == "n_raos") cfg.n_raos = std::stoi(value);
            else if (key == "snr_db") cfg.snr_db = std::stod(value);
            else if (key == "beta_a") cfg.beta_a = std::stoi(value);
            else if (key == "beta_b") cfg.beta_b = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "pfa") cfg.pfa = std::stod(value);
            else if (key == "min_peak_distance") cfg.min_peak_distance = std::stoi(value);
            else throw ParseError(where + ": unknown key '" + key + "'");
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(where + ": bad value for key '" + key + "'");
        }
    }

    if (custom_delays) cfg.profile.tap_delays_ns = *custom_delays;
    if (custom_powers) cfg.profile.tap_powers_db = *custom_powers;
    if (custom_delays || custom_powers) cfg.profile.name = "custom";
    if (doppler_set) cfg.profile.doppler_hz = doppler;
    cfg.validate();
    return cfg;
}

ScenarioConfig parse_scenario_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario config: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_config_text(buffer.str(), path);
}

}  // namespace prach
