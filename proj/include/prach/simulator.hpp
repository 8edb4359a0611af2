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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prach/dataset.hpp"
#include "prach/receiver.hpp"
#include "prach/waveform.hpp"

namespace prach {

/// One random-access scenario. Defaults correspond to the low-mobility
/// pedestrian desk-scale case (DS1).
struct ScenarioConfig {
    std::string label = "custom";
    ChannelProfile profile = ChannelProfile::epa();
    double cell_radius_m = 790.0;
    int total_ues = 2000;
    int n_preambles = 54;   ///< contention pool: shifts 0..n_preambles-1
    int n_antennas = 2;
    int n_raos = 200;
    double snr_db = 10.0;
    int beta_a = 3;
    int beta_b = 4;
    std::uint64_t seed = 7;

    // detector settings
    double pfa = 1e-3;
    int min_peak_distance = 3;

    PrachConfig prach{};

    void validate() const;
};

/// Parses the key/value scenario file format (one `key = value` per line,
/// `#` comments). `profile` selects EPA or ETU by name; custom tap tables go
/// through tap_delays_ns / tap_powers_db / doppler_hz.
ScenarioConfig parse_scenario_config(const std::string& path);
ScenarioConfig parse_scenario_config_text(const std::string& text, const std::string& origin);

/// Ground truth and receiver output for one random access opportunity.
struct RaoOutcome {
    std::vector<int> truth_count;        ///< per-preamble transmitter count
    std::vector<DetectedPeak> peaks;
    std::vector<DatasetRow> rows;        ///< one row per preamble used by >= 1 UE
    std::optional<PowerDelayProfile> pdp;  ///< retained only when requested
};

struct UeTransmission {
    int preamble_v = 0;
    double distance_m = 0.0;
};

/// Number of arriving UEs per opportunity: each UE draws t ~ Beta(a, b) and
/// lands in slot floor(t * n_raos), clamped to the last slot. The histogram
/// always sums to total_ues.
std::vector<int> draw_arrival_slots(const ScenarioConfig& cfg);

/// Simulates one opportunity with the given transmissions: per-UE waveforms
/// are delayed, faded per antenna, summed at the base station and disturbed
/// with noise; the receiver forms the combined delay profile, detects peaks
/// and emits one labeled row per preamble with at least one transmitter
/// (label 1 when two or more UEs picked it).
RaoOutcome simulate_rao_ues(const std::vector<UeTransmission>& ues, const ScenarioConfig& cfg,
                            std::uint64_t rao_seed, long event_id = 0, long slot_id = 0,
                            bool keep_pdp = false);

/// Draws preambles (uniform over the pool) and positions (area-uniform over
/// the disk) for `active_ues` UEs, then runs simulate_rao_ues.
RaoOutcome simulate_rao(int active_ues, const ScenarioConfig& cfg, std::uint64_t rao_seed,
                        long event_id = 0, long slot_id = 0, bool keep_pdp = false);

struct ScenarioResult {
    Dataset rows;
    std::optional<PowerDelayProfile> sample_pdp;  ///< first non-empty opportunity
};

/// Runs all opportunities of a scenario. Opportunities are independent and
/// may execute on `jobs` workers; per-RAO seeds derive from the master seed,
/// and results merge in slot order, so the dataset is byte-identical for any
/// worker count.
ScenarioResult run_scenario(const ScenarioConfig& cfg, int jobs = 1, long event_id = 0,
                            bool keep_sample_pdp = false);

}  // namespace prach
