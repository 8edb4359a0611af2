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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "prach/preamble.hpp"

namespace prach {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Physical-layer geometry shared by transmitter and receiver. The active
/// sequence occupies `pdp_len` receiver-grid samples over `seq_duration`
/// seconds; the delay profile produced by the correlator divides into
/// num_shifts() bins of bin_size() samples, one bin per cyclic shift.
struct PrachConfig {
    ZcConfig zc{};
    int pdp_len = 1536;           ///< receiver IDFT length (samples)
    double seq_duration = 800e-6; ///< active sequence duration (s)
    int cp_len = 198;             ///< cyclic prefix length (samples)

    double sample_period() const { return seq_duration / pdp_len; }
    int map_start() const { return (pdp_len - zc.n_zc) / 2; }
    int n_bins() const { return zc.num_shifts(); }
    int bin_size() const { return pdp_len / n_bins(); }

    void validate() const;
};

/// Tapped-delay-line channel description. Named profiles carry the standard
/// pedestrian (EPA) and urban (ETU) tap tables.
struct ChannelProfile {
    std::string name = "custom";
    std::vector<double> tap_delays_ns = {0.0};
    std::vector<double> tap_powers_db = {0.0};
    double doppler_hz = 0.0;

    static ChannelProfile epa();  ///< 5 Hz Doppler default
    static ChannelProfile etu();  ///< 70 Hz Doppler default

    void validate() const;
};

/// One drawn channel: tap positions on the receiver sample grid plus their
/// complex gains. Quasi-static taps hold a single gain over the preamble;
/// fast-fading taps evolve through a sum-of-sinusoids Doppler process.
struct ChannelRealization {
    struct Tap {
        int delay_samples = 0;
        std::complex<double> gain{1.0, 0.0};           // used when !time_varying
        std::vector<double> sos_omega;                 // rad per sample
        std::vector<double> sos_phase;
        double amplitude = 1.0;                        // sqrt of normalized tap power
    };
    std::vector<Tap> taps;
    bool time_varying = false;

    int max_delay() const;
    std::complex<double> gain_at(const Tap& tap, int sample_index) const;
};

/// Time-domain PRACH waveform for a native-grid sequence x (length n_zc):
/// DFT -> centered mapping onto pdp_len bins -> IDFT -> cyclic prefix.
/// Unitary transforms, so the active part carries exactly the input energy.
Eigen::VectorXcd modulate_prach(const Eigen::VectorXcd& x, const PrachConfig& cfg);

/// Active part only (pdp_len samples, no cyclic prefix).
Eigen::VectorXcd modulate_active(const Eigen::VectorXcd& x, const PrachConfig& cfg);

/// Transmit waveform of cyclic-shift preamble v, built from the root's
/// active-part waveform: the shift is realized as a cyclic delay of
/// v * bin_size() samples on the receiver grid, so the correlation peak of
/// preamble v falls exactly at the start of delay-profile bin v and a
/// propagation delay of d samples lands at offset d inside that bin.
Eigen::VectorXcd preamble_waveform(const Eigen::VectorXcd& root_active, int v, const PrachConfig& cfg);

/// Propagation delay in receiver-grid samples: round(distance / c / Ts).
int delay_to_samples(double distance_m, const PrachConfig& cfg);

/// Draws tap gains for one link. Gains are held constant over the preamble
/// when doppler_hz * seq_duration < 0.1, otherwise each tap fades through a
/// 16-sinusoid classical-Doppler process. Deterministic per seed.
ChannelRealization realize_channel(const ChannelProfile& profile, const PrachConfig& cfg, std::uint64_t seed);

/// Applies delay (front zero-padding) and the tapped delay line. Output
/// length is wave.size() + delay_samples + max tap delay.
Eigen::VectorXcd apply_channel_realization(const Eigen::VectorXcd& wave, const ChannelRealization& chan,
                                           int delay_samples);

/// realize_channel + apply_channel_realization in one call.
Eigen::VectorXcd apply_channel(const Eigen::VectorXcd& wave, const ChannelProfile& profile, int delay_samples,
                               const PrachConfig& cfg, std::uint64_t seed);

/// Adds circular complex gaussian noise of per-sample power 10^(-snr_db/10)
/// (relative to a unit-power preamble). snr_db = +infinity disables noise.
Eigen::VectorXcd add_awgn(const Eigen::VectorXcd& wave, double snr_db, std::uint64_t seed);

}  // namespace prach
