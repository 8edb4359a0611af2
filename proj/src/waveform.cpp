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

#include "prach/waveform.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "prach/fft.hpp"
#include "prach/rng.hpp"

namespace prach {

namespace {
constexpr int kSosSinusoids = 16;
constexpr double kQuasiStaticThreshold = 0.1;  // doppler * seq_duration below this -> static gains
}  // namespace

void PrachConfig::validate() const {
    zc.validate();
    if (pdp_len < zc.n_zc)
        throw std::invalid_argument("PrachConfig: pdp_len must be >= n_zc");
    if (cp_len < 0 || cp_len >= pdp_len)
        throw std::invalid_argument("PrachConfig: cp_len must be in [0, pdp_len)");
    if (!(seq_duration > 0.0))
        throw std::invalid_argument("PrachConfig: seq_duration must be positive");
    if (pdp_len % n_bins() != 0)
        throw std::invalid_argument("PrachConfig: pdp_len must divide evenly into num_shifts() bins");
}

ChannelProfile ChannelProfile::epa() {
    ChannelProfile p;
    p.name = "EPA";
    p.tap_delays_ns = {0, 30, 70, 90, 110, 190, 410};
    p.tap_powers_db = {0.0, -1.0, -3.0, -2.0, -8.0, -17.2, -20.8};
    p.doppler_hz = 5.0;
    return p;
}

ChannelProfile ChannelProfile::etu() {
    ChannelProfile p;
    p.name = "ETU";
    p.tap_delays_ns = {0, 50, 120, 200, 230, 500, 1600, 2300, 5000};
    p.tap_powers_db = {-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, -3.0, -5.0, -7.0};
    p.doppler_hz = 70.0;
    return p;
}

void ChannelProfile::validate() const {
    if (tap_delays_ns.empty() || tap_delays_ns.size() != tap_powers_db.size())
        throw std::invalid_argument("ChannelProfile: need equally many tap delays and powers, at least one tap");
    if (tap_delays_ns.front() != 0.0)
        throw std::invalid_argument("ChannelProfile: first tap delay must be 0");
    for (std::size_t i = 1; i < tap_delays_ns.size(); ++i)
        if (tap_delays_ns[i] < tap_delays_ns[i - 1])
            throw std::invalid_argument("ChannelProfile: tap delays must be sorted ascending");
    if (doppler_hz < 0.0)
        throw std::invalid_argument("ChannelProfile: doppler_hz must be >= 0");
}

int ChannelRealization::max_delay() const {
    int d = 0;
    for (const auto& t : taps) d = std::max(d, t.delay_samples);
    return d;
}

std::complex<double> ChannelRealization::gain_at(const Tap& tap, int sample_index) const {
    if (!time_varying) return tap.gain;
    std::complex<double> g{0.0, 0.0};
    for (std::size_t i = 0; i < tap.sos_omega.size(); ++i) {
        const double arg = tap.sos_omega[i] * sample_index + tap.sos_phase[i];
        g += std::complex<double>(std::cos(arg), std::sin(arg));
    }
    return tap.amplitude * g / std::sqrt(static_cast<double>(tap.sos_omega.size()));
}

Eigen::VectorXcd modulate_active(const Eigen::VectorXcd& x, const PrachConfig& cfg) {
    cfg.validate();
    if (x.size() != cfg.zc.n_zc)
        throw std::invalid_argument("modulate: sequence length " + std::to_string(x.size()) +
                                    " does not match n_zc " + std::to_string(cfg.zc.n_zc));
    const Eigen::VectorXcd spectrum = dft(x);
    Eigen::VectorXcd mapped = Eigen::VectorXcd::Zero(cfg.pdp_len);
    mapped.segment(cfg.map_start(), cfg.zc.n_zc) = spectrum;
    return idft(mapped);
}

Eigen::VectorXcd modulate_prach(const Eigen::VectorXcd& x, const PrachConfig& cfg) {
    const Eigen::VectorXcd active = modulate_active(x, cfg);
    Eigen::VectorXcd wave(cfg.cp_len + cfg.pdp_len);
    wave.head(cfg.cp_len) = active.tail(cfg.cp_len);
    wave.tail(cfg.pdp_len) = active;
    return wave;
}

Eigen::VectorXcd preamble_waveform(const Eigen::VectorXcd& root_active, int v, const PrachConfig& cfg) {
    cfg.validate();
    if (root_active.size() != cfg.pdp_len)
        throw std::invalid_argument("preamble_waveform: root_active must hold pdp_len samples");
    if (v < 0 || v >= cfg.n_bins())
        throw std::out_of_range("preamble_waveform: shift index " + std::to_string(v) + " outside [0, " +
                                std::to_string(cfg.n_bins()) + ")");
    const int n = cfg.pdp_len;
    const int delay = v * cfg.bin_size();
    Eigen::VectorXcd active(n);
    // cyclic delay on the receiver grid
    for (int m = 0; m < n; ++m) active(m) = root_active((m - delay % n + n) % n);
    Eigen::VectorXcd wave(cfg.cp_len + n);
    wave.head(cfg.cp_len) = active.tail(cfg.cp_len);
    wave.tail(n) = active;
    return wave;
}

int delay_to_samples(double distance_m, const PrachConfig& cfg) {
    if (distance_m < 0.0)
        throw std::invalid_argument("delay_to_samples: distance must be >= 0");
    return static_cast<int>(std::llround(distance_m / kSpeedOfLight / cfg.sample_period()));
}

ChannelRealization realize_channel(const ChannelProfile& profile, const PrachConfig& cfg, std::uint64_t seed) {
    profile.validate();
    cfg.validate();
    Rng rng(seed);

    const std::size_t n_taps = profile.tap_delays_ns.size();
    double total = 0.0;
    std::vector<double> linear(n_taps);
    for (std::size_t i = 0; i < n_taps; ++i) {
        linear[i] = std::pow(10.0, profile.tap_powers_db[i] / 10.0);
        total += linear[i];
    }

    ChannelRealization chan;
    chan.time_varying = profile.doppler_hz * cfg.seq_duration >= kQuasiStaticThreshold;
    chan.taps.resize(n_taps);
    const double ts = cfg.sample_period();
    for (std::size_t i = 0; i < n_taps; ++i) {
        auto& tap = chan.taps[i];
        tap.delay_samples = static_cast<int>(std::llround(profile.tap_delays_ns[i] * 1e-9 / ts));
        tap.amplitude = std::sqrt(linear[i] / total);
        if (chan.time_varying) {
            tap.sos_omega.resize(kSosSinusoids);
            tap.sos_phase.resize(kSosSinusoids);
            for (int s = 0; s < kSosSinusoids; ++s) {
                const double alpha = 2.0 * M_PI * rng.uniform();
                tap.sos_omega[s] = 2.0 * M_PI * profile.doppler_hz * std::cos(alpha) * ts;
                tap.sos_phase[s] = 2.0 * M_PI * rng.uniform();
            }
        } else {
            tap.gain = tap.amplitude * rng.cgaussian();
        }
    }
    return chan;
}

Eigen::VectorXcd apply_channel_realization(const Eigen::VectorXcd& wave, const ChannelRealization& chan,
                                           int delay_samples) {
    if (delay_samples < 0)
        throw std::invalid_argument("apply_channel: delay_samples must be >= 0");
    const int n = static_cast<int>(wave.size());
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n + delay_samples + chan.max_delay());
    for (const auto& tap : chan.taps) {
        const int base = delay_samples + tap.delay_samples;
        if (!chan.time_varying) {
            out.segment(base, n) += tap.gain * wave;
        } else {
            for (int m = 0; m < n; ++m) out(base + m) += chan.gain_at(tap, m) * wave(m);
        }
    }
    return out;
}

Eigen::VectorXcd apply_channel(const Eigen::VectorXcd& wave, const ChannelProfile& profile, int delay_samples,
                               const PrachConfig& cfg, std::uint64_t seed) {
    return apply_channel_realization(wave, realize_channel(profile, cfg, seed), delay_samples);
}

Eigen::VectorXcd add_awgn(const Eigen::VectorXcd& wave, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0.0) return wave;
    const double noise_power = std::pow(10.0, -snr_db / 10.0);
    const double sigma = std::sqrt(noise_power);
    Rng rng(seed);
    Eigen::VectorXcd out(wave.size());
    for (Eigen::Index m = 0; m < wave.size(); ++m) out(m) = wave(m) + sigma * rng.cgaussian();
    return out;
}

}  // namespace prach
