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

#include "prach/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "prach/fft.hpp"

namespace prach {

PowerDelayProfile compute_pdp(const std::vector<Eigen::VectorXcd>& received,
                              const Eigen::VectorXcd& root_spectrum, const PrachConfig& cfg) {
    cfg.validate();
    if (received.empty())
        throw std::invalid_argument("compute_pdp: need at least one antenna");
    if (root_spectrum.size() != cfg.zc.n_zc)
        throw std::invalid_argument("compute_pdp: root spectrum must hold n_zc bins");

    const int n = cfg.pdp_len;
    PowerDelayProfile pdp;
    pdp.n_bins = cfg.n_bins();
    pdp.bin_size = cfg.bin_size();
    pdp.power = Eigen::VectorXd::Zero(n);

    for (const auto& antenna : received) {
        if (antenna.size() < cfg.cp_len + n)
            throw std::invalid_argument("compute_pdp: received waveform shorter than cp_len + pdp_len");
        const Eigen::VectorXcd window = antenna.segment(cfg.cp_len, n);
        const Eigen::VectorXcd spectrum = dft(window);
        Eigen::VectorXcd corr = Eigen::VectorXcd::Zero(n);
        corr.head(cfg.zc.n_zc) =
            spectrum.segment(cfg.map_start(), cfg.zc.n_zc).cwiseProduct(root_spectrum.conjugate());
        const Eigen::VectorXcd profile = idft(corr);
        pdp.power += profile.cwiseAbs2();
    }
    return pdp;
}

PowerDelayProfile compute_pdp_from_root(const std::vector<Eigen::VectorXcd>& received,
                                        const Eigen::VectorXcd& root, const PrachConfig& cfg) {
    if (root.size() != cfg.zc.n_zc)
        throw std::invalid_argument("compute_pdp: root length does not match n_zc");
    return compute_pdp(received, dft(root), cfg);
}

ThresholdEstimate estimate_threshold(const PowerDelayProfile& pdp, double pfa) {
    if (!(pfa > 0.0 && pfa < 1.0))
        throw std::invalid_argument("estimate_threshold: pfa must be in (0, 1)");
    const Eigen::Index n = pdp.power.size();
    if (n == 0) throw std::invalid_argument("estimate_threshold: empty profile");

    std::vector<double> values(pdp.power.data(), pdp.power.data() + n);
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double median = values[mid];
    if (values.size() % 2 == 0) {
        // lower central order statistic for even counts
        const double lower = *std::max_element(values.begin(), values.begin() + mid);
        median = 0.5 * (median + lower);
    }

    ThresholdEstimate est;
    if (median <= 0.0) {
        est.degenerate = true;
        return est;
    }
    est.noise_floor = median / std::log(2.0);
    est.threshold = est.noise_floor * (-std::log(pfa));
    return est;
}

std::vector<DetectedPeak> detect_peaks(const PowerDelayProfile& pdp, double threshold, int min_distance) {
    if (min_distance < 1)
        throw std::invalid_argument("detect_peaks: min_distance must be >= 1");
    const int n = static_cast<int>(pdp.power.size());

    std::vector<int> candidates;
    candidates.reserve(64);
    for (int i = 0; i < n; ++i)
        if (pdp.power(i) > threshold) candidates.push_back(i);

    // descending power, ties toward the lower index
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        if (pdp.power(a) != pdp.power(b)) return pdp.power(a) > pdp.power(b);
        return a < b;
    });

    std::vector<DetectedPeak> peaks;
    std::vector<int> accepted;
    for (int idx : candidates) {
        bool blocked = false;
        for (int a : accepted) {
            if (std::abs(idx - a) < min_distance) {
                blocked = true;
                break;
            }
        }
        if (blocked) continue;
        accepted.push_back(idx);
        DetectedPeak p;
        p.global_index = idx;
        p.bin_index = idx / pdp.bin_size;
        p.offset_in_bin = idx % pdp.bin_size;
        p.power = pdp.power(idx);
        peaks.push_back(p);
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const DetectedPeak& a, const DetectedPeak& b) { return a.global_index < b.global_index; });
    return peaks;
}

std::vector<Eigen::VectorXd> segment_bins(const PowerDelayProfile& pdp) {
    if (pdp.n_bins * pdp.bin_size != pdp.power.size())
        throw std::invalid_argument("segment_bins: n_bins * bin_size must equal profile length");
    std::vector<Eigen::VectorXd> bins(pdp.n_bins);
    for (int b = 0; b < pdp.n_bins; ++b) bins[b] = pdp.power.segment(b * pdp.bin_size, pdp.bin_size);
    return bins;
}

}  // namespace prach
