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
#include <vector>

#include "prach/waveform.hpp"

namespace prach {

/// Non-negative correlator output on the receiver grid, pdp_len samples
/// divided into n_bins bins of bin_size samples each (64 x 24 by default).
struct PowerDelayProfile {
    Eigen::VectorXd power;
    int n_bins = 64;
    int bin_size = 24;
};

struct DetectedPeak {
    int global_index = 0;   ///< position in [0, pdp_len)
    int bin_index = 0;      ///< global_index / bin_size
    int offset_in_bin = 0;  ///< global_index % bin_size
    double power = 0.0;
};

struct ThresholdEstimate {
    double noise_floor = 0.0;  ///< per-sample noise power estimate
    double threshold = 0.0;
    bool degenerate = false;   ///< set when the profile is identically zero
};

/// Frequency-domain correlation receiver. Per antenna: strip the cyclic
/// prefix, DFT the pdp_len window, de-map the n_zc occupied bins, multiply by
/// the conjugate root spectrum, zero-pad back to pdp_len and inverse-DFT.
/// Squared magnitudes are summed across antennas (non-coherent combining).
///
/// `root_spectrum` is the unitary n_zc-point DFT of the root sequence.
PowerDelayProfile compute_pdp(const std::vector<Eigen::VectorXcd>& received,
                              const Eigen::VectorXcd& root_spectrum, const PrachConfig& cfg);

/// Convenience overload taking the time-domain root sequence.
PowerDelayProfile compute_pdp_from_root(const std::vector<Eigen::VectorXcd>& received,
                                        const Eigen::VectorXcd& root, const PrachConfig& cfg);

/// Noise floor from the median of the profile (median of an exponential is
/// sigma^2 ln 2) and a constant-false-alarm threshold sigma^2 * (-ln pfa).
ThresholdEstimate estimate_threshold(const PowerDelayProfile& pdp, double pfa);

/// Greedy peak picking in descending power order over samples strictly above
/// the threshold; a candidate closer than min_distance samples to an accepted
/// peak is suppressed. Ties break toward the lower index. Result is sorted by
/// global index.
std::vector<DetectedPeak> detect_peaks(const PowerDelayProfile& pdp, double threshold, int min_distance);

/// Splits the profile into n_bins contiguous bins; concatenating the bins
/// reproduces the profile exactly.
std::vector<Eigen::VectorXd> segment_bins(const PowerDelayProfile& pdp);

}  // namespace prach
