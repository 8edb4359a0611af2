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
//
// Brute-force reference implementations used as independent oracles. These
// deliberately avoid the library's FFT/search shortcuts: correlations are
// direct O(N^2) sums, nearest neighbors are exhaustive scans.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <utility>
#include <vector>

#include "prach/dataset.hpp"
#include "prach/receiver.hpp"
#include "prach/rng.hpp"

namespace oracles {

/// Periodic cross-correlation sum_m a[m] * conj(b[(m+lag) mod N]).
inline std::complex<double> periodic_xcorr(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, int lag) {
    const int n = static_cast<int>(a.size());
    std::complex<double> acc{0.0, 0.0};
    for (int m = 0; m < n; ++m) acc += a(m) * std::conj(b((m + lag) % n));
    return acc;
}

/// Normalized time-domain cyclic cross-correlation power profile:
/// |(1/sqrt(N)) sum_m w(m) conj(s((m-n) mod N))|^2 for each lag n.
inline Eigen::VectorXd brute_pdp(const Eigen::VectorXcd& window, const Eigen::VectorXcd& replica) {
    const int n = static_cast<int>(window.size());
    Eigen::VectorXd out(n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int lag = 0; lag < n; ++lag) {
        std::complex<double> acc{0.0, 0.0};
        for (int m = 0; m < n; ++m) acc += window(m) * std::conj(replica(((m - lag) % n + n) % n));
        out(lag) = std::norm(acc * norm);
    }
    return out;
}

/// Reference greedy peak picker: strictly-above-threshold samples taken in
/// descending power (ties to the lower index); a candidate within
/// min_distance of an accepted peak is discarded.
inline std::vector<int> greedy_peaks(const Eigen::VectorXd& power, double threshold, int min_distance) {
    std::vector<int> order;
    for (int i = 0; i < power.size(); ++i)
        if (power(i) > threshold) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return power(a) > power(b); });
    std::vector<int> accepted;
    for (int idx : order) {
        bool ok = true;
        for (int a : accepted)
            if (std::abs(idx - a) < min_distance) ok = false;
        if (ok) accepted.push_back(idx);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

/// Reference SMOTE + Tomek pipeline following the documented draw protocol,
/// written with plain exhaustive scans.
inline prach::FeatureMatrix brute_smote_tomek(const prach::FeatureMatrix& input, int k, std::uint64_t seed) {
    using prach::FeatureMatrix;
    const int n = static_cast<int>(input.rows());

    // canonical order
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        for (int j = 0; j < input.X.cols(); ++j)
            if (input.X(a, j) != input.X(b, j)) return input.X(a, j) < input.X(b, j);
        return input.y(a) < input.y(b);
    });
    FeatureMatrix data;
    data.X.resize(n, input.X.cols());
    data.y.resize(n);
    for (int i = 0; i < n; ++i) {
        data.X.row(i) = input.X.row(order[i]);
        data.y(i) = input.y(order[i]);
    }

    auto dist2 = [&](const Eigen::MatrixXd& X, int a, int b) {
        double d = 0.0;
        for (int j = 0; j < X.cols(); ++j) {
            const double diff = X(a, j) - X(b, j);
            d += diff * diff;
        }
        return d;
    };

    int count1 = 0;
    for (int i = 0; i < n; ++i) count1 += data.y(i);
    const int count0 = n - count1;
    const int minority_label = count1 < count0 ? 1 : 0;
    const int n_syn = std::abs(count0 - count1);

    std::vector<int> minority;
    for (int i = 0; i < n; ++i)
        if (data.y(i) == minority_label) minority.push_back(i);

    Eigen::MatrixXd X = data.X;
    Eigen::VectorXi y = data.y;
    if (n_syn > 0) {
        const int m = static_cast<int>(minority.size());
        const int k_eff = std::min(k, m - 1);
        X.conservativeResize(n + n_syn, Eigen::NoChange);
        y.conservativeResize(n + n_syn);
        prach::Rng rng(seed);
        for (int s = 0; s < n_syn; ++s) {
            const int base_pos = rng.uniform_int(m);
            const int nb_pos = rng.uniform_int(k_eff);
            const double t = rng.uniform();
            // exhaustive neighbor ranking for the base point
            std::vector<std::pair<double, int>> dist;
            for (int j = 0; j < m; ++j) {
                if (j == base_pos) continue;
                dist.emplace_back(dist2(data.X, minority[base_pos], minority[j]), minority[j]);
            }
            std::sort(dist.begin(), dist.end());
            const int other = dist[nb_pos].second;
            for (int j = 0; j < data.X.cols(); ++j)
                X(n + s, j) = data.X(minority[base_pos], j) + t * (data.X(other, j) - data.X(minority[base_pos], j));
            y(n + s) = minority_label;
        }
    }

    // Tomek cleaning: drop majority members of mutual-1NN opposite pairs
    std::vector<char> drop(X.rows(), 0);
    if (count0 != count1) {
        const int majority_label = count1 > count0 ? 1 : 0;
        const int total = static_cast<int>(X.rows());
        std::vector<int> nn(total, -1);
        for (int i = 0; i < total; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < total; ++j) {
                if (j == i) continue;
                const double d = dist2(X, i, j);
                if (d < best) {
                    best = d;
                    nn[i] = j;
                }
            }
        }
        for (int i = 0; i < total; ++i) {
            const int j = nn[i];
            if (j > i && nn[j] == i && y(i) != y(j)) {
                if (y(i) == majority_label) drop[i] = 1;
                if (y(j) == majority_label) drop[j] = 1;
            }
        }
    }

    FeatureMatrix out;
    const int kept = static_cast<int>(X.rows()) - static_cast<int>(std::count(drop.begin(), drop.end(), 1));
    out.X.resize(kept, X.cols());
    out.y.resize(kept);
    int w = 0;
    for (int i = 0; i < X.rows(); ++i) {
        if (drop[i]) continue;
        out.X.row(w) = X.row(i);
        out.y(w) = y(i);
        ++w;
    }
    return out;
}

}  // namespace oracles
