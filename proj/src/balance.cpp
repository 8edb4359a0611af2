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

#include "prach/balance.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "prach/rng.hpp"

namespace prach {

namespace {

double sq_dist(const Eigen::MatrixXd& X, int a, int b) {
    double d = 0.0;
    for (int j = 0; j < X.cols(); ++j) {
        const double diff = X(a, j) - X(b, j);
        d += diff * diff;
    }
    return d;
}

}  // namespace

BalanceResult smote_oversample(const FeatureMatrix& data, int k, std::uint64_t seed) {
    data.validate();
    if (k < 1) throw std::invalid_argument("smote_oversample: k must be >= 1");

    const int n = static_cast<int>(data.rows());
    int count1 = 0;
    for (int i = 0; i < n; ++i) count1 += data.y(i);
    const int count0 = n - count1;

    BalanceResult result;
    result.data = data;
    result.source_row.resize(n);
    std::iota(result.source_row.begin(), result.source_row.end(), 0);
    if (count0 == count1) return result;

    const int minority_label = count1 < count0 ? 1 : 0;
    const int minority_count = std::min(count0, count1);
    const int n_synthetic = std::abs(count0 - count1);
    if (minority_count < 2)
        throw std::invalid_argument("smote_oversample: minority class needs at least 2 samples");

    std::vector<int> minority;
    minority.reserve(minority_count);
    for (int i = 0; i < n; ++i)
        if (data.y(i) == minority_label) minority.push_back(i);

    const int k_eff = std::min(k, minority_count - 1);

    // k nearest minority neighbors per minority row, ties toward lower index
    std::vector<std::vector<int>> neighbors(minority.size());
    std::vector<std::pair<double, int>> dist;
    for (std::size_t i = 0; i < minority.size(); ++i) {
        dist.clear();
        for (std::size_t j = 0; j < minority.size(); ++j) {
            if (j == i) continue;
            dist.emplace_back(sq_dist(data.X, minority[i], minority[j]), minority[j]);
        }
        std::partial_sort(dist.begin(), dist.begin() + k_eff, dist.end());
        neighbors[i].reserve(k_eff);
        for (int q = 0; q < k_eff; ++q) neighbors[i].push_back(dist[q].second);
    }

    result.data.X.conservativeResize(n + n_synthetic, Eigen::NoChange);
    result.data.y.conservativeResize(n + n_synthetic);
    result.source_row.reserve(n + n_synthetic);

    Rng rng(seed);
    for (int s = 0; s < n_synthetic; ++s) {
        const int base_pos = rng.uniform_int(minority_count);
        const int nb = rng.uniform_int(k_eff);
        const double t = rng.uniform();
        const int base = minority[base_pos];
        const int other = neighbors[base_pos][nb];
        for (int j = 0; j < kNumFeatures; ++j)
            result.data.X(n + s, j) = data.X(base, j) + t * (data.X(other, j) - data.X(base, j));
        result.data.y(n + s) = minority_label;
        result.source_row.push_back(base);
    }
    return result;
}

std::vector<std::pair<int, int>> find_tomek_links(const FeatureMatrix& data) {
    data.validate();
    const int n = static_cast<int>(data.rows());
    if (n < 2) return {};

    std::vector<int> nn(n, -1);
    for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_j = -1;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = sq_dist(data.X, i, j);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        nn[i] = best_j;
    }

    std::vector<std::pair<int, int>> links;
    for (int i = 0; i < n; ++i) {
        const int j = nn[i];
        if (j > i && nn[j] == i && data.y(i) != data.y(j)) links.emplace_back(i, j);
    }
    return links;
}

BalanceResult smote_tomek(const FeatureMatrix& data, int k, std::uint64_t seed) {
    data.validate();
    const int n = static_cast<int>(data.rows());

    // canonical order: feature tuple, then label
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        for (int j = 0; j < kNumFeatures; ++j) {
            if (data.X(a, j) != data.X(b, j)) return data.X(a, j) < data.X(b, j);
        }
        return data.y(a) < data.y(b);
    });

    FeatureMatrix sorted;
    sorted.X.resize(n, kNumFeatures);
    sorted.y.resize(n);
    for (int i = 0; i < n; ++i) {
        sorted.X.row(i) = data.X.row(order[i]);
        sorted.y(i) = data.y(order[i]);
    }

    int count1 = 0;
    for (int i = 0; i < n; ++i) count1 += sorted.y(i);
    const int count0 = n - count1;

    BalanceResult augmented = smote_oversample(sorted, k, seed);
    // translate provenance back to the caller's row numbering
    for (auto& src : augmented.source_row) src = order[src];

    if (count0 == count1) return augmented;
    const int majority_label = count1 > count0 ? 1 : 0;

    const auto links = find_tomek_links(augmented.data);
    std::vector<char> drop(augmented.data.rows(), 0);
    for (const auto& [a, b] : links) {
        if (augmented.data.y(a) == majority_label) drop[a] = 1;
        if (augmented.data.y(b) == majority_label) drop[b] = 1;
    }

    BalanceResult cleaned;
    const int kept = static_cast<int>(augmented.data.rows()) - static_cast<int>(std::count(drop.begin(), drop.end(), 1));
    cleaned.data.X.resize(kept, kNumFeatures);
    cleaned.data.y.resize(kept);
    cleaned.source_row.reserve(kept);
    int w = 0;
    for (int i = 0; i < augmented.data.rows(); ++i) {
        if (drop[i]) continue;
        cleaned.data.X.row(w) = augmented.data.X.row(i);
        cleaned.data.y(w) = augmented.data.y(i);
        cleaned.source_row.push_back(augmented.source_row[i]);
        ++w;
    }
    return cleaned;
}

}  // namespace prach
