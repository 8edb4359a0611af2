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

#include "prach/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "prach/rng.hpp"

namespace prach {

MetricsReport evaluate(const Eigen::VectorXi& predictions, const Eigen::VectorXi& truth) {
    if (predictions.size() != truth.size())
        throw std::invalid_argument("evaluate: prediction/truth lengths differ");
    if (predictions.size() == 0) throw std::invalid_argument("evaluate: empty inputs");

    MetricsReport m;
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
        const int p = predictions(i), t = truth(i);
        if (t == 1) {
            p == 1 ? ++m.tp : ++m.fn;
        } else {
            p == 1 ? ++m.fp : ++m.tn;
        }
    }
    if (m.tp + m.fp > 0) {
        m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    } else {
        m.precision = 1.0;
        m.degenerate_precision = true;
    }
    if (m.tp + m.fn > 0) {
        m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    } else {
        m.recall = 0.0;
        m.degenerate_recall = true;
    }
    if (m.tn + m.fp > 0) {
        m.specificity = static_cast<double>(m.tn) / static_cast<double>(m.tn + m.fp);
    } else {
        m.specificity = 0.0;
        m.degenerate_specificity = true;
    }
    m.balanced_accuracy = (m.recall + m.specificity) / 2.0;
    return m;
}

std::pair<std::vector<int>, std::vector<int>> split_indices(const Eigen::VectorXi& labels,
                                                            double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split_train_test: fraction must be in (0, 1)");

    std::vector<int> train_idx, test_idx;
    Rng rng(seed);
    for (int label = 0; label <= 1; ++label) {
        std::vector<int> members;
        for (int i = 0; i < labels.size(); ++i)
            if (labels(i) == label) members.push_back(i);
        if (members.empty()) continue;
        if (members.size() < 2)
            throw std::invalid_argument("split_train_test: class " + std::to_string(label) +
                                        " has fewer than 2 samples");
        // seeded Fisher-Yates
        for (int i = static_cast<int>(members.size()) - 1; i > 0; --i)
            std::swap(members[i], members[rng.uniform_int(i + 1)]);
        long n_train = std::lround(train_fraction * static_cast<double>(members.size()));
        n_train = std::max(1L, std::min(n_train, static_cast<long>(members.size()) - 1));
        for (std::size_t i = 0; i < members.size(); ++i)
            (static_cast<long>(i) < n_train ? train_idx : test_idx).push_back(members[i]);
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {train_idx, test_idx};
}

std::pair<FeatureMatrix, FeatureMatrix> split_train_test(const FeatureMatrix& data, double train_fraction,
                                                         std::uint64_t seed) {
    data.validate();
    auto [train_idx, test_idx] = split_indices(data.y, train_fraction, seed);

    auto take = [&](const std::vector<int>& idx) {
        FeatureMatrix out;
        out.X.resize(static_cast<Eigen::Index>(idx.size()), data.X.cols());
        out.y.resize(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            out.X.row(static_cast<Eigen::Index>(i)) = data.X.row(idx[i]);
            out.y(static_cast<Eigen::Index>(i)) = data.y(idx[i]);
        }
        return out;
    };
    return {take(train_idx), take(test_idx)};
}

}  // namespace prach
