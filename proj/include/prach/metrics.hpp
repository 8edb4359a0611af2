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
#include <cstdint>
#include <utility>

#include "prach/dataset.hpp"

namespace prach {

/// Confusion counts and derived scores with collision (label 1) as the
/// positive class. Degenerate denominators are flagged rather than producing
/// NaN: precision defaults to 1 when nothing was predicted positive, recall
/// and specificity default to 0 when the corresponding class is absent
/// (which makes balanced accuracy degrade to 0.5 on single-class data).
struct MetricsReport {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double specificity = 0.0;
    double balanced_accuracy = 0.0;
    bool degenerate_precision = false;
    bool degenerate_recall = false;
    bool degenerate_specificity = false;

    long total() const { return tp + fp + tn + fn; }
};

MetricsReport evaluate(const Eigen::VectorXi& predictions, const Eigen::VectorXi& truth);

/// Stratified split into train/test: per class, a seeded shuffle assigns
/// round(fraction * count) rows to train (clamped so both sides keep at
/// least one row per class). Union of the parts is the input as a multiset.
std::pair<FeatureMatrix, FeatureMatrix> split_train_test(const FeatureMatrix& data, double train_fraction,
                                                         std::uint64_t seed);

/// Row indices of the same split, for callers that carry metadata.
std::pair<std::vector<int>, std::vector<int>> split_indices(const Eigen::VectorXi& labels,
                                                            double train_fraction, std::uint64_t seed);

}  // namespace prach
