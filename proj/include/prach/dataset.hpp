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
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace prach {

constexpr int kNumFeatures = 24;

/// IO failures carry a distinct type so the CLI can map them to exit codes.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One labeled delay-profile bin: 3 metadata columns, 24 power features and
/// a binary collision label -- 28 columns in the CSV schema.
struct DatasetRow {
    long event_id = 0;
    long slot_id = 0;
    int bin_index = 0;
    std::array<double, kNumFeatures> features{};
    int label = 0;
};

using Dataset = std::vector<DatasetRow>;

/// ML view of a dataset: metadata dropped, features as an n x 24 matrix.
struct FeatureMatrix {
    Eigen::MatrixXd X;   ///< n x 24
    Eigen::VectorXi y;   ///< labels in {0, 1}

    Eigen::Index rows() const { return X.rows(); }
    void validate() const;
};

FeatureMatrix to_features(const Dataset& rows);

/// CSV persistence. Header is fixed to
///   event_id,slot_id,bin_index,p00..p23,label
/// and powers are printed with round-trip precision, so write/read loses
/// nothing and identical datasets produce identical bytes.
void write_dataset(const Dataset& rows, const std::string& path);
Dataset read_dataset(const std::string& path);

std::string dataset_header();

}  // namespace prach
