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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "prach/dataset.hpp"
#include "prach/preprocess.hpp"

namespace prach {

enum class ModelKind { logreg, gnb, knn, dtree, rforest };

ModelKind model_kind_from_string(const std::string& name);
std::string to_string(ModelKind kind);

struct LogRegParams {
    Eigen::VectorXd weights;  // 24
    double bias = 0.0;
};

struct GnbParams {
    Eigen::Vector2d log_prior;
    Eigen::MatrixXd mean;  // 2 x 24
    Eigen::MatrixXd var;   // 2 x 24, floored
};

struct KnnParams {
    int k = 5;
    Eigen::MatrixXd train_X;  // standardized
    Eigen::VectorXi train_y;
};

/// Flat CART node. feature < 0 marks a leaf; children index into the same
/// node vector.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double p1 = 0.0;  // positive-class fraction at the node
};

struct DTreeParams {
    std::vector<TreeNode> nodes;
};

struct RForestParams {
    std::vector<std::vector<TreeNode>> trees;
    int features_per_split = 5;
};

struct BaselineModel {
    ModelKind kind = ModelKind::logreg;
    FeatureScaler scaler;
    std::optional<int> constant_label;  ///< set when trained on a single class
    std::variant<LogRegParams, GnbParams, KnnParams, DTreeParams, RForestParams> params;
};

struct BaselineHyper {
    // logistic regression: full-batch gradient descent
    double logreg_lr = 0.1;
    double logreg_l2 = 1e-4;
    int logreg_epochs = 200;
    // k nearest neighbors
    int knn_k = 5;
    // trees
    int tree_max_depth = 12;
    int tree_min_leaf = 20;
    int forest_trees = 100;
    int forest_features_per_split = 5;  // ceil(sqrt(24))
};

/// Fits the requested model on raw (unscaled) features. Preprocessing
/// statistics come from this training set only and are stored in the model.
/// Training on a single-class set degenerates to a constant classifier.
BaselineModel train_baseline(ModelKind kind, const FeatureMatrix& train, const BaselineHyper& hyper,
                             std::uint64_t seed, int jobs = 1);

struct Prediction {
    int label = 0;
    double score = 0.0;  ///< positive-class probability or vote fraction
};

/// Scores one raw feature vector; label = 1 iff score >= 0.5.
Prediction predict(const BaselineModel& model, const Eigen::VectorXd& features);

/// Batch labels for evaluation (same rule as predict, vectorized).
Eigen::VectorXi predict_labels(const BaselineModel& model, const Eigen::MatrixXd& features);

void save_baseline(const BaselineModel& model, const std::string& path);
BaselineModel load_baseline(const std::string& path);

}  // namespace prach
