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
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "prach/dataset.hpp"
#include "prach/preprocess.hpp"

namespace prach {

/// Feedforward collision detector: rectifier hidden layers, logistic output.
/// Parameters are templated on the scalar so the same network runs as the
/// float32 deployment artifact or as the float64 reference/training path.
template <typename Scalar>
struct MlpT {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    std::vector<int> dims = {24, 64, 32, 1};
    std::vector<Matrix> weights;  ///< weights[l] is dims[l+1] x dims[l]
    std::vector<Vector> biases;
    FeatureScaler scaler;         ///< fitted on the training set

    int num_layers() const { return static_cast<int>(weights.size()); }

    bool fitted() const { return !weights.empty() && scaler.mean.size() == dims.front(); }

    /// Logit for one already-scaled feature vector.
    Scalar logit_scaled(const Vector& x) const {
        Vector h = x;
        for (int l = 0; l < num_layers(); ++l) {
            Vector z = weights[l] * h + biases[l];
            if (l + 1 < num_layers()) z = z.cwiseMax(Scalar(0));
            h = std::move(z);
        }
        return h(0);
    }

    /// Probability for one raw 24-value power row.
    double forward(const Eigen::VectorXd& raw) const {
        if (!fitted()) throw std::invalid_argument("MlpT::forward: model is not fitted");
        const Eigen::VectorXd scaled = scaler.apply_row(raw);
        const Scalar z = logit_scaled(scaled.template cast<Scalar>());
        const double zd = static_cast<double>(z);
        return zd >= 0.0 ? 1.0 / (1.0 + std::exp(-zd)) : std::exp(zd) / (1.0 + std::exp(zd));
    }

    /// Probabilities for a raw feature matrix (n x 24).
    Eigen::VectorXd forward_batch(const Eigen::MatrixXd& raw) const {
        if (!fitted()) throw std::invalid_argument("MlpT::forward_batch: model is not fitted");
        Matrix h = scaler.apply(raw).template cast<Scalar>();
        for (int l = 0; l < num_layers(); ++l) {
            Matrix z = (h * weights[l].transpose()).rowwise() + biases[l].transpose();
            if (l + 1 < num_layers()) z = z.cwiseMax(Scalar(0));
            h = std::move(z);
        }
        Eigen::VectorXd p(h.rows());
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            const double z = static_cast<double>(h(i, 0));
            p(i) = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        }
        return p;
    }

    Eigen::VectorXi predict_labels(const Eigen::MatrixXd& raw) const {
        const Eigen::VectorXd p = forward_batch(raw);
        Eigen::VectorXi labels(p.size());
        for (Eigen::Index i = 0; i < p.size(); ++i) labels(i) = p(i) >= 0.5 ? 1 : 0;
        return labels;
    }
};

using MlpModel = MlpT<double>;

struct MlpTrainConfig {
    std::vector<int> dims = {24, 64, 32, 1};
    int epochs = 50;
    int batch_size = 256;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double weight_decay = 0.0;  ///< decoupled L2 shrink on weights (not biases)
    double input_noise = 0.0;   ///< train-time gaussian jitter on standardized features
    double val_fraction = 0.1;
    std::uint64_t seed = 1;
};

struct MlpTrainResult {
    MlpModel model;
    std::vector<double> epoch_loss;  ///< mean training BCE per epoch
    std::vector<double> val_ba;      ///< validation balanced accuracy per epoch
    int best_epoch = -1;             ///< epoch whose parameters were kept
};

/// Mini-batch binary cross-entropy training with per-parameter adaptive
/// moments. The returned model carries the parameters of the epoch with the
/// best validation balanced accuracy (ties keep the earlier epoch); without
/// a usable validation split the final epoch wins. Deterministic per seed.
/// Throws when the loss stops being finite, naming the epoch.
MlpTrainResult train_mlp(const FeatureMatrix& train, const MlpTrainConfig& cfg);

/// Mean BCE loss over an already-scaled batch.
double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& scaled_X, const Eigen::VectorXi& y);

struct MlpGradients {
    std::vector<Eigen::MatrixXd> dW;
    std::vector<Eigen::VectorXd> db;
};

/// Analytic gradients of mlp_loss at the model's current parameters.
MlpGradients mlp_gradients(const MlpModel& model, const Eigen::MatrixXd& scaled_X, const Eigen::VectorXi& y);

/// Model file: layer dims, float32 parameters, preprocessing statistics and
/// a format-version field. Parameters are narrowed to float32 on save, so a
/// save/load/save cycle is byte-stable.
void save_mlp(const MlpModel& model, const std::string& path);
MlpModel load_mlp(const std::string& path);

}  // namespace prach
