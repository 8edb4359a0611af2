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

#include "prach/mlp.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "prach/metrics.hpp"
#include "prach/rng.hpp"

namespace prach {

namespace {

using json = nlohmann::ordered_json;

struct ForwardCache {
    std::vector<Eigen::MatrixXd> pre;   // pre-activation per layer
    std::vector<Eigen::MatrixXd> post;  // post-activation (post[0] = input)
};

ForwardCache forward_cached(const MlpModel& m, const Eigen::MatrixXd& X) {
    ForwardCache c;
    c.post.push_back(X);
    for (int l = 0; l < m.num_layers(); ++l) {
        Eigen::MatrixXd z = (c.post.back() * m.weights[l].transpose()).rowwise() + m.biases[l].transpose();
        c.pre.push_back(z);
        if (l + 1 < m.num_layers()) z = z.cwiseMax(0.0);
        c.post.push_back(std::move(z));
    }
    return c;
}

// numerically stable BCE from logits
double bce_from_logits(const Eigen::VectorXd& z, const Eigen::VectorXi& y) {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double zi = z(i);
        loss += std::max(zi, 0.0) - zi * y(i) + std::log1p(std::exp(-std::abs(zi)));
    }
    return loss / static_cast<double>(z.size());
}

MlpGradients backward(const MlpModel& m, const ForwardCache& c, const Eigen::VectorXi& y) {
    const Eigen::Index n = c.post.front().rows();
    const int layers = m.num_layers();
    MlpGradients g;
    g.dW.resize(layers);
    g.db.resize(layers);

    // output delta: (sigmoid(z) - y) / n
    Eigen::MatrixXd delta = c.pre.back();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double z = delta(i, 0);
        const double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        delta(i, 0) = (p - y(i)) / static_cast<double>(n);
    }

    for (int l = layers - 1; l >= 0; --l) {
        g.dW[l] = delta.transpose() * c.post[l];
        g.db[l] = delta.colwise().sum().transpose();
        if (l > 0) {
            Eigen::MatrixXd next = delta * m.weights[l];
            // rectifier gate
            next = (c.pre[l - 1].array() > 0.0).select(next, 0.0);
            delta = std::move(next);
        }
    }
    return g;
}

}  // namespace

double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& scaled_X, const Eigen::VectorXi& y) {
    const ForwardCache c = forward_cached(model, scaled_X);
    return bce_from_logits(c.pre.back().col(0), y);
}

MlpGradients mlp_gradients(const MlpModel& model, const Eigen::MatrixXd& scaled_X, const Eigen::VectorXi& y) {
    return backward(model, forward_cached(model, scaled_X), y);
}

MlpTrainResult train_mlp(const FeatureMatrix& train, const MlpTrainConfig& cfg) {
    train.validate();
    if (train.rows() == 0) throw std::invalid_argument("train_mlp: empty training set");
    if (cfg.dims.size() < 2 || cfg.dims.front() != kNumFeatures || cfg.dims.back() != 1)
        throw std::invalid_argument("train_mlp: layer dims must run from 24 inputs to 1 output");
    if (cfg.batch_size < 1 || cfg.epochs < 1) throw std::invalid_argument("train_mlp: bad epochs/batch");
    if (cfg.val_fraction < 0.0 || cfg.val_fraction >= 1.0)
        throw std::invalid_argument("train_mlp: val_fraction must be in [0, 1)");

    MlpTrainResult result;
    MlpModel& model = result.model;
    model.dims = cfg.dims;
    model.scaler = FeatureScaler::fit(train.X);

    // validation split for epoch selection (needs both classes twice over)
    const int positives = train.y.sum();
    const bool can_split = cfg.val_fraction > 0.0 && positives >= 2 &&
                           (train.rows() - positives) >= 2;
    FeatureMatrix fit_part = train;
    FeatureMatrix val_part;
    if (can_split) {
        auto parts = split_train_test(train, 1.0 - cfg.val_fraction, derive_seed(cfg.seed, 0x7A1));
        fit_part = std::move(parts.first);
        val_part = std::move(parts.second);
    }

    const Eigen::MatrixXd X = model.scaler.apply(fit_part.X);
    const Eigen::VectorXi& y = fit_part.y;
    const Eigen::Index n = X.rows();

    // init: uniform scaled by fan-in
    Rng rng(derive_seed(cfg.seed, 0x171));
    const int layers = static_cast<int>(cfg.dims.size()) - 1;
    model.weights.resize(layers);
    model.biases.resize(layers);
    for (int l = 0; l < layers; ++l) {
        const int rows = cfg.dims[l + 1], cols = cfg.dims[l];
        const double a = std::sqrt(1.0 / cols);
        model.weights[l].resize(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int cidx = 0; cidx < cols; ++cidx) model.weights[l](r, cidx) = a * (2.0 * rng.uniform() - 1.0);
        model.biases[l] = Eigen::VectorXd::Zero(rows);
    }

    // adaptive moment state
    std::vector<Eigen::MatrixXd> mW(layers), vW(layers);
    std::vector<Eigen::VectorXd> mb(layers), vb(layers);
    for (int l = 0; l < layers; ++l) {
        mW[l] = Eigen::MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols());
        vW[l] = mW[l];
        mb[l] = Eigen::VectorXd::Zero(model.biases[l].size());
        vb[l] = mb[l];
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    std::vector<Eigen::MatrixXd> best_W;
    std::vector<Eigen::VectorXd> best_b;
    double best_ba = -1.0;
    long step = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (int i = static_cast<int>(n) - 1; i > 0; --i)
            std::swap(order[i], order[rng.uniform_int(i + 1)]);

        double epoch_loss = 0.0;
        int batches = 0;
        for (Eigen::Index start = 0; start < n; start += cfg.batch_size) {
            const Eigen::Index b = std::min<Eigen::Index>(cfg.batch_size, n - start);
            Eigen::MatrixXd Xb(b, X.cols());
            Eigen::VectorXi yb(b);
            for (Eigen::Index i = 0; i < b; ++i) {
                Xb.row(i) = X.row(order[start + i]);
                yb(i) = y(order[start + i]);
            }
            if (cfg.input_noise > 0.0)
                for (Eigen::Index i = 0; i < b; ++i)
                    for (Eigen::Index j = 0; j < Xb.cols(); ++j)
                        Xb(i, j) += cfg.input_noise * rng.gaussian();
            const ForwardCache cache = forward_cached(model, Xb);
            const double loss = bce_from_logits(cache.pre.back().col(0), yb);
            if (!std::isfinite(loss))
                throw std::runtime_error("train_mlp: training diverged at epoch " + std::to_string(epoch));
            epoch_loss += loss;
            ++batches;

            const MlpGradients g = backward(model, cache, yb);
            ++step;
            const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
            for (int l = 0; l < layers; ++l) {
                mW[l] = cfg.adam_beta1 * mW[l] + (1.0 - cfg.adam_beta1) * g.dW[l];
                vW[l] = cfg.adam_beta2 * vW[l] + (1.0 - cfg.adam_beta2) * g.dW[l].cwiseAbs2();
                // decoupled weight decay: shrink outside the moment estimates
                if (cfg.weight_decay > 0.0)
                    model.weights[l] *= 1.0 - cfg.learning_rate * cfg.weight_decay;
                model.weights[l].array() -=
                    cfg.learning_rate * (mW[l].array() / bc1) / ((vW[l].array() / bc2).sqrt() + cfg.adam_eps);
                mb[l] = cfg.adam_beta1 * mb[l] + (1.0 - cfg.adam_beta1) * g.db[l];
                vb[l] = cfg.adam_beta2 * vb[l] + (1.0 - cfg.adam_beta2) * g.db[l].cwiseAbs2();
                model.biases[l].array() -=
                    cfg.learning_rate * (mb[l].array() / bc1) / ((vb[l].array() / bc2).sqrt() + cfg.adam_eps);
            }
        }
        result.epoch_loss.push_back(epoch_loss / std::max(batches, 1));

        if (can_split) {
            const Eigen::VectorXi pred = model.predict_labels(val_part.X);
            const double ba = evaluate(pred, val_part.y).balanced_accuracy;
            result.val_ba.push_back(ba);
            if (ba > best_ba) {
                best_ba = ba;
                best_W = model.weights;
                best_b = model.biases;
                result.best_epoch = epoch;
            }
        }
    }

    if (can_split && !best_W.empty()) {
        model.weights = std::move(best_W);
        model.biases = std::move(best_b);
    } else {
        result.best_epoch = cfg.epochs - 1;
    }
    return result;
}

void save_mlp(const MlpModel& model, const std::string& path) {
    if (!model.fitted()) throw std::invalid_argument("save_mlp: model is not fitted");
    json j;
    j["format"] = "prachlab-mlp";
    j["version"] = 1;
    j["dims"] = model.dims;
    j["scaler"] = {{"mean", std::vector<double>(model.scaler.mean.data(),
                                                model.scaler.mean.data() + model.scaler.mean.size())},
                   {"scale", std::vector<double>(model.scaler.scale.data(),
                                                 model.scaler.scale.data() + model.scaler.scale.size())}};
    json layers = json::array();
    for (int l = 0; l < model.num_layers(); ++l) {
        json wl = json::array();
        for (Eigen::Index r = 0; r < model.weights[l].rows(); ++r)
            for (Eigen::Index c = 0; c < model.weights[l].cols(); ++c)
                wl.push_back(static_cast<double>(static_cast<float>(model.weights[l](r, c))));
        json bl = json::array();
        for (Eigen::Index r = 0; r < model.biases[l].size(); ++r)
            bl.push_back(static_cast<double>(static_cast<float>(model.biases[l](r))));
        layers.push_back({{"weights", std::move(wl)}, {"bias", std::move(bl)}});
    }
    j["layers"] = std::move(layers);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(1) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

MlpModel load_mlp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (j.value("format", "") != "prachlab-mlp") throw SchemaError(path + ": not an mlp model file");

    MlpModel m;
    m.dims = j.at("dims").get<std::vector<int>>();
    const auto mean = j.at("scaler").at("mean").get<std::vector<double>>();
    const auto scale = j.at("scaler").at("scale").get<std::vector<double>>();
    m.scaler.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    m.scaler.scale = Eigen::Map<const Eigen::VectorXd>(scale.data(), static_cast<Eigen::Index>(scale.size()));

    const auto& layers = j.at("layers");
    if (layers.size() + 1 != m.dims.size()) throw SchemaError(path + ": layer count does not match dims");
    m.weights.resize(layers.size());
    m.biases.resize(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const int rows = m.dims[l + 1], cols = m.dims[l];
        const auto w = layers[l].at("weights").get<std::vector<double>>();
        const auto b = layers[l].at("bias").get<std::vector<double>>();
        if (static_cast<int>(w.size()) != rows * cols || static_cast<int>(b.size()) != rows)
            throw SchemaError(path + ": layer " + std::to_string(l) + " has wrong parameter counts");
        m.weights[l].resize(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m.weights[l](r, c) = w[static_cast<std::size_t>(r) * cols + c];
        m.biases[l] = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);
    }
    return m;
}

}  // namespace prach
