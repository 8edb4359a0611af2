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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "prach/metrics.hpp"
#include "prach/mlp.hpp"
#include "prach/rng.hpp"

using namespace prach;

namespace {

FeatureMatrix xor_set(int n, std::uint64_t seed) {
    // XOR of two binary factors mapped into the first two power features,
    // remaining features held at a constant power
    FeatureMatrix fm;
    fm.X = Eigen::MatrixXd::Constant(n, kNumFeatures, 0.1);
    fm.y.resize(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        const int a = rng.uniform_int(2), b = rng.uniform_int(2);
        fm.X(i, 0) = a ? 10.0 : 0.01;
        fm.X(i, 1) = b ? 10.0 : 0.01;
        fm.X(i, 0) *= 1.0 + 0.01 * rng.gaussian();
        fm.X(i, 1) *= 1.0 + 0.01 * rng.gaussian();
        fm.y(i) = a ^ b;
    }
    return fm;
}

MlpModel tiny_model(std::uint64_t seed) {
    FeatureMatrix data = xor_set(256, seed);
    MlpTrainConfig cfg;
    cfg.epochs = 5;
    cfg.seed = seed;
    return train_mlp(data, cfg).model;
}

std::string file_bytes(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("analytic gradients match central finite differences") {
    // random-init network; the probe step is kept small so rectifier kink
    // crossings stay out of the finite-difference window, and the relative
    // denominator is floored at 1e-5 so central-difference roundoff on
    // near-zero gradients cannot register as a mismatch
    MlpModel model;
    model.dims = {24, 64, 32, 1};
    model.scaler.mean = Eigen::VectorXd::Zero(24);
    model.scaler.scale = Eigen::VectorXd::Ones(24);
    Rng init(41);
    for (std::size_t l = 0; l + 1 < model.dims.size(); ++l) {
        const int rows = model.dims[l + 1], cols = model.dims[l];
        Eigen::MatrixXd w(rows, cols);
        Eigen::VectorXd b(rows);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) w(r, c) = 0.5 * init.gaussian() / std::sqrt(cols);
            b(r) = 0.1 * init.gaussian();
        }
        model.weights.push_back(w);
        model.biases.push_back(b);
    }

    FeatureMatrix batch = xor_set(10, 17);
    const Eigen::MatrixXd X = model.scaler.apply(batch.X);
    const MlpGradients grads = mlp_gradients(model, X, batch.y);

    double worst = 0.0;
    auto probe = [&](double& theta, double analytic) {
        const double h = 1e-6 * (1.0 + std::abs(theta));
        const double keep = theta;
        theta = keep + h;
        const double up = mlp_loss(model, X, batch.y);
        theta = keep - h;
        const double down = mlp_loss(model, X, batch.y);
        theta = keep;
        const double numeric = (up - down) / (2.0 * h);
        const double rel = std::abs(analytic - numeric) /
                           std::max({std::abs(analytic), std::abs(numeric), 1e-5});
        worst = std::max(worst, rel);
    };
    for (int l = 0; l < model.num_layers(); ++l) {
        for (Eigen::Index r = 0; r < model.weights[l].rows(); ++r)
            for (Eigen::Index c = 0; c < model.weights[l].cols(); ++c)
                probe(model.weights[l](r, c), grads.dW[l](r, c));
        for (Eigen::Index r = 0; r < model.biases[l].size(); ++r)
            probe(model.biases[l](r), grads.db[l](r));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("training solves the padded XOR within 500 epochs") {
    FeatureMatrix data = xor_set(512, 5);
    MlpTrainConfig cfg;
    cfg.epochs = 500;
    cfg.batch_size = 64;
    cfg.val_fraction = 0.0;
    cfg.seed = 2;
    const MlpTrainResult r = train_mlp(data, cfg);
    const Eigen::VectorXi pred = r.model.predict_labels(data.X);
    double correct = 0;
    for (int i = 0; i < data.rows(); ++i) correct += pred(i) == data.y(i);
    CHECK(correct / data.rows() >= 0.99);
    CHECK(r.epoch_loss.back() < r.epoch_loss.front());
}

TEST_CASE("forward pass contracts") {
    SUBCASE("zero parameters produce probability one half") {
        MlpModel m;
        m.dims = {24, 64, 32, 1};
        m.scaler.mean = Eigen::VectorXd::Zero(24);
        m.scaler.scale = Eigen::VectorXd::Ones(24);
        for (std::size_t l = 0; l + 1 < m.dims.size(); ++l) {
            m.weights.push_back(Eigen::MatrixXd::Zero(m.dims[l + 1], m.dims[l]));
            m.biases.push_back(Eigen::VectorXd::Zero(m.dims[l + 1]));
        }
        CHECK(m.forward(Eigen::VectorXd::Constant(24, 3.0)) == 0.5);
    }
    SUBCASE("positive weight makes the output monotone in its feature") {
        MlpModel m;
        m.dims = {24, 1};
        m.scaler.mean = Eigen::VectorXd::Zero(24);
        m.scaler.scale = Eigen::VectorXd::Ones(24);
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(1, 24);
        w(0, 3) = 2.0;
        m.weights.push_back(w);
        m.biases.push_back(Eigen::VectorXd::Zero(1));
        double prev = -1.0;
        for (double v : {0.01, 0.1, 1.0, 10.0}) {
            Eigen::VectorXd x = Eigen::VectorXd::Constant(24, 1.0);
            x(3) = v;
            const double p = m.forward(x);
            CHECK(p > prev);
            prev = p;
        }
    }
    SUBCASE("single-row and batched inference agree") {
        const MlpModel m = tiny_model(11);
        FeatureMatrix data = xor_set(64, 23);
        const Eigen::VectorXd batch = m.forward_batch(data.X);
        for (int i = 0; i < 64; ++i)
            CHECK(std::abs(batch(i) - m.forward(data.X.row(i).transpose())) <= 1e-12);
    }
    SUBCASE("unfitted model throws") {
        MlpModel empty;
        CHECK_THROWS_AS(empty.forward(Eigen::VectorXd::Zero(24)), std::invalid_argument);
    }
}

TEST_CASE("divergence is reported with the epoch") {
    FeatureMatrix data = xor_set(128, 7);
    MlpTrainConfig cfg;
    cfg.epochs = 30;
    cfg.learning_rate = 1e300;  // push parameters past the float range
    cfg.val_fraction = 0.0;
    cfg.seed = 1;
    try {
        train_mlp(data, cfg);
        FAIL("expected divergence");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    }
}

TEST_CASE("constant-label data saturates toward the label") {
    FeatureMatrix data = xor_set(128, 9);
    data.y.setConstant(1);
    MlpTrainConfig cfg;
    cfg.epochs = 200;
    cfg.batch_size = 16;
    cfg.learning_rate = 0.01;
    cfg.seed = 4;
    const MlpTrainResult r = train_mlp(data, cfg);
    const Eigen::VectorXd p = r.model.forward_batch(data.X);
    CHECK(p.minCoeff() > 0.9);
    CHECK(evaluate(r.model.predict_labels(data.X), data.y).balanced_accuracy == 0.5);
}

TEST_CASE("training is deterministic per seed") {
    FeatureMatrix data = xor_set(256, 13);
    MlpTrainConfig cfg;
    cfg.epochs = 8;
    cfg.seed = 77;
    const MlpModel a = train_mlp(data, cfg).model;
    const MlpModel b = train_mlp(data, cfg).model;
    for (int l = 0; l < a.num_layers(); ++l)
        CHECK((a.weights[l] - b.weights[l]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("model file narrows to float32 and reloads byte-exactly") {
    const MlpModel m = tiny_model(19);
    const std::string p1 = temp_path("prach_mlp_a.json");
    const std::string p2 = temp_path("prach_mlp_b.json");
    save_mlp(m, p1);
    const MlpModel back = load_mlp(p1);
    save_mlp(back, p2);
    CHECK(file_bytes(p1) == file_bytes(p2));
    // parameters are exactly the float32 narrowing of the trained values
    for (int l = 0; l < m.num_layers(); ++l)
        for (Eigen::Index r = 0; r < m.weights[l].rows(); ++r)
            for (Eigen::Index c = 0; c < m.weights[l].cols(); ++c)
                CHECK(back.weights[l](r, c) ==
                      static_cast<double>(static_cast<float>(m.weights[l](r, c))));
    CHECK_THROWS_AS(load_mlp("/nonexistent/mlp.json"), IoError);
}
