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

#include "prach/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "qkernels.hpp"

namespace prach {

namespace {

using json = nlohmann::ordered_json;

constexpr int kPad = 32;  // SIMD-friendly row stride

void finalize_tensor(QuantTensor& t) {
    const int rows = static_cast<int>(t.q.rows());
    const int cols = static_cast<int>(t.q.cols());
    t.row_sum.resize(rows);
    for (int r = 0; r < rows; ++r) {
        int s = 0;
        for (int c = 0; c < cols; ++c) s += t.q(r, c);
        t.row_sum(r) = s;
    }
    t.padded_stride = (cols + kPad - 1) / kPad * kPad;
    t.padded.assign(static_cast<std::size_t>(rows) * t.padded_stride, 0);
    for (int r = 0; r < rows; ++r)
        std::memcpy(t.padded.data() + static_cast<std::size_t>(r) * t.padded_stride, &t.q(r, 0), cols);
}

QuantTensor quantize_weights(const Eigen::MatrixXd& w) {
    QuantTensor t;
    t.q.resize(w.rows(), w.cols());
    const double max_abs = w.cwiseAbs().maxCoeff();
    if (max_abs == 0.0) {
        t.all_zero = true;
        t.scale = 1.0f;
        t.q.setZero();
        finalize_tensor(t);
        return t;
    }
    t.scale = static_cast<float>(max_abs / 127.0);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            const int q = q_round(w(r, c) / t.scale);
            t.q(r, c) = static_cast<std::int8_t>(std::clamp(q, -127, 127));
        }
    finalize_tensor(t);
    return t;
}

/// runtime rounding, half away from zero; branchless (shift by signed 0.5,
/// then truncate toward zero)
inline int fast_round(float v) {
    return static_cast<int>(v + std::copysign(0.5f, v));
}

using kernels::dot_i8;

ActQuant make_act_quant(double lo, double hi) {
    ActQuant a;
    if (lo == hi) {
        a.widened = true;
        lo -= 1e-6;
        hi += 1e-6;
    }
    a.scale = static_cast<float>((hi - lo) / 255.0);
    a.zero_point = std::clamp(q_round(-128.0 - lo / a.scale), -128, 127);
    return a;
}

void check_fitted(const MlpModel& model) {
    if (!model.fitted()) throw std::invalid_argument("quantize: model is not fitted");
}

/// precomputed per-row constant of the full-integer accumulator
void fold_bias(QuantizedModel& qm) {
    qm.bias_fold.clear();
    if (qm.mode != QuantMode::full_integer) return;
    for (int l = 0; l < qm.num_layers(); ++l)
        qm.bias_fold.push_back(qm.bias_q[l] - qm.act[l].zero_point * qm.weights[l].row_sum);
}

void copy_preprocessing(QuantizedModel& qm, const MlpModel& model) {
    qm.pre_mean = model.scaler.mean.cast<float>();
    qm.pre_scale = model.scaler.scale.cast<float>();
    qm.pre_inv_scale = qm.pre_scale.cwiseInverse();
}

/// float preprocessing path shared by both quantized flavors
void preprocess_f(const QuantizedModel& qm, const Eigen::VectorXd& raw, float* out) {
    kernels::preprocess_log10(raw.data(), qm.pre_mean.data(), qm.pre_inv_scale.data(),
                              static_cast<int>(raw.size()), out);
}

/// per-thread scratch; inference stays reentrant without heap churn
struct Scratch {
    std::vector<float> a, b;
    std::vector<std::int8_t> qa, qb;
    std::vector<std::int32_t> acc;
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

}  // namespace

std::string to_string(QuantMode mode) {
    return mode == QuantMode::dynamic_range ? "drq" : "fiq";
}

QuantizedModel quantize_dynamic_range(const MlpModel& model) {
    check_fitted(model);
    QuantizedModel qm;
    qm.mode = QuantMode::dynamic_range;
    qm.dims = model.dims;
    copy_preprocessing(qm, model);
    for (int l = 0; l < model.num_layers(); ++l) {
        qm.weights.push_back(quantize_weights(model.weights[l]));
        qm.bias_real.push_back(model.biases[l].cast<float>());
    }
    return qm;
}

QuantizedModel quantize_full_integer(const MlpModel& model, const FeatureMatrix& calibration) {
    check_fitted(model);
    calibration.validate();
    if (calibration.rows() == 0)
        throw std::invalid_argument("quantize_full_integer: calibration set is empty");

    QuantizedModel qm;
    qm.mode = QuantMode::full_integer;
    qm.dims = model.dims;
    copy_preprocessing(qm, model);

    // measure layer-input ranges through the real model
    const int layers = model.num_layers();
    Eigen::MatrixXd h = model.scaler.apply(calibration.X);
    qm.act.push_back(make_act_quant(h.minCoeff(), h.maxCoeff()));
    for (int l = 0; l + 1 < layers; ++l) {
        h = ((h * model.weights[l].transpose()).rowwise() + model.biases[l].transpose()).cwiseMax(0.0);
        qm.act.push_back(make_act_quant(h.minCoeff(), h.maxCoeff()));
    }

    for (int l = 0; l < layers; ++l) {
        qm.weights.push_back(quantize_weights(model.weights[l]));
        const double product_scale =
            static_cast<double>(qm.weights[l].scale) * static_cast<double>(qm.act[l].scale);
        Eigen::VectorXi qb(model.biases[l].size());
        for (Eigen::Index r = 0; r < qb.size(); ++r) qb(r) = q_round(model.biases[l](r) / product_scale);
        qm.bias_q.push_back(std::move(qb));
    }
    fold_bias(qm);
    return qm;
}

double quantized_forward(const QuantizedModel& qm, const Eigen::VectorXd& raw) {
    if (raw.size() != qm.dims.front())
        throw std::invalid_argument("quantized_forward: feature count mismatch");
    const int layers = qm.num_layers();
    if (layers == 0) throw std::invalid_argument("quantized_forward: empty model");

    Scratch& s = scratch();
    // scratch sized to the widest padded layer, zero padding included
    int max_stride = kPad;
    for (const auto& w : qm.weights) max_stride = std::max(max_stride, w.padded_stride);
    if (qm.mode == QuantMode::dynamic_range) {
        if (qm.bias_real.size() != static_cast<std::size_t>(layers))
            throw std::invalid_argument("quantized_forward: dynamic-range tensors missing");
        s.a.assign(max_stride, 0.0f);
        s.b.assign(max_stride, 0.0f);
        preprocess_f(qm, raw, s.a.data());
        std::vector<float>* x = &s.a;
        std::vector<float>* y = &s.b;
        for (int l = 0; l < layers; ++l) {
            const QuantTensor& w = qm.weights[l];
            const int rows = static_cast<int>(w.q.rows());
            kernels::drq_layer(w.padded.data(), rows, w.padded_stride, x->data(), w.scale,
                               qm.bias_real[l].data(), l + 1 < layers, y->data());
            std::fill(y->begin() + rows, y->end(), 0.0f);  // keep the padded tail clean
            std::swap(x, y);
        }
        const double z = static_cast<double>((*x)[0]);
        return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    }

    // full integer
    if (qm.act.size() != static_cast<std::size_t>(layers) ||
        qm.bias_q.size() != static_cast<std::size_t>(layers))
        throw std::invalid_argument("quantized_forward: full-integer tensors missing");
    s.a.resize(raw.size());
    preprocess_f(qm, raw, s.a.data());
    s.qa.assign(max_stride, 0);
    s.qb.assign(max_stride, 0);
    const float inv_s0 = 1.0f / qm.act[0].scale;
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
        const int q = fast_round(s.a[i] * inv_s0) + qm.act[0].zero_point;
        s.qa[i] = static_cast<std::int8_t>(std::clamp(q, -128, 127));
    }
    std::vector<std::int8_t>* qx = &s.qa;
    std::vector<std::int8_t>* qy = &s.qb;
    double logit = 0.0;
    for (int l = 0; l < layers; ++l) {
        const QuantTensor& w = qm.weights[l];
        const int rows = static_cast<int>(w.q.rows());
        const float product_scale = w.scale * qm.act[l].scale;
        const std::int8_t* xv = qx->data();
        const std::int32_t* fold = qm.bias_fold[l].data();
        if (l + 1 < layers) {
            const ActQuant& next = qm.act[l + 1];
            const float multiplier = product_scale / next.scale;
            if (rows % 4 == 0) {
                kernels::fiq_hidden_layer(w.padded.data(), rows, w.padded_stride, xv, fold, multiplier,
                                          next.zero_point, qy->data());
            } else {
                for (int r = 0; r < rows; ++r) {
                    const std::int8_t* wr = w.padded.data() + static_cast<std::size_t>(r) * w.padded_stride;
                    const std::int32_t acc = dot_i8(wr, xv, w.padded_stride) + fold[r];
                    int q = fast_round(static_cast<float>(acc) * multiplier) + next.zero_point;
                    q = std::clamp(q, -128, 127);
                    (*qy)[r] = static_cast<std::int8_t>(std::max(q, next.zero_point));  // integer rectifier
                }
            }
            std::fill(qy->begin() + rows, qy->end(), static_cast<std::int8_t>(0));
            std::swap(qx, qy);
        } else {
            const std::int32_t acc = dot_i8(w.padded.data(), xv, w.padded_stride) + fold[0];
            logit = static_cast<double>(product_scale) * static_cast<double>(acc);
        }
    }
    return logit >= 0.0 ? 1.0 / (1.0 + std::exp(-logit)) : std::exp(logit) / (1.0 + std::exp(logit));
}

Eigen::VectorXi quantized_predict_labels(const QuantizedModel& qm, const Eigen::MatrixXd& raw) {
    Eigen::VectorXi out(raw.rows());
    for (Eigen::Index i = 0; i < raw.rows(); ++i)
        out(i) = quantized_forward(qm, raw.row(i).transpose()) >= 0.5 ? 1 : 0;
    return out;
}

void save_quantized(const QuantizedModel& qm, const std::string& path) {
    json j;
    j["format"] = "prachlab-quantized";
    j["version"] = 1;
    j["mode"] = to_string(qm.mode);
    j["dims"] = qm.dims;
    j["pre_mean"] = std::vector<float>(qm.pre_mean.data(), qm.pre_mean.data() + qm.pre_mean.size());
    j["pre_scale"] = std::vector<float>(qm.pre_scale.data(), qm.pre_scale.data() + qm.pre_scale.size());

    json layers = json::array();
    for (int l = 0; l < qm.num_layers(); ++l) {
        json wl = json::array();
        for (Eigen::Index r = 0; r < qm.weights[l].q.rows(); ++r)
            for (Eigen::Index c = 0; c < qm.weights[l].q.cols(); ++c)
                wl.push_back(static_cast<int>(qm.weights[l].q(r, c)));
        json layer = {{"q", std::move(wl)},
                      {"scale", qm.weights[l].scale},
                      {"all_zero", qm.weights[l].all_zero}};
        if (qm.mode == QuantMode::dynamic_range) {
            layer["bias"] =
                std::vector<float>(qm.bias_real[l].data(), qm.bias_real[l].data() + qm.bias_real[l].size());
        } else {
            layer["bias_q"] =
                std::vector<int>(qm.bias_q[l].data(), qm.bias_q[l].data() + qm.bias_q[l].size());
        }
        layers.push_back(std::move(layer));
    }
    j["layers"] = std::move(layers);

    if (qm.mode == QuantMode::full_integer) {
        json act = json::array();
        for (const auto& a : qm.act)
            act.push_back({{"scale", a.scale}, {"zero_point", a.zero_point}, {"widened", a.widened}});
        j["act"] = std::move(act);
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(1) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

QuantizedModel load_quantized(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (j.value("format", "") != "prachlab-quantized")
        throw SchemaError(path + ": not a quantized model file");

    QuantizedModel qm;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "drq") qm.mode = QuantMode::dynamic_range;
    else if (mode == "fiq") qm.mode = QuantMode::full_integer;
    else throw SchemaError(path + ": unknown quantization mode '" + mode + "'");
    qm.dims = j.at("dims").get<std::vector<int>>();

    const auto pm = j.at("pre_mean").get<std::vector<float>>();
    const auto ps = j.at("pre_scale").get<std::vector<float>>();
    qm.pre_mean = Eigen::Map<const Eigen::VectorXf>(pm.data(), static_cast<Eigen::Index>(pm.size()));
    qm.pre_scale = Eigen::Map<const Eigen::VectorXf>(ps.data(), static_cast<Eigen::Index>(ps.size()));
    qm.pre_inv_scale = qm.pre_scale.cwiseInverse();

    const auto& layers = j.at("layers");
    if (layers.size() + 1 != qm.dims.size()) throw SchemaError(path + ": layer count does not match dims");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const int rows = qm.dims[l + 1], cols = qm.dims[l];
        QuantTensor t;
        t.scale = layers[l].at("scale").get<float>();
        t.all_zero = layers[l].value("all_zero", false);
        const auto q = layers[l].at("q").get<std::vector<int>>();
        if (static_cast<int>(q.size()) != rows * cols)
            throw SchemaError(path + ": layer " + std::to_string(l) + " has wrong weight count");
        t.q.resize(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                t.q(r, c) = static_cast<std::int8_t>(q[static_cast<std::size_t>(r) * cols + c]);
        finalize_tensor(t);
        qm.weights.push_back(std::move(t));

        if (qm.mode == QuantMode::dynamic_range) {
            const auto b = layers[l].at("bias").get<std::vector<float>>();
            qm.bias_real.push_back(Eigen::Map<const Eigen::VectorXf>(b.data(), rows));
        } else {
            const auto b = layers[l].at("bias_q").get<std::vector<int>>();
            qm.bias_q.push_back(Eigen::Map<const Eigen::VectorXi>(b.data(), rows));
        }
    }

    if (qm.mode == QuantMode::full_integer) {
        for (const auto& aj : j.at("act")) {
            ActQuant a;
            a.scale = aj.at("scale").get<float>();
            a.zero_point = aj.at("zero_point").get<int>();
            a.widened = aj.value("widened", false);
            qm.act.push_back(a);
        }
        if (qm.act.size() != qm.weights.size())
            throw SchemaError(path + ": activation grid count does not match layers");
    }
    fold_bias(qm);
    return qm;
}

}  // namespace prach
