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
#include <string>
#include <vector>

#include "prach/dataset.hpp"
#include "prach/mlp.hpp"

namespace prach {

enum class QuantMode { dynamic_range, full_integer };

std::string to_string(QuantMode mode);

/// Per-tensor symmetric int8 weights: scale = max|w| / 127, zero point 0.
/// row_sum and the zero-padded row-major copy (stride rounded up for the
/// SIMD kernels) are derived at build/load time and never serialized.
struct QuantTensor {
    Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> q;
    float scale = 1.0f;
    bool all_zero = false;            ///< flagged; scale forced to 1
    Eigen::VectorXi row_sum;          ///< per-row weight sums (zero-point correction)
    std::vector<std::int8_t> padded;  ///< rows x padded_stride, zero filled
    int padded_stride = 0;
};

/// Asymmetric affine activation grid: real = scale * (q - zero_point).
struct ActQuant {
    float scale = 1.0f;
    int zero_point = 0;
    bool widened = false;  ///< constant range was widened to +/-1e-6
};

/// int8 network in one of two flavors. Dynamic-range keeps real activations
/// and rescales integer products on the fly; full-integer also fixes the
/// activation grids from a calibration run and carries int32 biases in the
/// product scale of each layer.
struct QuantizedModel {
    QuantMode mode = QuantMode::dynamic_range;
    std::vector<int> dims = {24, 64, 32, 1};
    std::vector<QuantTensor> weights;
    std::vector<Eigen::VectorXf> bias_real;               // dynamic-range path
    std::vector<Eigen::VectorXi> bias_q;                  // full-integer path (int32)
    std::vector<ActQuant> act;                            // input + each hidden output
    Eigen::VectorXf pre_mean, pre_scale;                  // preprocessing statistics
    std::vector<Eigen::VectorXi> bias_fold;               // derived: bias_q - zp * row_sum
    Eigen::VectorXf pre_inv_scale;                        // derived: 1 / pre_scale

    int num_layers() const { return static_cast<int>(weights.size()); }
};

/// Weights-only int8 quantization; no calibration data needed.
QuantizedModel quantize_dynamic_range(const MlpModel& model);

/// Full int8 quantization: weight grids as above, activation ranges measured
/// by running the calibration rows through the real model, biases stored as
/// int32 in weight_scale * input_scale.
QuantizedModel quantize_full_integer(const MlpModel& model, const FeatureMatrix& calibration);

/// Probability from the quantized network. Dynamic-range mode dequantizes
/// the int8 weights on the fly and keeps activations real (float); full-
/// integer mode runs int8 activations with int32 accumulators and per-layer
/// requantization. The final logit goes through a real sigmoid either way.
double quantized_forward(const QuantizedModel& qm, const Eigen::VectorXd& raw);

Eigen::VectorXi quantized_predict_labels(const QuantizedModel& qm, const Eigen::MatrixXd& raw);

void save_quantized(const QuantizedModel& qm, const std::string& path);
QuantizedModel load_quantized(const std::string& path);

/// Rounding used throughout quantization: half away from zero.
inline int q_round(double v) { return static_cast<int>(std::llround(v)); }

}  // namespace prach
