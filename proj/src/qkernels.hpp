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

#include <cstdint>

namespace prach::kernels {

// Raw dot-product kernels of the int8 inference engine. This translation
// unit carries the SIMD build flags, so it must stay free of Eigen types.
// `stride` is a multiple of 32 and both buffers hold at least that many
// elements, zero padded past the logical column count.

std::int32_t dot_i8(const std::int8_t* w, const std::int8_t* x, int stride);
float dot_i8_f32(const std::int8_t* w, const float* x, int stride);

/// Four consecutive rows (w, w+stride, ...) against one activation vector;
/// the shared activation widening and a fused reduction make this the fast
/// path of the full-integer engine.
void dot_i8_x4(const std::int8_t* w, const std::int8_t* x, int stride, std::int32_t out[4]);

/// Deployment-path preprocessing: out[j] = (log10f(raw[j] + 1e-12) - mean[j])
/// * inv_scale[j], with log10 computed by exponent split plus a cubic fit on
/// the mantissa (absolute log-domain error < 2e-4, far below the activation
/// quantization step).
void preprocess_log10(const double* raw, const float* mean, const float* inv_scale, int n, float* out);

/// One dynamic-range layer: y[r] = relu?(scale * (W_r . x) + bias[r]).
/// Weights are dequantized on the fly; activations stay float.
void drq_layer(const std::int8_t* w, int rows, int stride, const float* x, float scale, const float* bias,
               bool relu, float* y);

/// One hidden full-integer layer: int32 accumulate, requantize onto the next
/// activation grid (half-away rounding), rectify by clamping at the zero
/// point. rows must be a multiple of 4.
void fiq_hidden_layer(const std::int8_t* w, int rows, int stride, const std::int8_t* x,
                      const std::int32_t* fold, float multiplier, int zp_next, std::int8_t* y);

}  // namespace prach::kernels
