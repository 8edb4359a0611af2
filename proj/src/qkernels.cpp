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

#include "qkernels.hpp"

#include <cmath>
#include <cstring>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define PRACH_QUANT_AVX2 1
#endif

namespace prach::kernels {

namespace {

// cubic fit of log2(m) on [1, 2)
constexpr float kP3 = 0.15824871f;
constexpr float kP2 = -1.051875f;
constexpr float kP1 = 3.0478842f;
constexpr float kP0 = -2.1536207f;
constexpr float kLog10Of2 = 0.30102999f;

inline float scalar_log10(float x) {
    std::int32_t bits;
    std::memcpy(&bits, &x, 4);
    const float e = static_cast<float>(((bits >> 23) & 0xFF) - 127);
    bits = (bits & 0x007FFFFF) | 0x3F800000;
    float m;
    std::memcpy(&m, &bits, 4);
    const float p = ((kP3 * m + kP2) * m + kP1) * m + kP0;
    return (e + p) * kLog10Of2;
}

}  // namespace

std::int32_t dot_i8(const std::int8_t* w, const std::int8_t* x, int stride) {
#ifdef PRACH_QUANT_AVX2
    __m256i acc = _mm256_setzero_si256();
    for (int c = 0; c < stride; c += 32) {
        const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(w + c));
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + c));
        const __m256i alo = _mm256_cvtepi8_epi16(_mm256_castsi256_si128(a));
        const __m256i ahi = _mm256_cvtepi8_epi16(_mm256_extracti128_si256(a, 1));
        const __m256i blo = _mm256_cvtepi8_epi16(_mm256_castsi256_si128(b));
        const __m256i bhi = _mm256_cvtepi8_epi16(_mm256_extracti128_si256(b, 1));
        acc = _mm256_add_epi32(acc, _mm256_madd_epi16(alo, blo));
        acc = _mm256_add_epi32(acc, _mm256_madd_epi16(ahi, bhi));
    }
    __m128i s = _mm_add_epi32(_mm256_castsi256_si128(acc), _mm256_extracti128_si256(acc, 1));
    s = _mm_add_epi32(s, _mm_shuffle_epi32(s, 0x4E));
    s = _mm_add_epi32(s, _mm_shuffle_epi32(s, 0xB1));
    return _mm_cvtsi128_si32(s);
#else
    std::int32_t sum = 0;
    for (int c = 0; c < stride; ++c)
        sum += static_cast<std::int32_t>(w[c]) * static_cast<std::int32_t>(x[c]);
    return sum;
#endif
}

void dot_i8_x4(const std::int8_t* w, const std::int8_t* x, int stride, std::int32_t out[4]) {
#ifdef PRACH_QUANT_AVX2
    __m256i acc0 = _mm256_setzero_si256();
    __m256i acc1 = _mm256_setzero_si256();
    __m256i acc2 = _mm256_setzero_si256();
    __m256i acc3 = _mm256_setzero_si256();
    for (int c = 0; c < stride; c += 32) {
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + c));
        const __m256i blo = _mm256_cvtepi8_epi16(_mm256_castsi256_si128(b));
        const __m256i bhi = _mm256_cvtepi8_epi16(_mm256_extracti128_si256(b, 1));
        const auto row = [&](int k) {
            const __m256i a =
                _mm256_loadu_si256(reinterpret_cast<const __m256i*>(w + static_cast<std::ptrdiff_t>(k) * stride + c));
            const __m256i alo = _mm256_cvtepi8_epi16(_mm256_castsi256_si128(a));
            const __m256i ahi = _mm256_cvtepi8_epi16(_mm256_extracti128_si256(a, 1));
            return _mm256_add_epi32(_mm256_madd_epi16(alo, blo), _mm256_madd_epi16(ahi, bhi));
        };
        acc0 = _mm256_add_epi32(acc0, row(0));
        acc1 = _mm256_add_epi32(acc1, row(1));
        acc2 = _mm256_add_epi32(acc2, row(2));
        acc3 = _mm256_add_epi32(acc3, row(3));
    }
    // fused reduction: hadd pairs collapse the four accumulators into one
    const __m256i h01 = _mm256_hadd_epi32(acc0, acc1);
    const __m256i h23 = _mm256_hadd_epi32(acc2, acc3);
    const __m256i h = _mm256_hadd_epi32(h01, h23);
    const __m128i sums =
        _mm_add_epi32(_mm256_castsi256_si128(h), _mm256_extracti128_si256(h, 1));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out), sums);
#else
    for (int k = 0; k < 4; ++k) out[k] = dot_i8(w + static_cast<std::ptrdiff_t>(k) * stride, x, stride);
#endif
}

float dot_i8_f32(const std::int8_t* w, const float* x, int stride) {
#ifdef PRACH_QUANT_AVX2
    __m256 acc = _mm256_setzero_ps();
    for (int c = 0; c < stride; c += 8) {
        const __m128i w8 = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(w + c));
        const __m256 wf = _mm256_cvtepi32_ps(_mm256_cvtepi8_epi32(w8));
        acc = _mm256_fmadd_ps(wf, _mm256_loadu_ps(x + c), acc);
    }
    __m128 s = _mm_add_ps(_mm256_castps256_ps128(acc), _mm256_extractf128_ps(acc, 1));
    s = _mm_add_ps(s, _mm_movehl_ps(s, s));
    s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 1));
    return _mm_cvtss_f32(s);
#else
    float sum = 0.0f;
    for (int c = 0; c < stride; ++c) sum += static_cast<float>(w[c]) * x[c];
    return sum;
#endif
}

void drq_layer(const std::int8_t* w, int rows, int stride, const float* x, float scale, const float* bias,
               bool relu, float* y) {
    for (int r = 0; r < rows; ++r) {
        float v = dot_i8_f32(w + static_cast<std::ptrdiff_t>(r) * stride, x, stride) * scale + bias[r];
        if (relu && v < 0.0f) v = 0.0f;
        y[r] = v;
    }
}

void fiq_hidden_layer(const std::int8_t* w, int rows, int stride, const std::int8_t* x,
                      const std::int32_t* fold, float multiplier, int zp_next, std::int8_t* y) {
#ifdef PRACH_QUANT_AVX2
    const __m128 mult = _mm_set1_ps(multiplier);
    const __m128 half = _mm_set1_ps(0.5f);
    const __m128 sign_mask = _mm_set1_ps(-0.0f);
    const __m128i zp = _mm_set1_epi32(zp_next);
    const __m128i zp8 = _mm_set1_epi8(static_cast<char>(zp_next));
    std::int32_t acc4[4];
    for (int r = 0; r < rows; r += 4) {
        dot_i8_x4(w + static_cast<std::ptrdiff_t>(r) * stride, x, stride, acc4);
        __m128i acc = _mm_loadu_si128(reinterpret_cast<const __m128i*>(acc4));
        acc = _mm_add_epi32(acc, _mm_loadu_si128(reinterpret_cast<const __m128i*>(fold + r)));
        const __m128 v = _mm_mul_ps(_mm_cvtepi32_ps(acc), mult);
        // half-away-from-zero: shift by signed 0.5, truncate toward zero
        const __m128 shifted = _mm_add_ps(v, _mm_or_ps(half, _mm_and_ps(v, sign_mask)));
        __m128i q = _mm_add_epi32(_mm_cvttps_epi32(shifted), zp);
        // saturating packs clamp to int8; rectifier clamps at the zero point
        __m128i q8 = _mm_packs_epi16(_mm_packs_epi32(q, q), _mm_setzero_si128());
        q8 = _mm_max_epi8(q8, zp8);
        *reinterpret_cast<std::int32_t*>(y + r) = _mm_cvtsi128_si32(q8);
    }
#else
    for (int r = 0; r < rows; ++r) {
        const std::int32_t acc = dot_i8(w + static_cast<std::ptrdiff_t>(r) * stride, x, stride) + fold[r];
        const float v = static_cast<float>(acc) * multiplier;
        int q = static_cast<int>(v + std::copysign(0.5f, v)) + zp_next;
        q = q < -128 ? -128 : (q > 127 ? 127 : q);
        y[r] = static_cast<std::int8_t>(q < zp_next ? zp_next : q);
    }
#endif
}

void preprocess_log10(const double* raw, const float* mean, const float* inv_scale, int n, float* out) {
    int j = 0;
#ifdef PRACH_QUANT_AVX2
    const __m256 eps = _mm256_set1_ps(1e-12f);
    const __m256i mant_mask = _mm256_set1_epi32(0x007FFFFF);
    const __m256i one_bits = _mm256_set1_epi32(0x3F800000);
    const __m256i exp_bias = _mm256_set1_epi32(127);
    const __m256 p3 = _mm256_set1_ps(kP3), p2 = _mm256_set1_ps(kP2);
    const __m256 p1 = _mm256_set1_ps(kP1), p0 = _mm256_set1_ps(kP0);
    const __m256 lg2 = _mm256_set1_ps(kLog10Of2);
    for (; j + 8 <= n; j += 8) {
        const __m128 lo = _mm256_cvtpd_ps(_mm256_loadu_pd(raw + j));
        const __m128 hi = _mm256_cvtpd_ps(_mm256_loadu_pd(raw + j + 4));
        __m256 x = _mm256_insertf128_ps(_mm256_castps128_ps256(lo), hi, 1);
        x = _mm256_add_ps(x, eps);
        const __m256i bits = _mm256_castps_si256(x);
        const __m256 e =
            _mm256_cvtepi32_ps(_mm256_sub_epi32(_mm256_srli_epi32(bits, 23), exp_bias));
        const __m256 m =
            _mm256_castsi256_ps(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
        __m256 p = _mm256_fmadd_ps(p3, m, p2);
        p = _mm256_fmadd_ps(p, m, p1);
        p = _mm256_fmadd_ps(p, m, p0);
        const __m256 l = _mm256_mul_ps(_mm256_add_ps(e, p), lg2);
        const __m256 res =
            _mm256_mul_ps(_mm256_sub_ps(l, _mm256_loadu_ps(mean + j)), _mm256_loadu_ps(inv_scale + j));
        _mm256_storeu_ps(out + j, res);
    }
#endif
    for (; j < n; ++j) {
        const float v = static_cast<float>(raw[j]) + 1e-12f;
        out[j] = (scalar_log10(v) - mean[j]) * inv_scale[j];
    }
}

}  // namespace prach::kernels
