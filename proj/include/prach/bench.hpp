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
#include <functional>
#include <string>

namespace prach {

struct BenchResult {
    std::string mode;
    int threads = 1;
    int n_samples = 64;
    int warmup = 8;
    int repeats = 5;
    double mean_us = 0.0;
    double std_us = 0.0;

    /// standard error of the mean, in microseconds
    double sem_us() const;
};

/// Times single-row inference over the given samples. Each worker gets a
/// contiguous share of the rows, runs its warmup inferences unmeasured, then
/// times each of its rows with the monotonic high-resolution clock. A row is
/// timed `repeats` times and the minimum kept, which rejects additive
/// scheduler noise; the per-row minima are pooled into mean and standard
/// deviation.
BenchResult benchmark_inference(const std::string& mode, const std::function<double(const Eigen::VectorXd&)>& infer,
                                const Eigen::MatrixXd& samples, int threads, int warmup, int repeats = 5);

}  // namespace prach
