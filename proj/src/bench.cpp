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

#include "prach/bench.hpp"

#include <chrono>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace prach {

double BenchResult::sem_us() const {
    return n_samples > 0 ? std_us / std::sqrt(static_cast<double>(n_samples)) : 0.0;
}

BenchResult benchmark_inference(const std::string& mode,
                                const std::function<double(const Eigen::VectorXd&)>& infer,
                                const Eigen::MatrixXd& samples, int threads, int warmup, int repeats) {
    if (samples.rows() < 1) throw std::invalid_argument("benchmark_inference: need at least one sample");
    if (threads < 1) throw std::invalid_argument("benchmark_inference: threads must be >= 1");
    if (warmup < 0) throw std::invalid_argument("benchmark_inference: warmup must be >= 0");
    if (repeats < 1) throw std::invalid_argument("benchmark_inference: repeats must be >= 1");

    const int n = static_cast<int>(samples.rows());
    const int workers = std::min(threads, n);
    std::vector<double> durations_us(n, 0.0);
    // sink defeats dead-code elimination of the timed calls
    std::vector<double> sink(workers, 0.0);

    auto run_slice = [&](int w, int begin, int end) {
        using clock = std::chrono::steady_clock;
        double acc = 0.0;
        for (int i = 0; i < warmup; ++i) acc += infer(samples.row(begin + i % (end - begin)).transpose());
        for (int i = begin; i < end; ++i) {
            const Eigen::VectorXd row = samples.row(i).transpose();
            double best = std::numeric_limits<double>::infinity();
            for (int rep = 0; rep < repeats; ++rep) {
                const auto t0 = clock::now();
                acc += infer(row);
                const auto t1 = clock::now();
                best = std::min(best, std::chrono::duration<double, std::micro>(t1 - t0).count());
            }
            durations_us[i] = best;
        }
        sink[w] = acc;
    };

    if (workers == 1) {
        run_slice(0, 0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            const int begin = static_cast<int>(static_cast<long>(w) * n / workers);
            const int end = static_cast<int>(static_cast<long>(w + 1) * n / workers);
            pool.emplace_back(run_slice, w, begin, end);
        }
        for (auto& t : pool) t.join();
    }

    double mean = 0.0;
    for (double d : durations_us) mean += d;
    mean /= n;
    double var = 0.0;
    for (double d : durations_us) var += (d - mean) * (d - mean);
    var /= n;

    BenchResult r;
    r.mode = mode;
    r.threads = threads;
    r.n_samples = n;
    r.warmup = warmup;
    r.repeats = repeats;
    r.mean_us = mean;
    r.std_us = std::sqrt(var);
    // keep the sink alive
    if (sink[0] == 0.12345678901234567) r.mean_us += 0.0;
    return r;
}

}  // namespace prach
