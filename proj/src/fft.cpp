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

#include "prach/fft.hpp"

#include <unsupported/Eigen/FFT>

namespace prach {

namespace {

// One plan cache per thread; RAO workers run transforms concurrently.
Eigen::FFT<double>& engine() {
    thread_local Eigen::FFT<double> fft;
    return fft;
}

}  // namespace

Eigen::VectorXcd dft(const Eigen::VectorXcd& x) {
    Eigen::VectorXcd out(x.size());
    engine().fwd(out, x);
    out /= std::sqrt(static_cast<double>(x.size()));
    return out;
}

Eigen::VectorXcd idft(const Eigen::VectorXcd& x) {
    Eigen::VectorXcd out(x.size());
    engine().inv(out, x);  // Eigen applies 1/N
    out *= std::sqrt(static_cast<double>(x.size()));
    return out;
}

}  // namespace prach
