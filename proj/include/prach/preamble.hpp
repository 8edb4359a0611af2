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

namespace prach {

/// Zadoff-Chu generation parameters. The defaults give the long preamble
/// format: 839-sample sequences with a 13-sample shift stride, i.e. 64
/// cyclic-shift positions per root.
struct ZcConfig {
    int n_zc = 839;   ///< sequence length, odd
    int root_u = 25;  ///< root index in [1, n_zc - 1]
    int n_cs = 13;    ///< cyclic-shift stride in samples

    int num_shifts() const { return n_zc / n_cs; }

    /// Throws std::invalid_argument when any invariant is violated.
    void validate() const;
};

/// Root sequence z[m] = exp(-j pi u m (m+1) / N) for m = 0..N-1.
/// Every sample has unit modulus; distinct roots of a prime-length family
/// have flat cross-correlation of magnitude sqrt(N).
Eigen::VectorXcd zadoff_chu_root(const ZcConfig& cfg);

/// Cyclic shift on the native sequence grid: x[m] = z[(m + v*n_cs) mod N].
/// v must lie in [0, num_shifts()). Shifts of the same root are orthogonal
/// at lag zero, which is what makes them usable as separate preambles.
Eigen::VectorXcd cyclic_shift(const Eigen::VectorXcd& z, int v, const ZcConfig& cfg);

}  // namespace prach
