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

/// Unitary DFT: X[k] = (1/sqrt(N)) * sum_m x[m] exp(-j 2 pi k m / N).
/// Arbitrary lengths are supported (mixed radix with a generic fallback for
/// prime factors), so both the 839-sample sequence grid and the 1536-sample
/// receiver grid go through the same routine.
Eigen::VectorXcd dft(const Eigen::VectorXcd& x);

/// Unitary inverse DFT; idft(dft(x)) == x up to rounding.
Eigen::VectorXcd idft(const Eigen::VectorXcd& x);

}  // namespace prach
