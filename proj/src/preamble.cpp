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

#include "prach/preamble.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace prach {

void ZcConfig::validate() const {
    if (n_zc < 3 || n_zc % 2 == 0)
        throw std::invalid_argument("ZcConfig: n_zc must be odd and >= 3, got " + std::to_string(n_zc));
    if (root_u < 1 || root_u > n_zc - 1)
        throw std::invalid_argument("ZcConfig: root_u must be in [1, n_zc-1], got " + std::to_string(root_u));
    if (n_cs < 1 || n_cs > n_zc)
        throw std::invalid_argument("ZcConfig: n_cs must be in [1, n_zc], got " + std::to_string(n_cs));
    if (num_shifts() < 1)
        throw std::invalid_argument("ZcConfig: floor(n_zc/n_cs) must be >= 1");
}

Eigen::VectorXcd zadoff_chu_root(const ZcConfig& cfg) {
    cfg.validate();
    const std::int64_t n = cfg.n_zc;
    const std::int64_t u = cfg.root_u;
    Eigen::VectorXcd z(n);
    for (std::int64_t m = 0; m < n; ++m) {
        // exact phase reduction: u*m*(m+1) mod 2N keeps the argument small
        const std::int64_t e = (u * m % (2 * n)) * (m + 1) % (2 * n);
        const double phase = -M_PI * static_cast<double>(e) / static_cast<double>(n);
        z(m) = std::polar(1.0, phase);
    }
    return z;
}

Eigen::VectorXcd cyclic_shift(const Eigen::VectorXcd& z, int v, const ZcConfig& cfg) {
    cfg.validate();
    if (z.size() != cfg.n_zc)
        throw std::invalid_argument("cyclic_shift: sequence length " + std::to_string(z.size()) +
                                    " does not match n_zc " + std::to_string(cfg.n_zc));
    if (v < 0 || v >= cfg.num_shifts())
        throw std::out_of_range("cyclic_shift: shift index " + std::to_string(v) + " outside [0, " +
                                std::to_string(cfg.num_shifts()) + ")");
    const int n = cfg.n_zc;
    const int offset = static_cast<int>((static_cast<std::int64_t>(v) * cfg.n_cs) % n);
    Eigen::VectorXcd x(n);
    for (int m = 0; m < n; ++m) x(m) = z((m + offset) % n);
    return x;
}

}  // namespace prach
