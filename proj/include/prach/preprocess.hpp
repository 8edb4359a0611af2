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

/// Feature transform shared by every model: log10(power + 1e-12) followed by
/// per-feature standardization with statistics fitted on the training set.
/// Delay-profile powers span several orders of magnitude; the log compresses
/// them into a range gradient-based training handles well.
struct FeatureScaler {
    Eigen::VectorXd mean;   ///< per-feature mean of the log-domain values
    Eigen::VectorXd scale;  ///< per-feature std (floored at 1e-12 -> 1)

    static constexpr double kLogEps = 1e-12;

    static FeatureScaler fit(const Eigen::MatrixXd& X);

    /// Fits the affine stage directly on values already in the log domain.
    static FeatureScaler fit_affine(const Eigen::MatrixXd& L);

    Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
    Eigen::VectorXd apply_row(const Eigen::VectorXd& x) const;

    /// Affine stage only (no log), used on data that is already in the log
    /// domain; standardizing already-standardized data is the identity up to
    /// rounding.
    Eigen::MatrixXd apply_affine(const Eigen::MatrixXd& L) const;
};

}  // namespace prach
