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

#include "prach/preprocess.hpp"

#include <cmath>
#include <stdexcept>

namespace prach {

namespace {

Eigen::MatrixXd log_domain(const Eigen::MatrixXd& X) {
    return (X.array() + FeatureScaler::kLogEps).log10().matrix();
}

}  // namespace

FeatureScaler FeatureScaler::fit(const Eigen::MatrixXd& X) {
    if (X.rows() == 0) throw std::invalid_argument("FeatureScaler: cannot fit on an empty matrix");
    return fit_affine(log_domain(X));
}

FeatureScaler FeatureScaler::fit_affine(const Eigen::MatrixXd& L) {
    if (L.rows() == 0) throw std::invalid_argument("FeatureScaler: cannot fit on an empty matrix");
    FeatureScaler s;
    s.mean = L.colwise().mean();
    Eigen::VectorXd var = (L.rowwise() - s.mean.transpose()).array().square().colwise().mean();
    s.scale = var.array().sqrt();
    for (Eigen::Index j = 0; j < s.scale.size(); ++j)
        if (s.scale(j) < 1e-12) s.scale(j) = 1.0;
    return s;
}

Eigen::MatrixXd FeatureScaler::apply(const Eigen::MatrixXd& X) const {
    return apply_affine(log_domain(X));
}

Eigen::MatrixXd FeatureScaler::apply_affine(const Eigen::MatrixXd& L) const {
    return ((L.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array()).matrix();
}

Eigen::VectorXd FeatureScaler::apply_row(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j)
        out(j) = (std::log10(x(j) + kLogEps) - mean(j)) / scale(j);
    return out;
}

}  // namespace prach
