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
#include <utility>
#include <vector>

#include "prach/dataset.hpp"

namespace prach {

/// Balanced data plus provenance: source_row[i] is the input row the output
/// row derives from (itself for kept rows, the interpolation base for
/// synthetic rows), which lets callers carry metadata through balancing.
struct BalanceResult {
    FeatureMatrix data;
    std::vector<int> source_row;
};

/// Synthetic minority oversampling. The draw protocol is fixed so that an
/// independent implementation with the same seed reproduces it bit for bit:
///   1. minority = class with strictly fewer rows (equal counts: no-op);
///   2. for each minority row, its k_eff = min(k, minority-1) nearest
///      minority neighbors by squared Euclidean distance, ties broken by
///      lower row index;
///   3. per synthetic sample, three draws from Rng(seed) in order:
///      base = uniform_int(minority_count), nb = uniform_int(k_eff),
///      t = uniform(); the sample is x_base + t * (x_neighbor - x_base);
///   4. exactly majority-minority samples are appended after the input rows.
BalanceResult smote_oversample(const FeatureMatrix& data, int k, std::uint64_t seed);

/// All unordered pairs (a, b), a < b, of opposite-class rows that are mutual
/// 1-nearest neighbors over the whole set (ties broken by lower index).
/// Sorted by (a, b).
std::vector<std::pair<int, int>> find_tomek_links(const FeatureMatrix& data);

/// smote_oversample followed by Tomek cleaning: rows of the original
/// majority class that sit in a link are dropped. The input is first brought
/// into canonical order (feature tuple, then label), so the result does not
/// depend on input row order. When the input classes are exactly equal there
/// is no majority to clean and the data passes through unchanged.
BalanceResult smote_tomek(const FeatureMatrix& data, int k, std::uint64_t seed);

}  // namespace prach
