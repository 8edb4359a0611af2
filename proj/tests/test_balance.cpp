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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "prach/balance.hpp"
#include "prach/rng.hpp"

using namespace prach;

namespace {

/// n rows around two blob centers; `ones` of them labeled 1
FeatureMatrix blobs(int n, int ones, double separation, std::uint64_t seed) {
    FeatureMatrix fm;
    fm.X.resize(n, kNumFeatures);
    fm.y.resize(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        const int label = i < ones ? 1 : 0;
        for (int j = 0; j < kNumFeatures; ++j)
            fm.X(i, j) = (label ? separation : 0.0) + 0.5 * rng.gaussian();
        fm.y(i) = label;
    }
    return fm;
}

FeatureMatrix from_rows(const std::vector<std::pair<std::vector<double>, int>>& rows) {
    FeatureMatrix fm;
    fm.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), kNumFeatures);
    fm.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].first.size(); ++j)
            fm.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i].first[j];
        fm.y(static_cast<Eigen::Index>(i)) = rows[i].second;
    }
    return fm;
}

}  // namespace

TEST_CASE("synthetic points interpolate the segment") {
    // minority pair (0,0) and (1,1) in the first two feature dims
    const FeatureMatrix data = from_rows({
        {{0, 0}, 1}, {{1, 1}, 1},
        {{5, 0}, 0}, {{6, 0}, 0}, {{7, 0}, 0},
    });
    const BalanceResult r = smote_oversample(data, 1, 42);
    REQUIRE(r.data.rows() == 6);
    const double t = r.data.X(5, 0);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
    CHECK(r.data.X(5, 1) == doctest::Approx(t).epsilon(1e-12));
    CHECK(r.data.y(5) == 1);
}

TEST_CASE("oversampling equalizes the class counts and deletes nothing") {
    const FeatureMatrix data = blobs(500, 90, 8.0, 3);
    const BalanceResult r = smote_oversample(data, 5, 7);
    int ones = 0;
    for (int i = 0; i < r.data.rows(); ++i) ones += r.data.y(i);
    CHECK(ones == r.data.rows() - ones);
    CHECK(r.data.rows() == 500 + (410 - 90));
    // originals preserved verbatim, in order
    for (int i = 0; i < data.rows(); ++i) {
        CHECK(r.data.X.row(i) == data.X.row(i));
        CHECK(r.data.y(i) == data.y(i));
    }
}

TEST_CASE("synthetic points stay inside the minority bounding box") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
        const FeatureMatrix data = blobs(120, 30, 6.0, seed);
        const BalanceResult r = smote_oversample(data, 5, seed + 100);
        Eigen::VectorXd lo = Eigen::VectorXd::Constant(kNumFeatures, 1e300);
        Eigen::VectorXd hi = Eigen::VectorXd::Constant(kNumFeatures, -1e300);
        for (int i = 0; i < data.rows(); ++i) {
            if (data.y(i) != 1) continue;
            lo = lo.cwiseMin(data.X.row(i).transpose());
            hi = hi.cwiseMax(data.X.row(i).transpose());
        }
        for (int i = static_cast<int>(data.rows()); i < r.data.rows(); ++i) {
            for (int j = 0; j < kNumFeatures; ++j) {
                CHECK(r.data.X(i, j) >= lo(j) - 1e-12);
                CHECK(r.data.X(i, j) <= hi(j) + 1e-12);
            }
        }
    }
}

TEST_CASE("oversampling rejects a one-point minority") {
    const FeatureMatrix data = from_rows({{{0, 0}, 1}, {{5, 0}, 0}, {{6, 0}, 0}});
    CHECK_THROWS_AS(smote_oversample(data, 5, 1), std::invalid_argument);
}

TEST_CASE("tomek links") {
    SUBCASE("single borderline pair") {
        const FeatureMatrix data = from_rows({{{0, 0}, 1}, {{0.1, 0}, 0}, {{5, 5}, 0}});
        const auto links = find_tomek_links(data);
        REQUIRE(links.size() == 1);
        CHECK(links[0] == std::pair<int, int>{0, 1});
    }
    SUBCASE("well-separated classes have no links") {
        const FeatureMatrix data = from_rows(
            {{{0, 0}, 1}, {{0.5, 0}, 1}, {{10, 0}, 0}, {{10.5, 0}, 0}});
        CHECK(find_tomek_links(data).empty());
    }
    SUBCASE("coincident opposite-class points form a link") {
        const FeatureMatrix data = from_rows({{{1, 1}, 1}, {{1, 1}, 0}, {{9, 9}, 0}, {{9.2, 9}, 0}});
        const auto links = find_tomek_links(data);
        REQUIRE(links.size() == 1);
        CHECK(links[0] == std::pair<int, int>{0, 1});
    }
}

TEST_CASE("combined pipeline") {
    SUBCASE("balanced well-separated data passes through unchanged") {
        const FeatureMatrix data = blobs(100, 50, 20.0, 9);
        const BalanceResult r = smote_tomek(data, 5, 1);
        REQUIRE(r.data.rows() == 100);
        // same multiset of rows
        int ones = 0;
        for (int i = 0; i < 100; ++i) ones += r.data.y(i);
        CHECK(ones == 50);
    }
    SUBCASE("80/20 blobs match the brute-force reference exactly") {
        const FeatureMatrix data = blobs(1000, 200, 4.0, 77);
        const BalanceResult got = smote_tomek(data, 5, 1234);
        const FeatureMatrix want = oracles::brute_smote_tomek(data, 5, 1234);
        REQUIRE(got.data.rows() == want.rows());
        for (int i = 0; i < want.rows(); ++i) {
            CHECK(got.data.y(i) == want.y(i));
            for (int j = 0; j < kNumFeatures; ++j) CHECK(got.data.X(i, j) == want.X(i, j));
        }
        // near 1:1 after cleaning
        int ones = 0;
        for (int i = 0; i < got.data.rows(); ++i) ones += got.data.y(i);
        const double ratio = static_cast<double>(ones) / (got.data.rows() - ones);
        CHECK(std::abs(ratio - 1.0) <= 0.01);
    }
    SUBCASE("no minority row is ever removed") {
        const FeatureMatrix data = blobs(300, 60, 2.0, 5);
        const BalanceResult r = smote_tomek(data, 5, 6);
        int minority_out = 0;
        for (int i = 0; i < r.data.rows(); ++i) minority_out += r.data.y(i) == 1;
        CHECK(minority_out >= 240);  // 60 originals + 180 synthetic, none cleaned
    }
    SUBCASE("label swap symmetry") {
        const FeatureMatrix data = blobs(400, 100, 4.0, 8);
        FeatureMatrix flipped = data;
        for (int i = 0; i < flipped.rows(); ++i) flipped.y(i) = 1 - flipped.y(i);
        const BalanceResult a = smote_tomek(data, 5, 21);
        const BalanceResult b = smote_tomek(flipped, 5, 21);
        REQUIRE(a.data.rows() == b.data.rows());
        for (int i = 0; i < a.data.rows(); ++i) {
            CHECK(a.data.y(i) == 1 - b.data.y(i));
            CHECK(a.data.X.row(i) == b.data.X.row(i));
        }
    }
    SUBCASE("input row order does not matter") {
        const FeatureMatrix data = blobs(300, 70, 4.0, 13);
        FeatureMatrix shuffled;
        shuffled.X.resize(data.X.rows(), data.X.cols());
        shuffled.y.resize(data.y.size());
        std::vector<int> perm(data.rows());
        std::iota(perm.begin(), perm.end(), 0);
        Rng rng(555);
        for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
        for (int i = 0; i < data.rows(); ++i) {
            shuffled.X.row(i) = data.X.row(perm[i]);
            shuffled.y(i) = data.y(perm[i]);
        }
        const BalanceResult a = smote_tomek(data, 5, 99);
        const BalanceResult b = smote_tomek(shuffled, 5, 99);
        REQUIRE(a.data.rows() == b.data.rows());
        for (int i = 0; i < a.data.rows(); ++i) {
            CHECK(a.data.y(i) == b.data.y(i));
            for (int j = 0; j < kNumFeatures; ++j) CHECK(a.data.X(i, j) == b.data.X(i, j));
        }
    }
}
