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

#include "prach/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace prach {

void FeatureMatrix::validate() const {
    if (X.rows() != y.size())
        throw std::invalid_argument("FeatureMatrix: feature/label row counts differ");
    if (X.cols() != kNumFeatures)
        throw std::invalid_argument("FeatureMatrix: expected 24 feature columns");
    if (!X.allFinite())
        throw std::invalid_argument("FeatureMatrix: features contain NaN or Inf");
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i) != 0 && y(i) != 1)
            throw std::invalid_argument("FeatureMatrix: labels must be 0 or 1");
}

FeatureMatrix to_features(const Dataset& rows) {
    FeatureMatrix fm;
    fm.X.resize(static_cast<Eigen::Index>(rows.size()), kNumFeatures);
    fm.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < kNumFeatures; ++j) fm.X(static_cast<Eigen::Index>(i), j) = rows[i].features[j];
        fm.y(static_cast<Eigen::Index>(i)) = rows[i].label;
    }
    return fm;
}

std::string dataset_header() {
    std::string h = "event_id,slot_id,bin_index";
    char buf[8];
    for (int j = 0; j < kNumFeatures; ++j) {
        std::snprintf(buf, sizeof(buf), ",p%02d", j);
        h += buf;
    }
    h += ",label";
    return h;
}

void write_dataset(const Dataset& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << dataset_header() << "\n";
    char buf[40];
    for (const auto& row : rows) {
        out << row.event_id << ',' << row.slot_id << ',' << row.bin_index;
        for (double v : row.features) {
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            out << buf;
        }
        out << ',' << row.label << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

Dataset read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);

    std::string line;
    if (!std::getline(in, line)) throw SchemaError(path + ": empty file, expected header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != dataset_header())
        throw SchemaError(path + ": unexpected header (expected \"" + dataset_header() + "\")");

    Dataset rows;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        if (fields.size() != 3 + kNumFeatures + 1)
            throw SchemaError(path + ":" + std::to_string(line_no) + ": expected 28 columns, got " +
                              std::to_string(fields.size()));

        DatasetRow row;
        try {
            std::size_t pos = 0;
            row.event_id = std::stol(fields[0], &pos);
            row.slot_id = std::stol(fields[1]);
            row.bin_index = std::stoi(fields[2]);
            for (int j = 0; j < kNumFeatures; ++j) row.features[j] = std::stod(fields[3 + j]);
            row.label = std::stoi(fields[3 + kNumFeatures]);
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": malformed value");
        }
        if (row.label != 0 && row.label != 1)
            throw ParseError(path + ":" + std::to_string(line_no) + ": label must be 0 or 1");
        for (double v : row.features)
            if (!std::isfinite(v))
                throw ParseError(path + ":" + std::to_string(line_no) + ": non-finite feature value");
        rows.push_back(row);
    }
    return rows;
}

}  // namespace prach
