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

#include "prach/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prach/dataset.hpp"

namespace prach {

std::string hash_bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot hash missing file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();
    return hash_bytes(bytes.data(), bytes.size());
}

void RunManifest::write(const std::string& path) const {
    nlohmann::ordered_json j;
    j["tool"] = "prachlab";
    j["command"] = command;
    if (!config_path.empty()) j["config"] = config_path;
    j["seed"] = seed;

    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    j["timestamp"] = stamp;

    nlohmann::ordered_json ins = nlohmann::ordered_json::object();
    for (const auto& [p, h] : inputs) ins[p] = h;
    j["inputs"] = std::move(ins);
    nlohmann::ordered_json outs = nlohmann::ordered_json::object();
    for (const auto& [p, h] : outputs) outs[p] = h;
    j["outputs"] = std::move(outs);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(1) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace prach
