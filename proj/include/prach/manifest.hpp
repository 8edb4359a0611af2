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
#include <string>
#include <utility>
#include <vector>

namespace prach {

/// FNV-1a over a file's bytes, as a 16-digit hex string. Used to record and
/// verify that reruns with identical inputs reproduce identical artifacts.
std::string hash_file(const std::string& path);
std::string hash_bytes(const void* data, std::size_t len);

/// Reproducibility record written beside produced artifacts: the command,
/// its seed and config, and the content hash of every input and output file.
struct RunManifest {
    std::string command;
    std::string config_path;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> inputs;   // path, hash
    std::vector<std::pair<std::string, std::string>> outputs;  // path, hash

    void add_input(const std::string& path) { inputs.emplace_back(path, hash_file(path)); }
    void add_output(const std::string& path) { outputs.emplace_back(path, hash_file(path)); }

    /// Writes the manifest as JSON (with a timestamp) next to the artifacts.
    void write(const std::string& path) const;
};

}  // namespace prach
