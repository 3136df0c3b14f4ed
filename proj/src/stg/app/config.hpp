// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace stg {

// Shared by the CLI and the HTTP service. File format: one `key = value` per
// line, `#` starts a comment, values may be double-quoted.
struct Config {
    std::filesystem::path data_dir = ".";
    std::string host = "127.0.0.1";
    std::uint16_t port = 8080;
    std::size_t k = 10;
    int retention_days = 3;
    std::size_t feed_limit = 50;
    std::size_t telemetry_queue = 4096;
};

// Unknown keys and malformed values throw ParseError naming the line.
Config parse_config(std::string_view text, Config base = {});
Config load_config(const std::filesystem::path& path, Config base = {});

}  // namespace stg
