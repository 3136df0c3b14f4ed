// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/app/config.hpp"

#include <charconv>

#include "stg/common/error.hpp"
#include "stg/common/text_io.hpp"

namespace stg {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view value, std::size_t line, std::string_view key, T min, T max) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || out < min || out > max) {
        throw ParseError("config line " + std::to_string(line) + ": bad value for " +
                         std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

}  // namespace

Config parse_config(std::string_view text, Config base) {
    Config cfg = std::move(base);
    auto lines = split(text, '\n');
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        std::size_t n = i + 1;
        if (eq == std::string_view::npos) {
            throw ParseError("config line " + std::to_string(n) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        if (key == "data_dir") {
            cfg.data_dir = std::string(value);
        } else if (key == "host") {
            cfg.host = std::string(value);
        } else if (key == "port") {
            cfg.port = parse_number<std::uint16_t>(value, n, key, 0, 65535);
        } else if (key == "k") {
            cfg.k = parse_number<std::size_t>(value, n, key, 1, 100000);
        } else if (key == "retention_days") {
            cfg.retention_days = parse_number<int>(value, n, key, 1, 3650);
        } else if (key == "feed_limit") {
            cfg.feed_limit = parse_number<std::size_t>(value, n, key, 1, 100000);
        } else if (key == "telemetry_queue") {
            cfg.telemetry_queue = parse_number<std::size_t>(value, n, key, 1, 1 << 24);
        } else {
            throw ParseError("config line " + std::to_string(n) + ": unknown key '" +
                             std::string(key) + "'");
        }
    }
    return cfg;
}

Config load_config(const std::filesystem::path& path, Config base) {
    if (!std::filesystem::exists(path)) throw IoError("config file not found: " + path.string());
    return parse_config(read_file(path), std::move(base));
}

}  // namespace stg
