// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stg {

using Attributes = std::map<std::string, std::string>;

// Percent-encoding; every byte outside [A-Za-z0-9._~-] is escaped as %XX.
std::string url_encode(std::string_view raw);
std::string url_decode(std::string_view encoded);

// "k1=v1&k2=v2" with url-encoded keys and values, keys in map order.
std::string encode_pairs(const Attributes& attrs);
Attributes decode_pairs(std::string_view encoded);

std::vector<std::string_view> split(std::string_view text, char sep);

// Reads a text file into lines, dropping the trailing LF. Throws IoError.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Writes `lines` joined with LF (one terminating LF per line) via a temporary
// file and rename so readers never observe a partial file.
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace stg
