// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace stg {

using Timestamp = std::chrono::sys_seconds;

// Accepts "YYYY-MM-DDTHH:MM:SSZ" and "YYYY-MM-DD" (midnight UTC).
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Throws ParseError naming `what` when `text` is not a timestamp.
Timestamp require_timestamp(std::string_view text, std::string_view what = "timestamp");

// Always "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp ts);

inline constexpr std::chrono::seconds days(long n) { return std::chrono::seconds{n * 86400L}; }

// Difference in fractional days, (later - earlier).
double days_between(Timestamp earlier, Timestamp later);

}  // namespace stg
