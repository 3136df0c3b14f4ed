// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/common/time.hpp"

#include <cstdio>

#include "stg/common/error.hpp"

namespace stg {

namespace {

bool read_digits(std::string_view text, std::size_t pos, std::size_t count, int& out) {
    if (pos + count > text.size()) return false;
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (!read_digits(text, 0, 4, y) || text.size() < 10 || text[4] != '-' ||
        !read_digits(text, 5, 2, mo) || text[7] != '-' || !read_digits(text, 8, 2, d)) {
        return std::nullopt;
    }
    if (text.size() == 10) {
        // date only
    } else if (text.size() == 20 && text[10] == 'T' && text[13] == ':' && text[16] == ':' &&
               text[19] == 'Z' && read_digits(text, 11, 2, h) && read_digits(text, 14, 2, mi) &&
               read_digits(text, 17, 2, s)) {
        if (h > 23 || mi > 59 || s > 59) return std::nullopt;
    } else {
        return std::nullopt;
    }
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

Timestamp require_timestamp(std::string_view text, std::string_view what) {
    auto ts = parse_timestamp(text);
    if (!ts) {
        throw ParseError("invalid " + std::string(what) + " '" + std::string(text) +
                         "' (expected YYYY-MM-DDTHH:MM:SSZ)");
    }
    return *ts;
}

std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    auto day_point = std::chrono::floor<std::chrono::days>(ts);
    year_month_day ymd{day_point};
    hh_mm_ss hms{ts - day_point};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

double days_between(Timestamp earlier, Timestamp later) {
    return static_cast<double>((later - earlier).count()) / 86400.0;
}

}  // namespace stg
