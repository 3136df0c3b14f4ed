// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include <doctest.h>

#include "stg/common/error.hpp"
#include "stg/common/text_io.hpp"
#include "stg/common/time.hpp"
#include "support.hpp"

using namespace stg;

TEST_CASE("url encoding round-trips arbitrary bytes") {
    std::string raw;
    for (int c = 0; c < 256; ++c) raw.push_back(static_cast<char>(c));
    auto enc = url_encode(raw);
    CHECK(enc.find('&') == std::string::npos);
    CHECK(enc.find('\t') == std::string::npos);
    CHECK(url_decode(enc) == raw);
    CHECK(url_encode("a-b_c.d~e") == "a-b_c.d~e");
    CHECK(url_encode("a b") == "a%20b");
}

TEST_CASE("pair encoding keeps keys in map order") {
    Attributes attrs{{"title", "Fix a&b"}, {"author", "u=1"}};
    auto enc = encode_pairs(attrs);
    CHECK(enc == "author=u%3D1&title=Fix%20a%26b");
    CHECK(decode_pairs(enc) == attrs);
    CHECK(decode_pairs("").empty());
}

TEST_CASE("split keeps empty fields") {
    auto parts = split("a,,b,", ',');
    REQUIRE(parts.size() == 4);
    CHECK(parts[1].empty());
    CHECK(parts[3].empty());
}

TEST_CASE("timestamps parse and format") {
    auto t = parse_timestamp("2026-01-05T09:30:00Z");
    REQUIRE(t);
    CHECK(format_timestamp(*t) == "2026-01-05T09:30:00Z");
    auto d = parse_timestamp("2026-01-05");
    REQUIRE(d);
    CHECK(format_timestamp(*d) == "2026-01-05T00:00:00Z");
    CHECK_FALSE(parse_timestamp("2026-13-05T00:00:00Z"));
    CHECK_FALSE(parse_timestamp("yesterday"));
    CHECK_FALSE(parse_timestamp("2026-01-05T09:30:00"));
    CHECK_THROWS_AS(require_timestamp("nope", "--now"), ParseError);
    CHECK(days_between(*d, *d + days(4)) == doctest::Approx(4.0));
    CHECK(days_between(*t, *d) < 0);
}

TEST_CASE("write_lines and read_lines round-trip") {
    testing::TempDir dir;
    std::vector<std::string> lines{"one", "", "three\twith tab"};
    write_lines(dir / "f.txt", lines);
    CHECK(read_lines(dir / "f.txt") == lines);
    CHECK(read_file(dir / "f.txt") == "one\n\nthree\twith tab\n");
    CHECK_THROWS_AS(read_lines(dir / "missing.txt"), IoError);
}
