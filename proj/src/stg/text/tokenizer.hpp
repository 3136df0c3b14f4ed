// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace stg::text {

enum class Arity : std::uint8_t { unigram = 1, bigram = 2, trigram = 3 };

std::string_view to_string(Arity arity);

struct Token {
    std::string text;
    Arity arity = Arity::unigram;

    auto operator<=>(const Token&) const = default;
    bool operator==(const Token&) const = default;
};

// Token text -> multiplicity. The arity of a term is implied by its number of
// spaces, see arity_of().
using TermCounts = std::map<std::string, std::uint32_t>;

Arity arity_of(std::string_view term);

const std::unordered_set<std::string>& stopwords();
bool is_stopword(std::string_view word);

// Source-code aware tokenizer.
//
//   1. split on whitespace into words
//   2. split each word on non-alphanumeric bytes
//   3. split camelCase / PascalCase / letter-digit boundaries
//      ("HTTPServer2Go" -> HTTP, Server, 2, Go)
//   4. lowercase ASCII, drop stopwords
//   5. emit unigrams, then bigrams and trigrams over the surviving unigrams of
//      the same whitespace-delimited word
//
// Bytes >= 0x80 are kept as letters so UTF-8 text passes through intact.
std::vector<Token> tokenize(std::string_view text);

TermCounts count_terms(const std::vector<Token>& tokens);
TermCounts tokenize_counts(std::string_view text);

// Multiset union (adds multiplicities).
void add_counts(TermCounts& into, const TermCounts& from);
std::uint64_t total_count(const TermCounts& counts);

}  // namespace stg::text
