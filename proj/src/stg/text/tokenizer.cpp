// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/text/tokenizer.hpp"

#include <algorithm>

namespace stg::text {

// Generated from data/stopwords_en.txt at build time.
extern const char* const kStopwordData;

namespace {

enum class CharClass { upper, lower, digit, other_letter, separator };

CharClass classify(unsigned char c) {
    if (c >= 'A' && c <= 'Z') return CharClass::upper;
    if (c >= 'a' && c <= 'z') return CharClass::lower;
    if (c >= '0' && c <= '9') return CharClass::digit;
    if (c >= 0x80) return CharClass::other_letter;
    return CharClass::separator;
}

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_letter(CharClass c) {
    return c == CharClass::upper || c == CharClass::lower || c == CharClass::other_letter;
}

// Splits an alphanumeric run at case and letter/digit boundaries.
void split_identifier(std::string_view run, std::vector<std::string>& out) {
    std::size_t start = 0;
    for (std::size_t i = 1; i < run.size(); ++i) {
        auto prev = classify(static_cast<unsigned char>(run[i - 1]));
        auto cur = classify(static_cast<unsigned char>(run[i]));
        bool boundary = false;
        if (prev == CharClass::lower && cur == CharClass::upper) {
            boundary = true;
        } else if ((prev == CharClass::digit) != (cur == CharClass::digit) &&
                   (is_letter(prev) || is_letter(cur))) {
            boundary = true;
        } else if (prev == CharClass::upper && cur == CharClass::upper && i + 1 < run.size() &&
                   classify(static_cast<unsigned char>(run[i + 1])) == CharClass::lower) {
            // "HTTPServer": the last capital starts the next part.
            boundary = true;
        }
        if (boundary) {
            out.emplace_back(run.substr(start, i - start));
            start = i;
        }
    }
    if (start < run.size()) out.emplace_back(run.substr(start));
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    });
    return s;
}

void emit_word(std::string_view word, std::vector<Token>& out) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < word.size()) {
        while (i < word.size() && classify(static_cast<unsigned char>(word[i])) == CharClass::separator) ++i;
        std::size_t start = i;
        while (i < word.size() && classify(static_cast<unsigned char>(word[i])) != CharClass::separator) ++i;
        if (i > start) split_identifier(word.substr(start, i - start), parts);
    }
    std::vector<std::string> kept;
    for (auto& part : parts) {
        auto lower = lowercase(std::move(part));
        if (!is_stopword(lower)) kept.push_back(std::move(lower));
    }
    for (const auto& u : kept) out.push_back(Token{u, Arity::unigram});
    for (std::size_t j = 0; j + 1 < kept.size(); ++j) {
        out.push_back(Token{kept[j] + " " + kept[j + 1], Arity::bigram});
    }
    for (std::size_t j = 0; j + 2 < kept.size(); ++j) {
        out.push_back(Token{kept[j] + " " + kept[j + 1] + " " + kept[j + 2], Arity::trigram});
    }
}

}  // namespace

std::string_view to_string(Arity arity) {
    switch (arity) {
        case Arity::unigram: return "unigram";
        case Arity::bigram: return "bigram";
        case Arity::trigram: return "trigram";
    }
    return "unigram";
}

Arity arity_of(std::string_view term) {
    auto spaces = std::count(term.begin(), term.end(), ' ');
    if (spaces >= 2) return Arity::trigram;
    if (spaces == 1) return Arity::bigram;
    return Arity::unigram;
}

const std::unordered_set<std::string>& stopwords() {
    static const std::unordered_set<std::string> words = [] {
        std::unordered_set<std::string> set;
        std::string_view data(kStopwordData);
        std::size_t start = 0;
        while (start < data.size()) {
            auto end = data.find('\n', start);
            if (end == std::string_view::npos) end = data.size();
            auto line = data.substr(start, end - start);
            if (!line.empty() && line.front() != '#') set.emplace(line);
            start = end + 1;
        }
        return set;
    }();
    return words;
}

bool is_stopword(std::string_view word) { return stopwords().count(std::string(word)) != 0; }

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) emit_word(text.substr(start, i - start), out);
    }
    return out;
}

TermCounts count_terms(const std::vector<Token>& tokens) {
    TermCounts counts;
    for (const auto& t : tokens) ++counts[t.text];
    return counts;
}

TermCounts tokenize_counts(std::string_view text) { return count_terms(tokenize(text)); }

void add_counts(TermCounts& into, const TermCounts& from) {
    for (const auto& [term, n] : from) into[term] += n;
}

std::uint64_t total_count(const TermCounts& counts) {
    std::uint64_t total = 0;
    for (const auto& [term, n] : counts) total += n;
    return total;
}

}  // namespace stg::text
