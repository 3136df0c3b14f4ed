// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/text/inverted_index.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unordered_map>

#include "stg/common/error.hpp"
#include "stg/common/text_io.hpp"

namespace stg::text {

namespace {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

double parse_double(std::string_view text, std::string_view what) {
    std::string copy(text);
    char* end = nullptr;
    double value = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size()) {
        throw ParseError("index header: bad " + std::string(what) + " '" + copy + "'");
    }
    return value;
}

std::string_view header_value(std::string_view field, std::string_view key) {
    if (field.size() <= key.size() || field.substr(0, key.size()) != key ||
        field[key.size()] != '=') {
        throw ParseError("index header: expected " + std::string(key) + "=..., got '" +
                         std::string(field) + "'");
    }
    return field.substr(key.size() + 1);
}

}  // namespace

std::string_view to_string(DocKind kind) {
    switch (kind) {
        case DocKind::pull_request: return "pull_request";
        case DocKind::work_item: return "work_item";
        case DocKind::expert: return "expert";
    }
    return "pull_request";
}

std::optional<DocKind> doc_kind_of(std::string_view doc_id) {
    if (doc_id.rfind("PullRequest:", 0) == 0) return DocKind::pull_request;
    if (doc_id.rfind("WorkItem:", 0) == 0) return DocKind::work_item;
    if (doc_id.rfind("User:", 0) == 0) return DocKind::expert;
    return std::nullopt;
}

double bm25_idf(std::size_t doc_count, std::size_t doc_frequency) {
    double n = static_cast<double>(doc_frequency);
    return std::log(1.0 + (static_cast<double>(doc_count) - n + 0.5) / (n + 0.5));
}

double bm25_term_weight(double idf, double tf, double doc_length, double avgdl,
                        const Bm25Params& params) {
    double norm = 1.0 - params.b + params.b * doc_length / avgdl;
    return idf * (tf * (params.k1 + 1.0)) / (tf + params.k1 * norm);
}

InvertedIndex::InvertedIndex(Bm25Params params) : params_(params) {
    if (!(params_.k1 > 0.0) || !(params_.b > 0.0)) {
        throw InvalidArgument("BM25 parameters k1 and b must be positive");
    }
}

bool InvertedIndex::add_document(const std::string& doc_id, const TermCounts& terms) {
    if (doc_lengths_.count(doc_id) != 0) {
        throw InvalidArgument("duplicate document id " + doc_id);
    }
    std::uint64_t length = 0;
    for (const auto& [term, tf] : terms) length += tf;
    if (length == 0) return false;
    for (const auto& [term, tf] : terms) {
        if (tf > 0) postings_[term][doc_id] = tf;
    }
    doc_lengths_[doc_id] = length;
    total_length_ += length;
    return true;
}

double InvertedIndex::average_doc_length() const {
    if (doc_lengths_.empty()) return 0.0;
    return static_cast<double>(total_length_) / static_cast<double>(doc_lengths_.size());
}

std::uint64_t InvertedIndex::doc_length(const std::string& doc_id) const {
    auto it = doc_lengths_.find(doc_id);
    return it == doc_lengths_.end() ? 0 : it->second;
}

std::vector<std::string> InvertedIndex::doc_ids() const {
    std::vector<std::string> ids;
    ids.reserve(doc_lengths_.size());
    for (const auto& [id, len] : doc_lengths_) ids.push_back(id);
    return ids;
}

std::vector<Posting> InvertedIndex::postings(const std::string& term) const {
    std::vector<Posting> out;
    auto it = postings_.find(term);
    if (it == postings_.end()) return out;
    for (const auto& [doc, tf] : it->second) out.push_back(Posting{doc, tf});
    return out;
}

std::size_t InvertedIndex::doc_frequency(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? 0 : it->second.size();
}

double InvertedIndex::idf(const std::string& term) const {
    return bm25_idf(doc_count(), doc_frequency(term));
}

TermCounts InvertedIndex::document_terms(const std::string& doc_id) const {
    TermCounts terms;
    for (const auto& [term, docs] : postings_) {
        auto it = docs.find(doc_id);
        if (it != docs.end()) terms.emplace(term, it->second);
    }
    return terms;
}

std::vector<ScoredDoc> InvertedIndex::query(
    const TermCounts& query_terms, std::size_t top_n,
    const std::function<bool(const std::string&)>& exclude) const {
    if (query_terms.empty() || top_n == 0 || doc_lengths_.empty()) return {};
    const double avgdl = average_doc_length();
    std::unordered_map<std::string_view, double> scores;
    for (const auto& [term, multiplicity] : query_terms) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        double term_idf = bm25_idf(doc_count(), it->second.size());
        for (const auto& [doc, tf] : it->second) {
            double dl = static_cast<double>(doc_lengths_.at(doc));
            scores[doc] += static_cast<double>(multiplicity) *
                           bm25_term_weight(term_idf, tf, dl, avgdl, params_);
        }
    }
    std::vector<ScoredDoc> ranked;
    ranked.reserve(scores.size());
    for (const auto& [doc, score] : scores) {
        if (score <= 0.0) continue;
        std::string id(doc);
        if (exclude && exclude(id)) continue;
        ranked.push_back(ScoredDoc{std::move(id), score});
    }
    auto order = [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.relevance != b.relevance) return a.relevance > b.relevance;
        return a.doc_id < b.doc_id;
    };
    if (ranked.size() > top_n) {
        std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(top_n),
                          ranked.end(), order);
        ranked.resize(top_n);
    } else {
        std::sort(ranked.begin(), ranked.end(), order);
    }
    return ranked;
}

std::string InvertedIndex::serialize() const {
    std::string out = "N=" + std::to_string(doc_count()) + "\tavgdl=" +
                      format_double(average_doc_length()) + "\tk1=" + format_double(params_.k1) +
                      "\tb=" + format_double(params_.b) + "\n";
    std::vector<std::string> lines;
    lines.reserve(postings_.size());
    for (const auto& [term, docs] : postings_) {
        std::string line = url_encode(term);
        line += '\t';
        line += to_string(arity_of(term));
        line += '\t';
        bool first = true;
        for (const auto& [doc, tf] : docs) {
            if (!first) line += ',';
            first = false;
            line += url_encode(doc);
            line += ':';
            line += std::to_string(tf);
        }
        lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& line : lines) {
        out += line;
        out += '\n';
    }
    return out;
}

InvertedIndex InvertedIndex::deserialize(std::string_view data) {
    auto lines = split(data, '\n');
    if (lines.empty() || lines.front().empty()) throw ParseError("index: missing header line");
    auto header = split(lines.front(), '\t');
    if (header.size() != 4) throw ParseError("index header: expected 4 fields");
    std::uint64_t n = 0;
    auto n_text = header_value(header[0], "N");
    auto [ptr, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
    if (ec != std::errc{} || ptr != n_text.data() + n_text.size()) {
        throw ParseError("index header: bad N");
    }
    double avgdl = parse_double(header_value(header[1], "avgdl"), "avgdl");
    Bm25Params params{parse_double(header_value(header[2], "k1"), "k1"),
                      parse_double(header_value(header[3], "b"), "b")};

    InvertedIndex index(params);
    std::map<std::string, TermCounts> docs;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = split(lines[i], '\t');
        if (fields.size() != 3) throw ParseError("index: expected 3 fields on line " + std::to_string(i + 1));
        auto term = url_decode(fields[0]);
        if (to_string(arity_of(term)) != fields[1]) {
            throw ParseError("index: arity mismatch for term '" + term + "'");
        }
        for (auto entry : split(fields[2], ',')) {
            auto colon = entry.rfind(':');
            if (colon == std::string_view::npos) throw ParseError("index: bad posting '" + std::string(entry) + "'");
            std::uint32_t tf = 0;
            auto tf_text = entry.substr(colon + 1);
            auto [p, e] = std::from_chars(tf_text.data(), tf_text.data() + tf_text.size(), tf);
            if (e != std::errc{} || p != tf_text.data() + tf_text.size() || tf == 0) {
                throw ParseError("index: bad term frequency in '" + std::string(entry) + "'");
            }
            docs[url_decode(entry.substr(0, colon))][term] = tf;
        }
    }
    for (const auto& [doc, terms] : docs) index.add_document(doc, terms);
    if (index.doc_count() != n) {
        throw ParseError("index: header N=" + std::to_string(n) + " but postings reference " +
                         std::to_string(index.doc_count()) + " documents");
    }
    if (std::fabs(index.average_doc_length() - avgdl) > 1e-9 * std::max(1.0, avgdl)) {
        throw ParseError("index: header avgdl does not match postings");
    }
    return index;
}

void InvertedIndex::save(const std::filesystem::path& path) const { write_file(path, serialize()); }

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
    return deserialize(read_file(path));
}

bool InvertedIndex::operator==(const InvertedIndex& other) const {
    return params_ == other.params_ && postings_ == other.postings_ &&
           doc_lengths_ == other.doc_lengths_;
}

}  // namespace stg::text
