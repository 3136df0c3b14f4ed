// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stg/text/tokenizer.hpp"

namespace stg::text {

enum class DocKind { pull_request, work_item, expert };

std::string_view to_string(DocKind kind);

// Derived from the doc id, which is the graph node id ("PullRequest:...",
// "WorkItem:...", "User:...").
std::optional<DocKind> doc_kind_of(std::string_view doc_id);

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;

    bool operator==(const Bm25Params&) const = default;
};

struct Posting {
    std::string doc_id;
    std::uint32_t tf = 0;

    bool operator==(const Posting&) const = default;
};

struct ScoredDoc {
    std::string doc_id;
    double relevance = 0.0;

    bool operator==(const ScoredDoc&) const = default;
};

// IDF(n) = ln(1 + (N - n + 0.5) / (n + 0.5)); never negative.
double bm25_idf(std::size_t doc_count, std::size_t doc_frequency);

// One term's contribution for a document:
//   idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |D| / avgdl))
double bm25_term_weight(double idf, double tf, double doc_length, double avgdl,
                        const Bm25Params& params);

// Okapi BM25 over an in-memory inverted index. Documents are bags of terms;
// a document's length is its total term count. Immutable once built and safe
// for concurrent queries.
class InvertedIndex {
public:
    explicit InvertedIndex(Bm25Params params = {});

    // Returns false (and adds nothing) for an empty bag. Throws
    // InvalidArgument on a duplicate doc id.
    bool add_document(const std::string& doc_id, const TermCounts& terms);

    std::size_t doc_count() const { return doc_lengths_.size(); }
    double average_doc_length() const;
    const Bm25Params& params() const { return params_; }
    std::size_t term_count() const { return postings_.size(); }

    bool has_document(const std::string& doc_id) const { return doc_lengths_.count(doc_id) != 0; }
    std::uint64_t doc_length(const std::string& doc_id) const;
    std::vector<std::string> doc_ids() const;
    std::vector<Posting> postings(const std::string& term) const;
    std::size_t doc_frequency(const std::string& term) const;
    double idf(const std::string& term) const;

    // Forward view of one document, rebuilt from the postings.
    TermCounts document_terms(const std::string& doc_id) const;

    // Sum over query terms (with multiplicity) of the BM25 term weight.
    // Zero-score documents are omitted; ties broken by doc id ascending.
    // `exclude` drops documents before the top-n cut.
    std::vector<ScoredDoc> query(const TermCounts& query_terms, std::size_t top_n,
                                 const std::function<bool(const std::string&)>& exclude = {}) const;

    // Header "N=..\tavgdl=..\tk1=..\tb=..", then one line per term:
    // term TAB arity TAB doc_id:tf,doc_id:tf,... (term and doc ids
    // url-encoded, lines sorted by term).
    std::string serialize() const;
    static InvertedIndex deserialize(std::string_view data);
    void save(const std::filesystem::path& path) const;
    static InvertedIndex load(const std::filesystem::path& path);

    bool operator==(const InvertedIndex& other) const;

private:
    Bm25Params params_;
    std::map<std::string, std::map<std::string, std::uint32_t>> postings_;
    std::map<std::string, std::uint64_t> doc_lengths_;
    std::uint64_t total_length_ = 0;
};

}  // namespace stg::text
