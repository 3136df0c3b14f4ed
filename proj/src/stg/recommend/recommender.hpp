// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stg/graph/graph_store.hpp"
#include "stg/text/inverted_index.hpp"

namespace stg::recommend {

using text::ScoredDoc;

struct RepoContext {
    std::string organization;
    std::string project;
    std::string repository;
};

struct RecommendationQuery {
    std::string title;
    std::string description;
    graph::NodeId requester;
    std::optional<RepoContext> repo_context;  // tokens appended to the query
    std::size_t k = 10;
};

struct RankedResult {
    std::string doc_id;
    text::DocKind doc_kind = text::DocKind::pull_request;
    double relevance = 0.0;
    std::optional<int> proximity;  // nullopt = unreachable
    std::size_t final_rank = 0;

    bool operator==(const RankedResult&) const = default;
};

struct Timings {
    double tokenize_ms = 0.0;
    double search_ms = 0.0;
    double filter_ms = 0.0;
    double rerank_ms = 0.0;
    double total_ms = 0.0;
};

struct RecommendationResponse {
    std::vector<RankedResult> artifacts;
    std::vector<RankedResult> experts;
    Timings timings;
    bool empty_query = false;
    bool cold_requester = false;
};

struct RecommendOptions {
    double percentile = 0.75;
    int relevance_decimals = 2;
    std::size_t candidate_multiplier = 4;
    int max_depth = graph::kDefaultMaxDepth;
    // false: results stay in pure relevance order and proximity is not computed.
    bool use_graph = true;
    // Drop the requester's own artifacts and expert document.
    bool exclude_own = true;
    // Extra per-call exclusion, applied before the candidate cut.
    std::function<bool(const std::string&)> exclude;
};

// Nearest-rank percentile: the ceil(p*n)-th smallest score. Requires a
// non-empty input.
double nearest_rank_percentile(const std::vector<ScoredDoc>& scored, double p);

// Keeps the items whose relevance is >= the nearest-rank percentile, in input
// order.
std::vector<ScoredDoc> threshold_filter(const std::vector<ScoredDoc>& scored,
                                        double percentile = 0.75);

struct RerankOutput {
    std::vector<RankedResult> results;
    bool cold_requester = false;
};

// Sort key: relevance bucketed to `relevance_decimals` (desc), proximity to
// the requester (asc, unreachable last), doc id (asc). Final ranks are 1..n.
RerankOutput rerank(const std::vector<ScoredDoc>& filtered, const graph::NodeId& requester,
                    const graph::GraphStore& graph, const RecommendOptions& options = {});

// Ranks in pure relevance order (exact score desc, doc id asc) without graph
// lookups.
std::vector<RankedResult> rank_by_relevance(const std::vector<ScoredDoc>& filtered);

RecommendationResponse recommend(const RecommendationQuery& query,
                                 const text::InvertedIndex& artifact_index,
                                 const text::InvertedIndex& expert_index,
                                 const graph::GraphStore& graph,
                                 const RecommendOptions& options = {});

}  // namespace stg::recommend
