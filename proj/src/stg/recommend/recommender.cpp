// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/recommend/recommender.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "stg/common/error.hpp"
#include "stg/text/tokenizer.hpp"

namespace stg::recommend {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

long long bucket(double relevance, int decimals) {
    return std::llround(relevance * std::pow(10.0, decimals));
}

std::optional<graph::NodeId> try_parse(const std::string& doc_id) {
    try {
        return graph::NodeId::parse(doc_id);
    } catch (const Error&) {
        return std::nullopt;
    }
}

RankedResult make_result(const ScoredDoc& doc) {
    RankedResult r;
    r.doc_id = doc.doc_id;
    r.doc_kind = text::doc_kind_of(doc.doc_id).value_or(text::DocKind::pull_request);
    r.relevance = doc.relevance;
    return r;
}

}  // namespace

double nearest_rank_percentile(const std::vector<ScoredDoc>& scored, double p) {
    if (scored.empty()) throw InvalidArgument("percentile of an empty list");
    if (!(p > 0.0) || p > 1.0) throw InvalidArgument("percentile must be in (0, 1]");
    std::vector<double> values;
    values.reserve(scored.size());
    for (const auto& doc : scored) values.push_back(doc.relevance);
    std::sort(values.begin(), values.end());
    auto n = static_cast<double>(values.size());
    // Guard against 0.75 * n landing a hair above an integer.
    auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

std::vector<ScoredDoc> threshold_filter(const std::vector<ScoredDoc>& scored, double percentile) {
    if (scored.empty()) return {};
    double threshold = nearest_rank_percentile(scored, percentile);
    std::vector<ScoredDoc> kept;
    for (const auto& doc : scored) {
        if (doc.relevance >= threshold) kept.push_back(doc);
    }
    return kept;
}

std::vector<RankedResult> rank_by_relevance(const std::vector<ScoredDoc>& filtered) {
    std::vector<RankedResult> out;
    out.reserve(filtered.size());
    for (const auto& doc : filtered) out.push_back(make_result(doc));
    std::sort(out.begin(), out.end(), [](const RankedResult& a, const RankedResult& b) {
        if (a.relevance != b.relevance) return a.relevance > b.relevance;
        return a.doc_id < b.doc_id;
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].final_rank = i + 1;
    return out;
}

RerankOutput rerank(const std::vector<ScoredDoc>& filtered, const graph::NodeId& requester,
                    const graph::GraphStore& graph, const RecommendOptions& options) {
    RerankOutput output;
    if (!graph.contains(requester)) {
        output.cold_requester = true;
        output.results = rank_by_relevance(filtered);
        return output;
    }
    auto distances = graph.distances_from(requester, options.max_depth);
    struct Keyed {
        RankedResult result;
        long long bucket;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(filtered.size());
    for (const auto& doc : filtered) {
        Keyed k{make_result(doc), bucket(doc.relevance, options.relevance_decimals)};
        if (auto id = try_parse(doc.doc_id)) {
            auto it = distances.find(*id);
            if (it != distances.end()) k.result.proximity = it->second;
        }
        keyed.push_back(std::move(k));
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.bucket != b.bucket) return a.bucket > b.bucket;
        const auto& pa = a.result.proximity;
        const auto& pb = b.result.proximity;
        if (pa.has_value() != pb.has_value()) return pa.has_value();
        if (pa && *pa != *pb) return *pa < *pb;
        return a.result.doc_id < b.result.doc_id;
    });
    output.results.reserve(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        keyed[i].result.final_rank = i + 1;
        output.results.push_back(std::move(keyed[i].result));
    }
    return output;
}

RecommendationResponse recommend(const RecommendationQuery& query,
                                 const text::InvertedIndex& artifact_index,
                                 const text::InvertedIndex& expert_index,
                                 const graph::GraphStore& graph,
                                 const RecommendOptions& options) {
    if (query.k == 0) throw InvalidArgument("k must be positive");
    RecommendationResponse response;
    auto start = Clock::now();

    auto step = Clock::now();
    std::string text = query.title + "\n" + query.description;
    if (query.repo_context) {
        text += "\n" + query.repo_context->organization + "\n" + query.repo_context->project +
                "\n" + query.repo_context->repository;
    }
    auto terms = text::tokenize_counts(text);
    response.timings.tokenize_ms = elapsed_ms(step);
    if (terms.empty()) {
        response.empty_query = true;
        response.timings.total_ms = elapsed_ms(start);
        return response;
    }

    std::set<std::string> own;
    const std::string requester_doc = query.requester.str();
    if (options.exclude_own && graph.contains(query.requester)) {
        for (const auto& n :
             graph.neighbors(query.requester, graph::EdgeType::creates, graph::Direction::out)) {
            own.insert(n.id.str());
        }
    }
    auto exclude_artifact = [&](const std::string& doc) {
        return own.count(doc) != 0 || (options.exclude && options.exclude(doc));
    };
    auto exclude_expert = [&](const std::string& doc) {
        return (options.exclude_own && doc == requester_doc) ||
               (options.exclude && options.exclude(doc));
    };

    step = Clock::now();
    std::size_t pool = query.k * std::max<std::size_t>(1, options.candidate_multiplier);
    auto artifact_hits = artifact_index.query(terms, pool, exclude_artifact);
    auto expert_hits = expert_index.query(terms, pool, exclude_expert);
    response.timings.search_ms = elapsed_ms(step);

    step = Clock::now();
    artifact_hits = threshold_filter(artifact_hits, options.percentile);
    expert_hits = threshold_filter(expert_hits, options.percentile);
    response.timings.filter_ms = elapsed_ms(step);

    step = Clock::now();
    if (options.use_graph) {
        auto a = rerank(artifact_hits, query.requester, graph, options);
        auto e = rerank(expert_hits, query.requester, graph, options);
        response.artifacts = std::move(a.results);
        response.experts = std::move(e.results);
        response.cold_requester = a.cold_requester || e.cold_requester;
    } else {
        response.artifacts = rank_by_relevance(artifact_hits);
        response.experts = rank_by_relevance(expert_hits);
    }
    response.timings.rerank_ms = elapsed_ms(step);

    if (response.artifacts.size() > query.k) response.artifacts.resize(query.k);
    if (response.experts.size() > query.k) response.experts.resize(query.k);
    response.timings.total_ms = elapsed_ms(start);
    return response;
}

}  // namespace stg::recommend
