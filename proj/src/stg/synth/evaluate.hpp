// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

// Top-K accuracy / MRR ablation over the planted ground truth.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stg/graph/graph_store.hpp"
#include "stg/synth/generator.hpp"
#include "stg/text/index_builder.hpp"

namespace stg::synth {

// Cumulative: each config adds to the previous one.
enum class AblationConfig { metadata_only, plus_title, plus_description, plus_graph };

std::string_view to_string(AblationConfig config);
std::optional<AblationConfig> parse_ablation_config(std::string_view text);
const std::vector<AblationConfig>& all_configs();
text::IndexFields index_fields(AblationConfig config);
bool uses_graph(AblationConfig config);

// 1-based rank of the first relevant doc in `ranked`, nullopt if absent.
std::optional<std::size_t> first_relevant_rank(const std::vector<std::string>& ranked,
                                               const std::set<std::string>& relevant);

struct MetricRow {
    std::string config;
    std::map<std::size_t, double> accuracy;  // K -> fraction of queries hit in top K
    double mrr = 0.0;
    std::size_t queries = 0;

    bool operator==(const MetricRow&) const = default;
};

// accuracy@K = #(rank <= K) / n; MRR = mean of 1/rank (0 when absent).
MetricRow compute_metrics(std::string config, const std::vector<std::optional<std::size_t>>& ranks,
                          const std::vector<std::size_t>& ks);

struct EvalOptions {
    std::vector<AblationConfig> configs = all_configs();
    std::vector<std::size_t> ks = {3, 5, 10};
    std::size_t max_queries = 100;
};

struct AblationTable {
    std::vector<std::size_t> ks;
    std::vector<MetricRow> artifacts;
    std::vector<MetricRow> experts;
    std::vector<std::string> warnings;
    std::size_t queries = 0;
};

// Up to max_queries cases, taken round-robin across repositories in query id
// order so every repository contributes.
std::vector<QueryCase> select_queries(const std::vector<QueryCase>& queries,
                                      std::size_t max_queries);

// One recommend() run per query and config with k = max(ks); each K reads a
// prefix of that ranking. The query's own work item is filtered from the
// results.
AblationTable evaluate(const graph::GraphStore& graph, const GroundTruth& truth,
                       const EvalOptions& options = {});

std::string format_tsv(const AblationTable& table);
std::string format_text(const AblationTable& table);

}  // namespace stg::synth
