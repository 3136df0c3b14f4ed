// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/synth/evaluate.hpp"

#include <algorithm>
#include <cstdio>

#include "stg/common/error.hpp"
#include "stg/recommend/recommender.hpp"

namespace stg::synth {

std::string_view to_string(AblationConfig config) {
    switch (config) {
        case AblationConfig::metadata_only: return "metadata_only";
        case AblationConfig::plus_title: return "plus_title";
        case AblationConfig::plus_description: return "plus_description";
        case AblationConfig::plus_graph: return "plus_graph";
    }
    return "metadata_only";
}

std::optional<AblationConfig> parse_ablation_config(std::string_view text) {
    for (auto c : all_configs()) {
        if (to_string(c) == text) return c;
    }
    return std::nullopt;
}

const std::vector<AblationConfig>& all_configs() {
    static const std::vector<AblationConfig> configs = {
        AblationConfig::metadata_only, AblationConfig::plus_title,
        AblationConfig::plus_description, AblationConfig::plus_graph};
    return configs;
}

text::IndexFields index_fields(AblationConfig config) {
    switch (config) {
        case AblationConfig::metadata_only: return {true, false, false};
        case AblationConfig::plus_title: return {true, true, false};
        default: return {true, true, true};
    }
}

bool uses_graph(AblationConfig config) { return config == AblationConfig::plus_graph; }

std::optional<std::size_t> first_relevant_rank(const std::vector<std::string>& ranked,
                                               const std::set<std::string>& relevant) {
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (relevant.count(ranked[i]) != 0) return i + 1;
    }
    return std::nullopt;
}

MetricRow compute_metrics(std::string config, const std::vector<std::optional<std::size_t>>& ranks,
                          const std::vector<std::size_t>& ks) {
    MetricRow row;
    row.config = std::move(config);
    row.queries = ranks.size();
    for (auto k : ks) row.accuracy[k] = 0.0;
    if (ranks.empty()) return row;
    double rr = 0.0;
    for (const auto& rank : ranks) {
        if (!rank) continue;
        rr += 1.0 / static_cast<double>(*rank);
        for (auto k : ks) {
            if (*rank <= k) row.accuracy[k] += 1.0;
        }
    }
    const double n = static_cast<double>(ranks.size());
    for (auto& [k, hits] : row.accuracy) hits /= n;
    row.mrr = rr / n;
    return row;
}

std::vector<QueryCase> select_queries(const std::vector<QueryCase>& queries,
                                      std::size_t max_queries) {
    std::map<std::string, std::vector<const QueryCase*>> by_repo;
    for (const auto& q : queries) by_repo[q.repo].push_back(&q);
    for (auto& [repo, list] : by_repo) {
        std::sort(list.begin(), list.end(),
                  [](const QueryCase* a, const QueryCase* b) { return a->query_id < b->query_id; });
    }
    std::vector<QueryCase> out;
    for (std::size_t round = 0; out.size() < max_queries; ++round) {
        bool any = false;
        for (const auto& [repo, list] : by_repo) {
            if (round < list.size() && out.size() < max_queries) {
                out.push_back(*list[round]);
                any = true;
            }
        }
        if (!any) break;
    }
    return out;
}

AblationTable evaluate(const graph::GraphStore& graph, const GroundTruth& truth,
                       const EvalOptions& options) {
    if (options.ks.empty()) throw InvalidArgument("at least one K value is required");
    if (std::any_of(options.ks.begin(), options.ks.end(), [](std::size_t k) { return k == 0; })) {
        throw InvalidArgument("K values must be positive");
    }
    AblationTable table;
    table.ks = options.ks;
    std::sort(table.ks.begin(), table.ks.end());
    table.ks.erase(std::unique(table.ks.begin(), table.ks.end()), table.ks.end());
    const std::size_t max_k = table.ks.back();
    auto queries = select_queries(truth.queries, options.max_queries);
    table.queries = queries.size();

    // Indices depend only on the field set, so configs sharing one reuse it.
    std::map<std::tuple<bool, bool, bool>, std::pair<text::InvertedIndex, text::InvertedIndex>> cache;
    for (auto config : options.configs) {
        auto fields = index_fields(config);
        auto key = std::make_tuple(fields.metadata, fields.title, fields.description);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, std::make_pair(text::build_artifact_index(graph, fields),
                                                   text::build_expert_index(graph, fields)))
                     .first;
        }
        const auto& [artifact_index, expert_index] = it->second;
        std::string name(to_string(config));
        if (artifact_index.doc_count() == 0 || expert_index.doc_count() == 0) {
            table.warnings.push_back(name + ": empty index, metrics reported as zero");
        }

        std::vector<std::optional<std::size_t>> artifact_ranks;
        std::vector<std::optional<std::size_t>> expert_ranks;
        for (const auto& q : queries) {
            recommend::RecommendationQuery rq;
            rq.title = q.title;
            rq.description = q.description;
            rq.requester = graph::NodeId::parse(q.requester);
            rq.k = max_k;
            recommend::RecommendOptions ro;
            ro.use_graph = uses_graph(config);
            const std::string own = q.wi_doc;
            ro.exclude = [&own](const std::string& doc) { return doc == own; };
            auto response = recommend::recommend(rq, artifact_index, expert_index, graph, ro);

            std::vector<std::string> artifacts;
            for (const auto& r : response.artifacts) artifacts.push_back(r.doc_id);
            std::vector<std::string> experts;
            for (const auto& r : response.experts) experts.push_back(r.doc_id);
            artifact_ranks.push_back(first_relevant_rank(
                artifacts, {q.relevant_artifacts.begin(), q.relevant_artifacts.end()}));
            expert_ranks.push_back(first_relevant_rank(
                experts, {q.relevant_experts.begin(), q.relevant_experts.end()}));
        }
        table.artifacts.push_back(compute_metrics(name, artifact_ranks, table.ks));
        table.experts.push_back(compute_metrics(name, expert_ranks, table.ks));
    }
    return table;
}

namespace {

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::string format_tsv(const AblationTable& table) {
    std::string out = "task\tconfig";
    for (auto k : table.ks) out += "\tacc@" + std::to_string(k);
    out += "\tmrr\tqueries\n";
    auto rows = [&](const char* task, const std::vector<MetricRow>& list) {
        for (const auto& row : list) {
            out += std::string(task) + "\t" + row.config;
            for (auto k : table.ks) out += "\t" + fixed(row.accuracy.at(k));
            out += "\t" + fixed(row.mrr) + "\t" + std::to_string(row.queries) + "\n";
        }
    };
    rows("artifact", table.artifacts);
    rows("expert", table.experts);
    return out;
}

std::string format_text(const AblationTable& table) {
    std::string out;
    auto section = [&](const char* title, const std::vector<MetricRow>& list) {
        std::vector<std::string> header = {"Configuration"};
        for (auto k : table.ks) header.push_back("Top-" + std::to_string(k));
        header.push_back("MRR");
        std::vector<std::vector<std::string>> cells = {header};
        for (const auto& row : list) {
            std::vector<std::string> line = {row.config};
            for (auto k : table.ks) line.push_back(fixed(row.accuracy.at(k)));
            line.push_back(fixed(row.mrr));
            cells.push_back(std::move(line));
        }
        std::vector<std::size_t> width(header.size(), 0);
        for (const auto& line : cells) {
            for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
        }
        out += std::string(title) + " (" + std::to_string(table.queries) + " queries)\n";
        for (std::size_t r = 0; r < cells.size(); ++r) {
            for (std::size_t c = 0; c < cells[r].size(); ++c) {
                const auto& cell = cells[r][c];
                std::string pad(width[c] - cell.size(), ' ');
                out += c == 0 ? cell + pad : "  " + pad + cell;
            }
            out += "\n";
            if (r == 0) {
                std::size_t total = 0;
                for (auto w : width) total += w + 2;
                out += std::string(total - 2, '-') + "\n";
            }
        }
    };
    section("Artifact recommendation", table.artifacts);
    out += "\n";
    section("Expert recommendation", table.experts);
    for (const auto& w : table.warnings) out += "warning: " + w + "\n";
    return out;
}

}  // namespace stg::synth
