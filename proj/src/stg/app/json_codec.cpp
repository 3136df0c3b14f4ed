// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/app/json_codec.hpp"

#include "stg/common/error.hpp"
#include "stg/common/time.hpp"

namespace stg::codec {

graph::NodeId parse_node_ref(std::string_view text) {
    if (text.empty()) throw InvalidArgument("empty node id");
    if (text.find(':') == std::string_view::npos) {
        return graph::NodeId{graph::NodeKind::User, std::string(text)};
    }
    return graph::NodeId::parse(text);
}

json to_json(const recommend::RankedResult& r) {
    return json{{"doc_id", r.doc_id},
                {"doc_kind", text::to_string(r.doc_kind)},
                {"relevance", r.relevance},
                {"proximity", r.proximity ? json(*r.proximity) : json(nullptr)},
                {"final_rank", r.final_rank}};
}

json to_json(const recommend::RecommendationResponse& response, bool include_timings) {
    json out;
    out["artifacts"] = json::array();
    for (const auto& r : response.artifacts) out["artifacts"].push_back(to_json(r));
    out["experts"] = json::array();
    for (const auto& r : response.experts) out["experts"].push_back(to_json(r));
    out["flags"] = {{"empty_query", response.empty_query},
                    {"cold_requester", response.cold_requester}};
    if (include_timings) {
        const auto& t = response.timings;
        out["timings_ms"] = {{"tokenize", t.tokenize_ms}, {"search", t.search_ms},
                             {"filter", t.filter_ms},     {"rerank", t.rerank_ms},
                             {"total", t.total_ms}};
    }
    return out;
}

json to_json(const feed::FeedItem& item) {
    return json{{"event_id", item.event_id},
                {"actor", item.actor.str()},
                {"subject", item.subject.str()},
                {"event_kind", ingest::to_string(item.event_kind)},
                {"timestamp", format_timestamp(item.timestamp)},
                {"repo", item.repo},
                {"followed", item.followed},
                {"proximity", item.proximity ? json(*item.proximity) : json(nullptr)}};
}

json to_json(const std::vector<feed::FeedItem>& items) {
    json out = json::array();
    for (const auto& item : items) out.push_back(to_json(item));
    return out;
}

json to_json(const feed::UserDetails& details) {
    json terms = json::array();
    for (const auto& t : details.expertise) terms.push_back({{"term", t.term}, {"score", t.score}});
    return json{{"user", details.user.str()},
                {"name", details.name},
                {"title", details.title},
                {"expertise", std::move(terms)}};
}

namespace {

json id_list(const std::vector<graph::NodeId>& ids) {
    json out = json::array();
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

}  // namespace

json to_json(const feed::ActiveItems& items) {
    return json{{"repositories", id_list(items.repositories)},
                {"pull_requests", id_list(items.pull_requests)},
                {"work_items", id_list(items.work_items)},
                {"code_reviews", id_list(items.code_reviews)}};
}

json to_json(const std::vector<feed::RelatedPerson>& people) {
    json out = json::array();
    for (const auto& p : people) out.push_back({{"user", p.user.str()}, {"count", p.count}});
    return out;
}

json to_json(const feed::HomePage& page) {
    return json{{"user_details", to_json(page.details)},
                {"active", to_json(page.active)},
                {"feed", to_json(page.feed)},
                {"related_people", to_json(page.related)}};
}

json to_json(const std::set<graph::NodeId>& ids) {
    json out = json::array();
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

json to_json(const ingest::GapCheck& gap) {
    return json{{"file", gap.file_name},
                {"repo", gap.repo},
                {"oldest_event", gap.oldest_event ? json(format_timestamp(*gap.oldest_event))
                                                  : json(nullptr)},
                {"last_run", gap.last_run ? json(format_timestamp(*gap.last_run)) : json(nullptr)},
                {"days", gap.days},
                {"gap", gap.gap}};
}

json to_json(const std::vector<ingest::GapCheck>& gaps) {
    json out = json::array();
    for (const auto& g : gaps) out.push_back(to_json(g));
    return out;
}

json to_json(const ingest::IngestReport& report) {
    return json{{"files_processed", report.files_processed},
                {"events_applied", report.events_applied},
                {"errors", report.errors},
                {"skipped_files", report.skipped_files},
                {"gaps", to_json(report.gaps)},
                {"rebuilt_repos", report.rebuilt_repos},
                {"healed_repos", report.healed_repos},
                {"failed_repos", report.failed_repos}};
}

json to_json(const graph::GraphStats& stats) {
    json nodes = json::object();
    for (const auto& [kind, n] : stats.node_count_by_kind) nodes[std::string(graph::to_string(kind))] = n;
    json edges = json::object();
    for (const auto& [type, n] : stats.edge_count_by_type) edges[std::string(graph::to_string(type))] = n;
    return json{{"nodes", std::move(nodes)},
                {"edges", std::move(edges)},
                {"total_nodes", stats.total_nodes()},
                {"total_edges", stats.total_edges()}};
}

}  // namespace stg::codec
