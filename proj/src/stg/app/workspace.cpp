// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/app/workspace.hpp"

#include "stg/common/error.hpp"

namespace stg {

namespace fs = std::filesystem;

Workspace::Workspace(fs::path data_dir, int retention_days)
    : data_dir_(std::move(data_dir)), pipeline_(graph_, data_dir_ / "events") {
    std::error_code ec;
    fs::create_directories(data_dir_ / "events", ec);
    if (ec) throw IoError("cannot create " + (data_dir_ / "events").string() + ": " + ec.message());
    if (fs::exists(data_dir_ / "nodes.tsv") && fs::exists(data_dir_ / "edges.tsv")) {
        graph_.load(data_dir_);
    }
    pipeline_.load(data_dir_);
    pipeline_.set_retention_days(retention_days);
    follows_.load(data_dir_ / "follows.tsv");
    load_indices();
}

void Workspace::load_indices() {
    auto a = data_dir_ / "artifact.idx";
    auto e = data_dir_ / "expert.idx";
    if (!fs::exists(a) || !fs::exists(e)) return;
    auto artifact = std::make_shared<const text::InvertedIndex>(text::InvertedIndex::load(a));
    auto expert = std::make_shared<const text::InvertedIndex>(text::InvertedIndex::load(e));
    std::lock_guard lock(index_mutex_);
    artifact_ = std::move(artifact);
    expert_ = std::move(expert);
}

void Workspace::save() const {
    graph_.save(data_dir_);
    pipeline_.save(data_dir_);
    follows_.save(data_dir_ / "follows.tsv");
}

ingest::IngestReport Workspace::ingest_bootstrap(const std::vector<std::string>& repos,
                                                 Timestamp now) {
    pipeline_.discover();
    return pipeline_.run_bootstrap(repos, now);
}

ingest::IngestReport Workspace::ingest_incremental(Timestamp now, bool auto_heal) {
    pipeline_.discover();
    return auto_heal ? pipeline_.run_incremental_and_heal(now) : pipeline_.run_incremental(now);
}

std::vector<ingest::GapCheck> Workspace::heal_check() {
    pipeline_.discover();
    return pipeline_.check_gaps();
}

ingest::IngestReport Workspace::heal(const std::vector<std::string>& repos, Timestamp now) {
    std::vector<std::string> targets = repos;
    if (targets.empty()) {
        auto locked = pipeline_.state().healing_lock;
        targets.assign(locked.begin(), locked.end());
    }
    if (targets.empty()) return {};
    return pipeline_.heal(targets, now);
}

void Workspace::build_indices(const text::IndexFields& fields) {
    auto artifact = std::make_shared<const text::InvertedIndex>(
        text::build_artifact_index(graph_, fields));
    auto expert = std::make_shared<const text::InvertedIndex>(
        text::build_expert_index(graph_, fields));
    artifact->save(data_dir_ / "artifact.idx");
    expert->save(data_dir_ / "expert.idx");
    std::lock_guard lock(index_mutex_);
    artifact_ = std::move(artifact);
    expert_ = std::move(expert);
}

bool Workspace::has_indices() const {
    std::lock_guard lock(index_mutex_);
    return artifact_ && expert_;
}

std::shared_ptr<const text::InvertedIndex> Workspace::artifact_index() const {
    std::lock_guard lock(index_mutex_);
    if (!artifact_) throw Error(ErrorCode::state, "indices not built; run 'index build' first");
    return artifact_;
}

std::shared_ptr<const text::InvertedIndex> Workspace::expert_index() const {
    std::lock_guard lock(index_mutex_);
    if (!expert_) throw Error(ErrorCode::state, "indices not built; run 'index build' first");
    return expert_;
}

recommend::RecommendationResponse Workspace::recommend(
    const recommend::RecommendationQuery& query, const recommend::RecommendOptions& options) const {
    auto artifact = artifact_index();
    auto expert = expert_index();
    return recommend::recommend(query, *artifact, *expert, graph_, options);
}

std::vector<feed::FeedItem> Workspace::feed(const graph::NodeId& user, feed::FeedView view,
                                            std::size_t limit) const {
    return feed::get_feed(graph_, pipeline_.journal_events(), follows_.followed(user), user, view,
                          limit);
}

std::set<graph::NodeId> Workspace::follow(const graph::NodeId& user, const graph::NodeId& item,
                                          bool followed) {
    auto result = follows_.set_follow(graph_, user, item, followed);
    follows_.save(data_dir_ / "follows.tsv");
    return result;
}

feed::HomePage Workspace::homepage(const graph::NodeId& user, feed::FeedView view,
                                   std::size_t feed_limit) const {
    // Without indices the page still renders, just without expertise terms.
    static const text::InvertedIndex kEmpty;
    std::shared_ptr<const text::InvertedIndex> expert;
    {
        std::lock_guard lock(index_mutex_);
        expert = expert_;
    }
    return feed::homepage(graph_, pipeline_.journal_events(), expert ? *expert : kEmpty,
                          follows_.followed(user), user, view, feed_limit);
}

}  // namespace stg
