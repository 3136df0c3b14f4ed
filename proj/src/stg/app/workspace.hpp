// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

// A data directory and everything loaded from it.
//
//   <data_dir>/events/            incoming *.events.csv files
//   <data_dir>/nodes.tsv          graph
//   <data_dir>/edges.tsv
//   <data_dir>/registry.tsv       ingestion bookkeeping
//   <data_dir>/pipeline.tsv
//   <data_dir>/journal.csv
//   <data_dir>/artifact.idx       BM25 indices
//   <data_dir>/expert.idx
//   <data_dir>/follows.tsv

#include <filesystem>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "stg/feed/feed.hpp"
#include "stg/graph/graph_store.hpp"
#include "stg/ingest/pipeline.hpp"
#include "stg/recommend/recommender.hpp"
#include "stg/text/index_builder.hpp"

namespace stg {

class Workspace {
public:
    // Creates the directory layout if missing and loads whatever state exists.
    explicit Workspace(std::filesystem::path data_dir, int retention_days = 3);

    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    const std::filesystem::path& data_dir() const { return data_dir_; }
    std::filesystem::path event_dir() const { return data_dir_ / "events"; }

    // Persists graph, pipeline state and follows. Indices are persisted by
    // build_indices().
    void save() const;

    ingest::IngestReport ingest_bootstrap(const std::vector<std::string>& repos, Timestamp now);
    ingest::IngestReport ingest_incremental(Timestamp now, bool auto_heal);
    std::vector<ingest::GapCheck> heal_check();
    ingest::IngestReport heal(const std::vector<std::string>& repos, Timestamp now);

    // Rebuilds both indices from the current graph and writes them out.
    void build_indices(const text::IndexFields& fields = {});
    bool has_indices() const;

    // Throws Error(state) when the indices have not been built.
    recommend::RecommendationResponse recommend(const recommend::RecommendationQuery& query,
                                                const recommend::RecommendOptions& options = {}) const;

    std::vector<feed::FeedItem> feed(const graph::NodeId& user, feed::FeedView view,
                                     std::size_t limit) const;
    std::set<graph::NodeId> follow(const graph::NodeId& user, const graph::NodeId& item,
                                   bool followed);
    feed::HomePage homepage(const graph::NodeId& user, feed::FeedView view,
                            std::size_t feed_limit) const;

    graph::GraphStore& graph() { return graph_; }
    const graph::GraphStore& graph() const { return graph_; }
    ingest::Pipeline& pipeline() { return pipeline_; }
    const ingest::Pipeline& pipeline() const { return pipeline_; }
    feed::FollowStore& follows() { return follows_; }

    std::shared_ptr<const text::InvertedIndex> artifact_index() const;
    std::shared_ptr<const text::InvertedIndex> expert_index() const;

private:
    void load_indices();

    std::filesystem::path data_dir_;
    graph::GraphStore graph_;
    ingest::Pipeline pipeline_;
    feed::FollowStore follows_;

    // Readers take a snapshot pointer; build_indices swaps them.
    mutable std::mutex index_mutex_;
    std::shared_ptr<const text::InvertedIndex> artifact_;
    std::shared_ptr<const text::InvertedIndex> expert_;
};

}  // namespace stg
