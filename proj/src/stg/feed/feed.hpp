// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

// Developer homepage: activity feed with three views, follow sets, active
// items, related people and extracted expertise.
//
// The feed is computed from the ingestion journal. A user's candidate events
// are the artifact events of every repository containing a pull request they
// created or review, plus every artifact event performed by one of their
// reports (reports_to in-edges, up to two levels).

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stg/graph/graph_store.hpp"
#include "stg/ingest/event.hpp"
#include "stg/text/inverted_index.hpp"

namespace stg::feed {

using graph::NodeId;

enum class FeedView { most_recent, relevance, team_only };

std::string_view to_string(FeedView view);
std::optional<FeedView> parse_feed_view(std::string_view text);

inline constexpr int kReportDepth = 2;

struct FeedItem {
    std::string event_id;
    NodeId actor;
    NodeId subject;
    ingest::EventKind event_kind = ingest::EventKind::pr_created;
    Timestamp timestamp;
    std::string repo;
    bool followed = false;
    std::optional<int> proximity;  // filled for the relevance view only

    bool operator==(const FeedItem&) const = default;
};

bool is_followable(graph::NodeKind kind);

// Per-user follow sets. Thread safe.
class FollowStore {
public:
    // Validates that user and item exist and that the item kind is followable.
    // Idempotent. Returns the user's follow set after the update.
    std::set<NodeId> set_follow(const graph::GraphStore& graph, const NodeId& user,
                                const NodeId& item, bool followed);
    std::set<NodeId> followed(const NodeId& user) const;
    std::size_t size() const;

    // follows.tsv: user TAB item-kind TAB item-id, sorted.
    void save(const std::filesystem::path& path) const;
    void load(const std::filesystem::path& path);

private:
    mutable std::mutex mutex_;
    std::map<NodeId, std::set<NodeId>> follows_;
};

// Users reporting to `manager`, directly or through one intermediate level.
std::set<NodeId> transitive_reports(const graph::GraphStore& graph, const NodeId& manager,
                                    int depth = kReportDepth);
std::set<NodeId> managers_of(const graph::GraphStore& graph, const NodeId& user);

// Repositories containing a pull request the user created or reviews.
std::set<NodeId> active_repositories_of(const graph::GraphStore& graph, const NodeId& user);

// Throws NotFoundError for an unknown user.
std::vector<FeedItem> get_feed(const graph::GraphStore& graph,
                               const std::vector<ingest::EventRecord>& events,
                               const std::set<NodeId>& follows, const NodeId& user, FeedView view,
                               std::size_t limit);

struct RelatedPerson {
    NodeId user;
    std::size_t count = 0;

    bool operator==(const RelatedPerson&) const = default;
};

// Artifacts a user is associated with: pull requests they created or review,
// plus work items linked to pull requests they created.
std::set<NodeId> associations(const graph::GraphStore& graph, const NodeId& user);

// Count = shared associations; sorted by count desc, then user id.
std::vector<RelatedPerson> related_people(const graph::GraphStore& graph, const NodeId& user);

struct ExpertiseTerm {
    std::string term;
    double score = 0.0;
};

struct UserDetails {
    NodeId user;
    std::string name;
    std::string title;
    std::vector<ExpertiseTerm> expertise;
};

inline constexpr std::size_t kExpertiseTerms = 5;

UserDetails user_details(const graph::GraphStore& graph, const text::InvertedIndex& expert_index,
                         const NodeId& user, std::size_t top = kExpertiseTerms);

struct ActiveItems {
    std::vector<NodeId> repositories;
    std::vector<NodeId> pull_requests;
    std::vector<NodeId> work_items;
    std::vector<NodeId> code_reviews;
};

bool is_active_state(std::string_view state);

ActiveItems active_items(const graph::GraphStore& graph,
                         const std::vector<ingest::EventRecord>& events, const NodeId& user);

struct HomePage {
    UserDetails details;
    ActiveItems active;
    std::vector<FeedItem> feed;
    std::vector<RelatedPerson> related;
};

HomePage homepage(const graph::GraphStore& graph, const std::vector<ingest::EventRecord>& events,
                  const text::InvertedIndex& expert_index, const std::set<NodeId>& follows,
                  const NodeId& user, FeedView view, std::size_t feed_limit);

}  // namespace stg::feed
