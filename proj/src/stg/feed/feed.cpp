// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/feed/feed.hpp"

#include <algorithm>
#include <unordered_map>

#include "stg/common/error.hpp"
#include "stg/common/text_io.hpp"

namespace stg::feed {

namespace {

using graph::Direction;
using graph::EdgeType;
using graph::NodeKind;

void require_user(const graph::GraphStore& graph, const NodeId& user) {
    if (user.kind != NodeKind::User) {
        throw InvalidArgument(user.str() + " is not a User node");
    }
    if (!graph.contains(user)) throw NotFoundError("unknown user " + user.str());
}

std::set<NodeId> out_ids(const graph::GraphStore& graph, const NodeId& id, EdgeType type,
                         std::optional<NodeKind> kind = std::nullopt) {
    std::set<NodeId> ids;
    if (!graph.contains(id)) return ids;
    for (const auto& n : graph.neighbors(id, type, Direction::out)) {
        if (!kind || n.id.kind == *kind) ids.insert(n.id);
    }
    return ids;
}

std::set<NodeId> in_ids(const graph::GraphStore& graph, const NodeId& id, EdgeType type,
                        std::optional<NodeKind> kind = std::nullopt) {
    std::set<NodeId> ids;
    if (!graph.contains(id)) return ids;
    for (const auto& n : graph.neighbors(id, type, Direction::in)) {
        if (!kind || n.id.kind == *kind) ids.insert(n.id);
    }
    return ids;
}

bool intersects(const std::set<NodeId>& a, const std::set<NodeId>& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia == *ib) return true;
        if (*ia < *ib) ++ia; else ++ib;
    }
    return false;
}

bool most_recent_less(const FeedItem& a, const FeedItem& b) {
    if (a.timestamp != b.timestamp) return a.timestamp > b.timestamp;
    return a.event_id < b.event_id;
}

// Newest event timestamp per subject and per repository.
std::map<NodeId, Timestamp> latest_activity(const std::vector<ingest::EventRecord>& events) {
    std::map<NodeId, Timestamp> latest;
    auto bump = [&](const NodeId& id, Timestamp ts) {
        auto [it, inserted] = latest.emplace(id, ts);
        if (!inserted && it->second < ts) it->second = ts;
    };
    for (const auto& event : events) {
        if (auto subject = ingest::event_subject(event)) bump(*subject, event.timestamp);
        bump(ingest::repo_node(event.repo), event.timestamp);
    }
    return latest;
}

std::vector<NodeId> by_recency(const std::set<NodeId>& ids,
                               const std::map<NodeId, Timestamp>& latest) {
    std::vector<NodeId> out(ids.begin(), ids.end());
    auto ts = [&](const NodeId& id) -> std::optional<Timestamp> {
        auto it = latest.find(id);
        if (it == latest.end()) return std::nullopt;
        return it->second;
    };
    std::stable_sort(out.begin(), out.end(), [&](const NodeId& a, const NodeId& b) {
        auto ta = ts(a);
        auto tb = ts(b);
        if (ta.has_value() != tb.has_value()) return ta.has_value();
        if (ta && *ta != *tb) return *ta > *tb;
        return a < b;
    });
    return out;
}

}  // namespace

std::string_view to_string(FeedView view) {
    switch (view) {
        case FeedView::most_recent: return "most_recent";
        case FeedView::relevance: return "relevance";
        case FeedView::team_only: return "team_only";
    }
    return "most_recent";
}

std::optional<FeedView> parse_feed_view(std::string_view text) {
    if (text == "most_recent") return FeedView::most_recent;
    if (text == "relevance") return FeedView::relevance;
    if (text == "team_only") return FeedView::team_only;
    return std::nullopt;
}

bool is_followable(NodeKind kind) {
    return kind == NodeKind::Repository || kind == NodeKind::PullRequest ||
           kind == NodeKind::WorkItem;
}

std::set<NodeId> FollowStore::set_follow(const graph::GraphStore& graph, const NodeId& user,
                                         const NodeId& item, bool followed) {
    require_user(graph, user);
    if (!is_followable(item.kind)) {
        throw InvalidArgument("items of kind " + std::string(graph::to_string(item.kind)) +
                              " cannot be followed");
    }
    if (!graph.contains(item)) throw NotFoundError("unknown item " + item.str());
    std::lock_guard lock(mutex_);
    auto& set = follows_[user];
    if (followed) {
        set.insert(item);
    } else {
        set.erase(item);
    }
    std::set<NodeId> result = set;
    if (set.empty()) follows_.erase(user);
    return result;
}

std::set<NodeId> FollowStore::followed(const NodeId& user) const {
    std::lock_guard lock(mutex_);
    auto it = follows_.find(user);
    return it == follows_.end() ? std::set<NodeId>{} : it->second;
}

std::size_t FollowStore::size() const {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (const auto& [user, items] : follows_) n += items.size();
    return n;
}

void FollowStore::save(const std::filesystem::path& path) const {
    std::vector<std::string> lines;
    {
        std::lock_guard lock(mutex_);
        for (const auto& [user, items] : follows_) {
            for (const auto& item : items) {
                lines.push_back(url_encode(user.local_id) + "\t" +
                                std::string(graph::to_string(item.kind)) + "\t" +
                                url_encode(item.local_id));
            }
        }
    }
    write_lines(path, lines);
}

void FollowStore::load(const std::filesystem::path& path) {
    std::map<NodeId, std::set<NodeId>> loaded;
    if (std::filesystem::exists(path)) {
        auto lines = read_lines(path);
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (lines[i].empty()) continue;
            auto fields = split(lines[i], '\t');
            auto kind = fields.size() == 3 ? graph::parse_node_kind(fields[1]) : std::nullopt;
            if (!kind || !is_followable(*kind)) {
                throw ParseError(path.string() + ": bad follow on line " + std::to_string(i + 1));
            }
            loaded[NodeId{NodeKind::User, url_decode(fields[0])}].insert(
                NodeId{*kind, url_decode(fields[2])});
        }
    }
    std::lock_guard lock(mutex_);
    follows_ = std::move(loaded);
}

std::set<NodeId> transitive_reports(const graph::GraphStore& graph, const NodeId& manager,
                                    int depth) {
    std::set<NodeId> reports;
    std::set<NodeId> frontier{manager};
    for (int level = 0; level < depth && !frontier.empty(); ++level) {
        std::set<NodeId> next;
        for (const auto& m : frontier) {
            for (const auto& r : in_ids(graph, m, EdgeType::reports_to)) {
                if (r != manager && reports.insert(r).second) next.insert(r);
            }
        }
        frontier = std::move(next);
    }
    return reports;
}

std::set<NodeId> managers_of(const graph::GraphStore& graph, const NodeId& user) {
    return out_ids(graph, user, EdgeType::reports_to);
}

std::set<NodeId> active_repositories_of(const graph::GraphStore& graph, const NodeId& user) {
    std::set<NodeId> repos;
    for (auto type : {EdgeType::creates, EdgeType::reviews}) {
        for (const auto& pr : out_ids(graph, user, type, NodeKind::PullRequest)) {
            auto owners = in_ids(graph, pr, EdgeType::contains, NodeKind::Repository);
            repos.insert(owners.begin(), owners.end());
        }
    }
    return repos;
}

std::vector<FeedItem> get_feed(const graph::GraphStore& graph,
                               const std::vector<ingest::EventRecord>& events,
                               const std::set<NodeId>& follows, const NodeId& user, FeedView view,
                               std::size_t limit) {
    require_user(graph, user);
    auto repos = active_repositories_of(graph, user);
    auto reports = transitive_reports(graph, user);

    std::set<NodeId> team;
    bool team_view = view == FeedView::team_only;
    std::set<NodeId> own_managers;
    if (team_view) own_managers = managers_of(graph, user);

    std::vector<FeedItem> items;
    for (const auto& event : events) {
        auto subject = ingest::event_subject(event);
        if (!subject) continue;
        auto actor = ingest::event_actor(event);
        auto repo = ingest::repo_node(event.repo);
        if (repos.count(repo) == 0 && reports.count(actor) == 0) continue;
        if (team_view) {
            if (own_managers.empty() || !intersects(own_managers, managers_of(graph, actor))) {
                continue;
            }
        }
        FeedItem item;
        item.event_id = event.event_id;
        item.actor = actor;
        item.subject = *subject;
        item.event_kind = event.kind;
        item.timestamp = event.timestamp;
        item.repo = event.repo;
        item.followed = follows.count(*subject) != 0 || follows.count(repo) != 0;
        items.push_back(std::move(item));
    }

    if (view == FeedView::relevance) {
        auto distances = graph.distances_from(user);
        for (auto& item : items) {
            auto it = distances.find(item.subject);
            if (it != distances.end()) item.proximity = it->second;
        }
        std::sort(items.begin(), items.end(), [](const FeedItem& a, const FeedItem& b) {
            if (a.followed != b.followed) return a.followed;
            if (a.proximity.has_value() != b.proximity.has_value()) return a.proximity.has_value();
            if (a.proximity && *a.proximity != *b.proximity) return *a.proximity < *b.proximity;
            return most_recent_less(a, b);
        });
    } else {
        std::sort(items.begin(), items.end(), most_recent_less);
    }
    if (items.size() > limit) items.resize(limit);
    return items;
}

std::set<NodeId> associations(const graph::GraphStore& graph, const NodeId& user) {
    std::set<NodeId> assoc;
    for (auto type : {EdgeType::creates, EdgeType::reviews}) {
        auto prs = out_ids(graph, user, type, NodeKind::PullRequest);
        assoc.insert(prs.begin(), prs.end());
    }
    for (const auto& pr : out_ids(graph, user, EdgeType::creates, NodeKind::PullRequest)) {
        auto wis = in_ids(graph, pr, EdgeType::linked_to, NodeKind::WorkItem);
        assoc.insert(wis.begin(), wis.end());
    }
    return assoc;
}

std::vector<RelatedPerson> related_people(const graph::GraphStore& graph, const NodeId& user) {
    require_user(graph, user);
    auto mine = associations(graph, user);
    // Candidates are users touching one of the artifacts, found by walking
    // back from each artifact.
    std::set<NodeId> candidates;
    for (const auto& artifact : mine) {
        for (auto type : {EdgeType::creates, EdgeType::reviews}) {
            auto users = in_ids(graph, artifact, type, NodeKind::User);
            candidates.insert(users.begin(), users.end());
        }
        if (artifact.kind == NodeKind::WorkItem) {
            for (const auto& pr : out_ids(graph, artifact, EdgeType::linked_to)) {
                auto authors = in_ids(graph, pr, EdgeType::creates, NodeKind::User);
                candidates.insert(authors.begin(), authors.end());
            }
        }
    }
    candidates.erase(user);
    std::vector<RelatedPerson> related;
    for (const auto& other : candidates) {
        auto theirs = associations(graph, other);
        std::size_t shared = 0;
        for (const auto& id : theirs) shared += mine.count(id);
        if (shared > 0) related.push_back(RelatedPerson{other, shared});
    }
    std::sort(related.begin(), related.end(), [](const RelatedPerson& a, const RelatedPerson& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.user < b.user;
    });
    return related;
}

UserDetails user_details(const graph::GraphStore& graph, const text::InvertedIndex& expert_index,
                         const NodeId& user, std::size_t top) {
    require_user(graph, user);
    UserDetails details;
    details.user = user;
    auto node = graph.node(user);
    auto attr = [&](const char* key) {
        auto it = node->attributes.find(key);
        return it == node->attributes.end() ? std::string{} : it->second;
    };
    details.name = attr("name");
    details.title = attr("title");
    for (const auto& [term, tf] : expert_index.document_terms(user.str())) {
        if (text::arity_of(term) != text::Arity::unigram) continue;
        details.expertise.push_back(
            ExpertiseTerm{term, static_cast<double>(tf) * expert_index.idf(term)});
    }
    std::sort(details.expertise.begin(), details.expertise.end(),
              [](const ExpertiseTerm& a, const ExpertiseTerm& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.term < b.term;
              });
    if (details.expertise.size() > top) details.expertise.resize(top);
    return details;
}

bool is_active_state(std::string_view state) {
    return state != "completed" && state != "abandoned";
}

ActiveItems active_items(const graph::GraphStore& graph,
                         const std::vector<ingest::EventRecord>& events, const NodeId& user) {
    require_user(graph, user);
    auto active = [&](const NodeId& id) {
        auto node = graph.node(id);
        if (!node) return false;
        auto it = node->attributes.find("state");
        return it == node->attributes.end() || is_active_state(it->second);
    };
    std::set<NodeId> prs;
    std::set<NodeId> reviews;
    for (const auto& pr : out_ids(graph, user, EdgeType::creates, NodeKind::PullRequest)) {
        if (active(pr)) prs.insert(pr);
    }
    for (const auto& pr : out_ids(graph, user, EdgeType::reviews, NodeKind::PullRequest)) {
        if (active(pr)) reviews.insert(pr);
    }
    std::set<NodeId> wis;
    for (const auto& pr : prs) {
        auto linked = in_ids(graph, pr, EdgeType::linked_to, NodeKind::WorkItem);
        wis.insert(linked.begin(), linked.end());
    }
    std::set<NodeId> repos;
    for (const auto* group : {&prs, &reviews}) {
        for (const auto& pr : *group) {
            auto owners = in_ids(graph, pr, EdgeType::contains, NodeKind::Repository);
            repos.insert(owners.begin(), owners.end());
        }
    }

    auto latest = latest_activity(events);
    ActiveItems items;
    items.repositories = by_recency(repos, latest);
    items.pull_requests = by_recency(prs, latest);
    items.work_items = by_recency(wis, latest);
    items.code_reviews = by_recency(reviews, latest);
    return items;
}

HomePage homepage(const graph::GraphStore& graph, const std::vector<ingest::EventRecord>& events,
                  const text::InvertedIndex& expert_index, const std::set<NodeId>& follows,
                  const NodeId& user, FeedView view, std::size_t feed_limit) {
    HomePage page;
    page.details = user_details(graph, expert_index, user);
    page.active = active_items(graph, events, user);
    page.feed = get_feed(graph, events, follows, user, view, feed_limit);
    page.related = related_people(graph, user);
    return page;
}

}  // namespace stg::feed
