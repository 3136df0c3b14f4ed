// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stg/common/text_io.hpp"
#include "stg/common/time.hpp"
#include "stg/graph/graph_store.hpp"

namespace stg::ingest {

enum class EventKind {
    pr_created,
    pr_updated,
    pr_state_changed,
    review_assigned,
    review_commented,
    file_changed,
    wi_created,
    wi_linked,
    wi_parented,
    user_reports_to,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

struct EventRecord {
    std::string event_id;
    std::string repo;
    EventKind kind = EventKind::pr_created;
    Timestamp timestamp;
    Attributes payload;

    bool operator==(const EventRecord&) const = default;
};

// Chronological replay order: (timestamp, event_id).
bool chronological_less(const EventRecord& a, const EventRecord& b);

inline constexpr std::string_view kEventsHeader = "event_id,repo,event_kind,timestamp,payload";

// Payload keys that must be present for each event kind. Node ids in payloads
// are local ids; pull request and work item ids are used verbatim.
//
//   pr_created        pr, author            (title, description, organization, project,
//                                            author_name optional)
//   pr_updated        pr, actor             (title, description optional)
//   pr_state_changed  pr, actor, state
//   review_assigned   pr, reviewer
//   review_commented  pr, actor
//   file_changed      pr, actor, path
//   wi_created        wi, author            (title, description, state optional)
//   wi_linked         wi, pr, actor
//   wi_parented       parent, child
//   user_reports_to   user, manager
const std::vector<std::string_view>& required_payload_keys(EventKind kind);

// Throws ParseError describing the first violated requirement.
void validate_event(const EventRecord& event);

// Line <-> record. parse_event_line throws ParseError on malformed rows.
EventRecord parse_event_line(std::string_view line);
std::string format_event_line(const EventRecord& event);

struct ParsedEventFile {
    std::vector<EventRecord> events;
    std::vector<std::string> errors;  // "line N: reason"
};

// Reads an events.csv file. Malformed rows are reported, not fatal; a missing
// or wrong header is fatal (ParseError). I/O failures throw IoError.
ParsedEventFile read_event_file(const std::filesystem::path& path);
void write_event_file(const std::filesystem::path& path, const std::vector<EventRecord>& events);

// Who performed the event and which artifact it concerns. Events without an
// artifact subject (user_reports_to) return nullopt for the subject.
graph::NodeId event_actor(const EventRecord& event);
std::optional<graph::NodeId> event_subject(const EventRecord& event);

// File classification used for the file_type attribute.
std::string classify_file(std::string_view path);

// Graph mutations implied by a single event. Pure.
std::vector<graph::Mutation> to_mutations(const EventRecord& event);

// Node ids of the kinds that are scoped to a repository.
graph::NodeId pr_node(const std::string& pr_id);
graph::NodeId wi_node(const std::string& wi_id);
graph::NodeId user_node(const std::string& user_id);
graph::NodeId repo_node(const std::string& repo);
graph::NodeId file_node(const std::string& repo, const std::string& path);

}  // namespace stg::ingest
