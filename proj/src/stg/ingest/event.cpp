// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/ingest/event.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "stg/common/error.hpp"

namespace stg::ingest {

namespace {

using graph::EdgeType;
using graph::GraphEdge;
using graph::GraphNode;
using graph::Mutation;
using graph::NodeId;
using graph::NodeKind;
using graph::UpsertEdge;
using graph::UpsertNode;

constexpr std::array<std::string_view, 10> kEventKindNames = {
    "pr_created",   "pr_updated",       "pr_state_changed", "review_assigned",
    "review_commented", "file_changed", "wi_created",       "wi_linked",
    "wi_parented",  "user_reports_to"};

const std::string& get(const EventRecord& e, const std::string& key) {
    return e.payload.at(key);
}

std::optional<std::string> get_opt(const EventRecord& e, const std::string& key) {
    auto it = e.payload.find(key);
    if (it == e.payload.end()) return std::nullopt;
    return it->second;
}

void copy_if_present(const EventRecord& e, Attributes& into,
                     std::initializer_list<std::string_view> keys) {
    for (auto key : keys) {
        auto it = e.payload.find(std::string(key));
        if (it != e.payload.end()) into[it->first] = it->second;
    }
}

Attributes at(const EventRecord& e) { return {{"timestamp", format_timestamp(e.timestamp)}}; }

Mutation node(NodeId id, Attributes attrs = {}) {
    return UpsertNode{GraphNode{std::move(id), std::move(attrs)}};
}

Mutation edge(NodeId src, EdgeType type, NodeId dst, Attributes attrs = {}) {
    return UpsertEdge{GraphEdge{std::move(src), std::move(dst), type, std::move(attrs)}};
}

}  // namespace

std::string_view to_string(EventKind kind) { return kEventKindNames[static_cast<std::size_t>(kind)]; }

std::optional<EventKind> parse_event_kind(std::string_view text) {
    for (std::size_t i = 0; i < kEventKindNames.size(); ++i) {
        if (kEventKindNames[i] == text) return static_cast<EventKind>(i);
    }
    return std::nullopt;
}

bool chronological_less(const EventRecord& a, const EventRecord& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.event_id < b.event_id;
}

const std::vector<std::string_view>& required_payload_keys(EventKind kind) {
    static const std::array<std::vector<std::string_view>, 10> table = {{
        {"pr", "author"},
        {"pr", "actor"},
        {"pr", "actor", "state"},
        {"pr", "reviewer"},
        {"pr", "actor"},
        {"pr", "actor", "path"},
        {"wi", "author"},
        {"wi", "pr", "actor"},
        {"parent", "child"},
        {"user", "manager"},
    }};
    return table[static_cast<std::size_t>(kind)];
}

void validate_event(const EventRecord& event) {
    if (event.event_id.empty()) throw ParseError("empty event_id");
    if (event.repo.empty()) throw ParseError("event " + event.event_id + ": empty repo");
    for (auto key : required_payload_keys(event.kind)) {
        auto it = event.payload.find(std::string(key));
        if (it == event.payload.end() || it->second.empty()) {
            throw ParseError("event " + event.event_id + " (" + std::string(to_string(event.kind)) +
                             "): missing payload key '" + std::string(key) + "'");
        }
    }
}

EventRecord parse_event_line(std::string_view line) {
    auto fields = split(line, ',');
    if (fields.size() != 5) {
        throw ParseError("expected 5 comma-separated fields, got " + std::to_string(fields.size()));
    }
    auto kind = parse_event_kind(fields[2]);
    if (!kind) throw ParseError("unknown event_kind '" + std::string(fields[2]) + "'");
    EventRecord event{std::string(fields[0]), std::string(fields[1]), *kind,
                      require_timestamp(fields[3]), decode_pairs(fields[4])};
    validate_event(event);
    return event;
}

std::string format_event_line(const EventRecord& event) {
    return event.event_id + ',' + event.repo + ',' + std::string(to_string(event.kind)) + ',' +
           format_timestamp(event.timestamp) + ',' + encode_pairs(event.payload);
}

ParsedEventFile read_event_file(const std::filesystem::path& path) {
    auto lines = read_lines(path);
    ParsedEventFile parsed;
    if (lines.empty()) return parsed;
    if (lines.front() != kEventsHeader) {
        throw ParseError(path.filename().string() + ": missing header '" + std::string(kEventsHeader) +
                         "'");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        try {
            parsed.events.push_back(parse_event_line(lines[i]));
        } catch (const ParseError& e) {
            parsed.errors.push_back("line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return parsed;
}

void write_event_file(const std::filesystem::path& path, const std::vector<EventRecord>& events) {
    std::vector<std::string> lines;
    lines.reserve(events.size() + 1);
    lines.emplace_back(kEventsHeader);
    for (const auto& e : events) lines.push_back(format_event_line(e));
    write_lines(path, lines);
}

NodeId pr_node(const std::string& pr_id) { return {NodeKind::PullRequest, pr_id}; }
NodeId wi_node(const std::string& wi_id) { return {NodeKind::WorkItem, wi_id}; }
NodeId user_node(const std::string& user_id) { return {NodeKind::User, user_id}; }
NodeId repo_node(const std::string& repo) { return {NodeKind::Repository, repo}; }
NodeId file_node(const std::string& repo, const std::string& path) {
    return {NodeKind::File, repo + "/" + path};
}

NodeId event_actor(const EventRecord& event) {
    switch (event.kind) {
        case EventKind::pr_created:
        case EventKind::wi_created:
            return user_node(get(event, "author"));
        case EventKind::review_assigned:
            return user_node(get(event, "reviewer"));
        case EventKind::user_reports_to:
            return user_node(get(event, "user"));
        case EventKind::wi_parented:
            return user_node(get_opt(event, "actor").value_or("system"));
        default:
            return user_node(get(event, "actor"));
    }
}

std::optional<NodeId> event_subject(const EventRecord& event) {
    switch (event.kind) {
        case EventKind::wi_created:
        case EventKind::wi_linked:
            return wi_node(get(event, "wi"));
        case EventKind::wi_parented:
            return wi_node(get(event, "child"));
        case EventKind::user_reports_to:
            return std::nullopt;
        default:
            return pr_node(get(event, "pr"));
    }
}

std::string classify_file(std::string_view path) {
    auto slash = path.find_last_of('/');
    std::string_view name = slash == std::string_view::npos ? path : path.substr(slash + 1);
    auto dot = name.find_last_of('.');
    std::string ext = dot == std::string_view::npos ? "" : std::string(name.substr(dot + 1));
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    static const std::array<std::string_view, 20> source = {
        "c",  "cc", "cpp", "cxx", "h",  "hh", "hpp", "cs", "java", "py",
        "js", "ts", "go",  "rs",  "rb", "kt", "swift", "scala", "m", "sql"};
    static const std::array<std::string_view, 8> config = {"json", "yaml", "yml", "xml",
                                                           "ini",  "toml", "config", "props"};
    static const std::array<std::string_view, 6> project = {"csproj", "vcxproj", "sln",
                                                            "cmake",  "gradle",  "targets"};
    auto in = [&](const auto& list) { return std::find(list.begin(), list.end(), ext) != list.end(); };
    if (name == "CMakeLists.txt" || name == "Makefile" || name == "pom.xml" ||
        name == "package.json" || in(project)) {
        return "project";
    }
    if (in(source)) return "source";
    if (in(config)) return "configuration";
    return "other";
}

std::vector<Mutation> to_mutations(const EventRecord& e) {
    std::vector<Mutation> out;
    auto ts = at(e);
    switch (e.kind) {
        case EventKind::pr_created: {
            Attributes pr_attrs{{"created_at", format_timestamp(e.timestamp)},
                                {"repository", e.repo},
                                {"state", "active"}};
            copy_if_present(e, pr_attrs, {"title", "description", "organization", "project"});
            Attributes repo_attrs{{"name", e.repo}};
            copy_if_present(e, repo_attrs, {"organization", "project"});
            Attributes user_attrs;
            if (auto name = get_opt(e, "author_name")) user_attrs["name"] = *name;
            auto pr = pr_node(get(e, "pr"));
            auto author = user_node(get(e, "author"));
            out.push_back(node(repo_node(e.repo), std::move(repo_attrs)));
            out.push_back(node(author, std::move(user_attrs)));
            out.push_back(node(pr, std::move(pr_attrs)));
            out.push_back(edge(repo_node(e.repo), EdgeType::contains, pr));
            out.push_back(edge(author, EdgeType::creates, pr, ts));
            break;
        }
        case EventKind::pr_updated: {
            Attributes attrs{{"updated_at", format_timestamp(e.timestamp)}};
            copy_if_present(e, attrs, {"title", "description"});
            out.push_back(node(pr_node(get(e, "pr")), std::move(attrs)));
            break;
        }
        case EventKind::pr_state_changed:
            out.push_back(node(pr_node(get(e, "pr")),
                               {{"state", get(e, "state")},
                                {"updated_at", format_timestamp(e.timestamp)}}));
            break;
        case EventKind::review_assigned:
            out.push_back(edge(user_node(get(e, "reviewer")), EdgeType::reviews,
                               pr_node(get(e, "pr")), ts));
            break;
        case EventKind::review_commented:
            out.push_back(edge(user_node(get(e, "actor")), EdgeType::comments_on,
                               pr_node(get(e, "pr")), ts));
            break;
        case EventKind::file_changed: {
            const auto& path = get(e, "path");
            out.push_back(node(file_node(e.repo, path),
                               {{"path", path}, {"file_type", classify_file(path)},
                                {"repository", e.repo}}));
            out.push_back(edge(pr_node(get(e, "pr")), EdgeType::changes, file_node(e.repo, path)));
            break;
        }
        case EventKind::wi_created: {
            Attributes attrs{{"created_at", format_timestamp(e.timestamp)},
                             {"repository", e.repo},
                             {"state", "active"}};
            copy_if_present(e, attrs, {"title", "description", "state", "organization", "project"});
            out.push_back(node(user_node(get(e, "author"))));
            out.push_back(node(wi_node(get(e, "wi")), std::move(attrs)));
            break;
        }
        case EventKind::wi_linked:
            out.push_back(edge(wi_node(get(e, "wi")), EdgeType::linked_to, pr_node(get(e, "pr")), ts));
            break;
        case EventKind::wi_parented:
            out.push_back(edge(wi_node(get(e, "parent")), EdgeType::parent_of,
                               wi_node(get(e, "child"))));
            break;
        case EventKind::user_reports_to:
            out.push_back(edge(user_node(get(e, "user")), EdgeType::reports_to,
                               user_node(get(e, "manager"))));
            break;
    }
    return out;
}

}  // namespace stg::ingest
