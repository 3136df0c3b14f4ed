// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/graph/graph_store.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>

#include "stg/common/error.hpp"

namespace stg::graph {

namespace {

constexpr std::array<std::string_view, 5> kNodeKindNames = {"User", "PullRequest", "WorkItem",
                                                           "File", "Repository"};
constexpr std::array<std::string_view, 8> kEdgeTypeNames = {
    "creates", "reviews", "changes", "contains", "linked_to", "parent_of", "comments_on",
    "reports_to"};

bool valid_attribute_key(std::string_view key) {
    if (key.empty()) return false;
    return std::all_of(key.begin(), key.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
}

void validate_attributes(const Attributes& attrs, std::string_view owner) {
    for (const auto& [key, value] : attrs) {
        if (!valid_attribute_key(key)) {
            throw InvalidArgument("attribute key '" + key + "' on " + std::string(owner) +
                                  " is not a lowercase identifier");
        }
    }
}

void validate_id(const NodeId& id) {
    if (id.local_id.empty()) {
        throw InvalidArgument("empty local_id for " + std::string(to_string(id.kind)) + " node");
    }
}

// Returns true if any value changed.
bool merge_attributes(Attributes& into, const Attributes& from) {
    bool changed = false;
    for (const auto& [key, value] : from) {
        auto it = into.find(key);
        if (it == into.end()) {
            into.emplace(key, value);
            changed = true;
        } else if (it->second != value) {
            it->second = value;
            changed = true;
        }
    }
    return changed;
}

NodeId parse_id_fields(std::string_view kind_text, std::string_view encoded_id,
                       std::string_view line) {
    auto kind = parse_node_kind(kind_text);
    if (!kind) throw ParseError("unknown node kind in line: " + std::string(line));
    return NodeId{*kind, url_decode(encoded_id)};
}

}  // namespace

std::string_view to_string(NodeKind kind) { return kNodeKindNames[static_cast<std::size_t>(kind)]; }

std::string_view to_string(EdgeType type) { return kEdgeTypeNames[static_cast<std::size_t>(type)]; }

std::optional<NodeKind> parse_node_kind(std::string_view text) {
    for (std::size_t i = 0; i < kNodeKindNames.size(); ++i) {
        if (kNodeKindNames[i] == text) return static_cast<NodeKind>(i);
    }
    return std::nullopt;
}

std::optional<EdgeType> parse_edge_type(std::string_view text) {
    for (std::size_t i = 0; i < kEdgeTypeNames.size(); ++i) {
        if (kEdgeTypeNames[i] == text) return static_cast<EdgeType>(i);
    }
    return std::nullopt;
}

EndpointKinds endpoint_kinds(EdgeType type) {
    switch (type) {
        case EdgeType::creates:
        case EdgeType::reviews:
        case EdgeType::comments_on:
            return {NodeKind::User, NodeKind::PullRequest};
        case EdgeType::changes:
            return {NodeKind::PullRequest, NodeKind::File};
        case EdgeType::contains:
            return {NodeKind::Repository, NodeKind::PullRequest};
        case EdgeType::linked_to:
            return {NodeKind::WorkItem, NodeKind::PullRequest};
        case EdgeType::parent_of:
            return {NodeKind::WorkItem, NodeKind::WorkItem};
        case EdgeType::reports_to:
            return {NodeKind::User, NodeKind::User};
    }
    throw Error(ErrorCode::internal, "unhandled edge type");
}

void validate_edge(const NodeId& src, EdgeType etype, const NodeId& dst) {
    auto expected = endpoint_kinds(etype);
    if (src.kind != expected.src || dst.kind != expected.dst) {
        throw SchemaError("schema violation: (" + src.str() + ") -" + std::string(to_string(etype)) +
                          "-> (" + dst.str() + "); " + std::string(to_string(etype)) +
                          " requires " + std::string(to_string(expected.src)) + " -> " +
                          std::string(to_string(expected.dst)));
    }
}

std::string NodeId::str() const { return std::string(to_string(kind)) + ":" + local_id; }

NodeId NodeId::parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw InvalidArgument("node id '" + std::string(text) + "' is not of the form Kind:id");
    }
    auto kind = parse_node_kind(text.substr(0, colon));
    if (!kind) {
        throw InvalidArgument("unknown node kind in '" + std::string(text) + "'");
    }
    NodeId id{*kind, std::string(text.substr(colon + 1))};
    validate_id(id);
    return id;
}

std::size_t NodeIdHash::operator()(const NodeId& id) const noexcept {
    return std::hash<std::string>{}(id.local_id) * 31u + static_cast<std::size_t>(id.kind);
}

std::string EdgeKey::str() const {
    return src.str() + " -" + std::string(to_string(etype)) + "-> " + dst.str();
}

std::size_t GraphStats::total_nodes() const {
    std::size_t total = 0;
    for (const auto& [kind, count] : node_count_by_kind) total += count;
    return total;
}

std::size_t GraphStats::total_edges() const {
    std::size_t total = 0;
    for (const auto& [type, count] : edge_count_by_type) total += count;
    return total;
}

Outcome GraphStore::apply(const Mutation& mutation) {
    // Validate before taking the lock so a rejected mutation never blocks readers.
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, UpsertNode>) {
                validate_id(m.node.id);
                validate_attributes(m.node.attributes, m.node.id.str());
            } else if constexpr (std::is_same_v<T, UpsertEdge>) {
                validate_id(m.edge.src);
                validate_id(m.edge.dst);
                validate_edge(m.edge.src, m.edge.etype, m.edge.dst);
                validate_attributes(m.edge.attributes, m.edge.key().str());
            } else if constexpr (std::is_same_v<T, DeleteEdge>) {
                validate_edge(m.src, m.etype, m.dst);
            }
        },
        mutation);

    std::unique_lock lock(mutex_);
    return std::visit(
        [this](const auto& m) -> Outcome {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, UpsertNode>) {
                return upsert_node_locked(m.node);
            } else if constexpr (std::is_same_v<T, UpsertEdge>) {
                return upsert_edge_locked(m.edge);
            } else if constexpr (std::is_same_v<T, DeleteNode>) {
                return delete_node_locked(m.id);
            } else {
                return delete_edge_locked(EdgeKey{m.src, m.etype, m.dst});
            }
        },
        mutation);
}

void GraphStore::ensure_node_locked(const NodeId& id) {
    auto [it, inserted] = nodes_.try_emplace(id);
    if (inserted) ++node_counts_[id.kind];
}

Outcome GraphStore::upsert_node_locked(const GraphNode& node) {
    auto [it, inserted] = nodes_.try_emplace(node.id);
    if (inserted) ++node_counts_[node.id.kind];
    bool changed = merge_attributes(it->second.attributes, node.attributes);
    return (inserted || changed) ? Outcome::applied : Outcome::no_op;
}

Outcome GraphStore::upsert_edge_locked(const GraphEdge& edge) {
    auto key = edge.key();
    auto [it, inserted] = edges_.try_emplace(key);
    bool changed = merge_attributes(it->second, edge.attributes);
    if (inserted) {
        ensure_node_locked(edge.src);
        ensure_node_locked(edge.dst);
        nodes_[edge.src].out.insert(Neighbor{edge.dst, edge.etype});
        nodes_[edge.dst].in.insert(Neighbor{edge.src, edge.etype});
        ++edge_counts_[edge.etype];
    }
    return (inserted || changed) ? Outcome::applied : Outcome::no_op;
}

Outcome GraphStore::delete_edge_locked(const EdgeKey& key) {
    auto it = edges_.find(key);
    if (it == edges_.end()) return Outcome::no_op;
    edges_.erase(it);
    nodes_[key.src].out.erase(Neighbor{key.dst, key.etype});
    nodes_[key.dst].in.erase(Neighbor{key.src, key.etype});
    if (--edge_counts_[key.etype] == 0) edge_counts_.erase(key.etype);
    return Outcome::applied;
}

Outcome GraphStore::delete_node_locked(const NodeId& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) return Outcome::no_op;
    // Copy the adjacency first; delete_edge_locked mutates it.
    auto out = it->second.out;
    auto in = it->second.in;
    for (const auto& n : out) delete_edge_locked(EdgeKey{id, n.etype, n.id});
    for (const auto& n : in) delete_edge_locked(EdgeKey{n.id, n.etype, id});
    nodes_.erase(id);
    if (--node_counts_[id.kind] == 0) node_counts_.erase(id.kind);
    return Outcome::applied;
}

bool GraphStore::contains(const NodeId& id) const {
    std::shared_lock lock(mutex_);
    return nodes_.count(id) != 0;
}

std::optional<GraphNode> GraphStore::node(const NodeId& id) const {
    std::shared_lock lock(mutex_);
    auto it = nodes_.find(id);
    if (it == nodes_.end()) return std::nullopt;
    return GraphNode{id, it->second.attributes};
}

std::optional<GraphEdge> GraphStore::edge(const EdgeKey& key) const {
    std::shared_lock lock(mutex_);
    auto it = edges_.find(key);
    if (it == edges_.end()) return std::nullopt;
    return GraphEdge{key.src, key.dst, key.etype, it->second};
}

std::vector<GraphNode> GraphStore::nodes(std::optional<NodeKind> kind) const {
    std::shared_lock lock(mutex_);
    std::vector<GraphNode> out;
    auto first = nodes_.begin();
    auto last = nodes_.end();
    if (kind) {
        first = nodes_.lower_bound(NodeId{*kind, ""});
        last = std::find_if(first, nodes_.end(),
                            [&](const auto& entry) { return entry.first.kind != *kind; });
    }
    for (auto it = first; it != last; ++it) out.push_back(GraphNode{it->first, it->second.attributes});
    return out;
}

std::vector<GraphEdge> GraphStore::edges(std::optional<EdgeType> etype) const {
    std::shared_lock lock(mutex_);
    std::vector<GraphEdge> out;
    for (const auto& [key, attrs] : edges_) {
        if (etype && key.etype != *etype) continue;
        out.push_back(GraphEdge{key.src, key.dst, key.etype, attrs});
    }
    return out;
}

std::vector<Neighbor> GraphStore::neighbors(const NodeId& id, std::optional<EdgeType> etype_filter,
                                            Direction direction) const {
    std::shared_lock lock(mutex_);
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw NotFoundError("unknown node " + id.str());
    std::vector<Neighbor> out;
    auto collect = [&](const std::set<Neighbor>& adjacency) {
        for (const auto& n : adjacency) {
            if (!etype_filter || n.etype == *etype_filter) out.push_back(n);
        }
    };
    if (direction != Direction::in) collect(it->second.out);
    if (direction != Direction::out) collect(it->second.in);
    if (direction == Direction::both) std::sort(out.begin(), out.end());
    return out;
}

std::unordered_map<NodeId, int, NodeIdHash> GraphStore::distances_from(const NodeId& source,
                                                                       int max_depth) const {
    std::shared_lock lock(mutex_);
    if (nodes_.count(source) == 0) throw NotFoundError("unknown node " + source.str());
    std::unordered_map<NodeId, int, NodeIdHash> dist;
    dist.emplace(source, 0);
    std::deque<const NodeId*> frontier{&dist.find(source)->first};
    while (!frontier.empty()) {
        const NodeId* current = frontier.front();
        frontier.pop_front();
        int d = dist.at(*current);
        if (d >= max_depth) continue;
        const auto& record = nodes_.at(*current);
        for (const auto* adjacency : {&record.out, &record.in}) {
            for (const auto& n : *adjacency) {
                auto [pos, inserted] = dist.emplace(n.id, d + 1);
                if (inserted) frontier.push_back(&pos->first);
            }
        }
    }
    return dist;
}

std::optional<int> GraphStore::proximity(const NodeId& a, const NodeId& b, int max_depth) const {
    if (max_depth < 1) throw InvalidArgument("max_depth must be >= 1");
    {
        std::shared_lock lock(mutex_);
        if (nodes_.count(a) == 0) throw NotFoundError("unknown node " + a.str());
        if (nodes_.count(b) == 0) throw NotFoundError("unknown node " + b.str());
    }
    if (a == b) return 0;
    auto dist = distances_from(a, max_depth);
    auto it = dist.find(b);
    if (it == dist.end()) return std::nullopt;
    return it->second;
}

GraphStats GraphStore::stats() const {
    std::shared_lock lock(mutex_);
    GraphStats stats;
    for (auto kind : kAllNodeKinds) {
        auto it = node_counts_.find(kind);
        stats.node_count_by_kind[kind] = it == node_counts_.end() ? 0 : it->second;
    }
    for (auto type : kAllEdgeTypes) {
        auto it = edge_counts_.find(type);
        stats.edge_count_by_type[type] = it == edge_counts_.end() ? 0 : it->second;
    }
    return stats;
}

GraphSnapshot GraphStore::snapshot() const {
    std::shared_lock lock(mutex_);
    GraphSnapshot snap;
    for (const auto& [id, record] : nodes_) snap.nodes.emplace(id, record.attributes);
    snap.edges = edges_;
    return snap;
}

void GraphStore::clear() {
    std::unique_lock lock(mutex_);
    nodes_.clear();
    edges_.clear();
    node_counts_.clear();
    edge_counts_.clear();
}

std::vector<std::string> GraphStore::node_lines(const GraphSnapshot& snap) {
    std::vector<std::string> lines;
    lines.reserve(snap.nodes.size());
    for (const auto& [id, attrs] : snap.nodes) {
        lines.push_back(std::string(to_string(id.kind)) + '\t' + url_encode(id.local_id) + '\t' +
                        encode_pairs(attrs));
    }
    std::sort(lines.begin(), lines.end());
    return lines;
}

std::vector<std::string> GraphStore::edge_lines(const GraphSnapshot& snap) {
    std::vector<std::string> lines;
    lines.reserve(snap.edges.size());
    for (const auto& [key, attrs] : snap.edges) {
        lines.push_back(std::string(to_string(key.src.kind)) + '\t' + url_encode(key.src.local_id) +
                        '\t' + std::string(to_string(key.etype)) + '\t' +
                        std::string(to_string(key.dst.kind)) + '\t' + url_encode(key.dst.local_id) +
                        '\t' + encode_pairs(attrs));
    }
    std::sort(lines.begin(), lines.end());
    return lines;
}

void GraphStore::save(const std::filesystem::path& dir) const {
    auto snap = snapshot();
    write_lines(dir / "nodes.tsv", node_lines(snap));
    write_lines(dir / "edges.tsv", edge_lines(snap));
}

void GraphStore::load(const std::filesystem::path& dir) {
    std::vector<Mutation> mutations;
    for (const auto& line : read_lines(dir / "nodes.tsv")) {
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 3) throw ParseError("nodes.tsv: expected 3 fields: " + line);
        mutations.emplace_back(
            UpsertNode{GraphNode{parse_id_fields(fields[0], fields[1], line), decode_pairs(fields[2])}});
    }
    for (const auto& line : read_lines(dir / "edges.tsv")) {
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 6) throw ParseError("edges.tsv: expected 6 fields: " + line);
        auto etype = parse_edge_type(fields[2]);
        if (!etype) throw ParseError("edges.tsv: unknown edge type: " + line);
        mutations.emplace_back(UpsertEdge{GraphEdge{parse_id_fields(fields[0], fields[1], line),
                                                    parse_id_fields(fields[3], fields[4], line),
                                                    *etype, decode_pairs(fields[5])}});
    }
    clear();
    for (const auto& m : mutations) apply(m);
}

}  // namespace stg::graph
