// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

// Typed property graph of developers and development artifacts.
//
// Node kinds:  User, PullRequest, WorkItem, File, Repository
// Edge types (src kind -> dst kind):
//   creates      User        -> PullRequest
//   reviews      User        -> PullRequest
//   changes      PullRequest -> File
//   contains     Repository  -> PullRequest
//   linked_to    WorkItem    -> PullRequest
//   parent_of    WorkItem    -> WorkItem
//   comments_on  User        -> PullRequest
//   reports_to   User        -> User
//
// Storage is an ordered node table with per-node in/out adjacency sets and an
// ordered edge table keyed by (src, etype, dst). All listings are therefore
// sorted by (kind, local_id). Readers take a shared lock, writers an exclusive
// one.

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "stg/common/text_io.hpp"

namespace stg::graph {

enum class NodeKind : std::uint8_t { User, PullRequest, WorkItem, File, Repository };
inline constexpr std::array<NodeKind, 5> kAllNodeKinds = {
    NodeKind::User, NodeKind::PullRequest, NodeKind::WorkItem, NodeKind::File,
    NodeKind::Repository};

enum class EdgeType : std::uint8_t {
    creates,
    reviews,
    changes,
    contains,
    linked_to,
    parent_of,
    comments_on,
    reports_to,
};
inline constexpr std::array<EdgeType, 8> kAllEdgeTypes = {
    EdgeType::creates,   EdgeType::reviews,   EdgeType::changes,     EdgeType::contains,
    EdgeType::linked_to, EdgeType::parent_of, EdgeType::comments_on, EdgeType::reports_to};

std::string_view to_string(NodeKind kind);
std::string_view to_string(EdgeType type);
std::optional<NodeKind> parse_node_kind(std::string_view text);
std::optional<EdgeType> parse_edge_type(std::string_view text);

struct EndpointKinds {
    NodeKind src;
    NodeKind dst;
};
EndpointKinds endpoint_kinds(EdgeType type);

struct NodeId {
    NodeKind kind = NodeKind::User;
    std::string local_id;

    auto operator<=>(const NodeId&) const = default;
    bool operator==(const NodeId&) const = default;

    // "Kind:local_id", e.g. "PullRequest:repoA/17".
    std::string str() const;
    static NodeId parse(std::string_view text);
};

struct NodeIdHash {
    std::size_t operator()(const NodeId& id) const noexcept;
};

struct GraphNode {
    NodeId id;
    Attributes attributes;

    bool operator==(const GraphNode&) const = default;
};

struct EdgeKey {
    NodeId src;
    EdgeType etype = EdgeType::creates;
    NodeId dst;

    auto operator<=>(const EdgeKey&) const = default;
    bool operator==(const EdgeKey&) const = default;
    std::string str() const;
};

struct GraphEdge {
    NodeId src;
    NodeId dst;
    EdgeType etype = EdgeType::creates;
    Attributes attributes;

    EdgeKey key() const { return {src, etype, dst}; }
    bool operator==(const GraphEdge&) const = default;
};

struct GraphStats {
    std::map<NodeKind, std::size_t> node_count_by_kind;
    std::map<EdgeType, std::size_t> edge_count_by_type;

    std::size_t total_nodes() const;
    std::size_t total_edges() const;
    bool operator==(const GraphStats&) const = default;
};

struct UpsertNode {
    GraphNode node;
};
struct UpsertEdge {
    GraphEdge edge;
};
struct DeleteNode {
    NodeId id;
};
struct DeleteEdge {
    NodeId src;
    NodeId dst;
    EdgeType etype = EdgeType::creates;
};
using Mutation = std::variant<UpsertNode, UpsertEdge, DeleteNode, DeleteEdge>;

enum class Outcome { applied, no_op };

enum class Direction { out, in, both };

struct Neighbor {
    NodeId id;
    EdgeType etype;

    auto operator<=>(const Neighbor&) const = default;
    bool operator==(const Neighbor&) const = default;
};

// Value copy of the whole graph; equality is set equality of nodes and edges
// including attributes.
struct GraphSnapshot {
    std::map<NodeId, Attributes> nodes;
    std::map<EdgeKey, Attributes> edges;

    bool operator==(const GraphSnapshot&) const = default;
};

inline constexpr int kDefaultMaxDepth = 6;

class GraphStore {
public:
    GraphStore() = default;
    GraphStore(const GraphStore&) = delete;
    GraphStore& operator=(const GraphStore&) = delete;

    // Throws SchemaError when an edge's endpoint kinds are illegal for its type
    // and InvalidArgument for empty local ids.
    Outcome apply(const Mutation& mutation);

    bool contains(const NodeId& id) const;
    std::optional<GraphNode> node(const NodeId& id) const;
    std::optional<GraphEdge> edge(const EdgeKey& key) const;
    std::vector<GraphNode> nodes(std::optional<NodeKind> kind = std::nullopt) const;
    std::vector<GraphEdge> edges(std::optional<EdgeType> etype = std::nullopt) const;

    // Throws NotFoundError for an unknown id.
    std::vector<Neighbor> neighbors(const NodeId& id, std::optional<EdgeType> etype_filter,
                                    Direction direction) const;

    // Undirected shortest path length, nullopt when unreachable within max_depth.
    std::optional<int> proximity(const NodeId& a, const NodeId& b,
                                 int max_depth = kDefaultMaxDepth) const;

    // Undirected BFS distances from `source` to every node within max_depth.
    std::unordered_map<NodeId, int, NodeIdHash> distances_from(const NodeId& source,
                                                               int max_depth = kDefaultMaxDepth) const;

    GraphStats stats() const;
    GraphSnapshot snapshot() const;
    void clear();

    // nodes.tsv / edges.tsv in `dir`.
    void save(const std::filesystem::path& dir) const;
    void load(const std::filesystem::path& dir);

    static std::vector<std::string> node_lines(const GraphSnapshot& snap);
    static std::vector<std::string> edge_lines(const GraphSnapshot& snap);

private:
    struct NodeRecord {
        Attributes attributes;
        std::set<Neighbor> out;
        std::set<Neighbor> in;
    };

    Outcome upsert_node_locked(const GraphNode& node);
    Outcome upsert_edge_locked(const GraphEdge& edge);
    Outcome delete_node_locked(const NodeId& id);
    Outcome delete_edge_locked(const EdgeKey& key);
    void ensure_node_locked(const NodeId& id);

    mutable std::shared_mutex mutex_;
    std::map<NodeId, NodeRecord> nodes_;
    std::map<EdgeKey, Attributes> edges_;
    std::map<NodeKind, std::size_t> node_counts_;
    std::map<EdgeType, std::size_t> edge_counts_;
};

// Throws SchemaError if the endpoint kinds do not match `etype`.
void validate_edge(const NodeId& src, EdgeType etype, const NodeId& dst);

}  // namespace stg::graph
