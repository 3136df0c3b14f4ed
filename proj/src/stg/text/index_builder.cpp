// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/text/index_builder.hpp"

#include <set>

namespace stg::text {

namespace {

using graph::Direction;
using graph::EdgeType;
using graph::NodeKind;

void add_attribute(TermCounts& terms, const graph::GraphNode& node, const char* key) {
    auto it = node.attributes.find(key);
    if (it != node.attributes.end()) add_counts(terms, tokenize_counts(it->second));
}

}  // namespace

TermCounts artifact_terms(const graph::GraphNode& node, const IndexFields& fields) {
    TermCounts terms;
    if (fields.metadata) {
        add_attribute(terms, node, "organization");
        add_attribute(terms, node, "project");
        add_attribute(terms, node, "repository");
    }
    if (fields.title) add_attribute(terms, node, "title");
    if (fields.description) add_attribute(terms, node, "description");
    return terms;
}

InvertedIndex build_artifact_index(const graph::GraphStore& graph, const IndexFields& fields,
                                   Bm25Params params) {
    InvertedIndex index(params);
    for (auto kind : {NodeKind::PullRequest, NodeKind::WorkItem}) {
        for (const auto& node : graph.nodes(kind)) {
            index.add_document(node.id.str(), artifact_terms(node, fields));
        }
    }
    return index;
}

InvertedIndex build_expert_index(const graph::GraphStore& graph, const IndexFields& fields,
                                 Bm25Params params) {
    InvertedIndex index(params);
    for (const auto& user : graph.nodes(NodeKind::User)) {
        auto authored = graph.neighbors(user.id, EdgeType::creates, Direction::out);
        if (authored.empty()) continue;
        TermCounts terms;
        std::set<graph::NodeId> work_items;
        for (const auto& pr : authored) {
            if (auto node = graph.node(pr.id)) add_counts(terms, artifact_terms(*node, fields));
            for (const auto& wi : graph.neighbors(pr.id, EdgeType::linked_to, Direction::in)) {
                work_items.insert(wi.id);
            }
        }
        for (const auto& wi : work_items) {
            if (auto node = graph.node(wi)) add_counts(terms, artifact_terms(*node, fields));
        }
        index.add_document(user.id.str(), terms);
    }
    return index;
}

InvertedIndex refresh(const InvertedIndex& previous, const graph::GraphStore& graph, IndexKind kind,
                      const IndexFields& fields) {
    return kind == IndexKind::artifact ? build_artifact_index(graph, fields, previous.params())
                                       : build_expert_index(graph, fields, previous.params());
}

}  // namespace stg::text
