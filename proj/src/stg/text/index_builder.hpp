// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

#include "stg/graph/graph_store.hpp"
#include "stg/text/inverted_index.hpp"

namespace stg::text {

// Which artifact properties feed the index.
struct IndexFields {
    bool metadata = true;     // organization, project, repository
    bool title = true;
    bool description = true;

    bool operator==(const IndexFields&) const = default;
};

enum class IndexKind { artifact, expert };

// Bag of terms for one PullRequest or WorkItem node.
TermCounts artifact_terms(const graph::GraphNode& node, const IndexFields& fields = {});

// One document per PullRequest and WorkItem node, doc id = node id.
InvertedIndex build_artifact_index(const graph::GraphStore& graph, const IndexFields& fields = {},
                                   Bm25Params params = {});

// One document per developer with at least one authored pull request: the
// multiset union of the terms of every pull request they created and of every
// work item linked to those pull requests. Repeated topics raise the term
// frequency. Doc id = the developer's node id.
InvertedIndex build_expert_index(const graph::GraphStore& graph, const IndexFields& fields = {},
                                 Bm25Params params = {});

// Rebuild against the current graph with the previous index's parameters.
InvertedIndex refresh(const InvertedIndex& previous, const graph::GraphStore& graph, IndexKind kind,
                      const IndexFields& fields = {});

}  // namespace stg::text
