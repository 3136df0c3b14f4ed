// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

// JSON shapes shared by the HTTP service, the C API and the CLI.

#include <string_view>

#include <json.hpp>

#include "stg/feed/feed.hpp"
#include "stg/graph/graph_store.hpp"
#include "stg/ingest/pipeline.hpp"
#include "stg/recommend/recommender.hpp"

namespace stg::codec {

using nlohmann::json;

// "Kind:local_id", or a bare id which names a User.
graph::NodeId parse_node_ref(std::string_view text);

json to_json(const recommend::RankedResult& result);
json to_json(const recommend::RecommendationResponse& response, bool include_timings = true);
json to_json(const feed::FeedItem& item);
json to_json(const std::vector<feed::FeedItem>& items);
json to_json(const feed::UserDetails& details);
json to_json(const feed::ActiveItems& items);
json to_json(const std::vector<feed::RelatedPerson>& people);
json to_json(const feed::HomePage& page);
json to_json(const std::set<graph::NodeId>& ids);
json to_json(const ingest::GapCheck& gap);
json to_json(const std::vector<ingest::GapCheck>& gaps);
json to_json(const ingest::IngestReport& report);
json to_json(const graph::GraphStats& stats);

}  // namespace stg::codec
