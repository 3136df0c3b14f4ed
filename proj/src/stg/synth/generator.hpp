// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

// Seedable synthetic corpus with planted ground truth.
//
// Developers are assigned topics round-robin; developer t (t < n_topics) is
// the designated owner of topic t and authors only on-topic pull requests,
// other developers stay on their primary topic half of the time. Each pull
// request gets a five-word task signature from its topic vocabulary which its
// title, its description and its linked work item reuse. Work items are
// grouped under per (repository, topic) epics, developers report to team
// managers who report to a director.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stg/ingest/event.hpp"

namespace stg::synth {

struct CorpusSpec {
    std::uint64_t seed = 7;
    std::size_t n_repos = 4;
    std::size_t n_devs = 20;
    std::size_t n_topics = 5;
    std::size_t prs_per_dev = 10;
    double link_rate = 0.8;
    std::size_t vocab_per_topic = 30;
    double noise_rate = 0.15;
    std::size_t team_size = 5;

    // Throws InvalidArgument.
    void validate() const;
};

struct QueryCase {
    std::string query_id;
    std::string wi_doc;     // "WorkItem:..."
    std::string repo;
    std::size_t topic = 0;
    std::string requester;  // "User:..."
    std::string title;
    std::string description;
    std::vector<std::string> relevant_artifacts;  // linked pull requests
    std::vector<std::string> relevant_experts;    // topic owner
};

struct GroundTruth {
    std::map<std::string, std::vector<std::string>> artifacts;  // wi doc -> pr docs
    std::map<std::size_t, std::vector<std::string>> experts;    // topic -> user docs
    std::vector<QueryCase> queries;
};

// Expected graph counts after replaying every event.
struct Manifest {
    std::map<std::string, std::size_t> nodes;  // by NodeKind name
    std::map<std::string, std::size_t> edges;  // by EdgeType name
    std::size_t events = 0;
};

struct SynthCorpus {
    CorpusSpec spec;
    std::map<std::string, std::vector<ingest::EventRecord>> events;  // repo -> chronological
    Manifest manifest;
    GroundTruth truth;
};

// Topic vocabulary (lower-case single-token words), deterministic in
// (topic, size) and independent of the seed.
std::vector<std::string> topic_vocabulary(std::size_t topic, std::size_t size);

SynthCorpus generate(const CorpusSpec& spec);

// Writes events/<repo>.bootstrap.0001.events.csv, manifest.tsv,
// ground_truth_artifacts.tsv, ground_truth_experts.tsv and queries.tsv under
// `dir`. Byte-identical for identical corpora.
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

Manifest load_manifest(const std::filesystem::path& dir);
GroundTruth load_ground_truth(const std::filesystem::path& dir);

}  // namespace stg::synth
