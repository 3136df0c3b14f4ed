// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

// Event-file ingestion into the graph store.
//
// Files in the event directory are registered once (discover), then applied
// either in bootstrap mode (full per-repository history; the repository's
// graph content is rebuilt from every event known for it) or incremental mode
// (newly delivered files, applied in file_timestamp order). Every applied
// event is kept in a journal keyed by event_id, which makes re-delivery
// harmless and lets a rebuild remove exactly the content a repository
// contributed.
//
// Self-healing: before an incremental file is applied its oldest event is
// compared with the last successful incremental run. A difference strictly
// greater than the retention window means the stream dropped data; the
// repository is quarantined (healing_lock) and heal() re-bootstraps it.

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stg/graph/graph_store.hpp"
#include "stg/ingest/event.hpp"
#include "stg/ingest/registry.hpp"

namespace stg::ingest {

struct GapCheck {
    std::string file_name;
    std::string repo;
    std::optional<Timestamp> oldest_event;
    std::optional<Timestamp> last_run;
    double days = 0.0;  // oldest_event - last_run
    bool gap = false;
};

struct IngestReport {
    std::size_t files_processed = 0;
    std::size_t events_applied = 0;
    std::vector<std::string> errors;
    std::vector<std::string> skipped_files;  // left in `discovered` state
    std::vector<GapCheck> gaps;
    std::vector<std::string> rebuilt_repos;  // bootstrap or heal rebuilds
    std::vector<std::string> healed_repos;   // subset rebuilt by heal()
    std::vector<std::string> failed_repos;

    void merge(const IngestReport& other);
};

// Applied events keyed by event_id.
class Journal {
public:
    bool contains(const std::string& event_id) const { return events_.count(event_id) != 0; }
    void add(const EventRecord& event) { events_[event.event_id] = event; }
    void replace_repo(const std::string& repo, const std::vector<EventRecord>& events);
    std::vector<EventRecord> events_for_repo(const std::string& repo) const;
    std::vector<EventRecord> all() const;  // chronological
    std::set<std::string> repos() const;
    std::size_t size() const { return events_.size(); }

    void save(const std::filesystem::path& path) const;
    void load(const std::filesystem::path& path);

private:
    std::map<std::string, EventRecord> events_;
};

struct DiscoverResult {
    std::vector<RegistryEntry> added;
    std::vector<std::string> skipped;  // "name: reason"
};

// Pure: true iff oldest event in the file - last successful incremental run
// (falling back to the last bootstrap run) > retention_days. No reference run
// at all counts as a gap. Throws IoError if the file cannot be read.
bool detect_gap(const RegistryEntry& entry, const PipelineState& state,
                const std::filesystem::path& event_dir);
GapCheck check_gap(const RegistryEntry& entry, const PipelineState& state,
                   const std::filesystem::path& event_dir);

class Pipeline {
public:
    // Called by heal() for each repository before it is rebuilt; production
    // deployments use it to request a fresh full-history export.
    using BootstrapExporter = std::function<void(const std::string& repo, Timestamp now)>;

    Pipeline(graph::GraphStore& graph, std::filesystem::path event_dir);

    DiscoverResult discover();

    // Empty `repos` means every repository with a bootstrap file in the
    // registry.
    IngestReport run_bootstrap(std::vector<std::string> repos, Timestamp now);
    IngestReport run_incremental(Timestamp now);
    IngestReport heal(const std::vector<std::string>& repos, Timestamp now);

    // run_incremental followed by heal() of every repository it quarantined.
    IngestReport run_incremental_and_heal(Timestamp now);

    // Dry run of gap detection over incremental files still in `discovered`.
    std::vector<GapCheck> check_gaps() const;

    void set_bootstrap_exporter(BootstrapExporter exporter);

    Registry registry() const;
    PipelineState state() const;
    void set_retention_days(int days);
    std::vector<EventRecord> journal_events() const;
    const std::filesystem::path& event_dir() const { return event_dir_; }

    // registry.tsv, pipeline.tsv, journal.csv in `dir`.
    void save(const std::filesystem::path& dir) const;
    void load(const std::filesystem::path& dir);

private:
    struct LoadedFile {
        std::vector<EventRecord> events;
        std::vector<std::string> errors;
    };

    std::vector<RegistryEntry> registry_entries(StreamKind kind, FileStatus status) const;
    IngestReport rebuild_repos(const std::vector<std::string>& repos, Timestamp now);
    void rebuild_repo_locked(const std::string& repo, const std::vector<EventRecord>& events);
    std::size_t apply_events_locked(const std::vector<EventRecord>& events);

    graph::GraphStore& graph_;
    std::filesystem::path event_dir_;
    BootstrapExporter exporter_;

    // One run per stream kind at a time.
    std::mutex bootstrap_run_mutex_;
    std::mutex incremental_run_mutex_;
    // Serialized writer: graph mutations and journal updates.
    mutable std::mutex apply_mutex_;
    // Guards state_ (registry_ has its own lock).
    mutable std::mutex state_mutex_;

    Registry registry_;
    PipelineState state_;
    Journal journal_;
};

}  // namespace stg::ingest
