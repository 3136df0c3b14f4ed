// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/ingest/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include "stg/common/error.hpp"

namespace stg::ingest {

namespace {

using graph::NodeId;

Timestamp file_mtime(const std::filesystem::path& path) {
    auto ftime = std::filesystem::last_write_time(path);
    auto sys = std::chrono::file_clock::to_sys(ftime);
    return std::chrono::floor<std::chrono::seconds>(sys);
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 start)
        .count();
}

bool covers(const RegistryEntry& entry, const std::string& repo) {
    return std::find(entry.repos_covered.begin(), entry.repos_covered.end(), repo) !=
           entry.repos_covered.end();
}

// Nodes and edges produced by a set of events, including implicit endpoints.
struct Footprint {
    std::set<NodeId> nodes;
    std::set<graph::EdgeKey> edges;

    void add(const EventRecord& event) {
        for (const auto& m : to_mutations(event)) {
            if (const auto* n = std::get_if<graph::UpsertNode>(&m)) {
                nodes.insert(n->node.id);
            } else if (const auto* e = std::get_if<graph::UpsertEdge>(&m)) {
                nodes.insert(e->edge.src);
                nodes.insert(e->edge.dst);
                edges.insert(e->edge.key());
            }
        }
    }
};

// Events of a file whose rows name a different repository are rejected.
void keep_repo_rows(const std::string& file_name, const std::string& repo,
                    std::vector<EventRecord>& events, std::vector<std::string>& errors) {
    auto bad = std::stable_partition(events.begin(), events.end(),
                                     [&](const EventRecord& e) { return e.repo == repo; });
    for (auto it = bad; it != events.end(); ++it) {
        errors.push_back(file_name + ": event " + it->event_id + " belongs to repo '" + it->repo +
                         "', not '" + repo + "'");
    }
    events.erase(bad, events.end());
}

}  // namespace

void IngestReport::merge(const IngestReport& other) {
    files_processed += other.files_processed;
    events_applied += other.events_applied;
    errors.insert(errors.end(), other.errors.begin(), other.errors.end());
    skipped_files.insert(skipped_files.end(), other.skipped_files.begin(), other.skipped_files.end());
    gaps.insert(gaps.end(), other.gaps.begin(), other.gaps.end());
    rebuilt_repos.insert(rebuilt_repos.end(), other.rebuilt_repos.begin(), other.rebuilt_repos.end());
    healed_repos.insert(healed_repos.end(), other.healed_repos.begin(), other.healed_repos.end());
    failed_repos.insert(failed_repos.end(), other.failed_repos.begin(), other.failed_repos.end());
}

void Journal::replace_repo(const std::string& repo, const std::vector<EventRecord>& events) {
    std::erase_if(events_, [&](const auto& entry) { return entry.second.repo == repo; });
    for (const auto& e : events) events_[e.event_id] = e;
}

std::vector<EventRecord> Journal::events_for_repo(const std::string& repo) const {
    std::vector<EventRecord> out;
    for (const auto& [id, e] : events_) {
        if (e.repo == repo) out.push_back(e);
    }
    std::sort(out.begin(), out.end(), chronological_less);
    return out;
}

std::vector<EventRecord> Journal::all() const {
    std::vector<EventRecord> out;
    out.reserve(events_.size());
    for (const auto& [id, e] : events_) out.push_back(e);
    std::sort(out.begin(), out.end(), chronological_less);
    return out;
}

std::set<std::string> Journal::repos() const {
    std::set<std::string> out;
    for (const auto& [id, e] : events_) out.insert(e.repo);
    return out;
}

void Journal::save(const std::filesystem::path& path) const { write_event_file(path, all()); }

void Journal::load(const std::filesystem::path& path) {
    auto parsed = read_event_file(path);
    if (!parsed.errors.empty()) {
        throw ParseError(path.filename().string() + ": " + parsed.errors.front());
    }
    events_.clear();
    for (auto& e : parsed.events) events_.emplace(e.event_id, std::move(e));
}

GapCheck check_gap(const RegistryEntry& entry, const PipelineState& state,
                   const std::filesystem::path& event_dir) {
    GapCheck check;
    check.file_name = entry.file_name;
    check.repo = entry.repos_covered.empty() ? std::string() : entry.repos_covered.front();
    auto parsed = read_event_file(event_dir / entry.file_name);
    for (const auto& e : parsed.events) {
        if (!check.oldest_event || e.timestamp < *check.oldest_event) check.oldest_event = e.timestamp;
    }
    check.last_run = state.last_run(StreamKind::incremental);
    if (!check.last_run) check.last_run = state.last_run(StreamKind::bootstrap);
    if (!check.oldest_event) return check;  // nothing to process, nothing missing
    if (!check.last_run) {
        check.gap = true;
        return check;
    }
    auto difference = *check.oldest_event - *check.last_run;
    check.days = days_between(*check.last_run, *check.oldest_event);
    check.gap = difference > days(state.retention_days);
    return check;
}

bool detect_gap(const RegistryEntry& entry, const PipelineState& state,
                const std::filesystem::path& event_dir) {
    if (entry.stream_kind != StreamKind::incremental) {
        throw InvalidArgument("detect_gap requires an incremental file: " + entry.file_name);
    }
    return check_gap(entry, state, event_dir).gap;
}

Pipeline::Pipeline(graph::GraphStore& graph, std::filesystem::path event_dir)
    : graph_(graph), event_dir_(std::move(event_dir)) {}

void Pipeline::set_bootstrap_exporter(BootstrapExporter exporter) { exporter_ = std::move(exporter); }

Registry Pipeline::registry() const { return registry_; }

PipelineState Pipeline::state() const {
    std::lock_guard lock(state_mutex_);
    return state_;
}

void Pipeline::set_retention_days(int retention) {
    if (retention < 1) throw InvalidArgument("retention_days must be >= 1");
    std::lock_guard lock(state_mutex_);
    state_.retention_days = retention;
}

std::vector<EventRecord> Pipeline::journal_events() const {
    std::lock_guard lock(apply_mutex_);
    return journal_.all();
}

DiscoverResult Pipeline::discover() {
    std::error_code ec;
    if (!std::filesystem::is_directory(event_dir_, ec)) {
        throw IoError("event directory not readable: " + event_dir_.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& item : std::filesystem::directory_iterator(event_dir_, ec)) {
        if (item.is_regular_file()) files.push_back(item.path());
    }
    if (ec) throw IoError("cannot list " + event_dir_.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());

    DiscoverResult result;
    for (const auto& path : files) {
        auto name = path.filename().string();
        if (name.size() < 11 || name.substr(name.size() - 11) != ".events.csv") continue;
        if (registry_.contains(name)) continue;
        auto parsed_name = parse_event_file_name(name);
        if (!parsed_name) {
            result.skipped.push_back(name + ": file name is not <repo>.<stream_kind>.<seq>.events.csv");
            continue;
        }
        RegistryEntry entry;
        entry.file_name = name;
        entry.stream_kind = parsed_name->stream_kind;
        entry.repos_covered = {parsed_name->repo};
        try {
            entry.size_bytes = std::filesystem::file_size(path);
            auto parsed = read_event_file(path);
            std::optional<Timestamp> newest;
            for (const auto& e : parsed.events) {
                if (!newest || e.timestamp > *newest) newest = e.timestamp;
            }
            entry.file_timestamp = newest ? *newest : file_mtime(path);
        } catch (const Error& e) {
            result.skipped.push_back(name + ": " + e.what());
            continue;
        } catch (const std::filesystem::filesystem_error& e) {
            result.skipped.push_back(name + ": " + e.what());
            continue;
        }
        if (registry_.add(entry)) result.added.push_back(std::move(entry));
    }
    return result;
}

std::vector<RegistryEntry> Pipeline::registry_entries(StreamKind kind, FileStatus status) const {
    std::vector<RegistryEntry> out;
    for (auto& e : registry_.entries()) {
        if (e.stream_kind == kind && e.status == status) out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const RegistryEntry& a, const RegistryEntry& b) {
        if (a.file_timestamp != b.file_timestamp) return a.file_timestamp < b.file_timestamp;
        return a.file_name < b.file_name;
    });
    return out;
}

std::size_t Pipeline::apply_events_locked(const std::vector<EventRecord>& events) {
    std::size_t applied = 0;
    for (const auto& e : events) {
        if (journal_.contains(e.event_id)) continue;
        for (const auto& m : to_mutations(e)) graph_.apply(m);
        journal_.add(e);
        ++applied;
    }
    return applied;
}

void Pipeline::rebuild_repo_locked(const std::string& repo, const std::vector<EventRecord>& events) {
    Footprint kept;
    Footprint stale;
    for (const auto& e : journal_.all()) {
        if (e.repo == repo) {
            stale.add(e);
        } else {
            kept.add(e);
        }
    }
    for (const auto& key : stale.edges) {
        if (kept.edges.count(key) == 0) graph_.apply(graph::DeleteEdge{key.src, key.dst, key.etype});
    }
    for (const auto& id : stale.nodes) {
        if (kept.nodes.count(id) == 0) graph_.apply(graph::DeleteNode{id});
    }
    for (const auto& e : events) {
        for (const auto& m : to_mutations(e)) graph_.apply(m);
    }
    journal_.replace_repo(repo, events);
}

IngestReport Pipeline::rebuild_repos(const std::vector<std::string>& repos, Timestamp now) {
    IngestReport report;
    bool all_ok = true;
    for (const auto& repo : repos) {
        auto start = std::chrono::steady_clock::now();
        std::vector<RegistryEntry> fresh;
        std::vector<RegistryEntry> done;
        for (const auto& entry : registry_.entries()) {
            if (!covers(entry, repo)) continue;
            if (entry.stream_kind == StreamKind::bootstrap && entry.status == FileStatus::discovered) {
                fresh.push_back(entry);
            } else if (entry.status == FileStatus::completed) {
                done.push_back(entry);
            }
        }
        bool has_bootstrap =
            !fresh.empty() || std::any_of(done.begin(), done.end(), [](const RegistryEntry& e) {
                return e.stream_kind == StreamKind::bootstrap;
            });
        if (!has_bootstrap) {
            report.errors.push_back("no bootstrap file registered for repo '" + repo + "'");
            report.failed_repos.push_back(repo);
            all_ok = false;
            continue;
        }

        std::map<std::string, EventRecord> merged;
        {
            std::lock_guard lock(apply_mutex_);
            for (auto& e : journal_.events_for_repo(repo)) merged.emplace(e.event_id, std::move(e));
        }
        bool repo_ok = true;
        auto read_into = [&](const RegistryEntry& entry) {
            auto parsed = read_event_file(event_dir_ / entry.file_name);
            keep_repo_rows(entry.file_name, repo, parsed.events, parsed.errors);
            for (const auto& err : parsed.errors) report.errors.push_back(entry.file_name + ": " + err);
            for (auto& e : parsed.events) merged.insert_or_assign(e.event_id, std::move(e));
        };
        for (const auto& entry : done) {
            try {
                read_into(entry);
            } catch (const Error&) {
                // Already-applied files that vanished are covered by the journal.
            }
        }
        std::vector<std::string> processed;
        for (const auto& entry : fresh) {
            registry_.transition(entry.file_name, FileStatus::processing);
            try {
                read_into(entry);
                processed.push_back(entry.file_name);
            } catch (const Error& e) {
                registry_.transition(entry.file_name, FileStatus::failed, elapsed_ms(start));
                report.errors.push_back(entry.file_name + ": " + e.what());
                repo_ok = false;
            }
        }
        if (!repo_ok) {
            // No rebuild happened, so files that were read fine did not land either.
            for (const auto& name : processed) {
                registry_.transition(name, FileStatus::failed, elapsed_ms(start));
            }
            report.failed_repos.push_back(repo);
            all_ok = false;
            continue;
        }

        std::vector<EventRecord> events;
        {
            std::lock_guard lock(apply_mutex_);
            for (auto& e : journal_.events_for_repo(repo)) merged.emplace(e.event_id, std::move(e));
            events.reserve(merged.size());
            for (auto& [id, e] : merged) events.push_back(std::move(e));
            std::sort(events.begin(), events.end(), chronological_less);
            rebuild_repo_locked(repo, events);
        }
        for (const auto& name : processed) {
            registry_.transition(name, FileStatus::completed, elapsed_ms(start));
        }
        report.files_processed += processed.size();
        report.events_applied += events.size();
        report.rebuilt_repos.push_back(repo);
        std::lock_guard lock(state_mutex_);
        state_.healing_lock.erase(repo);
    }
    if (all_ok) {
        std::lock_guard lock(state_mutex_);
        state_.record_success(StreamKind::bootstrap, now);
    }
    return report;
}

IngestReport Pipeline::run_bootstrap(std::vector<std::string> repos, Timestamp now) {
    std::lock_guard run_lock(bootstrap_run_mutex_);
    if (repos.empty()) {
        std::set<std::string> all;
        for (const auto& e : registry_.entries()) {
            if (e.stream_kind == StreamKind::bootstrap && e.status == FileStatus::discovered) {
                all.insert(e.repos_covered.begin(), e.repos_covered.end());
            }
        }
        repos.assign(all.begin(), all.end());
    }
    {
        // Keeps incremental runs off these repos until the rebuild lands.
        std::lock_guard lock(state_mutex_);
        state_.healing_lock.insert(repos.begin(), repos.end());
    }
    return rebuild_repos(repos, now);
}

IngestReport Pipeline::run_incremental(Timestamp now) {
    std::lock_guard run_lock(incremental_run_mutex_);
    IngestReport report;
    auto reference = state();

    std::set<std::string> bootstrapped;
    for (const auto& e : registry_.entries()) {
        if (e.stream_kind == StreamKind::bootstrap && e.status == FileStatus::completed) {
            bootstrapped.insert(e.repos_covered.begin(), e.repos_covered.end());
        }
    }

    bool all_ok = true;
    for (const auto& entry : registry_entries(StreamKind::incremental, FileStatus::discovered)) {
        const std::string repo = entry.repos_covered.front();
        {
            std::lock_guard lock(state_mutex_);
            if (state_.healing_lock.count(repo) != 0) {
                report.skipped_files.push_back(entry.file_name + ": repo '" + repo +
                                               "' is being re-bootstrapped");
                continue;
            }
        }
        GapCheck gap;
        try {
            gap = check_gap(entry, reference, event_dir_);
        } catch (const Error& e) {
            registry_.transition(entry.file_name, FileStatus::processing);
            registry_.transition(entry.file_name, FileStatus::failed, 0);
            report.errors.push_back(entry.file_name + ": " + e.what());
            all_ok = false;
            continue;
        }
        if (bootstrapped.count(repo) == 0) gap.gap = true;
        if (gap.gap) {
            report.gaps.push_back(gap);
            report.skipped_files.push_back(entry.file_name + ": data gap detected for repo '" + repo +
                                           "'");
            std::lock_guard lock(state_mutex_);
            state_.healing_lock.insert(repo);
            continue;
        }

        auto start = std::chrono::steady_clock::now();
        registry_.transition(entry.file_name, FileStatus::processing);
        try {
            auto parsed = read_event_file(event_dir_ / entry.file_name);
            keep_repo_rows(entry.file_name, repo, parsed.events, parsed.errors);
            for (const auto& err : parsed.errors) report.errors.push_back(entry.file_name + ": " + err);
            std::sort(parsed.events.begin(), parsed.events.end(), chronological_less);
            std::size_t applied = 0;
            {
                std::lock_guard lock(apply_mutex_);
                applied = apply_events_locked(parsed.events);
            }
            registry_.transition(entry.file_name, FileStatus::completed, elapsed_ms(start));
            report.files_processed += 1;
            report.events_applied += applied;
        } catch (const Error& e) {
            registry_.transition(entry.file_name, FileStatus::failed, elapsed_ms(start));
            report.errors.push_back(entry.file_name + ": " + e.what());
            all_ok = false;
        }
    }
    if (all_ok) {
        std::lock_guard lock(state_mutex_);
        state_.record_success(StreamKind::incremental, now);
    }
    return report;
}

IngestReport Pipeline::heal(const std::vector<std::string>& repos, Timestamp now) {
    std::lock_guard run_lock(bootstrap_run_mutex_);
    {
        std::lock_guard lock(state_mutex_);
        state_.healing_lock.insert(repos.begin(), repos.end());
    }
    if (exporter_) {
        for (const auto& repo : repos) exporter_(repo, now);
    }
    discover();
    auto report = rebuild_repos(repos, now);
    report.healed_repos = report.rebuilt_repos;
    return report;
}

IngestReport Pipeline::run_incremental_and_heal(Timestamp now) {
    auto report = run_incremental(now);
    auto locked = state().healing_lock;
    if (!locked.empty()) {
        report.merge(heal(std::vector<std::string>(locked.begin(), locked.end()), now));
    }
    return report;
}

std::vector<GapCheck> Pipeline::check_gaps() const {
    auto reference = state();
    std::vector<GapCheck> out;
    for (const auto& entry : registry_entries(StreamKind::incremental, FileStatus::discovered)) {
        out.push_back(check_gap(entry, reference, event_dir_));
    }
    return out;
}

void Pipeline::save(const std::filesystem::path& dir) const {
    registry_.save(dir / "registry.tsv");
    state().save(dir / "pipeline.tsv");
    std::lock_guard lock(apply_mutex_);
    journal_.save(dir / "journal.csv");
}

void Pipeline::load(const std::filesystem::path& dir) {
    if (std::filesystem::exists(dir / "registry.tsv")) registry_.load(dir / "registry.tsv");
    if (std::filesystem::exists(dir / "pipeline.tsv")) {
        auto loaded = PipelineState::load(dir / "pipeline.tsv");
        std::lock_guard lock(state_mutex_);
        state_ = std::move(loaded);
    }
    if (std::filesystem::exists(dir / "journal.csv")) {
        std::lock_guard lock(apply_mutex_);
        journal_.load(dir / "journal.csv");
    }
}

}  // namespace stg::ingest
