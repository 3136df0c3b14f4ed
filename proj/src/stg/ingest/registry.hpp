// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stg/common/time.hpp"

namespace stg::ingest {

enum class StreamKind { bootstrap, incremental };
enum class FileStatus { discovered, processing, completed, failed };

std::string_view to_string(StreamKind kind);
std::string_view to_string(FileStatus status);
std::optional<StreamKind> parse_stream_kind(std::string_view text);
std::optional<FileStatus> parse_file_status(std::string_view text);

// Event files are named `<repo>.<stream_kind>.<seq>.events.csv`; the sequence
// number is optional and defaults to 0.
struct EventFileName {
    std::string repo;
    StreamKind stream_kind = StreamKind::bootstrap;
    std::uint64_t seq = 0;
};
std::optional<EventFileName> parse_event_file_name(std::string_view file_name);
std::string make_event_file_name(std::string_view repo, StreamKind kind, std::uint64_t seq);

struct RegistryEntry {
    std::string file_name;
    std::uint64_t size_bytes = 0;
    Timestamp file_timestamp;
    StreamKind stream_kind = StreamKind::bootstrap;
    FileStatus status = FileStatus::discovered;
    std::optional<std::int64_t> processing_duration_ms;
    std::vector<std::string> repos_covered;

    bool operator==(const RegistryEntry&) const = default;
};

// Per-file bookkeeping. One row per file name; status only moves
// discovered -> processing -> {completed, failed}.
class Registry {
public:
    Registry() = default;
    Registry(const Registry& other);
    Registry& operator=(const Registry& other);

    // False if a row with that file name already exists.
    bool add(RegistryEntry entry);
    bool contains(const std::string& file_name) const;
    std::optional<RegistryEntry> get(const std::string& file_name) const;
    std::vector<RegistryEntry> entries() const;

    // Throws Error(state) on an illegal transition.
    void transition(const std::string& file_name, FileStatus to,
                    std::optional<std::int64_t> duration_ms = std::nullopt);

    void save(const std::filesystem::path& path) const;
    void load(const std::filesystem::path& path);

private:
    mutable std::mutex mutex_;
    std::map<std::string, RegistryEntry> rows_;
};

bool legal_transition(FileStatus from, FileStatus to);

struct PipelineState {
    std::map<StreamKind, Timestamp> last_successful_run;
    int retention_days = 3;
    std::set<std::string> healing_lock;

    // Monotone: never moves a watermark backwards.
    void record_success(StreamKind kind, Timestamp when);
    std::optional<Timestamp> last_run(StreamKind kind) const;

    bool operator==(const PipelineState&) const = default;

    void save(const std::filesystem::path& path) const;
    static PipelineState load(const std::filesystem::path& path);
};

}  // namespace stg::ingest
