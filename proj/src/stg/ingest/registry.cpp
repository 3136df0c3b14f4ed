// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/ingest/registry.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "stg/common/error.hpp"
#include "stg/common/text_io.hpp"

namespace stg::ingest {

namespace {

constexpr std::string_view kSuffix = ".events.csv";

bool parse_u64(std::string_view text, std::uint64_t& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

bool parse_i64(std::string_view text, std::int64_t& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::string_view to_string(StreamKind kind) {
    return kind == StreamKind::bootstrap ? "bootstrap" : "incremental";
}

std::string_view to_string(FileStatus status) {
    switch (status) {
        case FileStatus::discovered: return "discovered";
        case FileStatus::processing: return "processing";
        case FileStatus::completed: return "completed";
        case FileStatus::failed: return "failed";
    }
    return "unknown";
}

std::optional<StreamKind> parse_stream_kind(std::string_view text) {
    if (text == "bootstrap") return StreamKind::bootstrap;
    if (text == "incremental") return StreamKind::incremental;
    return std::nullopt;
}

std::optional<FileStatus> parse_file_status(std::string_view text) {
    for (auto s : {FileStatus::discovered, FileStatus::processing, FileStatus::completed,
                   FileStatus::failed}) {
        if (to_string(s) == text) return s;
    }
    return std::nullopt;
}

std::optional<EventFileName> parse_event_file_name(std::string_view name) {
    if (name.size() <= kSuffix.size() || name.substr(name.size() - kSuffix.size()) != kSuffix) {
        return std::nullopt;
    }
    auto stem = name.substr(0, name.size() - kSuffix.size());
    auto seq_dot = stem.rfind('.');
    if (seq_dot == std::string_view::npos || seq_dot == 0) return std::nullopt;
    if (auto kind = parse_stream_kind(stem.substr(seq_dot + 1))) {
        // No sequence number: "<repo>.<stream_kind>.events.csv".
        return EventFileName{std::string(stem.substr(0, seq_dot)), *kind, 0};
    }
    auto kind_dot = stem.rfind('.', seq_dot - 1);
    if (kind_dot == std::string_view::npos || kind_dot == 0) return std::nullopt;
    EventFileName parsed;
    if (!parse_u64(stem.substr(seq_dot + 1), parsed.seq)) return std::nullopt;
    auto kind = parse_stream_kind(stem.substr(kind_dot + 1, seq_dot - kind_dot - 1));
    if (!kind) return std::nullopt;
    parsed.stream_kind = *kind;
    parsed.repo = std::string(stem.substr(0, kind_dot));
    return parsed;
}

std::string make_event_file_name(std::string_view repo, StreamKind kind, std::uint64_t seq) {
    char seq_text[32];
    std::snprintf(seq_text, sizeof seq_text, "%04llu", static_cast<unsigned long long>(seq));
    return std::string(repo) + "." + std::string(to_string(kind)) + "." + seq_text +
           std::string(kSuffix);
}

bool legal_transition(FileStatus from, FileStatus to) {
    return (from == FileStatus::discovered && to == FileStatus::processing) ||
           (from == FileStatus::processing &&
            (to == FileStatus::completed || to == FileStatus::failed));
}

Registry::Registry(const Registry& other) {
    std::lock_guard lock(other.mutex_);
    rows_ = other.rows_;
}

Registry& Registry::operator=(const Registry& other) {
    if (this == &other) return *this;
    std::scoped_lock lock(mutex_, other.mutex_);
    rows_ = other.rows_;
    return *this;
}

bool Registry::add(RegistryEntry entry) {
    std::lock_guard lock(mutex_);
    auto name = entry.file_name;
    return rows_.emplace(std::move(name), std::move(entry)).second;
}

bool Registry::contains(const std::string& file_name) const {
    std::lock_guard lock(mutex_);
    return rows_.count(file_name) != 0;
}

std::optional<RegistryEntry> Registry::get(const std::string& file_name) const {
    std::lock_guard lock(mutex_);
    auto it = rows_.find(file_name);
    if (it == rows_.end()) return std::nullopt;
    return it->second;
}

std::vector<RegistryEntry> Registry::entries() const {
    std::lock_guard lock(mutex_);
    std::vector<RegistryEntry> out;
    out.reserve(rows_.size());
    for (const auto& [name, entry] : rows_) out.push_back(entry);
    return out;
}

void Registry::transition(const std::string& file_name, FileStatus to,
                          std::optional<std::int64_t> duration_ms) {
    std::lock_guard lock(mutex_);
    auto it = rows_.find(file_name);
    if (it == rows_.end()) throw NotFoundError("no registry row for " + file_name);
    if (!legal_transition(it->second.status, to)) {
        throw Error(ErrorCode::state, "illegal registry transition for " + file_name + ": " +
                                          std::string(to_string(it->second.status)) + " -> " +
                                          std::string(to_string(to)));
    }
    it->second.status = to;
    if (duration_ms) it->second.processing_duration_ms = duration_ms;
}

void Registry::save(const std::filesystem::path& path) const {
    std::vector<std::string> lines;
    for (const auto& entry : entries()) {
        std::string repos;
        for (const auto& r : entry.repos_covered) {
            if (!repos.empty()) repos.push_back(',');
            repos += url_encode(r);
        }
        lines.push_back(url_encode(entry.file_name) + '\t' + std::to_string(entry.size_bytes) + '\t' +
                        format_timestamp(entry.file_timestamp) + '\t' +
                        std::string(to_string(entry.stream_kind)) + '\t' +
                        std::string(to_string(entry.status)) + '\t' +
                        (entry.processing_duration_ms
                             ? std::to_string(*entry.processing_duration_ms)
                             : std::string()) +
                        '\t' + repos);
    }
    std::sort(lines.begin(), lines.end());
    write_lines(path, lines);
}

void Registry::load(const std::filesystem::path& path) {
    std::map<std::string, RegistryEntry> rows;
    for (const auto& line : read_lines(path)) {
        if (line.empty()) continue;
        auto f = split(line, '\t');
        if (f.size() != 7) throw ParseError("registry.tsv: expected 7 fields: " + line);
        RegistryEntry e;
        e.file_name = url_decode(f[0]);
        auto kind = parse_stream_kind(f[3]);
        auto status = parse_file_status(f[4]);
        if (!parse_u64(f[1], e.size_bytes) || !kind || !status) {
            throw ParseError("registry.tsv: bad row: " + line);
        }
        e.file_timestamp = require_timestamp(f[2], "file_timestamp");
        e.stream_kind = *kind;
        e.status = *status;
        if (!f[5].empty()) {
            std::int64_t ms = 0;
            if (!parse_i64(f[5], ms)) throw ParseError("registry.tsv: bad duration: " + line);
            e.processing_duration_ms = ms;
        }
        if (!f[6].empty()) {
            for (auto r : split(f[6], ',')) e.repos_covered.push_back(url_decode(r));
        }
        rows.emplace(e.file_name, std::move(e));
    }
    std::lock_guard lock(mutex_);
    rows_ = std::move(rows);
}

void PipelineState::record_success(StreamKind kind, Timestamp when) {
    auto [it, inserted] = last_successful_run.try_emplace(kind, when);
    if (!inserted && it->second < when) it->second = when;
}

std::optional<Timestamp> PipelineState::last_run(StreamKind kind) const {
    auto it = last_successful_run.find(kind);
    if (it == last_successful_run.end()) return std::nullopt;
    return it->second;
}

void PipelineState::save(const std::filesystem::path& path) const {
    std::vector<std::string> lines;
    for (const auto& [kind, ts] : last_successful_run) {
        lines.push_back("last_successful_run." + std::string(to_string(kind)) + '\t' +
                        format_timestamp(ts));
    }
    lines.push_back("retention_days\t" + std::to_string(retention_days));
    for (const auto& repo : healing_lock) lines.push_back("healing_lock\t" + url_encode(repo));
    std::sort(lines.begin(), lines.end());
    write_lines(path, lines);
}

PipelineState PipelineState::load(const std::filesystem::path& path) {
    PipelineState state;
    for (const auto& line : read_lines(path)) {
        if (line.empty()) continue;
        auto f = split(line, '\t');
        if (f.size() != 2) throw ParseError("pipeline.tsv: expected 2 fields: " + line);
        if (f[0] == "retention_days") {
            std::int64_t days = 0;
            if (!parse_i64(f[1], days) || days < 1) {
                throw ParseError("pipeline.tsv: retention_days must be a positive integer");
            }
            state.retention_days = static_cast<int>(days);
        } else if (f[0] == "healing_lock") {
            state.healing_lock.insert(url_decode(f[1]));
        } else if (f[0].substr(0, 20) == "last_successful_run.") {
            auto kind = parse_stream_kind(f[0].substr(20));
            if (!kind) throw ParseError("pipeline.tsv: unknown stream kind: " + line);
            state.last_successful_run[*kind] = require_timestamp(f[1]);
        } else {
            throw ParseError("pipeline.tsv: unknown key: " + line);
        }
    }
    return state;
}

}  // namespace stg::ingest
