// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

// Asynchronous telemetry: request threads push records into a bounded queue
// and a single worker drains it into a sink. A full queue drops the record
// (counted) instead of blocking the request.

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace stg::service {

struct TelemetryRecord {
    std::string request_id;
    std::string type;  // "search" or "click"
    std::string query;
    std::string user;
    std::vector<std::string> results;
    std::optional<std::string> clicked;
    double response_time_ms = 0.0;
    std::string timestamp;  // UTC, millisecond precision

    bool operator==(const TelemetryRecord&) const = default;
};

nlohmann::json to_json(const TelemetryRecord& record);
TelemetryRecord telemetry_from_json(const nlohmann::json& j);
std::string utc_now_millis();

class TelemetrySink {
public:
    virtual ~TelemetrySink() = default;
    // May block or throw; the queue worker absorbs both.
    virtual void write(const TelemetryRecord& record) = 0;
};

// Appends one JSON object per line.
class FileSink : public TelemetrySink {
public:
    explicit FileSink(std::filesystem::path path);
    void write(const TelemetryRecord& record) override;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

// Keeps records in memory; for tests and embedding.
class MemorySink : public TelemetrySink {
public:
    void write(const TelemetryRecord& record) override;
    std::vector<TelemetryRecord> records() const;

private:
    mutable std::mutex mutex_;
    std::vector<TelemetryRecord> records_;
};

std::vector<TelemetryRecord> read_telemetry_file(const std::filesystem::path& path);

struct TelemetryCounters {
    std::uint64_t submitted = 0;
    std::uint64_t written = 0;
    std::uint64_t dropped = 0;  // queue full
    std::uint64_t failed = 0;   // sink threw
};

class TelemetryQueue {
public:
    TelemetryQueue(std::shared_ptr<TelemetrySink> sink, std::size_t capacity);
    ~TelemetryQueue();

    TelemetryQueue(const TelemetryQueue&) = delete;
    TelemetryQueue& operator=(const TelemetryQueue&) = delete;

    // Never blocks on the sink. Returns false when the record was dropped.
    bool submit(TelemetryRecord record);

    // Waits until every accepted record has been handed to the sink.
    void flush();

    TelemetryCounters counters() const;

private:
    void run();

    std::shared_ptr<TelemetrySink> sink_;
    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::condition_variable work_cv_;
    std::condition_variable idle_cv_;
    std::deque<TelemetryRecord> queue_;
    bool busy_ = false;
    bool stopping_ = false;
    TelemetryCounters counters_;
    std::thread worker_;
};

}  // namespace stg::service
