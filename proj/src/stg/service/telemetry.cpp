// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/service/telemetry.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

#include "stg/common/error.hpp"
#include "stg/common/text_io.hpp"
#include "stg/common/time.hpp"

namespace stg::service {

using nlohmann::json;

json to_json(const TelemetryRecord& r) {
    return json{{"request_id", r.request_id},
                {"type", r.type},
                {"query", r.query},
                {"user", r.user},
                {"results", r.results},
                {"clicked", r.clicked ? json(*r.clicked) : json(nullptr)},
                {"response_time_ms", r.response_time_ms},
                {"timestamp", r.timestamp}};
}

TelemetryRecord telemetry_from_json(const json& j) {
    TelemetryRecord r;
    r.request_id = j.at("request_id").get<std::string>();
    r.type = j.at("type").get<std::string>();
    r.query = j.at("query").get<std::string>();
    r.user = j.at("user").get<std::string>();
    r.results = j.at("results").get<std::vector<std::string>>();
    if (!j.at("clicked").is_null()) r.clicked = j.at("clicked").get<std::string>();
    r.response_time_ms = j.at("response_time_ms").get<double>();
    r.timestamp = j.at("timestamp").get<std::string>();
    return r;
}

std::string utc_now_millis() {
    auto now = std::chrono::system_clock::now();
    auto secs = std::chrono::floor<std::chrono::seconds>(now);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - secs).count();
    auto text = format_timestamp(Timestamp{secs.time_since_epoch()});
    char frac[8];
    std::snprintf(frac, sizeof frac, ".%03d", static_cast<int>(ms));
    text.insert(text.size() - 1, frac);
    return text;
}

FileSink::FileSink(std::filesystem::path path) : path_(std::move(path)) {
    out_.open(path_, std::ios::app);
    if (!out_) throw IoError("cannot open telemetry log " + path_.string());
}

void FileSink::write(const TelemetryRecord& record) {
    out_ << to_json(record).dump() << '\n';
    out_.flush();
    if (!out_) throw IoError("write to " + path_.string() + " failed");
}

void MemorySink::write(const TelemetryRecord& record) {
    std::lock_guard lock(mutex_);
    records_.push_back(record);
}

std::vector<TelemetryRecord> MemorySink::records() const {
    std::lock_guard lock(mutex_);
    return records_;
}

std::vector<TelemetryRecord> read_telemetry_file(const std::filesystem::path& path) {
    std::vector<TelemetryRecord> out;
    if (!std::filesystem::exists(path)) return out;
    for (const auto& line : read_lines(path)) {
        if (line.empty()) continue;
        try {
            out.push_back(telemetry_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
    }
    return out;
}

TelemetryQueue::TelemetryQueue(std::shared_ptr<TelemetrySink> sink, std::size_t capacity)
    : sink_(std::move(sink)), capacity_(capacity == 0 ? 1 : capacity) {
    if (!sink_) throw InvalidArgument("telemetry sink is null");
    worker_ = std::thread([this] { run(); });
}

TelemetryQueue::~TelemetryQueue() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    work_cv_.notify_all();
    worker_.join();
}

bool TelemetryQueue::submit(TelemetryRecord record) {
    {
        std::lock_guard lock(mutex_);
        ++counters_.submitted;
        if (queue_.size() >= capacity_) {
            ++counters_.dropped;
            return false;
        }
        queue_.push_back(std::move(record));
    }
    work_cv_.notify_one();
    return true;
}

void TelemetryQueue::flush() {
    std::unique_lock lock(mutex_);
    idle_cv_.wait(lock, [this] { return queue_.empty() && !busy_; });
}

TelemetryCounters TelemetryQueue::counters() const {
    std::lock_guard lock(mutex_);
    return counters_;
}

void TelemetryQueue::run() {
    std::unique_lock lock(mutex_);
    for (;;) {
        work_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
        if (queue_.empty()) break;  // stopping and drained
        auto record = std::move(queue_.front());
        queue_.pop_front();
        busy_ = true;
        lock.unlock();
        bool ok = true;
        try {
            sink_->write(record);
        } catch (const std::exception& e) {
            ok = false;
            std::cerr << "telemetry: dropped record " << record.request_id << ": " << e.what()
                      << '\n';
        }
        lock.lock();
        busy_ = false;
        if (ok) {
            ++counters_.written;
        } else {
            ++counters_.failed;
        }
        if (queue_.empty()) idle_cv_.notify_all();
    }
    idle_cv_.notify_all();
}

}  // namespace stg::service
