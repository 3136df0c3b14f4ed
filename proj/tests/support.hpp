// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

// Shared helpers for the test binaries.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "stg/common/time.hpp"
#include "stg/ingest/event.hpp"

namespace stg::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "stg") {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

inline Timestamp ts(const char* text) { return require_timestamp(text); }

inline ingest::EventRecord event(std::string id, std::string repo, ingest::EventKind kind,
                                 const char* when, Attributes payload) {
    ingest::EventRecord e;
    e.event_id = std::move(id);
    e.repo = std::move(repo);
    e.kind = kind;
    e.timestamp = ts(when);
    e.payload = std::move(payload);
    return e;
}

}  // namespace stg::testing
