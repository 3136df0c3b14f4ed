// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

// JSON over HTTP/1.1.
//
//   GET  /health                          {status, nodes, docs}
//   POST /recommend  {title, description, requester, k?}
//   GET  /feed/{user}?view=&limit=
//   POST /follow     {user, item, followed}
//   GET  /homepage/{user}?view=&limit=
//   POST /click      {request_id, doc_id}
//
// Errors are {error: code, message}. Only /follow mutates state.

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "stg/app/workspace.hpp"
#include "stg/service/telemetry.hpp"

namespace httplib {
class Server;
}

namespace stg::service {

struct ServiceOptions {
    std::string host = "127.0.0.1";
    std::uint16_t port = 8080;  // 0 picks a free port
    std::size_t default_k = 10;
    std::size_t feed_limit = 50;
    std::size_t telemetry_queue = 4096;
    std::size_t click_cache = 10000;  // recent search records kept for /click
};

class Service {
public:
    // The workspace must outlive the service and have indices built.
    Service(Workspace& workspace, ServiceOptions options, std::shared_ptr<TelemetrySink> sink);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Binds and starts serving on a background thread. Throws IoError on bind
    // failure and Error(state) when the indices are missing.
    void start();
    std::uint16_t port() const { return port_; }
    // Blocks until stop() is called from another thread.
    void wait();
    // Stops accepting, finishes in-flight requests and drains telemetry.
    void stop();

    TelemetryQueue& telemetry() { return *telemetry_; }

private:
    void install_routes();
    void remember(std::uint64_t seq, const TelemetryRecord& record);

    Workspace& workspace_;
    ServiceOptions options_;
    std::unique_ptr<TelemetryQueue> telemetry_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    std::uint16_t port_ = 0;
    std::atomic<std::uint64_t> next_request_{1};

    std::mutex cache_mutex_;
    std::map<std::uint64_t, TelemetryRecord> recent_;  // keyed by request sequence
    std::map<std::string, std::uint64_t> recent_ids_;

    std::mutex stop_mutex_;
    bool stopped_ = false;
};

}  // namespace stg::service
