// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/service/http_service.hpp"

#include <chrono>
#include <charconv>

#include <httplib.h>

#include "stg/app/json_codec.hpp"
#include "stg/common/error.hpp"

namespace stg::service {

namespace {

using nlohmann::json;

std::string_view code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::not_found: return "not_found";
        case ErrorCode::schema: return "schema";
        case ErrorCode::io: return "io";
        case ErrorCode::parse: return "parse";
        case ErrorCode::state: return "state";
        case ErrorCode::internal: return "internal";
    }
    return "internal";
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument:
        case ErrorCode::parse:
        case ErrorCode::schema: return 400;
        case ErrorCode::not_found: return 404;
        case ErrorCode::state: return 409;
        default: return 500;
    }
}

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, std::string_view code,
                 const std::string& message) {
    reply(res, status, json{{"error", code}, {"message", message}});
}

// Runs `body`, translating exceptions into JSON error responses.
template <typename F>
void guarded(httplib::Response& res, F&& body) {
    try {
        body();
    } catch (const Error& e) {
        reply_error(res, http_status(e.code()), code_name(e.code()), e.what());
    } catch (const json::exception& e) {
        reply_error(res, 400, "invalid_argument", std::string("bad JSON body: ") + e.what());
    } catch (const std::exception& e) {
        reply_error(res, 500, "internal", e.what());
    }
}

json parse_body(const httplib::Request& req) {
    auto body = json::parse(req.body);
    if (!body.is_object()) throw InvalidArgument("request body must be a JSON object");
    return body;
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
    if (!req.has_param(name)) return fallback;
    auto text = req.get_param_value(name);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
        throw InvalidArgument(std::string("query parameter ") + name + " must be a positive integer");
    }
    return value;
}

feed::FeedView view_param(const httplib::Request& req) {
    if (!req.has_param("view")) return feed::FeedView::most_recent;
    auto text = req.get_param_value("view");
    auto view = feed::parse_feed_view(text);
    if (!view) throw InvalidArgument("unknown feed view '" + text + "'");
    return *view;
}

}  // namespace

Service::Service(Workspace& workspace, ServiceOptions options, std::shared_ptr<TelemetrySink> sink)
    : workspace_(workspace),
      options_(std::move(options)),
      telemetry_(std::make_unique<TelemetryQueue>(std::move(sink), options_.telemetry_queue)),
      server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

Service::~Service() { stop(); }

void Service::start() {
    if (!workspace_.has_indices()) {
        throw Error(ErrorCode::state, "indices not built under " + workspace_.data_dir().string() +
                                          "; run 'index build' first");
    }
    int bound = options_.port == 0 ? server_->bind_to_any_port(options_.host)
                                   : (server_->bind_to_port(options_.host, options_.port)
                                          ? options_.port
                                          : -1);
    if (bound < 0) {
        throw IoError("cannot bind " + options_.host + ":" + std::to_string(options_.port));
    }
    port_ = static_cast<std::uint16_t>(bound);
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void Service::wait() {
    if (thread_.joinable()) thread_.join();
}

void Service::stop() {
    std::lock_guard lock(stop_mutex_);
    if (stopped_) return;
    stopped_ = true;
    server_->stop();
    if (thread_.joinable()) thread_.join();
    telemetry_->flush();
}

void Service::remember(std::uint64_t seq, const TelemetryRecord& record) {
    std::lock_guard lock(cache_mutex_);
    recent_[seq] = record;
    recent_ids_[record.request_id] = seq;
    while (recent_.size() > options_.click_cache) {
        recent_ids_.erase(recent_.begin()->second.request_id);
        recent_.erase(recent_.begin());
    }
}

void Service::install_routes() {
    auto& srv = *server_;

    srv.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] {
            std::size_t docs = 0;
            if (workspace_.has_indices()) {
                docs = workspace_.artifact_index()->doc_count() +
                       workspace_.expert_index()->doc_count();
            }
            reply(res, 200,
                  json{{"status", "ok"},
                       {"nodes", workspace_.graph().stats().total_nodes()},
                       {"docs", docs}});
        });
    });

    srv.Post("/recommend", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto start = std::chrono::steady_clock::now();
            auto body = parse_body(req);
            recommend::RecommendationQuery q;
            q.title = body.value("title", "");
            q.description = body.value("description", "");
            auto requester = body.value("requester", "");
            if (requester.empty()) throw InvalidArgument("requester is required");
            q.requester = codec::parse_node_ref(requester);
            q.k = body.value("k", options_.default_k);
            if (q.k == 0) throw InvalidArgument("k must be positive");
            auto response = workspace_.recommend(q);

            auto seq = next_request_.fetch_add(1);
            std::string request_id = "req-" + std::to_string(seq);
            auto out = codec::to_json(response);
            out["request_id"] = request_id;
            reply(res, 200, out);

            TelemetryRecord rec;
            rec.request_id = request_id;
            rec.type = "search";
            rec.query = q.title + "\n" + q.description;
            rec.user = q.requester.str();
            for (const auto& r : response.artifacts) rec.results.push_back(r.doc_id);
            for (const auto& r : response.experts) rec.results.push_back(r.doc_id);
            rec.response_time_ms = std::chrono::duration<double, std::milli>(
                                       std::chrono::steady_clock::now() - start)
                                       .count();
            rec.timestamp = utc_now_millis();
            remember(seq, rec);
            telemetry_->submit(std::move(rec));
        });
    });

    srv.Post("/click", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto body = parse_body(req);
            auto request_id = body.at("request_id").get<std::string>();
            auto doc_id = body.at("doc_id").get<std::string>();
            TelemetryRecord rec;
            {
                std::lock_guard lock(cache_mutex_);
                auto it = recent_ids_.find(request_id);
                if (it == recent_ids_.end()) throw NotFoundError("unknown request id " + request_id);
                rec = recent_.at(it->second);
            }
            rec.type = "click";
            rec.clicked = doc_id;
            rec.response_time_ms = 0.0;
            rec.timestamp = utc_now_millis();
            bool queued = telemetry_->submit(std::move(rec));
            reply(res, 200, json{{"request_id", request_id}, {"doc_id", doc_id}, {"logged", queued}});
        });
    });

    srv.Get(R"(/feed/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto user = codec::parse_node_ref(req.matches[1].str());
            auto items = workspace_.feed(user, view_param(req),
                                         size_param(req, "limit", options_.feed_limit));
            reply(res, 200, json{{"user", user.str()}, {"items", codec::to_json(items)}});
        });
    });

    srv.Post("/follow", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto body = parse_body(req);
            auto user = codec::parse_node_ref(body.at("user").get<std::string>());
            auto item_text = body.at("item").get<std::string>();
            if (item_text.find(':') == std::string::npos) {
                throw InvalidArgument("item must be written Kind:id");
            }
            auto item = graph::NodeId::parse(item_text);
            bool followed = body.value("followed", true);
            auto set = workspace_.follow(user, item, followed);
            reply(res, 200, json{{"user", user.str()}, {"follows", codec::to_json(set)}});
        });
    });

    srv.Get(R"(/homepage/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto user = codec::parse_node_ref(req.matches[1].str());
            auto page = workspace_.homepage(user, view_param(req),
                                            size_param(req, "limit", options_.feed_limit));
            reply(res, 200, codec::to_json(page));
        });
    });
}

}  // namespace stg::service
