// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stgraph/stgraph.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "stg/app/config.hpp"
#include "stg/app/json_codec.hpp"
#include "stg/app/workspace.hpp"
#include "stg/common/error.hpp"
#include "stg/service/http_service.hpp"
#include "stg/synth/evaluate.hpp"
#include "stg/synth/generator.hpp"

struct stg_workspace {
    std::unique_ptr<stg::Workspace> impl;
};

struct stg_service {
    std::unique_ptr<stg::service::Service> impl;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

stg_status fail(stg_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Runs `body`, mapping exceptions to status codes.
template <typename F>
stg_status guarded(F&& body) {
    g_last_error.clear();
    try {
        body();
        return STG_OK;
    } catch (const stg::Error& e) {
        return fail(static_cast<stg_status>(static_cast<int>(e.code())), e.what());
    } catch (const json::exception& e) {
        return fail(STG_E_PARSE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(STG_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(STG_E_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void emit(char** out, const std::string& s) {
    if (out) *out = dup_string(s);
}

void require(const void* p, const char* what) {
    if (!p) throw stg::InvalidArgument(std::string(what) + " must not be null");
}

std::string str_or(const char* s, const char* fallback = "") { return s ? s : fallback; }

std::vector<std::string> csv(const char* text) {
    std::vector<std::string> out;
    if (!text) return out;
    for (auto part : stg::split(text, ',')) {
        if (!part.empty()) out.emplace_back(part);
    }
    return out;
}

stg::Timestamp timestamp_arg(const char* text) {
    require(text, "now");
    return stg::require_timestamp(text, "now");
}

stg::graph::NodeId node_arg(const char* text, const char* what) {
    require(text, what);
    return stg::codec::parse_node_ref(text);
}

stg::feed::FeedView view_arg(const char* text) {
    if (!text || !*text) return stg::feed::FeedView::most_recent;
    auto view = stg::feed::parse_feed_view(text);
    if (!view) throw stg::InvalidArgument(std::string("unknown feed view '") + text + "'");
    return *view;
}

stg::synth::CorpusSpec spec_from_json(const char* text) {
    stg::synth::CorpusSpec spec;
    if (!text || !*text) return spec;
    auto j = json::parse(text);
    if (!j.is_object()) throw stg::InvalidArgument("corpus spec must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "seed") spec.seed = value.get<std::uint64_t>();
        else if (key == "n_repos") spec.n_repos = value.get<std::size_t>();
        else if (key == "n_devs") spec.n_devs = value.get<std::size_t>();
        else if (key == "n_topics") spec.n_topics = value.get<std::size_t>();
        else if (key == "prs_per_dev") spec.prs_per_dev = value.get<std::size_t>();
        else if (key == "link_rate") spec.link_rate = value.get<double>();
        else if (key == "vocab_per_topic") spec.vocab_per_topic = value.get<std::size_t>();
        else if (key == "noise_rate") spec.noise_rate = value.get<double>();
        else if (key == "team_size") spec.team_size = value.get<std::size_t>();
        else throw stg::InvalidArgument("unknown corpus spec key '" + key + "'");
    }
    return spec;
}

json table_json(const stg::synth::AblationTable& table) {
    auto rows = [&](const std::vector<stg::synth::MetricRow>& list) {
        json out = json::array();
        for (const auto& row : list) {
            json acc = json::object();
            for (const auto& [k, v] : row.accuracy) acc[std::to_string(k)] = v;
            out.push_back({{"config", row.config}, {"accuracy", acc}, {"mrr", row.mrr},
                           {"queries", row.queries}});
        }
        return out;
    };
    return json{{"ks", table.ks},
                {"queries", table.queries},
                {"artifacts", rows(table.artifacts)},
                {"experts", rows(table.experts)},
                {"warnings", table.warnings}};
}

}  // namespace

extern "C" {

const char* stg_version(void) { return "0.1.0"; }

const char* stg_status_name(stg_status status) {
    switch (status) {
        case STG_OK: return "ok";
        case STG_E_INVALID_ARGUMENT: return "invalid_argument";
        case STG_E_NOT_FOUND: return "not_found";
        case STG_E_SCHEMA: return "schema";
        case STG_E_IO: return "io";
        case STG_E_PARSE: return "parse";
        case STG_E_STATE: return "state";
        case STG_E_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* stg_last_error(void) { return g_last_error.c_str(); }

void stg_string_free(char* s) { std::free(s); }

stg_status stg_config_load(const char* path, char** out_json) {
    return guarded([&] {
        require(path, "path");
        auto cfg = stg::load_config(path);
        emit(out_json, json{{"data_dir", cfg.data_dir.string()},
                            {"host", cfg.host},
                            {"port", cfg.port},
                            {"k", cfg.k},
                            {"retention_days", cfg.retention_days},
                            {"feed_limit", cfg.feed_limit},
                            {"telemetry_queue", cfg.telemetry_queue}}
                           .dump());
    });
}

stg_status stg_workspace_open(const char* data_dir, int retention_days, stg_workspace** out) {
    return guarded([&] {
        require(data_dir, "data_dir");
        require(out, "out");
        *out = nullptr;
        if (retention_days <= 0) throw stg::InvalidArgument("retention_days must be positive");
        auto ws = std::make_unique<stg_workspace>();
        ws->impl = std::make_unique<stg::Workspace>(data_dir, retention_days);
        *out = ws.release();
    });
}

void stg_workspace_close(stg_workspace* ws) { delete ws; }

stg_status stg_workspace_save(stg_workspace* ws) {
    return guarded([&] {
        require(ws, "workspace");
        ws->impl->save();
    });
}

stg_status stg_ingest_bootstrap(stg_workspace* ws, const char* repos_csv, const char* now,
                                char** out_report_json) {
    return guarded([&] {
        require(ws, "workspace");
        auto report = ws->impl->ingest_bootstrap(csv(repos_csv), timestamp_arg(now));
        emit(out_report_json, stg::codec::to_json(report).dump());
    });
}

stg_status stg_ingest_incremental(stg_workspace* ws, const char* now, int auto_heal,
                                  char** out_report_json) {
    return guarded([&] {
        require(ws, "workspace");
        auto report = ws->impl->ingest_incremental(timestamp_arg(now), auto_heal != 0);
        emit(out_report_json, stg::codec::to_json(report).dump());
    });
}

stg_status stg_heal_check(stg_workspace* ws, char** out_gaps_json) {
    return guarded([&] {
        require(ws, "workspace");
        emit(out_gaps_json, stg::codec::to_json(ws->impl->heal_check()).dump());
    });
}

stg_status stg_heal(stg_workspace* ws, const char* repos_csv, const char* now,
                    char** out_report_json) {
    return guarded([&] {
        require(ws, "workspace");
        auto report = ws->impl->heal(csv(repos_csv), timestamp_arg(now));
        emit(out_report_json, stg::codec::to_json(report).dump());
    });
}

stg_status stg_index_build(stg_workspace* ws, int use_metadata, int use_title,
                           int use_description) {
    return guarded([&] {
        require(ws, "workspace");
        ws->impl->build_indices({use_metadata != 0, use_title != 0, use_description != 0});
    });
}

stg_status stg_recommend(stg_workspace* ws, const char* title, const char* description,
                         const char* requester, size_t k, int include_timings, char** out_json) {
    return guarded([&] {
        require(ws, "workspace");
        stg::recommend::RecommendationQuery q;
        q.title = str_or(title);
        q.description = str_or(description);
        q.requester = node_arg(requester, "requester");
        q.k = k;
        auto response = ws->impl->recommend(q);
        emit(out_json, stg::codec::to_json(response, include_timings != 0).dump());
    });
}

stg_status stg_feed(stg_workspace* ws, const char* user, const char* view, size_t limit,
                    char** out_json) {
    return guarded([&] {
        require(ws, "workspace");
        if (limit == 0) throw stg::InvalidArgument("limit must be positive");
        auto items = ws->impl->feed(node_arg(user, "user"), view_arg(view), limit);
        emit(out_json, stg::codec::to_json(items).dump());
    });
}

stg_status stg_follow(stg_workspace* ws, const char* user, const char* item, int followed,
                      char** out_json) {
    return guarded([&] {
        require(ws, "workspace");
        require(item, "item");
        if (std::strchr(item, ':') == nullptr) {
            throw stg::InvalidArgument("item must be written Kind:id");
        }
        auto set = ws->impl->follow(node_arg(user, "user"), stg::graph::NodeId::parse(item),
                                    followed != 0);
        emit(out_json, stg::codec::to_json(set).dump());
    });
}

stg_status stg_homepage(stg_workspace* ws, const char* user, const char* view, size_t feed_limit,
                        char** out_json) {
    return guarded([&] {
        require(ws, "workspace");
        if (feed_limit == 0) throw stg::InvalidArgument("feed_limit must be positive");
        auto page = ws->impl->homepage(node_arg(user, "user"), view_arg(view), feed_limit);
        emit(out_json, stg::codec::to_json(page).dump());
    });
}

stg_status stg_graph_stats(stg_workspace* ws, char** out_json) {
    return guarded([&] {
        require(ws, "workspace");
        emit(out_json, stg::codec::to_json(ws->impl->graph().stats()).dump());
    });
}

stg_status stg_proximity(stg_workspace* ws, const char* a, const char* b, int max_depth,
                         int* out_distance) {
    return guarded([&] {
        require(ws, "workspace");
        require(out_distance, "out_distance");
        if (max_depth < 0) throw stg::InvalidArgument("max_depth must be >= 0");
        auto d = ws->impl->graph().proximity(node_arg(a, "a"), node_arg(b, "b"), max_depth);
        *out_distance = d ? *d : -1;
    });
}

stg_status stg_synth(const char* out_dir, const char* spec_json, char** out_manifest_json) {
    return guarded([&] {
        require(out_dir, "out_dir");
        auto corpus = stg::synth::generate(spec_from_json(spec_json));
        stg::synth::write_corpus(corpus, out_dir);
        emit(out_manifest_json, json{{"nodes", corpus.manifest.nodes},
                                     {"edges", corpus.manifest.edges},
                                     {"events", corpus.manifest.events},
                                     {"queries", corpus.truth.queries.size()}}
                                    .dump());
    });
}

stg_status stg_evaluate(stg_workspace* ws, const char* configs_csv, const char* ks_csv,
                        size_t max_queries, stg_eval_format format, char** out) {
    return guarded([&] {
        require(ws, "workspace");
        stg::synth::EvalOptions options;
        if (auto names = csv(configs_csv); !names.empty()) {
            options.configs.clear();
            for (const auto& name : names) {
                auto config = stg::synth::parse_ablation_config(name);
                if (!config) throw stg::InvalidArgument("unknown config '" + name + "'");
                options.configs.push_back(*config);
            }
        }
        if (auto ks = csv(ks_csv); !ks.empty()) {
            options.ks.clear();
            for (const auto& k : ks) {
                std::size_t pos = 0;
                unsigned long v = 0;
                try {
                    v = std::stoul(k, &pos);
                } catch (const std::exception&) {
                    pos = 0;
                }
                if (pos != k.size() || v == 0) throw stg::InvalidArgument("bad K value '" + k + "'");
                options.ks.push_back(v);
            }
        }
        if (max_queries > 0) options.max_queries = max_queries;
        auto truth = stg::synth::load_ground_truth(ws->impl->data_dir());
        auto table = stg::synth::evaluate(ws->impl->graph(), truth, options);
        switch (format) {
            case STG_EVAL_TSV: emit(out, stg::synth::format_tsv(table)); break;
            case STG_EVAL_TEXT: emit(out, stg::synth::format_text(table)); break;
            default: emit(out, table_json(table).dump()); break;
        }
    });
}

stg_status stg_service_start(stg_workspace* ws, const stg_service_options* options,
                             stg_service** out) {
    return guarded([&] {
        require(ws, "workspace");
        require(out, "out");
        *out = nullptr;
        stg::service::ServiceOptions opts;
        std::string telemetry = (ws->impl->data_dir() / "telemetry.ndjson").string();
        if (options) {
            if (options->host) opts.host = options->host;
            opts.port = options->port;
            if (options->default_k) opts.default_k = options->default_k;
            if (options->feed_limit) opts.feed_limit = options->feed_limit;
            if (options->telemetry_queue) opts.telemetry_queue = options->telemetry_queue;
            if (options->telemetry_path) telemetry = options->telemetry_path;
        } else {
            opts.port = 0;
        }
        auto sink = std::make_shared<stg::service::FileSink>(telemetry);
        auto svc = std::make_unique<stg_service>();
        svc->impl = std::make_unique<stg::service::Service>(*ws->impl, opts, std::move(sink));
        svc->impl->start();
        *out = svc.release();
    });
}

uint16_t stg_service_port(const stg_service* service) {
    return service ? service->impl->port() : 0;
}

void stg_service_stop(stg_service* service) {
    if (!service) return;
    service->impl->stop();
    delete service;
}

}  // extern "C"
