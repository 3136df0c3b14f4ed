// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include <doctest.h>

#include <httplib.h>

#include <algorithm>
#include <condition_variable>
#include <thread>

#include "stg/app/config.hpp"
#include "stg/app/json_codec.hpp"
#include "stg/app/workspace.hpp"
#include "stg/common/error.hpp"
#include "stg/service/http_service.hpp"
#include "stg/service/telemetry.hpp"
#include "stg/synth/generator.hpp"
#include "support.hpp"

using namespace stg;
using namespace stg::service;
using nlohmann::json;

namespace {

// Sink that blocks every write until released.
class GateSink : public TelemetrySink {
public:
    void write(const TelemetryRecord& record) override {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return open_; });
        records_.push_back(record);
    }
    void open() {
        {
            std::lock_guard lock(mutex_);
            open_ = true;
        }
        cv_.notify_all();
    }
    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return records_.size();
    }

private:
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    bool open_ = false;
    std::vector<TelemetryRecord> records_;
};

class SlowSink : public TelemetrySink {
public:
    explicit SlowSink(std::chrono::milliseconds delay) : delay_(delay) {}
    void write(const TelemetryRecord&) override { std::this_thread::sleep_for(delay_); }

private:
    std::chrono::milliseconds delay_;
};

class ThrowingSink : public TelemetrySink {
public:
    void write(const TelemetryRecord&) override { throw std::runtime_error("disk full"); }
};

TelemetryRecord record(const std::string& id) {
    TelemetryRecord r;
    r.request_id = id;
    r.type = "search";
    r.query = "socket timeout";
    r.user = "User:dev01";
    r.results = {"PullRequest:PR-0001", "User:dev02"};
    r.response_time_ms = 1.5;
    r.timestamp = "2026-01-05T09:00:00.000Z";
    return r;
}

// Small synthetic workspace with indices, shared by the HTTP tests.
struct ServedWorkspace {
    testing::TempDir dir{"stg-http"};
    std::unique_ptr<Workspace> ws;
    synth::SynthCorpus corpus;

    ServedWorkspace() {
        synth::CorpusSpec spec;
        spec.n_devs = 8;
        spec.prs_per_dev = 4;
        spec.n_repos = 2;
        spec.n_topics = 3;
        corpus = synth::generate(spec);
        synth::write_corpus(corpus, dir.path());
        ws = std::make_unique<Workspace>(dir.path());
        ws->ingest_bootstrap({}, testing::ts("2026-06-01"));
        ws->build_indices();
    }
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST_CASE("config parsing") {
    auto cfg = parse_config(
        "# comment\n"
        "data_dir = \"/srv/data\"\n"
        "port=9090   # trailing\n"
        "k = 5\n"
        "\n"
        "retention_days = 7\n"
        "feed_limit = 20\n"
        "telemetry_queue = 16\n"
        "host = 0.0.0.0\n");
    CHECK(cfg.data_dir == "/srv/data");
    CHECK(cfg.port == 9090);
    CHECK(cfg.k == 5);
    CHECK(cfg.retention_days == 7);
    CHECK(cfg.feed_limit == 20);
    CHECK(cfg.telemetry_queue == 16);
    CHECK(cfg.host == "0.0.0.0");

    CHECK(parse_config("").port == 8080);
    CHECK_THROWS_AS(parse_config("colour = blue"), ParseError);
    CHECK_THROWS_AS(parse_config("port = 70000"), ParseError);
    CHECK_THROWS_AS(parse_config("retention_days = 0"), ParseError);
    CHECK_THROWS_AS(parse_config("just words"), ParseError);
    try {
        parse_config("k = 3\nk = x\n");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    testing::TempDir dir;
    CHECK_THROWS_AS(load_config(dir / "missing.conf"), IoError);
    write_file(dir / "a.conf", "k = 4\n");
    CHECK(load_config(dir / "a.conf").k == 4);
}

TEST_CASE("node references") {
    CHECK(codec::parse_node_ref("dev01") == graph::NodeId{graph::NodeKind::User, "dev01"});
    CHECK(codec::parse_node_ref("Repository:mail") == graph::NodeId{graph::NodeKind::Repository, "mail"});
    CHECK_THROWS_AS(codec::parse_node_ref(""), InvalidArgument);
}

TEST_CASE("telemetry records round-trip through JSON and files") {
    auto r = record("req-1");
    r.clicked = "PullRequest:PR-0001";
    CHECK(telemetry_from_json(to_json(r)) == r);
    CHECK(to_json(record("x")).at("clicked").is_null());

    testing::TempDir dir;
    {
        FileSink sink(dir / "t.ndjson");
        sink.write(record("a"));
        sink.write(r);
    }
    auto back = read_telemetry_file(dir / "t.ndjson");
    REQUIRE(back.size() == 2);
    CHECK(back[0] == record("a"));
    CHECK(back[1] == r);
    CHECK(read_lines(dir / "t.ndjson").size() == 2);
    auto now = utc_now_millis();
    CHECK(now.size() == 24);
    CHECK(now.back() == 'Z');
}

TEST_CASE("telemetry queue") {
    SUBCASE("writes everything when the sink keeps up") {
        auto sink = std::make_shared<MemorySink>();
        TelemetryQueue q(sink, 64);
        for (int i = 0; i < 50; ++i) CHECK(q.submit(record("r" + std::to_string(i))));
        q.flush();
        CHECK(sink->records().size() == 50);
        CHECK(sink->records()[49].request_id == "r49");
        auto c = q.counters();
        CHECK(c.submitted == 50);
        CHECK(c.written == 50);
        CHECK(c.dropped == 0);
    }
    SUBCASE("a stalled sink never blocks submit; overflow is dropped and counted") {
        auto sink = std::make_shared<GateSink>();
        auto q = std::make_unique<TelemetryQueue>(sink, 4);
        auto start = std::chrono::steady_clock::now();
        std::size_t accepted = 0;
        for (int i = 0; i < 20; ++i) accepted += q->submit(record("r" + std::to_string(i))) ? 1 : 0;
        auto spent = std::chrono::steady_clock::now() - start;
        CHECK(spent < std::chrono::milliseconds(200));
        CHECK(accepted >= 4);
        CHECK(accepted <= 5);  // the worker may already hold one record
        CHECK(q->counters().dropped == 20 - accepted);
        sink->open();
        q->flush();
        CHECK(sink->size() == accepted);
        q.reset();
    }
    SUBCASE("sink failures are absorbed") {
        TelemetryQueue q(std::make_shared<ThrowingSink>(), 8);
        CHECK(q.submit(record("a")));
        q.flush();
        CHECK(q.counters().failed == 1);
        CHECK(q.counters().written == 0);
    }
    SUBCASE("destruction drains pending records") {
        auto sink = std::make_shared<MemorySink>();
        {
            TelemetryQueue q(sink, 128);
            for (int i = 0; i < 100; ++i) q.submit(record("r" + std::to_string(i)));
        }
        CHECK(sink->records().size() == 100);
    }
}

TEST_CASE("workspace") {
    ServedWorkspace s;
    auto& ws = *s.ws;
    CHECK(ws.has_indices());
    auto stats = ws.graph().stats();
    CHECK(stats.node_count_by_kind[graph::NodeKind::PullRequest] == s.corpus.manifest.nodes.at("PullRequest"));

    const auto& q = s.corpus.truth.queries.front();
    recommend::RecommendationQuery rq;
    rq.title = q.title;
    rq.description = q.description;
    rq.requester = graph::NodeId::parse(q.requester);
    auto direct = recommend::recommend(rq, *ws.artifact_index(), *ws.expert_index(), ws.graph());
    auto via = ws.recommend(rq);
    CHECK(via.artifacts == direct.artifacts);
    CHECK(via.experts == direct.experts);

    ws.save();
    Workspace reopened(s.dir.path());
    CHECK(reopened.graph().snapshot() == ws.graph().snapshot());
    CHECK(reopened.has_indices());
    CHECK(*reopened.artifact_index() == *ws.artifact_index());
    CHECK(reopened.pipeline().registry().entries() == ws.pipeline().registry().entries());

    testing::TempDir empty;
    Workspace fresh(empty.path());
    CHECK_FALSE(fresh.has_indices());
    try {
        fresh.recommend(rq);
        FAIL("expected a state error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::state);
    }
    CHECK(std::filesystem::is_directory(empty / "events"));
}

TEST_CASE("HTTP endpoints") {
    ServedWorkspace s;
    auto sink = std::make_shared<MemorySink>();
    ServiceOptions opts;
    opts.port = 0;
    Service svc(*s.ws, opts, sink);
    svc.start();
    httplib::Client client("127.0.0.1", svc.port());

    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    auto h = json::parse(health->body);
    CHECK(h.at("status") == "ok");
    CHECK(h.at("nodes").get<std::size_t>() == s.ws->graph().stats().total_nodes());
    CHECK(h.at("docs").get<std::size_t>() > 0);

    const auto& q = s.corpus.truth.queries.front();
    json body{{"title", q.title}, {"description", q.description}, {"requester", q.requester}, {"k", 5}};
    auto rec = client.Post("/recommend", body.dump(), "application/json");
    REQUIRE(rec);
    CHECK(rec->status == 200);
    auto r = json::parse(rec->body);

    recommend::RecommendationQuery rq;
    rq.title = q.title;
    rq.description = q.description;
    rq.requester = graph::NodeId::parse(q.requester);
    rq.k = 5;
    auto expected = codec::to_json(s.ws->recommend(rq), false);
    CHECK(r.at("artifacts") == expected.at("artifacts"));
    CHECK(r.at("experts") == expected.at("experts"));
    CHECK(r.at("flags") == expected.at("flags"));
    auto request_id = r.at("request_id").get<std::string>();

    auto click = client.Post("/click", json{{"request_id", request_id}, {"doc_id", "PullRequest:PR-0001"}}.dump(),
                             "application/json");
    REQUIRE(click);
    CHECK(click->status == 200);
    auto unknown = client.Post("/click", json{{"request_id", "req-999"}, {"doc_id", "x"}}.dump(), "application/json");
    CHECK(unknown->status == 404);

    SUBCASE("errors map to status codes") {
        auto bad_json = client.Post("/recommend", "{not json", "application/json");
        CHECK(bad_json->status == 400);
        CHECK(json::parse(bad_json->body).contains("error"));
        CHECK(json::parse(bad_json->body).contains("message"));
        auto no_user = client.Post("/recommend", json{{"title", "x"}}.dump(), "application/json");
        CHECK(no_user->status == 400);
        auto zero_k = client.Post("/recommend", json{{"title", "x"}, {"requester", "dev01"}, {"k", 0}}.dump(),
                                  "application/json");
        CHECK(zero_k->status == 400);
        CHECK(client.Get("/feed/nobody")->status == 404);
        CHECK(client.Get("/feed/dev01?view=sideways")->status == 400);
        CHECK(client.Get("/feed/dev01?limit=-3")->status == 400);
        auto follow_user = client.Post("/follow", json{{"user", "dev01"}, {"item", "User:dev02"}}.dump(),
                                       "application/json");
        CHECK(follow_user->status == 400);
        CHECK(client.Get("/nothing-here")->status == 404);
    }

    SUBCASE("feed, follow and homepage") {
        auto before = s.ws->graph().snapshot();
        auto feed = client.Get("/feed/dev01?view=most_recent&limit=5");
        REQUIRE(feed);
        CHECK(feed->status == 200);
        auto items = json::parse(feed->body).at("items");
        CHECK(items.size() <= 5);
        CHECK(items == codec::to_json(s.ws->feed(graph::NodeId::parse("User:dev01"), feed::FeedView::most_recent, 5)));

        auto repo = "Repository:" + s.corpus.events.begin()->first;
        auto f = client.Post("/follow", json{{"user", "dev01"}, {"item", repo}, {"followed", true}}.dump(),
                             "application/json");
        REQUIRE(f);
        CHECK(f->status == 200);
        CHECK(json::parse(f->body).at("follows") == json::array({repo}));
        CHECK(s.ws->follows().followed(graph::NodeId::parse("User:dev01")).size() == 1);
        CHECK(std::filesystem::exists(s.dir / "follows.tsv"));

        auto home = client.Get("/homepage/dev01?view=relevance&limit=3");
        REQUIRE(home);
        CHECK(home->status == 200);
        auto page = json::parse(home->body);
        for (const char* key : {"user_details", "active", "feed", "related_people"}) CHECK(page.contains(key));
        CHECK(page.at("feed").size() <= 3);
        CHECK(s.ws->graph().snapshot() == before);
    }

    svc.stop();
    svc.stop();
    auto records = sink->records();
    REQUIRE(records.size() == 2);
    CHECK(records[0].type == "search");
    CHECK(records[0].request_id == request_id);
    CHECK(records[0].response_time_ms >= 0.0);
    CHECK_FALSE(records[0].results.empty());
    CHECK(records[1].type == "click");
    CHECK(records[1].clicked == std::optional<std::string>("PullRequest:PR-0001"));
    CHECK(records[1].results == records[0].results);
}

TEST_CASE("request latency does not depend on telemetry sink latency") {
    ServedWorkspace s;
    const auto& q = s.corpus.truth.queries.front();
    json body{{"title", q.title}, {"description", q.description}, {"requester", q.requester}};

    auto measure = [&](std::shared_ptr<TelemetrySink> sink) {
        ServiceOptions opts;
        opts.port = 0;
        opts.telemetry_queue = 8;
        Service svc(*s.ws, opts, std::move(sink));
        svc.start();
        httplib::Client client("127.0.0.1", svc.port());
        std::vector<double> ms;
        for (int i = 0; i < 25; ++i) {
            auto t0 = std::chrono::steady_clock::now();
            auto res = client.Post("/recommend", body.dump(), "application/json");
            ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
            REQUIRE(res);
            CHECK(res->status == 200);
        }
        auto counters = svc.telemetry().counters();
        svc.stop();
        return std::make_pair(median(ms), counters);
    };

    auto [healthy, healthy_counters] = measure(std::make_shared<MemorySink>());
    auto [stalled, stalled_counters] = measure(std::make_shared<SlowSink>(std::chrono::milliseconds(100)));
    MESSAGE("median latency healthy=" << healthy << "ms stalled=" << stalled << "ms");
    CHECK(healthy_counters.written == 25);
    // Each stalled write costs 100 ms; a blocking design would show it per request.
    CHECK(stalled <= 2.0 * healthy + 5.0);
    CHECK(stalled_counters.dropped > 0);
}
