// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include <doctest.h>

#include "stg/common/error.hpp"
#include "stg/ingest/pipeline.hpp"
#include "support.hpp"

using namespace stg;
using namespace stg::ingest;
using stg::testing::event;
using stg::testing::ts;
using graph::NodeKind;
using graph::EdgeType;

namespace {

EventRecord pr_created(const std::string& id, const std::string& repo, const char* when,
                       const std::string& pr, const std::string& author) {
    return event(id, repo, EventKind::pr_created, when,
                 {{"pr", pr}, {"author", author}, {"title", "Title of " + pr}});
}

EventRecord review(const std::string& id, const std::string& repo, const char* when,
                   const std::string& pr, const std::string& reviewer) {
    return event(id, repo, EventKind::review_assigned, when, {{"pr", pr}, {"reviewer", reviewer}});
}

EventRecord state_change(const std::string& id, const std::string& repo, const char* when,
                         const std::string& pr, const std::string& state) {
    return event(id, repo, EventKind::pr_state_changed, when,
                 {{"pr", pr}, {"actor", "bot"}, {"state", state}});
}

graph::GraphSnapshot replay(std::vector<EventRecord> events) {
    std::sort(events.begin(), events.end(), chronological_less);
    graph::GraphStore g;
    for (const auto& e : events) {
        for (const auto& m : to_mutations(e)) g.apply(m);
    }
    return g.snapshot();
}

struct Fixture {
    testing::TempDir dir{"stg-ingest"};
    graph::GraphStore graph;
    Pipeline pipeline{graph, dir.path()};

    void write(const std::string& repo, StreamKind kind, int seq, const std::vector<EventRecord>& events) {
        write_event_file(dir / make_event_file_name(repo, kind, static_cast<std::uint64_t>(seq)), events);
    }
    FileStatus status(const std::string& repo, StreamKind kind, int seq) const {
        auto entry = pipeline.registry().get(make_event_file_name(repo, kind, static_cast<std::uint64_t>(seq)));
        REQUIRE(entry);
        return entry->status;
    }
};

}  // namespace

TEST_CASE("event lines round-trip") {
    auto e = event("r-1", "repo a", EventKind::pr_created, "2026-01-05T09:00:00Z",
                   {{"pr", "PR-1"}, {"author", "dev,01"}, {"title", "Fix a,b & c=d"}});
    auto line = format_event_line(e);
    CHECK(parse_event_line(line) == e);
    for (int k = 0; k <= static_cast<int>(EventKind::user_reports_to); ++k) {
        auto kind = static_cast<EventKind>(k);
        CHECK(parse_event_kind(to_string(kind)) == kind);
    }
}

TEST_CASE("event validation names the missing key") {
    auto e = event("r-1", "repo", EventKind::review_assigned, "2026-01-05", {{"pr", "PR-1"}});
    try {
        validate_event(e);
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(std::string(err.what()).find("reviewer") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_event_line("r-1,repo,pr_exploded,2026-01-05T00:00:00Z,pr=x"), ParseError);
    CHECK_THROWS_AS(parse_event_line("r-1,repo,pr_created,not-a-time,pr=x&author=y"), ParseError);
    CHECK_THROWS_AS(parse_event_line("only,three,fields"), ParseError);
}

TEST_CASE("event files tolerate malformed rows but not a bad header") {
    testing::TempDir dir;
    write_lines(dir / "a.events.csv",
                {std::string(kEventsHeader),
                 format_event_line(pr_created("a-1", "a", "2026-01-01T00:00:00Z", "PR-1", "u1")),
                 "garbage",
                 format_event_line(pr_created("a-2", "a", "2026-01-02T00:00:00Z", "PR-2", "u1"))});
    auto parsed = read_event_file(dir / "a.events.csv");
    CHECK(parsed.events.size() == 2);
    REQUIRE(parsed.errors.size() == 1);
    CHECK(parsed.errors[0].rfind("line 3:", 0) == 0);

    write_lines(dir / "b.events.csv", {"id,repo,kind"});
    CHECK_THROWS_AS(read_event_file(dir / "b.events.csv"), ParseError);
    CHECK_THROWS_AS(read_event_file(dir / "missing.events.csv"), IoError);
}

TEST_CASE("file classification") {
    CHECK(classify_file("src/net/Socket.cpp") == "source");
    CHECK(classify_file("config/app.yaml") == "configuration");
    CHECK(classify_file("build/CMakeLists.txt") == "project");
    CHECK(classify_file("Mail.csproj") == "project");
    CHECK(classify_file("README.md") == "other");
    CHECK(classify_file("LICENSE") == "other");
}

TEST_CASE("event file names") {
    auto a = parse_event_file_name("repoA.bootstrap.events.csv");
    REQUIRE(a);
    CHECK(a->repo == "repoA");
    CHECK(a->stream_kind == StreamKind::bootstrap);

    auto b = parse_event_file_name("my.repo.incremental.0042.events.csv");
    REQUIRE(b);
    CHECK(b->repo == "my.repo");
    CHECK(b->stream_kind == StreamKind::incremental);
    CHECK(b->seq == 42);

    CHECK(make_event_file_name("x", StreamKind::incremental, 7) == "x.incremental.0007.events.csv");
    CHECK_FALSE(parse_event_file_name("x.events.csv"));
    CHECK_FALSE(parse_event_file_name("x.sideways.0001.events.csv"));
    CHECK_FALSE(parse_event_file_name("x.bootstrap.0001.csv"));
}

TEST_CASE("registry transitions") {
    Registry r;
    RegistryEntry e;
    e.file_name = "a.bootstrap.0001.events.csv";
    e.repos_covered = {"a"};
    CHECK(r.add(e));
    CHECK_FALSE(r.add(e));
    CHECK_THROWS_AS(r.transition(e.file_name, FileStatus::completed), Error);
    r.transition(e.file_name, FileStatus::processing);
    r.transition(e.file_name, FileStatus::completed, 12);
    CHECK_THROWS_AS(r.transition(e.file_name, FileStatus::processing), Error);
    CHECK_THROWS_AS(r.transition("nope", FileStatus::processing), NotFoundError);
    CHECK(r.get(e.file_name)->processing_duration_ms == 12);

    for (auto from : {FileStatus::discovered, FileStatus::processing, FileStatus::completed, FileStatus::failed}) {
        for (auto to : {FileStatus::discovered, FileStatus::processing, FileStatus::completed, FileStatus::failed}) {
            bool expected = (from == FileStatus::discovered && to == FileStatus::processing) ||
                            (from == FileStatus::processing && (to == FileStatus::completed || to == FileStatus::failed));
            CHECK(legal_transition(from, to) == expected);
        }
    }

    testing::TempDir dir;
    r.save(dir / "registry.tsv");
    Registry loaded;
    loaded.load(dir / "registry.tsv");
    CHECK(loaded.entries() == r.entries());
}

TEST_CASE("pipeline state watermark never moves backwards") {
    PipelineState s;
    s.record_success(StreamKind::incremental, ts("2026-01-05"));
    s.record_success(StreamKind::incremental, ts("2026-01-03"));
    CHECK(s.last_run(StreamKind::incremental) == ts("2026-01-05"));
    CHECK_FALSE(s.last_run(StreamKind::bootstrap));

    s.healing_lock = {"b repo", "a"};
    s.retention_days = 5;
    testing::TempDir dir;
    s.save(dir / "pipeline.tsv");
    CHECK(PipelineState::load(dir / "pipeline.tsv") == s);
}

TEST_CASE("discover") {
    Fixture f;
    f.write("a", StreamKind::bootstrap, 1, {});
    f.write("b", StreamKind::bootstrap, 1, {});
    write_lines(f.dir / "notes.txt", {"ignored"});
    write_lines(f.dir / "badname.events.csv", {std::string(kEventsHeader)});

    auto first = f.pipeline.discover();
    CHECK(first.added.size() == 2);
    for (const auto& e : first.added) CHECK(e.status == FileStatus::discovered);
    REQUIRE(first.skipped.size() == 1);
    CHECK(first.skipped[0].rfind("badname.events.csv", 0) == 0);

    auto again = f.pipeline.discover();
    CHECK(again.added.empty());

    graph::GraphStore g;
    Pipeline missing(g, f.dir / "nope");
    CHECK_THROWS_AS(missing.discover(), IoError);
}

TEST_CASE("bootstrap") {
    Fixture f;
    std::vector<EventRecord> events{
        pr_created("a-1", "a", "2026-01-01T10:00:00Z", "PR-1", "u1"),
        pr_created("a-2", "a", "2026-01-01T11:00:00Z", "PR-2", "u2"),
        pr_created("a-3", "a", "2026-01-01T12:00:00Z", "PR-3", "u1"),
    };
    f.write("a", StreamKind::bootstrap, 1, events);
    f.write("empty", StreamKind::bootstrap, 1, {});
    f.pipeline.discover();

    auto report = f.pipeline.run_bootstrap({}, ts("2026-01-02"));
    CHECK(report.errors.empty());
    CHECK(report.events_applied == 3);
    CHECK(report.files_processed == 2);
    CHECK(report.rebuilt_repos == std::vector<std::string>{"a", "empty"});
    CHECK(report.healed_repos.empty());
    CHECK(f.status("empty", StreamKind::bootstrap, 1) == FileStatus::completed);

    auto stats = f.graph.stats();
    CHECK(stats.node_count_by_kind[NodeKind::Repository] == 1);
    CHECK(stats.node_count_by_kind[NodeKind::PullRequest] == 3);
    CHECK(stats.node_count_by_kind[NodeKind::User] == 2);
    CHECK(stats.edge_count_by_type[EdgeType::contains] == 3);
    CHECK(stats.edge_count_by_type[EdgeType::creates] == 3);
    CHECK(f.graph.snapshot() == replay(events));
    CHECK(f.pipeline.state().last_run(StreamKind::bootstrap) == ts("2026-01-02"));

    SUBCASE("a second bootstrap of the same history leaves the graph unchanged") {
        auto before = f.graph.snapshot();
        f.write("a", StreamKind::bootstrap, 2, events);
        f.pipeline.discover();
        f.pipeline.run_bootstrap({"a"}, ts("2026-01-03"));
        CHECK(f.graph.snapshot() == before);
    }
    SUBCASE("malformed rows are reported and skipped") {
        write_lines(f.dir / "c.bootstrap.0001.events.csv",
                    {std::string(kEventsHeader), "broken row",
                     format_event_line(pr_created("c-1", "c", "2026-01-01T00:00:00Z", "PR-9", "u9"))});
        f.pipeline.discover();
        auto r = f.pipeline.run_bootstrap({"c"}, ts("2026-01-03"));
        CHECK(r.errors.size() == 1);
        CHECK(r.events_applied == 1);
        CHECK(f.graph.contains({NodeKind::PullRequest, "PR-9"}));
    }
    SUBCASE("rows for another repository are rejected") {
        f.write("d", StreamKind::bootstrap, 1, {pr_created("x-1", "x", "2026-01-01T00:00:00Z", "PR-X", "u1")});
        f.pipeline.discover();
        auto r = f.pipeline.run_bootstrap({"d"}, ts("2026-01-03"));
        CHECK(r.errors.size() == 1);
        CHECK_FALSE(f.graph.contains({NodeKind::PullRequest, "PR-X"}));
    }
    SUBCASE("unknown repository fails") {
        auto r = f.pipeline.run_bootstrap({"zzz"}, ts("2026-01-03"));
        CHECK(r.failed_repos == std::vector<std::string>{"zzz"});
    }
}

TEST_CASE("incremental runs") {
    Fixture f;
    std::vector<EventRecord> base{pr_created("a-1", "a", "2026-01-01T10:00:00Z", "PR-1", "u1")};
    f.write("a", StreamKind::bootstrap, 1, base);
    f.pipeline.discover();
    f.pipeline.run_bootstrap({}, ts("2026-01-02"));

    SUBCASE("one review event adds one edge") {
        f.write("a", StreamKind::incremental, 1, {review("a-2", "a", "2026-01-02T08:00:00Z", "PR-1", "u2")});
        f.pipeline.discover();
        auto before = f.graph.stats().edge_count_by_type[EdgeType::reviews];
        auto r = f.pipeline.run_incremental(ts("2026-01-02T09:00:00Z"));
        CHECK(r.events_applied == 1);
        CHECK(f.graph.stats().edge_count_by_type[EdgeType::reviews] == before + 1);
        CHECK(f.status("a", StreamKind::incremental, 1) == FileStatus::completed);
        CHECK(f.pipeline.state().last_run(StreamKind::incremental) == ts("2026-01-02T09:00:00Z"));

        auto again = f.pipeline.run_incremental(ts("2026-01-02T10:00:00Z"));
        CHECK(again.files_processed == 0);
    }

    SUBCASE("files apply in timestamp order, not name order") {
        std::vector<EventRecord> late{state_change("a-3", "a", "2026-01-03T08:00:00Z", "PR-1", "completed")};
        std::vector<EventRecord> early{state_change("a-2", "a", "2026-01-02T08:00:00Z", "PR-1", "abandoned")};
        f.write("a", StreamKind::incremental, 1, late);
        f.write("a", StreamKind::incremental, 2, early);
        f.pipeline.discover();
        auto r = f.pipeline.run_incremental(ts("2026-01-03T09:00:00Z"));
        CHECK(r.files_processed == 2);
        auto all = base;
        all.insert(all.end(), early.begin(), early.end());
        all.insert(all.end(), late.begin(), late.end());
        CHECK(f.graph.snapshot() == replay(all));
        CHECK(f.graph.node({NodeKind::PullRequest, "PR-1"})->attributes.at("state") == "completed");
    }

    SUBCASE("a locked repository is skipped and its file stays discovered") {
        f.write("a", StreamKind::incremental, 1, {review("a-2", "a", "2026-01-05T08:00:00Z", "PR-1", "u2")});
        f.pipeline.discover();
        auto gapped = f.pipeline.run_incremental(ts("2026-01-06"));
        REQUIRE(gapped.gaps.size() == 1);
        CHECK(f.pipeline.state().healing_lock.count("a") == 1);
        f.write("a", StreamKind::incremental, 2, {review("a-3", "a", "2026-01-06T08:00:00Z", "PR-1", "u3")});
        f.pipeline.discover();
        auto r = f.pipeline.run_incremental(ts("2026-01-07"));
        CHECK(r.files_processed == 0);
        CHECK(r.skipped_files.size() == 2);
        CHECK(f.status("a", StreamKind::incremental, 2) == FileStatus::discovered);
    }

    SUBCASE("an incremental file for a never-bootstrapped repository is a gap") {
        f.write("b", StreamKind::incremental, 1, {pr_created("b-1", "b", "2026-01-02T05:00:00Z", "PR-B", "u1")});
        f.pipeline.discover();
        auto r = f.pipeline.run_incremental(ts("2026-01-02T06:00:00Z"));
        CHECK(r.gaps.size() == 1);
        CHECK_FALSE(f.graph.contains({NodeKind::PullRequest, "PR-B"}));
    }
}

TEST_CASE("gap detection boundary") {
    testing::TempDir dir;
    PipelineState state;
    state.retention_days = 3;
    state.record_success(StreamKind::incremental, ts("2026-01-10T00:00:00Z"));

    auto entry_for = [&](const char* oldest) {
        RegistryEntry e;
        e.file_name = "r.incremental.0001.events.csv";
        e.stream_kind = StreamKind::incremental;
        e.repos_covered = {"r"};
        write_event_file(dir / e.file_name,
                         {review("r-2", "r", "2026-01-20T00:00:00Z", "PR-1", "u"), review("r-1", "r", oldest, "PR-1", "u")});
        return e;
    };

    CHECK(detect_gap(entry_for("2026-01-14T00:00:00Z"), state, dir.path()));
    CHECK_FALSE(detect_gap(entry_for("2026-01-10T00:00:00Z"), state, dir.path()));
    CHECK_FALSE(detect_gap(entry_for("2026-01-13T00:00:00Z"), state, dir.path()));
    CHECK(detect_gap(entry_for("2026-01-13T00:00:01Z"), state, dir.path()));

    auto check = check_gap(entry_for("2026-01-14T00:00:00Z"), state, dir.path());
    CHECK(check.days == doctest::Approx(4.0));
    CHECK(check.repo == "r");

    SUBCASE("detection is pure") {
        auto entry = entry_for("2026-01-14T00:00:00Z");
        auto before = state;
        bool first = detect_gap(entry, state, dir.path());
        CHECK(detect_gap(entry, state, dir.path()) == first);
        CHECK(state == before);
    }
    SUBCASE("the bootstrap watermark is the fallback reference") {
        PipelineState boot;
        boot.record_success(StreamKind::bootstrap, ts("2026-01-10T00:00:00Z"));
        CHECK(detect_gap(entry_for("2026-01-14T00:00:00Z"), boot, dir.path()));
        CHECK(detect_gap(entry_for("2026-01-10T00:00:00Z"), PipelineState{}, dir.path()));
    }
}

TEST_CASE("healing after a dropped file converges to a clean replay") {
    Fixture f;
    std::vector<EventRecord> all{pr_created("a-1", "a", "2026-01-01T10:00:00Z", "PR-1", "u1"),
                                 pr_created("a-2", "a", "2026-01-01T11:00:00Z", "PR-2", "u2")};
    f.write("a", StreamKind::bootstrap, 1, all);
    f.pipeline.discover();
    f.pipeline.run_bootstrap({}, ts("2026-01-02"));

    // This file is produced upstream but never delivered.
    std::vector<EventRecord> dropped{review("a-3", "a", "2026-01-02T12:00:00Z", "PR-1", "u2"),
                                     state_change("a-4", "a", "2026-01-03T12:00:00Z", "PR-2", "abandoned")};
    std::vector<EventRecord> delivered{review("a-5", "a", "2026-01-07T12:00:00Z", "PR-2", "u1")};
    all.insert(all.end(), dropped.begin(), dropped.end());
    all.insert(all.end(), delivered.begin(), delivered.end());

    int seq = 2;
    int exports = 0;
    f.pipeline.set_bootstrap_exporter([&](const std::string& repo, Timestamp) {
        ++exports;
        std::vector<EventRecord> mine;
        for (const auto& e : all) {
            if (e.repo == repo) mine.push_back(e);
        }
        f.write(repo, StreamKind::bootstrap, seq++, mine);
    });

    f.write("a", StreamKind::incremental, 2, delivered);
    f.pipeline.discover();
    CHECK(f.pipeline.check_gaps().at(0).gap);
    CHECK(f.pipeline.registry().get("a.incremental.0002.events.csv")->status == FileStatus::discovered);

    auto report = f.pipeline.run_incremental_and_heal(ts("2026-01-08"));
    CHECK(report.gaps.size() == 1);
    CHECK(report.healed_repos == std::vector<std::string>{"a"});
    CHECK(exports == 1);
    CHECK(f.pipeline.state().healing_lock.empty());
    CHECK(f.graph.snapshot() == replay(all));

    SUBCASE("the deferred incremental file is harmless afterwards") {
        f.pipeline.run_incremental(ts("2026-01-08T01:00:00Z"));
        CHECK(f.graph.snapshot() == replay(all));
    }
    SUBCASE("events arriving while locked are applied after the heal") {
        std::vector<EventRecord> more{review("a-6", "a", "2026-01-08T06:00:00Z", "PR-1", "u3")};
        all.insert(all.end(), more.begin(), more.end());
        f.write("a", StreamKind::incremental, 3, more);
        f.pipeline.discover();
        f.pipeline.run_incremental(ts("2026-01-08T07:00:00Z"));
        CHECK(f.graph.snapshot() == replay(all));
    }
}

TEST_CASE("heal with no prior data equals a plain bootstrap") {
    std::vector<EventRecord> events{pr_created("a-1", "a", "2026-01-01T10:00:00Z", "PR-1", "u1"),
                                    review("a-2", "a", "2026-01-01T11:00:00Z", "PR-1", "u2")};
    Fixture healed;
    healed.write("a", StreamKind::bootstrap, 1, events);
    healed.pipeline.discover();
    auto r = healed.pipeline.heal({"a"}, ts("2026-01-02"));
    CHECK(r.healed_repos == std::vector<std::string>{"a"});

    Fixture plain;
    plain.write("a", StreamKind::bootstrap, 1, events);
    plain.pipeline.discover();
    plain.pipeline.run_bootstrap({}, ts("2026-01-02"));
    CHECK(healed.graph.snapshot() == plain.graph.snapshot());
}

TEST_CASE("a rebuild removes only the healed repository's contribution") {
    Fixture f;
    // u1 authors in both repositories; the rebuild of "a" must keep u1.
    f.write("a", StreamKind::bootstrap, 1, {pr_created("a-1", "a", "2026-01-01T10:00:00Z", "PR-A", "u1")});
    f.write("b", StreamKind::bootstrap, 1, {pr_created("b-1", "b", "2026-01-01T10:00:00Z", "PR-B", "u1")});
    f.pipeline.discover();
    f.pipeline.run_bootstrap({}, ts("2026-01-02"));
    f.write("a", StreamKind::bootstrap, 2, {});
    f.pipeline.discover();
    f.pipeline.run_bootstrap({"a"}, ts("2026-01-03"));
    CHECK(f.graph.contains({NodeKind::User, "u1"}));
    CHECK(f.graph.contains({NodeKind::PullRequest, "PR-B"}));
    CHECK(f.graph.contains({NodeKind::PullRequest, "PR-A"}));  // journal keeps applied history
}

TEST_CASE("pipeline persistence") {
    Fixture f;
    f.write("a", StreamKind::bootstrap, 1, {pr_created("a-1", "a", "2026-01-01T10:00:00Z", "PR-1", "u1")});
    f.pipeline.discover();
    f.pipeline.run_bootstrap({}, ts("2026-01-02"));
    testing::TempDir state_dir;
    f.pipeline.save(state_dir.path());

    graph::GraphStore g;
    Pipeline loaded(g, f.dir.path());
    loaded.load(state_dir.path());
    CHECK(loaded.registry().entries() == f.pipeline.registry().entries());
    CHECK(loaded.state() == f.pipeline.state());
    CHECK(loaded.journal_events() == f.pipeline.journal_events());
    CHECK_THROWS_AS(loaded.set_retention_days(0), InvalidArgument);
}
