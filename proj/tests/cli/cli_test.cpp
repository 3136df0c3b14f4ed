// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

// Runs the stgraph executable end to end.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "stgraph/stgraph.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// stdout and stderr are captured together.
Run run(const std::string& args) {
    std::string cmd = std::string(STGRAPH_EXE) + " " + args + " 2>&1";
    Run r;
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class TempDir {
public:
    TempDir() {
        static std::atomic<int> n{0};
        path_ = fs::temp_directory_path() /
                ("stg-cli-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
        fs::remove_all(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    std::string str() const { return path_.string(); }
    fs::path operator/(const char* rel) const { return path_ / rel; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmall = "synth --seed 7 --devs 6 --topics 3 --prs-per-dev 3 --repos 2";
const char* kNow = "--now 2026-06-01T00:00:00Z";

void prepare(const TempDir& d) {
    auto data = " --data-dir " + d.str() + " ";
    REQUIRE(run(data + kSmall).code == 0);
    REQUIRE(run(data + "ingest bootstrap " + kNow).code == 0);
    REQUIRE(run(data + "index build").code == 0);
}

}  // namespace

TEST_CASE("synth is deterministic") {
    TempDir a, b;
    REQUIRE(run("--data-dir " + a.str() + " " + kSmall).code == 0);
    REQUIRE(run("--data-dir " + b.str() + " " + kSmall).code == 0);
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a.str())) {
        if (!e.is_regular_file()) continue;
        auto rel = fs::relative(e.path(), a.str());
        auto other = fs::path(b.str()) / rel;
        INFO(rel.string());
        REQUIRE(fs::exists(other));
        CHECK(slurp(e.path()) == slurp(other));
        ++files;
    }
    CHECK(files >= 5);
}

TEST_CASE("recommend --json matches the library") {
    TempDir d;
    prepare(d);
    auto r = run("--data-dir " + d.str() +
                 " recommend --title 'retry timeout' --description 'socket cache' --user dev01 -k 4 --json");
    REQUIRE(r.code == 0);
    auto cli = json::parse(r.out);

    stg_workspace* ws = nullptr;
    REQUIRE(stg_workspace_open(d.str().c_str(), 3, &ws) == STG_OK);
    char* out = nullptr;
    REQUIRE(stg_recommend(ws, "retry timeout", "socket cache", "dev01", 4, 0, &out) == STG_OK);
    auto lib = json::parse(out);
    stg_string_free(out);
    stg_workspace_close(ws);
    CHECK(cli == lib);

    auto again = run("--data-dir " + d.str() +
                     " recommend --title 'retry timeout' --description 'socket cache' --user dev01 -k 4 --json");
    CHECK(again.out == r.out);
}

TEST_CASE("text outputs are stable") {
    TempDir d;
    prepare(d);
    auto data = "--data-dir " + d.str();
    auto rec1 = run(data + " recommend --title 'cache eviction' --user dev02");
    auto rec2 = run(data + " recommend --title 'cache eviction' --user dev02");
    REQUIRE(rec1.code == 0);
    CHECK(rec1.out == rec2.out);
    auto ev1 = run(data + " eval --format tsv");
    auto ev2 = run(data + " eval --format tsv");
    REQUIRE(ev1.code == 0);
    CHECK(ev1.out == ev2.out);
    CHECK(ev1.out.find("plus_description") != std::string::npos);
    auto stats = run(data + " stats");
    CHECK(stats.code == 0);
    CHECK(json::parse(stats.out)["nodes"]["User"].get<int>() > 0);
    auto feed = run(data + " feed --user dev01 --view most_recent --limit 3 --json");
    REQUIRE(feed.code == 0);
    CHECK(json::parse(feed.out).size() <= 3);
}

TEST_CASE("heal --check reports a gap") {
    TempDir d;
    auto data = "--data-dir " + d.str();
    REQUIRE(run(data + " " + kSmall).code == 0);
    REQUIRE(run(data + " ingest bootstrap " + kNow).code == 0);
    CHECK(run(data + " heal --check").out == "no gaps\n");

    {
        std::ofstream f(d / "events/atlas-service.incremental.0001.events.csv");
        f << "event_id,repo,event_kind,timestamp,payload\n"
          << "late-1,atlas-service,user_reports_to,2026-06-05T00:00:00Z,manager=mgr01&user=dev01\n";
    }
    auto r = run(data + " heal --check");
    CHECK(r.code == 0);
    CHECK(r.out == "gap atlas-service 4.0000 days atlas-service.incremental.0001.events.csv\n");
}

TEST_CASE("bad input is rejected") {
    TempDir d;
    prepare(d);
    auto data = "--data-dir " + d.str();

    auto unknown = run(data + " stats --bogus");
    CHECK(unknown.code != 0);
    CHECK(unknown.out.find("bogus") != std::string::npos);

    auto fields = run(data + " index build --fields metadata,colour");
    CHECK(fields.code == 2);
    CHECK(fields.out.find("--fields: unknown field 'colour'") != std::string::npos);

    auto user = run(data + " feed --user nobody");
    CHECK(user.code == 1);
    CHECK(user.out.rfind("stgraph: error:", 0) == 0);

    auto view = run(data + " feed --user dev01 --view sideways");
    CHECK(view.code != 0);

    auto no_sub = run(data);
    CHECK(no_sub.code != 0);
}
