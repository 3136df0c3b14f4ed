// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

// Command-line front end. Talks to the library only through the C API.

#include <chrono>
#include <csignal>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "stgraph/stgraph.h"

namespace {

using nlohmann::json;

struct Failure {
    int exit_code;
    std::string message;
};

void check(stg_status status, const char* what) {
    if (status != STG_OK) {
        throw Failure{status == STG_E_INTERNAL ? 70 : 1,
                      std::string(what) + ": " + stg_status_name(status) + ": " + stg_last_error()};
    }
}

// Owns a string returned by the library.
struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { stg_string_free(p); }
    std::string str() const { return p ? p : ""; }
    json parse() const { return json::parse(str()); }
};

struct WorkspaceHandle {
    stg_workspace* ws = nullptr;
    ~WorkspaceHandle() { stg_workspace_close(ws); }
};

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string proximity_text(const json& p) { return p.is_null() ? "-" : std::to_string(p.get<int>()); }

struct Options {
    std::string data_dir = ".";
    std::string config_path;
    int retention_days = 3;
    std::size_t k = 10;
    std::size_t feed_limit = 50;
    std::string host = "127.0.0.1";
    int port = 8080;
};

volatile std::sig_atomic_t g_stop = 0;
extern "C" void on_signal(int) { g_stop = 1; }

void print_report(const json& report) {
    std::cout << "files processed: " << report["files_processed"].get<std::size_t>() << "\n"
              << "events applied:  " << report["events_applied"].get<std::size_t>() << "\n";
    for (const auto& g : report["gaps"]) {
        if (g["gap"].get<bool>()) {
            std::cout << "gap: " << g["repo"].get<std::string>() << " " << fixed(g["days"].get<double>())
                      << " days (" << g["file"].get<std::string>() << ")\n";
        }
    }
    std::set<std::string> healed;
    for (const auto& r : report["healed_repos"]) healed.insert(r.get<std::string>());
    for (const auto& r : report["rebuilt_repos"]) {
        const auto name = r.get<std::string>();
        std::cout << (healed.count(name) != 0 ? "healed: " : "rebuilt: ") << name << "\n";
    }
    for (const auto& r : report["failed_repos"]) std::cout << "failed: " << r.get<std::string>() << "\n";
    for (const auto& f : report["skipped_files"]) std::cout << "skipped: " << f.get<std::string>() << "\n";
    for (const auto& e : report["errors"]) std::cout << "error: " << e.get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stgraph: socio-technical graph, search and feeds"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--data-dir", opt.data_dir, "Data directory root")->capture_default_str();
    app.add_option("--config", opt.config_path, "Config file (key = value)");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
    json spec = json::object();
    std::uint64_t seed = 7;
    std::size_t n_repos = 4, n_devs = 20, n_topics = 5, prs_per_dev = 10;
    double link_rate = 0.8, noise_rate = 0.15;
    synth->add_option("--seed", seed)->capture_default_str();
    synth->add_option("--repos", n_repos)->capture_default_str();
    synth->add_option("--devs", n_devs)->capture_default_str();
    synth->add_option("--topics", n_topics)->capture_default_str();
    synth->add_option("--prs-per-dev", prs_per_dev)->capture_default_str();
    synth->add_option("--link-rate", link_rate)->capture_default_str();
    synth->add_option("--noise-rate", noise_rate)->capture_default_str();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Ingest event files");
    ingest->require_subcommand(1);
    std::string now;
    std::string repos;
    bool no_heal = false;
    auto* boot = ingest->add_subcommand("bootstrap", "Full-history ingestion per repository");
    boot->add_option("--now", now, "Clock override (YYYY-MM-DDTHH:MM:SSZ)");
    boot->add_option("--repos", repos, "Comma-separated repositories (default: all)");
    auto* incr = ingest->add_subcommand("incremental", "Apply newly delivered incremental files");
    incr->add_option("--now", now, "Clock override (YYYY-MM-DDTHH:MM:SSZ)");
    incr->add_flag("--no-heal", no_heal, "Quarantine gapped repositories without healing them");

    // heal
    auto* heal = app.add_subcommand("heal", "Detect and repair ingestion gaps");
    bool heal_check = false;
    heal->add_flag("--check", heal_check, "Report gaps without changing anything");
    heal->add_option("--now", now, "Clock override (YYYY-MM-DDTHH:MM:SSZ)");
    heal->add_option("--repos", repos, "Repositories to heal (default: quarantined ones)");

    // index
    auto* index = app.add_subcommand("index", "Build the BM25 indices");
    index->require_subcommand(1);
    std::string fields = "metadata,title,description";
    auto* build = index->add_subcommand("build", "Build both indices from the graph");
    build->add_option("--fields", fields, "Indexed fields")->capture_default_str();
    auto* refresh = index->add_subcommand("refresh", "Rebuild both indices from the current graph");

    // recommend
    auto* rec = app.add_subcommand("recommend", "Recommend artifacts and experts for a task");
    std::string title, description, user;
    std::optional<std::size_t> k_flag;
    bool as_json = false;
    rec->add_option("--title", title, "Task title");
    rec->add_option("--description", description, "Task description");
    rec->add_option("--user", user, "Requesting user")->required();
    rec->add_option("-k", k_flag, "Results per list");
    rec->add_flag("--json", as_json, "Print JSON");

    // feed
    auto* feed = app.add_subcommand("feed", "Show a user's activity feed");
    std::string view = "most_recent";
    std::optional<std::size_t> limit_flag;
    feed->add_option("--user", user, "User")->required();
    feed->add_option("--view", view, "most_recent | relevance | team_only")
        ->check(CLI::IsMember({"most_recent", "relevance", "team_only"}))
        ->capture_default_str();
    feed->add_option("--limit", limit_flag, "Maximum items");
    feed->add_flag("--json", as_json, "Print JSON");

    // follow
    auto* follow = app.add_subcommand("follow", "Follow or unfollow an item");
    std::string item;
    bool unfollow = false;
    follow->add_option("--user", user, "User")->required();
    follow->add_option("--item", item, "Kind:id of a repository, pull request or work item")->required();
    follow->add_flag("--unfollow", unfollow, "Remove the follow");

    // homepage
    auto* home = app.add_subcommand("homepage", "Print a user's homepage as JSON");
    home->add_option("--user", user, "User")->required();
    home->add_option("--view", view, "Feed view")
        ->check(CLI::IsMember({"most_recent", "relevance", "team_only"}));

    auto* stats = app.add_subcommand("stats", "Graph node and edge counts");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    std::optional<int> port_flag;
    std::optional<std::string> host_flag;
    serve->add_option("--port", port_flag, "Port (0 = any free port)");
    serve->add_option("--host", host_flag, "Bind address");

    // eval
    auto* eval = app.add_subcommand("eval", "Top-K accuracy / MRR ablation on the synthetic ground truth");
    std::string configs = "metadata_only,plus_title,plus_description,plus_graph";
    std::string k_values = "3,5,10";
    std::size_t max_queries = 100;
    std::string format = "text";
    eval->add_option("--configs", configs)->capture_default_str();
    eval->add_option("--k-values", k_values)->capture_default_str();
    eval->add_option("--max-queries", max_queries)->capture_default_str();
    eval->add_option("--format", format)->check(CLI::IsMember({"text", "tsv", "json"}))->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        bool data_dir_given = app.get_option("--data-dir")->count() > 0;
        if (!opt.config_path.empty()) {
            OwnedString cfg;
            check(stg_config_load(opt.config_path.c_str(), &cfg.p), "config");
            auto c = cfg.parse();
            if (!data_dir_given) opt.data_dir = c["data_dir"].get<std::string>();
            opt.retention_days = c["retention_days"].get<int>();
            opt.k = c["k"].get<std::size_t>();
            opt.feed_limit = c["feed_limit"].get<std::size_t>();
            opt.host = c["host"].get<std::string>();
            opt.port = c["port"].get<int>();
        }
        if (now.empty()) now = utc_now();

        if (synth->parsed()) {
            spec = {{"seed", seed},           {"n_repos", n_repos},     {"n_devs", n_devs},
                    {"n_topics", n_topics},   {"prs_per_dev", prs_per_dev},
                    {"link_rate", link_rate}, {"noise_rate", noise_rate}};
            OwnedString manifest;
            check(stg_synth(opt.data_dir.c_str(), spec.dump().c_str(), &manifest.p), "synth");
            auto m = manifest.parse();
            std::cout << "wrote corpus to " << opt.data_dir << "\n";
            for (const auto& [kind, n] : m["nodes"].items()) std::cout << "node " << kind << " " << n << "\n";
            for (const auto& [type, n] : m["edges"].items()) std::cout << "edge " << type << " " << n << "\n";
            std::cout << "events " << m["events"] << "\nqueries " << m["queries"] << "\n";
            return 0;
        }

        WorkspaceHandle ws;
        check(stg_workspace_open(opt.data_dir.c_str(), opt.retention_days, &ws.ws), "open");

        if (boot->parsed()) {
            OwnedString report;
            check(stg_ingest_bootstrap(ws.ws, repos.c_str(), now.c_str(), &report.p), "ingest bootstrap");
            check(stg_workspace_save(ws.ws), "save");
            print_report(report.parse());
        } else if (incr->parsed()) {
            OwnedString report;
            check(stg_ingest_incremental(ws.ws, now.c_str(), no_heal ? 0 : 1, &report.p),
                  "ingest incremental");
            check(stg_workspace_save(ws.ws), "save");
            print_report(report.parse());
        } else if (heal->parsed()) {
            if (heal_check) {
                OwnedString gaps;
                check(stg_heal_check(ws.ws, &gaps.p), "heal --check");
                std::size_t n = 0;
                for (const auto& g : gaps.parse()) {
                    if (!g["gap"].get<bool>()) continue;
                    ++n;
                    std::cout << "gap " << g["repo"].get<std::string>() << " "
                              << fixed(g["days"].get<double>()) << " days "
                              << g["file"].get<std::string>() << "\n";
                }
                if (n == 0) std::cout << "no gaps\n";
            } else {
                OwnedString report;
                check(stg_heal(ws.ws, repos.c_str(), now.c_str(), &report.p), "heal");
                check(stg_workspace_save(ws.ws), "save");
                print_report(report.parse());
            }
        } else if (build->parsed() || refresh->parsed()) {
            bool metadata = false, title_f = false, desc_f = false;
            std::stringstream list(fields);
            for (std::string f; std::getline(list, f, ',');) {
                if (f == "metadata") {
                    metadata = true;
                } else if (f == "title") {
                    title_f = true;
                } else if (f == "description") {
                    desc_f = true;
                } else {
                    throw Failure{2, "--fields: unknown field '" + f + "' (metadata, title, description)"};
                }
            }
            check(stg_index_build(ws.ws, metadata, title_f, desc_f), "index");
            std::cout << "indices written to " << opt.data_dir << "\n";
        } else if (rec->parsed()) {
            OwnedString out;
            check(stg_recommend(ws.ws, title.c_str(), description.c_str(), user.c_str(),
                                k_flag.value_or(opt.k), 0, &out.p),
                  "recommend");
            auto r = out.parse();
            if (as_json) {
                std::cout << r.dump(2) << "\n";
            } else {
                if (r["flags"]["empty_query"].get<bool>()) std::cout << "empty query\n";
                if (r["flags"]["cold_requester"].get<bool>()) std::cout << "note: requester not in graph\n";
                for (const char* list : {"artifacts", "experts"}) {
                    std::cout << list << ":\n";
                    for (const auto& x : r[list]) {
                        std::cout << "  " << x["final_rank"].get<std::size_t>() << "  "
                                  << x["doc_id"].get<std::string>() << "  relevance="
                                  << fixed(x["relevance"].get<double>())
                                  << "  proximity=" << proximity_text(x["proximity"]) << "\n";
                    }
                }
            }
        } else if (feed->parsed()) {
            OwnedString out;
            check(stg_feed(ws.ws, user.c_str(), view.c_str(), limit_flag.value_or(opt.feed_limit), &out.p),
                  "feed");
            auto items = out.parse();
            if (as_json) {
                std::cout << items.dump(2) << "\n";
            } else {
                for (const auto& it : items) {
                    std::cout << it["timestamp"].get<std::string>() << "  "
                              << (it["followed"].get<bool>() ? "* " : "  ")
                              << it["event_kind"].get<std::string>() << "  "
                              << it["subject"].get<std::string>() << "  by "
                              << it["actor"].get<std::string>() << "  ("
                              << it["repo"].get<std::string>() << ")\n";
                }
            }
        } else if (follow->parsed()) {
            OwnedString out;
            check(stg_follow(ws.ws, user.c_str(), item.c_str(), unfollow ? 0 : 1, &out.p), "follow");
            for (const auto& id : out.parse()) std::cout << id.get<std::string>() << "\n";
        } else if (home->parsed()) {
            OwnedString out;
            check(stg_homepage(ws.ws, user.c_str(), view.c_str(), opt.feed_limit, &out.p), "homepage");
            std::cout << out.parse().dump(2) << "\n";
        } else if (stats->parsed()) {
            OwnedString out;
            check(stg_graph_stats(ws.ws, &out.p), "stats");
            std::cout << out.parse().dump(2) << "\n";
        } else if (serve->parsed()) {
            std::string host = host_flag.value_or(opt.host);
            int port = port_flag.value_or(opt.port);
            if (port < 0 || port > 65535) throw Failure{2, "--port must be in [0, 65535]"};
            stg_service_options so{};
            so.host = host.c_str();
            so.port = static_cast<std::uint16_t>(port);
            so.default_k = opt.k;
            so.feed_limit = opt.feed_limit;
            stg_service* svc = nullptr;
            check(stg_service_start(ws.ws, &so, &svc), "serve");
            std::cout << "listening on http://" << host << ":" << stg_service_port(svc) << std::endl;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
            stg_service_stop(svc);
        } else if (eval->parsed()) {
            stg_eval_format f = format == "tsv" ? STG_EVAL_TSV
                                : format == "json" ? STG_EVAL_JSON
                                                   : STG_EVAL_TEXT;
            OwnedString out;
            check(stg_evaluate(ws.ws, configs.c_str(), k_values.c_str(), max_queries, f, &out.p), "eval");
            std::cout << out.str();
            if (f == STG_EVAL_JSON) std::cout << "\n";
        }
        return 0;
    } catch (const Failure& f) {
        std::cerr << "stgraph: error: " << f.message << "\n";
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "stgraph: error: " << e.what() << "\n";
        return 1;
    }
}
