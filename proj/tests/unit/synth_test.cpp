// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include <doctest.h>

#include <set>

#include "stg/common/error.hpp"
#include "stg/synth/evaluate.hpp"
#include "stg/synth/generator.hpp"
#include "stg/synth/rng.hpp"
#include "support.hpp"

using namespace stg;
using namespace stg::synth;
using graph::EdgeType;
using graph::NodeKind;

namespace {

std::map<std::string, std::string> read_tree(const std::filesystem::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[std::filesystem::relative(e.path(), root).string()] = read_file(e.path());
    }
    return out;
}

void replay(const SynthCorpus& corpus, graph::GraphStore& g) {
    std::vector<ingest::EventRecord> all;
    for (const auto& [repo, events] : corpus.events) all.insert(all.end(), events.begin(), events.end());
    std::sort(all.begin(), all.end(), ingest::chronological_less);
    for (const auto& e : all) {
        for (const auto& m : ingest::to_mutations(e)) g.apply(m);
    }
}

CorpusSpec small_spec() {
    CorpusSpec s;
    s.n_devs = 10;
    s.prs_per_dev = 5;
    s.n_repos = 2;
    s.n_topics = 3;
    return s;
}

}  // namespace

TEST_CASE("rng helpers") {
    Rng a(1), b(1);
    for (int i = 0; i < 100; ++i) CHECK(a.below(17) == b.below(17));
    Rng r(2);
    for (int i = 0; i < 1000; ++i) {
        CHECK(r.below(5) < 5);
        double u = r.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    std::vector<int> v{1, 2, 3, 4, 5, 6};
    r.shuffle(v);
    std::sort(v.begin(), v.end());
    CHECK(v == std::vector<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("corpus settings are validated") {
    CHECK_NOTHROW(CorpusSpec{}.validate());
    auto bad = [](auto mutate) {
        CorpusSpec s;
        mutate(s);
        CHECK_THROWS_AS(s.validate(), InvalidArgument);
    };
    bad([](CorpusSpec& s) { s.n_devs = 0; });
    bad([](CorpusSpec& s) { s.n_repos = 0; });
    bad([](CorpusSpec& s) { s.prs_per_dev = 0; });
    bad([](CorpusSpec& s) { s.link_rate = 1.5; });
    bad([](CorpusSpec& s) { s.noise_rate = -0.1; });
    bad([](CorpusSpec& s) { s.vocab_per_topic = 0; });
}

TEST_CASE("topic vocabularies are disjoint and seed independent") {
    std::set<std::string> seen;
    for (std::size_t t = 0; t < 8; ++t) {
        auto words = topic_vocabulary(t, 30);
        CHECK(words.size() == 30);
        CHECK(words == topic_vocabulary(t, 30));
        for (const auto& w : words) {
            CHECK(seen.insert(w).second);
            CHECK(w.find(' ') == std::string::npos);
        }
    }
}

TEST_CASE("generation is deterministic") {
    testing::TempDir a, b, c;
    write_corpus(generate(small_spec()), a.path());
    write_corpus(generate(small_spec()), b.path());
    auto other = small_spec();
    other.seed = 8;
    write_corpus(generate(other), c.path());
    auto ta = read_tree(a.path());
    CHECK(ta == read_tree(b.path()));
    CHECK(ta != read_tree(c.path()));
    CHECK(ta.count("manifest.tsv") == 1);
    CHECK(ta.count("queries.tsv") == 1);
}

TEST_CASE("manifest matches the replayed graph") {
    auto corpus = generate(small_spec());
    CHECK(corpus.manifest.nodes.at("PullRequest") == 50);

    graph::GraphStore g;
    replay(corpus, g);
    auto stats = g.stats();
    for (auto kind : graph::kAllNodeKinds) {
        auto name = std::string(graph::to_string(kind));
        auto expected = corpus.manifest.nodes.count(name) ? corpus.manifest.nodes.at(name) : 0;
        CHECK_MESSAGE(stats.node_count_by_kind[kind] == expected, name);
    }
    for (auto type : graph::kAllEdgeTypes) {
        auto name = std::string(graph::to_string(type));
        auto expected = corpus.manifest.edges.count(name) ? corpus.manifest.edges.at(name) : 0;
        CHECK_MESSAGE(stats.edge_count_by_type[type] == expected, name);
    }
    std::size_t events = 0;
    for (const auto& [repo, list] : corpus.events) events += list.size();
    CHECK(corpus.manifest.events == events);

    // Ground truth refers to existing nodes.
    for (const auto& [wi, prs] : corpus.truth.artifacts) {
        CHECK(g.contains(graph::NodeId::parse(wi)));
        for (const auto& p : prs) CHECK(g.contains(graph::NodeId::parse(p)));
    }
    for (const auto& [topic, users] : corpus.truth.experts) {
        for (const auto& u : users) CHECK(g.contains(graph::NodeId::parse(u)));
    }
    for (const auto& q : corpus.truth.queries) {
        CHECK(g.contains(graph::NodeId::parse(q.requester)));
        CHECK_FALSE(q.relevant_artifacts.empty());
        CHECK_FALSE(q.relevant_experts.empty());
    }
}

TEST_CASE("link_rate 1 links every pull request") {
    auto spec = small_spec();
    spec.link_rate = 1.0;
    auto corpus = generate(spec);
    graph::GraphStore g;
    replay(corpus, g);
    for (const auto& node : g.nodes(NodeKind::PullRequest)) {
        CHECK_FALSE(g.neighbors(node.id, EdgeType::linked_to, graph::Direction::in).empty());
    }
}

TEST_CASE("corpus files load back") {
    auto corpus = generate(small_spec());
    testing::TempDir dir;
    write_corpus(corpus, dir.path());
    auto m = load_manifest(dir.path());
    CHECK(m.nodes == corpus.manifest.nodes);
    CHECK(m.edges == corpus.manifest.edges);
    CHECK(m.events == corpus.manifest.events);
    auto truth = load_ground_truth(dir.path());
    CHECK(truth.artifacts == corpus.truth.artifacts);
    CHECK(truth.experts == corpus.truth.experts);
    REQUIRE(truth.queries.size() == corpus.truth.queries.size());
    for (std::size_t i = 0; i < truth.queries.size(); ++i) {
        CHECK(truth.queries[i].title == corpus.truth.queries[i].title);
        CHECK(truth.queries[i].description == corpus.truth.queries[i].description);
        CHECK(truth.queries[i].relevant_artifacts == corpus.truth.queries[i].relevant_artifacts);
    }
    for (const auto& [repo, events] : corpus.events) {
        auto parsed = ingest::read_event_file(dir / ("events/" + repo + ".bootstrap.0001.events.csv"));
        CHECK(parsed.errors.empty());
        CHECK(parsed.events == events);
    }
    CHECK_THROWS_AS(load_manifest(dir / "nowhere"), IoError);
}

TEST_CASE("metric definitions") {
    SUBCASE("single query at rank 1") {
        auto row = compute_metrics("x", {std::size_t{1}}, {3});
        CHECK(row.accuracy.at(3) == 1.0);
        CHECK(row.mrr == 1.0);
    }
    SUBCASE("single query at rank 4") {
        auto row = compute_metrics("x", {std::size_t{4}}, {3, 5});
        CHECK(row.accuracy.at(3) == 0.0);
        CHECK(row.accuracy.at(5) == 1.0);
        CHECK(row.mrr == 0.25);
    }
    SUBCASE("ten query fixture") {
        std::vector<std::optional<std::size_t>> ranks{1, 2, 4, std::nullopt, 3, 1, 6, 10, std::nullopt, 5};
        auto row = compute_metrics("x", ranks, {3, 5, 10});
        // hits@3: 1,2,3,1 -> 4; hits@5 adds 4,5 -> 6; hits@10 adds 6,10 -> 8
        CHECK(row.accuracy.at(3) == 0.4);
        CHECK(row.accuracy.at(5) == 0.6);
        CHECK(row.accuracy.at(10) == 0.8);
        // (1 + 1/2 + 1/4 + 1/3 + 1 + 1/6 + 1/10 + 1/5) / 10 = 3.55 / 10
        CHECK(row.mrr == doctest::Approx(0.355).epsilon(1e-15));
        CHECK(row.queries == 10);
    }
    SUBCASE("no queries") {
        auto row = compute_metrics("x", {}, {3});
        CHECK(row.accuracy.at(3) == 0.0);
        CHECK(row.mrr == 0.0);
    }
    CHECK(first_relevant_rank({"a", "b", "c"}, {"c", "b"}) == 2);
    CHECK_FALSE(first_relevant_rank({"a"}, {"z"}));
    CHECK_FALSE(first_relevant_rank({}, {"z"}));
}

TEST_CASE("ablation configs") {
    CHECK(all_configs().size() == 4);
    for (auto c : all_configs()) CHECK(parse_ablation_config(to_string(c)) == c);
    CHECK(index_fields(AblationConfig::metadata_only) == text::IndexFields{true, false, false});
    CHECK(index_fields(AblationConfig::plus_title) == text::IndexFields{true, true, false});
    CHECK(index_fields(AblationConfig::plus_description) == text::IndexFields{true, true, true});
    CHECK(index_fields(AblationConfig::plus_graph) == text::IndexFields{true, true, true});
    CHECK(uses_graph(AblationConfig::plus_graph));
    CHECK_FALSE(uses_graph(AblationConfig::plus_description));
    CHECK_FALSE(parse_ablation_config("everything"));
}

TEST_CASE("query selection is round-robin across repositories") {
    std::vector<QueryCase> qs;
    for (int i = 0; i < 6; ++i) {
        QueryCase q;
        q.query_id = "q" + std::to_string(i);
        q.repo = i < 4 ? "a" : "b";
        qs.push_back(q);
    }
    auto picked = select_queries(qs, 4);
    REQUIRE(picked.size() == 4);
    std::map<std::string, int> per_repo;
    for (const auto& q : picked) per_repo[q.repo]++;
    CHECK(per_repo["a"] == 2);
    CHECK(per_repo["b"] == 2);
    CHECK(select_queries(qs, 100).size() == 6);
}

TEST_CASE("evaluate on a small corpus") {
    auto corpus = generate(small_spec());
    graph::GraphStore g;
    replay(corpus, g);
    EvalOptions opts;
    opts.max_queries = 20;
    auto table = evaluate(g, corpus.truth, opts);
    CHECK(table.queries == 20);
    REQUIRE(table.artifacts.size() == 4);
    REQUIRE(table.experts.size() == 4);
    for (const auto* rows : {&table.artifacts, &table.experts}) {
        for (const auto& row : *rows) {
            double prev = 0.0;
            for (auto k : opts.ks) {
                CHECK(row.accuracy.at(k) >= prev);
                CHECK(row.accuracy.at(k) <= 1.0);
                prev = row.accuracy.at(k);
            }
            CHECK(row.mrr >= 0.0);
            CHECK(row.mrr <= row.accuracy.at(10) + 1e-12);
        }
    }
    auto again = evaluate(g, corpus.truth, opts);
    CHECK(again.artifacts == table.artifacts);
    CHECK(again.experts == table.experts);

    auto tsv = format_tsv(table);
    CHECK(tsv.find("metadata_only") != std::string::npos);
    CHECK(tsv.find("acc@3") != std::string::npos);
    auto text = format_text(table);
    CHECK(text.find("MRR") != std::string::npos);
    CHECK(text.find("plus_graph") != std::string::npos);
}

TEST_CASE("a config with an empty index yields zeros and a warning") {
    graph::GraphStore g;
    g.apply(graph::UpsertNode{{{NodeKind::PullRequest, "p"}, {{"title", "socket timeout"}}}});
    g.apply(graph::UpsertEdge{{{NodeKind::User, "u"}, {NodeKind::PullRequest, "p"}, EdgeType::creates, {}}});
    GroundTruth truth;
    QueryCase q;
    q.query_id = "q1";
    q.repo = "r";
    q.wi_doc = "WorkItem:w";
    q.requester = "User:someone";
    q.title = "socket timeout";
    q.relevant_artifacts = {"PullRequest:p"};
    q.relevant_experts = {"User:u"};
    truth.queries.push_back(q);

    EvalOptions opts;
    opts.configs = {AblationConfig::metadata_only, AblationConfig::plus_title};
    auto table = evaluate(g, truth, opts);
    CHECK_FALSE(table.warnings.empty());
    CHECK(table.artifacts[0].accuracy.at(3) == 0.0);
    CHECK(table.artifacts[0].mrr == 0.0);
    CHECK(table.artifacts[1].accuracy.at(3) == 1.0);
    CHECK(table.experts[1].mrr == 1.0);
}
