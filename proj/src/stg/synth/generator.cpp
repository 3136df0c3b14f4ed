// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#include "stg/synth/generator.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>
#include <tuple>

#include "stg/common/error.hpp"
#include "stg/common/text_io.hpp"
#include "stg/common/time.hpp"
#include "stg/ingest/registry.hpp"
#include "stg/synth/rng.hpp"
#include "stg/text/tokenizer.hpp"

namespace stg::synth {

namespace {

namespace fs = std::filesystem;
using ingest::EventKind;
using ingest::EventRecord;

constexpr std::array<std::array<const char*, 30>, 8> kTopicWords = {{
    {"parser", "lexer", "codegen", "optimizer", "ast", "inliner", "register", "allocator",
     "bytecode", "linker", "symbol", "grammar", "emitter", "lowering", "folding", "semantic",
     "typecheck", "template", "macro", "preprocessor", "backend", "frontend", "peephole",
     "scheduler", "instruction", "assembler", "dwarf", "intrinsic", "vectorize", "unroll"},
    {"socket", "packet", "tcp", "udp", "latency", "handshake", "router", "dns", "proxy",
     "bandwidth", "throughput", "congestion", "retransmit", "endpoint", "gateway", "firewall",
     "tls", "websocket", "multiplex", "keepalive", "timeout", "ethernet", "subnet", "nat",
     "loadbalancer", "routing", "mtu", "backoff", "listener", "peer"},
    {"disk", "block", "cache", "flush", "compaction", "snapshot", "replica", "journal",
     "segment", "page", "btree", "wal", "checksum", "shard", "partition", "durability", "fsync",
     "extent", "volume", "blob", "bucket", "tablet", "tombstone", "ledger", "commitlog",
     "memtable", "sstable", "bloom", "eviction", "prefetch"},
    {"button", "dialog", "layout", "render", "widget", "theme", "font", "scroll", "tooltip",
     "menu", "toolbar", "icon", "animation", "canvas", "pixel", "viewport", "accessibility",
     "keyboard", "hover", "modal", "sidebar", "dropdown", "palette", "css", "responsive",
     "gesture", "splitter", "breadcrumb", "thumbnail", "cursor"},
    {"authentication", "authorization", "oauth", "credential", "encryption", "decryption",
     "cipher", "sha", "signature", "vulnerability", "sandbox", "permission", "audit", "secret",
     "vault", "rotation", "xss", "csrf", "injection", "sanitizer", "rbac", "principal",
     "kerberos", "saml", "mfa", "keystore", "nonce", "entropy", "hmac", "exploit"},
    {"metric", "tracing", "span", "logger", "dashboard", "alerting", "counter", "histogram",
     "gauge", "sampler", "exporter", "collector", "prometheus", "grafana", "percentile",
     "heartbeat", "probe", "uptime", "incident", "oncall", "pager", "anomaly", "baseline",
     "aggregation", "rollup", "cardinality", "scrape", "telemetry", "correlation", "watchdog"},
    {"msbuild", "cmake", "gradle", "bazel", "dependency", "package", "nuget", "release",
     "branch", "merge", "rebase", "flaky", "coverage", "fixture", "mock", "assertion",
     "benchmark", "regression", "harness", "linter", "formatter", "toolchain", "sdk",
     "installer", "signing", "nightly", "artifactory", "manifest", "sharding", "hermetic"},
    {"model", "training", "inference", "embedding", "tensor", "gradient", "epoch", "dataset",
     "feature", "classifier", "neural", "dropout", "transformer", "attention", "tokenizer",
     "checkpoint", "hyperparameter", "batch", "learning", "label", "annotation", "precision",
     "recall", "cluster", "kmeans", "forest", "boosting", "vectorizer", "perceptron", "softmax"},
}};

constexpr std::array<const char*, 12> kVerbs = {"fix",    "improve", "refactor", "add",
                                                "update", "rework",  "harden",   "simplify",
                                                "extend", "tune",    "migrate",  "cleanup"};
constexpr std::array<const char*, 10> kGeneric = {"change", "handling", "support", "issue",
                                                  "logic",  "path",     "flow",    "case",
                                                  "behavior", "config"};
constexpr std::array<const char*, 12> kProjects = {"atlas", "borealis", "cygnus", "draco",
                                                   "eridanus", "fornax", "gemini", "hydra",
                                                   "indus", "lyra", "mensa", "norma"};
constexpr std::array<const char*, 12> kFirst = {"Avery", "Blake", "Casey", "Devon",
                                                "Emery", "Finley", "Harper", "Jordan",
                                                "Kendall", "Logan", "Morgan", "Quinn"};
constexpr std::array<const char*, 10> kLast = {"Chen", "Okafor", "Silva", "Novak", "Haddad",
                                               "Ito", "Larsen", "Moreau", "Petrov", "Reyes"};
constexpr const char* kOrganization = "fabrikam";

// Pronounceable filler words for vocabularies beyond the built-in lists.
std::string synthetic_word(std::uint64_t key) {
    static const std::array<const char*, 16> onset = {"b", "d", "f", "g", "k", "l", "m", "n",
                                                      "p", "r", "s", "t", "v", "z", "br", "tr"};
    static const std::array<const char*, 5> vowel = {"a", "e", "i", "o", "u"};
    Rng rng(0x5eed0000ULL + key);
    std::string w;
    for (int i = 0; i < 3; ++i) {
        w += onset[rng.below(onset.size())];
        w += vowel[rng.below(vowel.size())];
    }
    w += "x";  // keeps them clear of real words
    return w;
}

std::string pascal(const std::string& w) {
    std::string out = w;
    if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 32);
    return out;
}

std::string padded(const char* prefix, std::size_t n, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, n);
    return buf;
}

std::string join(const std::vector<std::string>& words, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += sep;
        out += words[i];
    }
    return out;
}

struct Dev {
    std::string id;
    std::string name;
    std::size_t primary_topic = 0;
    std::size_t home_repo = 0;
    std::size_t team = 0;
};

class Builder {
public:
    explicit Builder(const CorpusSpec& spec) : spec_(spec), rng_(spec.seed) {
        for (std::size_t t = 0; t < spec.n_topics; ++t) {
            vocab_.push_back(topic_vocabulary(t, spec.vocab_per_topic));
        }
        for (std::size_t r = 0; r < spec.n_repos; ++r) {
            std::string project = r < kProjects.size() ? kProjects[r] : synthetic_word(1000 + r);
            projects_.push_back(project);
            repos_.push_back(project + "-service");
        }
    }

    SynthCorpus build();

private:
    void emit(std::size_t repo, EventKind kind, Timestamp ts, Attributes payload) {
        pending_[repos_[repo]].push_back({std::move(payload), kind, ts, seq_++});
    }
    std::vector<std::string> noisy(std::vector<std::string> words, std::size_t topic);
    std::string other_topic_word(std::size_t topic);
    std::string ensure_epic(std::size_t repo, std::size_t topic, Timestamp ts);

    struct Pending {
        Attributes payload;
        EventKind kind;
        Timestamp ts;
        std::uint64_t seq;
    };

    const CorpusSpec& spec_;
    Rng rng_;
    std::vector<std::vector<std::string>> vocab_;
    std::vector<std::string> projects_;
    std::vector<std::string> repos_;
    std::map<std::string, std::vector<Pending>> pending_;
    std::uint64_t seq_ = 0;

    std::map<std::string, std::set<std::string>> nodes_;
    std::map<std::string, std::set<std::tuple<std::string, std::string>>> edges_;
    std::map<std::pair<std::size_t, std::size_t>, std::string> epics_;
    std::vector<std::string> managers_;
};

std::string Builder::other_topic_word(std::size_t topic) {
    if (spec_.n_topics < 2) return kGeneric[rng_.below(kGeneric.size())];
    std::size_t other = static_cast<std::size_t>(rng_.below(spec_.n_topics - 1));
    if (other >= topic) ++other;
    return rng_.pick(vocab_[other]);
}

// Replaces each word with an off-topic word with probability noise_rate.
std::vector<std::string> Builder::noisy(std::vector<std::string> words, std::size_t topic) {
    for (auto& w : words) {
        if (rng_.chance(spec_.noise_rate)) w = other_topic_word(topic);
    }
    return words;
}

std::string Builder::ensure_epic(std::size_t repo, std::size_t topic, Timestamp ts) {
    auto key = std::make_pair(repo, topic);
    auto it = epics_.find(key);
    if (it != epics_.end()) return it->second;
    char id[64];
    std::snprintf(id, sizeof id, "EPIC-%s-%02zu", projects_[repo].c_str(), topic);
    const auto& words = vocab_[topic];
    std::string manager = managers_[topic % managers_.size()];
    emit(repo, EventKind::wi_created, ts - std::chrono::hours(2),
         {{"wi", id},
          {"author", manager},
          {"title", "Epic " + words[0] + " " + words[1] + " roadmap"},
          {"description", "Umbrella item for " + words[0] + " work in " + projects_[repo]},
          {"organization", kOrganization},
          {"project", projects_[repo]}});
    nodes_["WorkItem"].insert(id);
    epics_.emplace(key, id);
    return id;
}

SynthCorpus Builder::build() {
    const Timestamp start = require_timestamp("2026-01-01T00:00:00Z");
    const Timestamp base = require_timestamp("2026-01-05T09:00:00Z");
    const int dev_width = spec_.n_devs >= 100 ? 3 : 2;

    std::vector<Dev> devs;
    std::size_t n_teams = (spec_.n_devs + spec_.team_size - 1) / spec_.team_size;
    for (std::size_t t = 0; t < n_teams; ++t) managers_.push_back(padded("mgr", t + 1, 2));
    for (std::size_t i = 0; i < spec_.n_devs; ++i) {
        Dev d;
        d.id = padded("dev", i + 1, dev_width);
        d.name = std::string(kFirst[i % kFirst.size()]) + " " + kLast[(i / kFirst.size() + i) % kLast.size()];
        d.primary_topic = i % spec_.n_topics;
        d.home_repo = i % spec_.n_repos;
        d.team = i / spec_.team_size;
        devs.push_back(d);
        nodes_["User"].insert(d.id);
    }
    for (const auto& m : managers_) nodes_["User"].insert(m);
    nodes_["User"].insert("director");

    // Org chart.
    for (const auto& d : devs) {
        emit(d.home_repo, EventKind::user_reports_to, start,
             {{"user", d.id}, {"manager", managers_[d.team]}});
        edges_["reports_to"].insert({d.id, managers_[d.team]});
    }
    for (std::size_t t = 0; t < managers_.size(); ++t) {
        emit(t % spec_.n_repos, EventKind::user_reports_to, start,
             {{"user", managers_[t]}, {"manager", "director"}});
        edges_["reports_to"].insert({managers_[t], "director"});
    }

    GroundTruth truth;
    for (std::size_t t = 0; t < spec_.n_topics; ++t) {
        truth.experts[t] = {"User:" + devs[t].id};
    }

    const std::size_t total_prs = spec_.n_devs * spec_.prs_per_dev;
    const int pr_width = total_prs >= 10000 ? 5 : 4;
    std::size_t wi_counter = 0;
    std::size_t g = 0;
    for (std::size_t round = 0; round < spec_.prs_per_dev; ++round) {
        for (std::size_t di = 0; di < devs.size(); ++di, ++g) {
            const Dev& dev = devs[di];
            const bool owner = di < spec_.n_topics;
            std::size_t topic = dev.primary_topic;
            if (!owner && !rng_.chance(0.5)) topic = static_cast<std::size_t>(rng_.below(spec_.n_topics));
            std::size_t repo = rng_.chance(0.8) ? dev.home_repo
                                                : static_cast<std::size_t>(rng_.below(spec_.n_repos));
            const std::string& repo_name = repos_[repo];
            const Timestamp t0 = base + std::chrono::minutes(90) * static_cast<long>(g);
            std::string pr = padded("PR-", g + 1, pr_width);
            std::string pr_doc = "PullRequest:" + pr;

            const auto& words = vocab_[topic];
            std::vector<std::string> task;
            for (auto idx : rng_.sample(words.size(), 5)) task.push_back(words[idx]);
            std::vector<std::string> extra;
            for (auto idx : rng_.sample(words.size(), 4)) extra.push_back(words[idx]);

            std::string verb = kVerbs[rng_.below(kVerbs.size())];
            std::string component = pascal(task[0]) + pascal(task[3]);
            auto title_words = noisy({task[0], task[1], task[2]}, topic);
            std::string pr_title = pascal(verb) + " " + join(title_words) + " in " + component;
            std::vector<std::string> desc_words = task;
            desc_words.insert(desc_words.end(), extra.begin(), extra.end());
            desc_words.push_back(kGeneric[rng_.below(kGeneric.size())]);
            desc_words.push_back(kGeneric[rng_.below(kGeneric.size())]);
            desc_words = noisy(desc_words, topic);
            rng_.shuffle(desc_words);
            // Code identifier named in both descriptions, e.g. lexerCodegenLinker.
            std::string identifier = task[1] + pascal(task[2]) + pascal(task[4]);
            std::string pr_desc = "This change touches the " + join(desc_words) + " via " +
                                  identifier + "().";

            // Reviewers: 1-2 colleagues from the same repository.
            std::vector<std::size_t> pool;
            for (std::size_t j = 0; j < devs.size(); ++j) {
                if (j != di && devs[j].home_repo == repo) pool.push_back(j);
            }
            if (pool.empty()) {
                for (std::size_t j = 0; j < devs.size(); ++j) {
                    if (j != di) pool.push_back(j);
                }
            }
            std::vector<std::size_t> reviewers;
            std::size_t n_rev = rng_.chance(0.5) ? 2 : 1;
            for (auto idx : rng_.sample(pool.size(), n_rev)) reviewers.push_back(pool[idx]);
            auto is_candidate = [&](std::size_t j) { return j != topic && j != di; };
            if (std::none_of(reviewers.begin(), reviewers.end(), is_candidate)) {
                for (auto j : pool) {
                    if (is_candidate(j) &&
                        std::find(reviewers.begin(), reviewers.end(), j) == reviewers.end()) {
                        reviewers.push_back(j);
                        break;
                    }
                }
            }
            std::sort(reviewers.begin(), reviewers.end());

            emit(repo, EventKind::pr_created, t0,
                 {{"pr", pr},
                  {"author", dev.id},
                  {"author_name", dev.name},
                  {"title", pr_title},
                  {"description", pr_desc},
                  {"organization", kOrganization},
                  {"project", projects_[repo]}});
            nodes_["PullRequest"].insert(pr);
            nodes_["Repository"].insert(repo_name);
            edges_["creates"].insert({dev.id, pr});
            edges_["contains"].insert({repo_name, pr});

            for (std::size_t r = 0; r < reviewers.size(); ++r) {
                const auto& rev = devs[reviewers[r]];
                emit(repo, EventKind::review_assigned, t0 + std::chrono::minutes(5 + r),
                     {{"pr", pr}, {"reviewer", rev.id}});
                edges_["reviews"].insert({rev.id, pr});
                if (rng_.chance(0.7)) {
                    emit(repo, EventKind::review_commented, t0 + std::chrono::minutes(60 + r),
                         {{"pr", pr}, {"actor", rev.id}});
                    edges_["comments_on"].insert({rev.id, pr});
                }
            }
            std::size_t n_files = 1 + static_cast<std::size_t>(rng_.below(3));
            for (std::size_t f = 0; f < n_files; ++f) {
                std::string path = "src/" + task[f] + "/" + pascal(task[f]) + pascal(task[4]) +
                                   (f == 2 ? ".json" : ".cpp");
                emit(repo, EventKind::file_changed, t0 + std::chrono::minutes(10 + f),
                     {{"pr", pr}, {"actor", dev.id}, {"path", path}});
                nodes_["File"].insert(repo_name + "/" + path);
                edges_["changes"].insert({pr, repo_name + "/" + path});
            }

            if (rng_.chance(spec_.link_rate)) {
                std::string wi = padded("WI-", ++wi_counter, pr_width);
                std::string epic = ensure_epic(repo, topic, t0);
                std::string wi_verb = kVerbs[rng_.below(kVerbs.size())];
                // Work items paraphrase: they share only part of the task
                // signature with the pull request that resolves them.
                auto wi_title_words = noisy({task[0], rng_.pick(words)}, topic);
                std::string wi_title = pascal(wi_verb) + " " + join(wi_title_words);
                std::vector<std::string> wi_desc_words = {task[1], task[2], task[3], task[4]};
                for (auto idx : rng_.sample(words.size(), 2)) wi_desc_words.push_back(words[idx]);
                wi_desc_words.push_back(kGeneric[rng_.below(kGeneric.size())]);
                wi_desc_words = noisy(wi_desc_words, topic);
                if (rng_.chance(0.5)) wi_desc_words.push_back(projects_[repo]);
                rng_.shuffle(wi_desc_words);
                std::string wi_desc = "We need to " + wi_verb + " the " + join(wi_desc_words);
                wi_desc += rng_.chance(0.6) ? "; see " + identifier + "." : ".";
                std::string wi_author = rng_.chance(0.5) ? dev.id : managers_[dev.team];

                emit(repo, EventKind::wi_created, t0 - std::chrono::minutes(30),
                     {{"wi", wi},
                      {"author", wi_author},
                      {"title", wi_title},
                      {"description", wi_desc},
                      {"organization", kOrganization},
                      {"project", projects_[repo]}});
                emit(repo, EventKind::wi_parented, t0 - std::chrono::minutes(29),
                     {{"parent", epic}, {"child", wi}, {"actor", managers_[dev.team]}});
                emit(repo, EventKind::wi_linked, t0 + std::chrono::minutes(15),
                     {{"wi", wi}, {"pr", pr}, {"actor", dev.id}});
                nodes_["WorkItem"].insert(wi);
                edges_["parent_of"].insert({epic, wi});
                edges_["linked_to"].insert({wi, pr});

                std::string wi_doc = "WorkItem:" + wi;
                truth.artifacts[wi_doc] = {pr_doc};
                for (auto j : reviewers) {
                    if (!is_candidate(j)) continue;
                    QueryCase q;
                    q.query_id = padded("Q-", truth.queries.size() + 1, pr_width);
                    q.wi_doc = wi_doc;
                    q.repo = repo_name;
                    q.topic = topic;
                    q.requester = "User:" + devs[j].id;
                    q.title = wi_title;
                    q.description = wi_desc;
                    q.relevant_artifacts = {pr_doc};
                    q.relevant_experts = truth.experts[topic];
                    truth.queries.push_back(std::move(q));
                    break;
                }
            }

            double roll = rng_.unit();
            if (roll < 0.6) {
                emit(repo, EventKind::pr_state_changed, t0 + std::chrono::hours(20),
                     {{"pr", pr}, {"actor", dev.id}, {"state", "completed"}});
            } else if (roll < 0.65) {
                emit(repo, EventKind::pr_state_changed, t0 + std::chrono::hours(20),
                     {{"pr", pr}, {"actor", dev.id}, {"state", "abandoned"}});
            } else if (roll < 0.85) {
                emit(repo, EventKind::pr_updated, t0 + std::chrono::hours(3),
                     {{"pr", pr}, {"actor", dev.id}});
            }
        }
    }

    SynthCorpus corpus;
    corpus.spec = spec_;
    for (auto& [repo, items] : pending_) {
        std::stable_sort(items.begin(), items.end(), [](const Pending& a, const Pending& b) {
            if (a.ts != b.ts) return a.ts < b.ts;
            return a.seq < b.seq;
        });
        auto& out = corpus.events[repo];
        for (std::size_t i = 0; i < items.size(); ++i) {
            EventRecord e;
            e.event_id = repo + "-" + padded("", i + 1, 6);
            e.repo = repo;
            e.kind = items[i].kind;
            e.timestamp = items[i].ts;
            e.payload = std::move(items[i].payload);
            out.push_back(std::move(e));
        }
        corpus.manifest.events += out.size();
    }
    for (const auto& [kind, ids] : nodes_) corpus.manifest.nodes[kind] = ids.size();
    for (const auto& [type, keys] : edges_) corpus.manifest.edges[type] = keys.size();
    corpus.truth = std::move(truth);
    return corpus;
}

void write_tsv(const fs::path& path, const std::vector<std::string>& lines) {
    write_lines(path, lines);
}

}  // namespace

void CorpusSpec::validate() const {
    if (n_repos == 0 || n_devs == 0 || n_topics == 0 || prs_per_dev == 0 ||
        vocab_per_topic == 0 || team_size == 0) {
        throw InvalidArgument("corpus counts must be >= 1");
    }
    if (n_topics > n_devs) throw InvalidArgument("n_topics must not exceed n_devs");
    if (vocab_per_topic < 9) throw InvalidArgument("vocab_per_topic must be >= 9");
    if (!(link_rate >= 0.0 && link_rate <= 1.0) || !(noise_rate >= 0.0 && noise_rate <= 1.0)) {
        throw InvalidArgument("rates must lie in [0, 1]");
    }
}

std::vector<std::string> topic_vocabulary(std::size_t topic, std::size_t size) {
    std::vector<std::string> words;
    if (topic < kTopicWords.size()) {
        for (const char* w : kTopicWords[topic]) {
            if (words.size() == size) break;
            words.emplace_back(w);
        }
    }
    std::uint64_t key = (static_cast<std::uint64_t>(topic) << 20);
    while (words.size() < size) {
        auto w = synthetic_word(key++);
        if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(std::move(w));
    }
    return words;
}

SynthCorpus generate(const CorpusSpec& spec) {
    spec.validate();
    return Builder(spec).build();
}

void write_corpus(const SynthCorpus& corpus, const fs::path& dir) {
    fs::create_directories(dir / "events");
    for (const auto& [repo, events] : corpus.events) {
        ingest::write_event_file(
            dir / "events" / ingest::make_event_file_name(repo, ingest::StreamKind::bootstrap, 1),
            events);
    }
    std::vector<std::string> manifest = {"section\tname\tcount"};
    for (const auto& [kind, n] : corpus.manifest.nodes) manifest.push_back("node\t" + kind + "\t" + std::to_string(n));
    for (const auto& [type, n] : corpus.manifest.edges) manifest.push_back("edge\t" + type + "\t" + std::to_string(n));
    manifest.push_back("events\tall\t" + std::to_string(corpus.manifest.events));
    write_tsv(dir / "manifest.tsv", manifest);

    std::vector<std::string> artifacts = {"work_item\tpull_requests"};
    for (const auto& [wi, prs] : corpus.truth.artifacts) artifacts.push_back(wi + "\t" + join(prs, ","));
    write_tsv(dir / "ground_truth_artifacts.tsv", artifacts);

    std::vector<std::string> experts = {"topic\texperts"};
    for (const auto& [topic, users] : corpus.truth.experts) {
        experts.push_back(std::to_string(topic) + "\t" + join(users, ","));
    }
    write_tsv(dir / "ground_truth_experts.tsv", experts);

    std::vector<std::string> queries = {
        "query_id\twork_item\trepo\ttopic\trequester\ttitle\tdescription"};
    for (const auto& q : corpus.truth.queries) {
        queries.push_back(q.query_id + "\t" + q.wi_doc + "\t" + q.repo + "\t" +
                          std::to_string(q.topic) + "\t" + q.requester + "\t" +
                          url_encode(q.title) + "\t" + url_encode(q.description));
    }
    write_tsv(dir / "queries.tsv", queries);
}

namespace {

std::vector<std::vector<std::string>> read_tsv(const fs::path& path, std::size_t fields) {
    if (!fs::exists(path)) throw IoError("missing " + path.string());
    auto lines = read_lines(path);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto parts = split(lines[i], '\t');
        if (parts.size() != fields) {
            throw ParseError(path.string() + ": expected " + std::to_string(fields) +
                             " fields on line " + std::to_string(i + 1));
        }
        rows.emplace_back(parts.begin(), parts.end());
    }
    return rows;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    for (auto part : split(text, ',')) {
        if (!part.empty()) out.emplace_back(part);
    }
    return out;
}

std::size_t to_size(const std::string& text, const fs::path& path) {
    try {
        std::size_t pos = 0;
        auto v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ParseError(path.string() + ": bad number '" + text + "'");
    }
}

}  // namespace

Manifest load_manifest(const fs::path& dir) {
    Manifest m;
    auto path = dir / "manifest.tsv";
    for (const auto& row : read_tsv(path, 3)) {
        auto n = to_size(row[2], path);
        if (row[0] == "node") {
            m.nodes[row[1]] = n;
        } else if (row[0] == "edge") {
            m.edges[row[1]] = n;
        } else if (row[0] == "events") {
            m.events = n;
        } else {
            throw ParseError(path.string() + ": unknown section " + row[0]);
        }
    }
    return m;
}

GroundTruth load_ground_truth(const fs::path& dir) {
    GroundTruth truth;
    for (const auto& row : read_tsv(dir / "ground_truth_artifacts.tsv", 2)) {
        truth.artifacts[row[0]] = split_list(row[1]);
    }
    for (const auto& row : read_tsv(dir / "ground_truth_experts.tsv", 2)) {
        truth.experts[to_size(row[0], dir / "ground_truth_experts.tsv")] = split_list(row[1]);
    }
    auto qpath = dir / "queries.tsv";
    for (const auto& row : read_tsv(qpath, 7)) {
        QueryCase q;
        q.query_id = row[0];
        q.wi_doc = row[1];
        q.repo = row[2];
        q.topic = to_size(row[3], qpath);
        q.requester = row[4];
        q.title = url_decode(row[5]);
        q.description = url_decode(row[6]);
        auto a = truth.artifacts.find(q.wi_doc);
        if (a == truth.artifacts.end()) throw ParseError(qpath.string() + ": no ground truth for " + q.wi_doc);
        q.relevant_artifacts = a->second;
        auto e = truth.experts.find(q.topic);
        if (e == truth.experts.end()) throw ParseError(qpath.string() + ": no experts for topic " + row[3]);
        q.relevant_experts = e->second;
        truth.queries.push_back(std::move(q));
    }
    return truth;
}

}  // namespace stg::synth
