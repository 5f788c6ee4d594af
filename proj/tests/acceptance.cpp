// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "womgraph/authority.hpp"
#include "womgraph/campaign.hpp"
#include "womgraph/cli.hpp"
#include "womgraph/eval.hpp"
#include "womgraph/format.hpp"
#include "womgraph/graph.hpp"
#include "womgraph/relevance.hpp"
#include "womgraph/structure.hpp"
#include "womgraph/synth.hpp"

using namespace womgraph;
namespace fs = std::filesystem;

namespace {

// Collects the first few failure messages of one criterion.
class Check {
public:
    void expect(bool ok, const std::string &what) {
        ++checks_;
        if (!ok && failures_.size() < 5)
            failures_.push_back(what);
        failed_ = failed_ || !ok;
    }
    bool passed() const { return !failed_; }
    std::size_t checks() const { return checks_; }
    const std::vector<std::string> &failures() const { return failures_; }
    void note(std::string text) { notes_.push_back(std::move(text)); }
    const std::vector<std::string> &notes() const { return notes_; }

private:
    bool failed_ = false;
    std::size_t checks_ = 0;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string num(double v) { return format_double(v); }

void boost_formula(Check &c) {
    c.expect(boosted_relevance(0.0, 20.0) == 1.0, "boost(0, 20) != 1");
    c.expect(boosted_relevance(0.0, 3.5) == 1.0, "boost(0, 3.5) != 1");
    const double b = boosted_relevance(std::exp(1.0) - 1.0, 20.0);
    c.expect(std::abs(b - 21.0) <= 1e-12, "boost(e-1, 20) = " + num(b));
}

void mi_oracle(Check &c) {
    testkit::Rng rng(1001);
    for (int trial = 0; trial < 50; ++trial) {
        testkit::CorpusSpec spec;
        spec.docs = 1 + rng.index(200);
        spec.vocab = 2 + rng.index(49);
        auto corpus = testkit::random_corpus(rng, spec);
        if (std::all_of(corpus.begin(), corpus.end(), [](const auto &d) { return d.empty(); }))
            corpus.push_back({"t00"});
        const TableParams params{1 + rng.index(2), 1 + rng.index(60), 1};
        const auto table = build_relatedness_table(corpus, params);
        const auto expected =
            testkit::oracle::relatedness(corpus, params.min_pair_count, params.top_n_per_word);
        const auto entries = table.entries();
        c.expect(entries.size() == expected.size(),
                 "corpus " + std::to_string(trial) + ": entry count differs");
        for (const auto &e : entries) {
            auto it = expected.find({e.first, e.second});
            c.expect(it != expected.end() && std::abs(it->second - e.score) <= 1e-10,
                     "corpus " + std::to_string(trial) + ": " + e.first + "/" + e.second);
            c.expect(table.entry(e.first, e.second) == table.entry(e.second, e.first),
                     "asymmetric entry " + e.first + "/" + e.second);
        }
    }
}

void pagerank_oracle(Check &c) {
    testkit::Rng rng(1002);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = testkit::random_graph(rng, {1 + rng.index(50), 0.02 + 0.2 * rng.uniform()});
        const auto pr = pagerank(g, {0.85, 1e-13, 1000});
        const double d = testkit::oracle::l1(pr.scores, testkit::oracle::pagerank(g, 0.85));
        worst = std::max(worst, d);
        c.expect(d <= 1e-8, "graph " + std::to_string(trial) + ": L1 " + num(d));
        const double total = std::accumulate(pr.scores.begin(), pr.scores.end(), 0.0);
        c.expect(std::abs(total - 1.0) <= 1e-9, "sum " + num(total));
    }
    const InteractionGraph cycle({}, {{"a", "b", 1}, {"b", "c", 1}, {"c", "d", 1}, {"d", "a", 1}});
    for (double s : pagerank(cycle).scores)
        c.expect(std::abs(s - 0.25) <= 1e-9, "4-cycle score " + num(s));
    c.note("worst L1 " + num(worst));
}

void centrality_oracles(Check &c) {
    testkit::Rng rng(1003);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = testkit::random_graph(rng, {1 + rng.index(10), 0.1 + 0.3 * rng.uniform()});
        for (bool weighted : {false, true}) {
            const auto b = betweenness(g, weighted).scores;
            const auto cl = closeness(g, weighted).scores;
            const auto eb = testkit::oracle::betweenness(g, weighted);
            const auto ec = testkit::oracle::closeness(g, weighted);
            for (std::size_t i = 0; i < g.node_count(); ++i) {
                c.expect(std::abs(b[i] - eb[i]) <= 1e-12 * std::max(1.0, eb[i]),
                         "betweenness graph " + std::to_string(trial));
                c.expect(std::abs(cl[i] - ec[i]) <= 1e-12 * std::max(1.0, ec[i]),
                         "closeness graph " + std::to_string(trial));
            }
        }
    }
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = testkit::random_real_graph(rng, 2 + rng.index(20), 0.25);
        if (g.edge_count() == 0)
            continue;
        const auto got = hits(g, 1e-14, 100000);
        const auto [h, a] = testkit::oracle::hits(g);
        c.expect(testkit::oracle::l2(got.hubs.scores, h) <= 1e-8, "hubs graph " + std::to_string(trial));
        c.expect(testkit::oracle::l2(got.authorities.scores, a) <= 1e-8,
                 "authorities graph " + std::to_string(trial));
    }
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = testkit::random_primitive_graph(rng, {3 + rng.index(20), 0.15});
        const auto ev = eigenvector_centrality(g, 1e-14, 100000);
        c.expect(testkit::oracle::l2(ev.scores, testkit::oracle::eigenvector(g)) <= 1e-8,
                 "eigenvector graph " + std::to_string(trial));
    }
}

void check_partition(Check &c, const InteractionGraph &g, const std::string &label) {
    const auto d = bowtie_decompose(g);
    c.expect(d.node_class == testkit::oracle::bowtie(g), label + ": differs from closure oracle");
    std::set<UserId> seen;
    std::size_t total = 0;
    for (auto cls : kBowTieClasses) {
        total += d.of(cls).size();
        seen.insert(d.of(cls).begin(), d.of(cls).end());
    }
    c.expect(total == g.node_count() && seen.size() == g.node_count(),
             label + ": partition not exact");
}

void bowtie_oracle(Check &c) {
    testkit::Rng rng(1004);
    for (int trial = 0; trial < 100; ++trial)
        check_partition(c, testkit::random_graph(rng, {1 + rng.index(12), 0.05 + 0.3 * rng.uniform()}),
                        "graph " + std::to_string(trial));
    for (std::size_t n = 1; n <= 12; ++n) {
        std::vector<UserId> nodes;
        for (std::size_t i = 0; i < n; ++i)
            nodes.push_back(testkit::node_name(i));
        check_partition(c, InteractionGraph(nodes, {}), "edgeless n=" + std::to_string(n));
        if (n >= 2) {
            std::vector<Edge> ring;
            for (std::size_t i = 0; i < n; ++i)
                ring.push_back({nodes[i], nodes[(i + 1) % n], 1.0});
            const InteractionGraph g(nodes, ring);
            check_partition(c, g, "single SCC n=" + std::to_string(n));
            c.expect(bowtie_decompose(g).of(BowTieClass::core).size() == n, "ring not all core");
        }
    }
}

void wcc_oracle(Check &c) {
    testkit::Rng rng(1005);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = testkit::random_graph(rng, {1 + rng.index(200), 0.002 + 0.012 * rng.uniform()});
        std::set<std::set<std::string>> got;
        for (const auto &comp : weakly_connected_components(g))
            got.insert({comp.members.begin(), comp.members.end()});
        c.expect(got == testkit::oracle::weak_components(g), "graph " + std::to_string(trial));
    }
}

void reinforced_contract(Check &c) {
    testkit::Rng rng(1006);
    std::size_t plans = 0;
    for (int trial = 0; trial < 30; ++trial) {
        testkit::LogSpec spec;
        spec.users = 2 + rng.index(11);
        spec.posts = 1 + rng.index(6);
        spec.reactions = rng.index(14);
        const auto log = testkit::random_log(rng, spec);
        const auto g = build_unboosted_graph(log);
        if (g.node_count() > 12)
            continue;
        const auto scores = pagerank(g);
        const std::size_t n = g.node_count();
        const std::string where = "log " + std::to_string(trial);
        for (std::size_t r = 1; r <= n; ++r)
            for (std::size_t k = r; k <= n; ++k)
                for (std::size_t th = 1; th <= n; ++th) {
                    const auto plan = reinforced_selection(g, scores, {k, r, th});
                    const auto best = testkit::oracle::best_assignment(g, scores.scores, k, r, th);
                    ++plans;
                    std::size_t used = 0;
                    double total = 0.0;
                    for (const auto &a : plan.assignments) {
                        c.expect(a.group.size() >= th, where + ": sub-group below th");
                        c.expect(a.influencers.size() == std::min(r, a.group.size()),
                                 where + ": r-coverage violated");
                        for (const auto &inf : a.influencers) {
                            c.expect(std::binary_search(a.group.members.begin(),
                                                        a.group.members.end(), inf.user),
                                     where + ": assignee outside its sub-group");
                            const bool in_topk = std::any_of(
                                plan.global_topk.begin(), plan.global_topk.end(),
                                [&](const RankedEntry &e) { return e.user == inf.user; });
                            c.expect(in_topk != inf.below_global_top_k, where + ": fallback flag");
                            total += inf.score;
                            ++used;
                        }
                    }
                    for (const auto &s : plan.skipped)
                        c.expect(s.group.size() < th ? s.reason == kBelowThreshold
                                                     : s.reason == kBudgetExhausted,
                                 where + ": skip reason");
                    c.expect(used <= k, where + ": budget exceeded");
                    c.expect(plan.assignments.size() == best.funded.size() &&
                                 plan.budget_infeasible == best.budget_infeasible,
                             where + ": funded sub-groups differ from enumeration");
                    c.expect(std::abs(total - best.best_total) <= 1e-12,
                             where + ": assignment not optimal");
                }
        // Degenerate case on the largest component alone.
        const auto comps = weakly_connected_components(g);
        const InteractionGraph single = [&] {
            std::vector<Edge> edges;
            const std::set<UserId> keep(comps[0].members.begin(), comps[0].members.end());
            for (const auto &e : g.edges())
                if (keep.contains(e.src))
                    edges.push_back(e);
            return InteractionGraph(comps[0].members, edges);
        }();
        const auto single_scores = pagerank(single);
        for (std::size_t k = 1; k <= single.node_count(); ++k) {
            const auto plan = reinforced_selection(single, single_scores, {k, 1, 1});
            const auto plain = select_influencers(single, Method::pagerank, k);
            c.expect(plan.global_topk == plain, where + ": global top-k differs from plain top-k");
            c.expect(plan.assignments.size() == 1 && plan.assignments[0].influencers.size() == 1 &&
                         plan.assignments[0].influencers[0].user == plain[0].user,
                     where + ": degenerate plan is not the plain top-1");
        }
    }
    c.note(std::to_string(plans) + " plans checked");
}

void metric_identities(Check &c) {
    const std::vector<double> x{0.3, 1.7, -2.2, 4.0, 0.0, 9.5};
    std::vector<double> neg(x.size());
    std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
    c.expect(std::abs(pearson(x, x) - 1.0) <= 1e-12, "pearson(x, x)");
    c.expect(std::abs(pearson(x, neg) + 1.0) <= 1e-12, "pearson(x, -x)");

    const RankedList rnr{{"r1", 3}, {"n", 2}, {"r2", 1}};
    const RelevanceLabels two{{{"r1", 1}, {"r2", 1}}, ""};
    c.expect(mean_average_precision(rnr, two, 3) == 5.0 / 6.0, "MAP [R,N,R]");

    const RankedList second{{"n", 2}, {"r", 1}};
    const RelevanceLabels one{{{"r", 1}}, ""};
    c.expect(std::abs(ndcg(second, one, 2) - 1.0 / std::log2(3.0)) <= 1e-12, "single relevant at 2");

    testkit::Rng rng(1008);
    for (std::size_t n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            std::map<UserId, int> grades;
            std::vector<UserId> users;
            for (std::size_t i = 0; i < n; ++i) {
                users.push_back("u" + std::to_string(i));
                grades[users.back()] = static_cast<int>(rng.index(4));
            }
            grades[users[rng.index(n)]] = 1 + static_cast<int>(rng.index(3));
            const RelevanceLabels labels{grades, ""};
            auto to_ranking = [](const std::vector<UserId> &order) {
                RankedList r;
                for (std::size_t i = 0; i < order.size(); ++i)
                    r.push_back({order[i], static_cast<double>(order.size() - i)});
                return r;
            };
            auto ideal = users;
            std::stable_sort(ideal.begin(), ideal.end(),
                             [&](const auto &a, const auto &b) { return grades[a] > grades[b]; });
            for (std::size_t cutoff = 1; cutoff <= n; ++cutoff) {
                const double best = ndcg(to_ranking(ideal), labels, cutoff);
                c.expect(best == 1.0, "ndcg of ideal order is " + num(best));
                auto perm = users;
                std::sort(perm.begin(), perm.end());
                do {
                    c.expect(ndcg(to_ranking(perm), labels, cutoff) <= best, "permutation beats ideal");
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
        }
    }
}

std::vector<UserId> order_of(const ScoreVector &s) {
    std::vector<UserId> users;
    for (const auto &e : top_k(s, std::max<std::size_t>(1, s.size())))
        users.push_back(e.user);
    return users;
}

void scale_invariance(Check &c) {
    testkit::Rng rng(1009);
    const std::vector<double> factors{1e-3, 0.37, 3.0, 7.5, 1e4};
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = testkit::random_primitive_graph(rng, {3 + rng.index(25), 0.15});
        const auto log = testkit::random_log(rng, {});
        for (auto m : {Method::pagerank, Method::hits, Method::eigen, Method::betweenness,
                       Method::closeness}) {
            const auto base = order_of(compute_scores(m, g, nullptr));
            for (double f : factors)
                c.expect(order_of(compute_scores(m, g.scaled(f), nullptr)) == base,
                         "graph " + std::to_string(trial) + " " + std::string(method_name(m)) +
                             " x" + num(f));
        }
        // zscore ignores edge weights; scaling the reaction weights leaves the log graph
        // different but the scores untouched.
        const auto lg = build_unboosted_graph(log);
        const auto z = order_of(compute_scores(Method::zscore, lg, &log));
        for (double f : factors)
            c.expect(order_of(compute_scores(Method::zscore, lg.scaled(f), &log)) == z,
                     "zscore x" + num(f));
    }
}

// Least-squares slope of log CCDF against log degree for total degrees >= 10,
// counted directly from the edge list.
double counted_tail_slope(const InteractionGraph &g) {
    std::map<UserId, std::size_t> deg;
    for (const auto &id : g.nodes())
        deg[id] = 0;
    for (const auto &e : g.edges()) {
        ++deg[e.src];
        ++deg[e.dst];
    }
    std::map<std::size_t, std::size_t> count;
    for (const auto &[id, d] : deg)
        ++count[d];
    std::vector<std::pair<double, double>> pts;
    std::size_t at_least = deg.size();
    for (const auto &[d, n] : count) {
        if (d >= 10)
            pts.emplace_back(std::log(static_cast<double>(d)),
                             std::log(static_cast<double>(at_least) / static_cast<double>(deg.size())));
        at_least -= n;
    }
    double mx = 0, my = 0;
    for (auto [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0, sxx = 0;
    for (auto [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    return sxy / sxx;
}

struct SynthGroup {
    GroupActivityLog log;
    InteractionGraph graph;
};

SynthGroup topical_group(const SynthesisParams &params) {
    const Preprocessor pre;
    Corpus corpus;
    for (const auto &doc : synth_corpus(params, 2000))
        corpus.push_back(pre(doc));
    const auto table = build_relatedness_table(corpus);
    auto log = synth_generate(params);
    auto graph = build_interaction_graph(log, TopicQuery::parse("camera lens", pre), table, pre);
    return {std::move(log), std::move(graph)};
}

void paper_shape(Check &c) {
    SynthesisParams params;
    params.seed = 1;
    params.seasonality.fill(0.4 / 9.0);
    params.seasonality[2] = params.seasonality[3] = params.seasonality[9] = 0.2;
    const auto group = topical_group(params);

    const double slope = counted_tail_slope(group.graph);
    c.expect(slope >= -3.5 && slope <= -1.5, "(a) tail slope " + num(slope));
    c.note("(a) slope " + num(slope));

    const auto bt = bowtie_decompose(group.graph);
    const auto in = bt.of(BowTieClass::in).size(), out = bt.of(BowTieClass::out).size();
    c.expect(params.react_only_bias() > 5.0, "(b) react-only bias " + num(params.react_only_bias()));
    c.expect(in > out, "(b) |in| " + std::to_string(in) + " <= |out| " + std::to_string(out));
    c.note("(b) in " + std::to_string(in) + " out " + std::to_string(out) + " bias " +
           num(params.react_only_bias()));

    const auto ranking = top_k(pagerank(group.graph), group.graph.node_count());
    const auto profiles = monthly_activity_profile(group.log, ranking,
                                                   parse_bands("1-100,101-500,501-1000"),
                                                   ProfileEvent::posts);
    auto months = best_promotion_window(profiles, 3);
    std::sort(months.begin(), months.end());
    c.expect(months == std::vector<int>{3, 4, 10}, "(d) top months differ");
    c.note("(d) months " + std::to_string(months[0]) + "," + std::to_string(months[1]) + "," +
           std::to_string(months[2]));

    double top_cov = 0.0, random_cov = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SynthesisParams p;
        p.seed = seed;
        const auto g = seed == 1 ? group.graph : topical_group(p).graph;
        const std::size_t two_percent = g.node_count() / 50;
        std::vector<UserId> top;
        for (const auto &e : top_k(pagerank(g), two_percent))
            top.push_back(e.user);
        top_cov += coverage_estimate(g, top);
        Rng rng(seed);
        double sampled = 0.0;
        for (int draw = 0; draw < 20; ++draw) {
            auto nodes = g.nodes();
            rng.shuffle(nodes);
            nodes.resize(two_percent);
            sampled += coverage_estimate(g, nodes);
        }
        random_cov += sampled / 20.0;
    }
    const double ratio = top_cov / random_cov;
    c.expect(ratio >= 5.0, "(c) coverage ratio " + num(ratio));
    c.note("(c) coverage ratio " + num(ratio));
}

int quiet_cli(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    const int status = run_cli(args, out, err);
    if (status != 0)
        std::cerr << err.str();
    return status;
}

void determinism(Check &c) {
    const fs::path root = fs::temp_directory_path() / "womgraph_acceptance";
    fs::remove_all(root);
    const std::vector<std::string> artifacts{"log.jsonl", "corpus.txt", "table.tsv",
                                             "graph.edges", "rank.tsv", "bowtie.tsv",
                                             "wcc.tsv", "campaign.txt"};
    auto pipeline = [&](const std::string &name, const std::string &workers) {
        const fs::path dir = root / name;
        fs::create_directories(dir);
        auto at = [&](const std::string &f) { return (dir / f).string(); };
        const std::vector<std::string> graph_in{"--log", at("log.jsonl"), "--table", at("table.tsv"),
                                                "--topic", "camera lens", "--workers", workers};
        auto with = [&](std::vector<std::string> head, const std::vector<std::string> &tail) {
            head.insert(head.end(), tail.begin(), tail.end());
            return head;
        };
        bool ok = quiet_cli({"synth", "--seed", "11", "--users", "3000", "--posts", "1800", "--out",
                             at("log.jsonl"), "--corpus-out", at("corpus.txt"), "--workers", workers}) == 0;
        ok = ok && quiet_cli({"build-table", "--corpus", at("corpus.txt"), "--out", at("table.tsv"),
                              "--workers", workers}) == 0;
        ok = ok && quiet_cli(with({"graph", "--out", at("graph.edges")}, graph_in)) == 0;
        ok = ok && quiet_cli(with({"rank", "--k", "100", "--out", at("rank.tsv")}, graph_in)) == 0;
        ok = ok && quiet_cli(with({"bowtie", "--per-user", "--out", at("bowtie.tsv")}, graph_in)) == 0;
        ok = ok && quiet_cli(with({"wcc", "--out", at("wcc.tsv")}, graph_in)) == 0;
        ok = ok && quiet_cli(with({"campaign", "--k", "30", "--r", "2", "--th", "5", "--bands",
                                   "1-60,61-300", "--out", at("campaign.txt")},
                                  graph_in)) == 0;
        c.expect(ok, name + ": pipeline step failed");
        return dir;
    };
    const auto first = pipeline("run1", "1");
    const auto second = pipeline("run2", "1");
    const auto parallel = pipeline("run3", "4");
    for (const auto &file : artifacts) {
        const auto a = read_file(first / file);
        c.expect(!a.empty(), file + " is empty");
        c.expect(a == read_file(second / file), file + " differs between repeat runs");
        c.expect(a == read_file(parallel / file), file + " differs between 1 and 4 workers");
    }
    fs::remove_all(root);
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char *title;
        std::function<void(Check &)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "boost formula exactness", boost_formula},
        {2, "relatedness table matches brute-force mutual information", mi_oracle},
        {3, "weighted PageRank matches dense power iteration", pagerank_oracle},
        {4, "centrality measures match path-enumeration and iterative oracles", centrality_oracles},
        {5, "bow-tie partition matches transitive closure", bowtie_oracle},
        {6, "weak components match union-find", wcc_oracle},
        {7, "reinforced selection contract", reinforced_contract},
        {8, "metric identities", metric_identities},
        {9, "rankings invariant under edge-weight scaling", scale_invariance},
        {10, "qualitative shape on synthetic preferential-attachment data", paper_shape},
        {11, "campaign pipeline determinism", determinism},
    };
    int failed = 0;
    for (const auto &criterion : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(check);
        } catch (const std::exception &e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !check.passed();
        std::printf("[%s] %d %s (%zu checks, %.2fs)\n", check.passed() ? "PASS" : "FAIL",
                    criterion.id, criterion.title, check.checks(), secs);
        for (const auto &n : check.notes())
            std::printf("       %s\n", n.c_str());
        for (const auto &f : check.failures())
            std::printf("       failure: %s\n", f.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
