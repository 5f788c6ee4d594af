#include <doctest.h>

#include <cmath>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "womgraph/error.hpp"
#include "womgraph/relevance.hpp"

using namespace womgraph;

namespace {

Corpus docs(std::initializer_list<std::initializer_list<const char *>> list) {
    Corpus c;
    for (const auto &d : list) {
        TokenList t;
        for (const char *w : d)
            t.emplace_back(w);
        c.push_back(std::move(t));
    }
    return c;
}

void check_matches_oracle(const Corpus &corpus, const TableParams &params) {
    const auto table = build_relatedness_table(corpus, params);
    const auto expected =
        testkit::oracle::relatedness(corpus, params.min_pair_count, params.top_n_per_word);
    const auto entries = table.entries();
    REQUIRE(entries.size() == expected.size());
    double max_score = 0;
    for (const auto &e : entries) {
        auto it = expected.find({e.first, e.second});
        REQUIRE(it != expected.end());
        CHECK(std::abs(e.score - it->second) <= 1e-10);
        CHECK(*table.entry(e.second, e.first) == *table.entry(e.first, e.second));
        max_score = std::max(max_score, e.score);
    }
    CHECK(table.self_sim() == (max_score > 0 ? max_score : 1.0));
}

} // namespace

TEST_CASE("words that never share a document have no stored relatedness") {
    const auto table = build_relatedness_table(docs({{"a"}, {"b"}}), {1, 50, 1});
    CHECK(table.entry("a", "b").value_or(0.0) == 0.0);
    CHECK(table.self_sim() == 1.0);
}

TEST_CASE("always co-occurring pair in half the documents scores ln 2") {
    const auto corpus = docs({{"x", "y"}, {"y", "x"}, {"z"}, {"w"}});
    const auto table = build_relatedness_table(corpus);
    // Cells (1,1) and (0,0) each hold probability 1/2 against a product of 1/4.
    const double expected = 0.5 * std::log(0.5 / 0.25) + 0.5 * std::log(0.5 / 0.25);
    REQUIRE(table.entry("x", "y"));
    CHECK(*table.entry("x", "y") == doctest::Approx(expected).epsilon(1e-15));
    CHECK(*table.entry("y", "x") == *table.entry("x", "y"));
    CHECK(table.self_sim() == *table.entry("x", "y"));
    CHECK(presence_mutual_information(4, 2, 2, 2) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("an empty corpus is rejected") {
    CHECK_THROWS_AS(build_relatedness_table(Corpus{}), EmptyCorpus);
    CHECK_THROWS_AS(build_relatedness_table(Corpus{{}, {}}), EmptyCorpus);
}

TEST_CASE("min_pair_count below 1 is rejected") {
    CHECK_THROWS_AS(build_relatedness_table(docs({{"a", "b"}}), {0, 50, 1}), InvalidArgument);
}

TEST_CASE("table matches the brute-force evaluator on random corpora") {
    testkit::Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        testkit::CorpusSpec spec;
        spec.docs = 1 + rng.index(120);
        spec.vocab = 2 + rng.index(30);
        const auto corpus = testkit::random_corpus(rng, spec);
        bool any = false;
        for (const auto &d : corpus)
            any = any || !d.empty();
        if (!any)
            continue;
        check_matches_oracle(corpus, {1 + rng.index(3), 50, 1});
        check_matches_oracle(corpus, {1, 1 + rng.index(4), 1});
    }
}

TEST_CASE("sharding documents across workers gives the same table") {
    testkit::Rng rng(5);
    const auto corpus = testkit::random_corpus(rng, {300, 40, 10});
    const auto one = build_relatedness_table(corpus, {2, 10, 1});
    for (unsigned w : {2u, 3u, 8u}) {
        const auto many = build_relatedness_table(corpus, {2, 10, w});
        CHECK(many.entries() == one.entries());
        CHECK(many.self_sim() == one.self_sim());
    }
}

TEST_CASE("independent words have mean relatedness near zero") {
    // Under independence 2N*MI is asymptotically chi-square with one degree of
    // freedom, so MI has mean 1/(2N) and standard deviation sqrt(2)/(2N).
    testkit::Rng rng(99);
    auto mean_mi = [&](std::size_t n_docs) {
        Corpus corpus;
        for (std::size_t d = 0; d < n_docs; ++d) {
            TokenList doc;
            for (int w = 0; w < 12; ++w)
                if (rng.bernoulli(0.3))
                    doc.push_back("w" + std::to_string(w));
            corpus.push_back(doc);
        }
        const auto table = build_relatedness_table(corpus, {1, 50, 1});
        double sum = 0;
        const auto entries = table.entries();
        for (const auto &e : entries)
            sum += e.score;
        return sum / static_cast<double>(entries.size());
    };
    const double n = 10000;
    const double big = mean_mi(10000);
    CHECK(std::abs(big - 1.0 / (2 * n)) <= 3.0 * std::sqrt(2.0) / (2 * n));
    CHECK(mean_mi(500) > big);
}

TEST_CASE("related words") {
    const auto table = RelatednessTable::from_entries(
        {{"databas", "sql", 0.4}, {"databas", "schema", 0.7}, {"databas", "index", 0.4},
         {"java", "web", 0.2}});
    CHECK(related_words(table, "nosuch", 5).empty());
    const auto one = related_words(table, "databas", 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].first == "schema");
    const auto all = related_words(table, "databas", 10);
    REQUIRE(all.size() == 3);
    CHECK(all[1].first == "index"); // tie at 0.4 broken by word
    CHECK(all[2].first == "sql");
}

TEST_CASE("related words are sorted like a naive full sort") {
    testkit::Rng rng(8);
    const auto corpus = testkit::random_corpus(rng, {200, 25, 8});
    const auto table = build_relatedness_table(corpus, {1, 50, 1});
    for (const auto &word : table.vocab()) {
        std::vector<std::pair<std::string, double>> naive;
        for (const auto &e : table.entries()) {
            if (e.first == word)
                naive.push_back({e.second, e.score});
            if (e.second == word)
                naive.push_back({e.first, e.score});
        }
        std::sort(naive.begin(), naive.end(), [](const auto &a, const auto &b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        CHECK(related_words(table, word, 1000) == naive);
    }
}

TEST_CASE("content relevance follows the nested topic and token loops") {
    const auto table = RelatednessTable::from_entries({{"databas", "sql", 0.3}, {"java", "web", 0.7}});
    const double s = table.self_sim();
    CHECK(s == 0.7);
    const TopicQuery topic({"databas"});
    CHECK(content_relevance({"guitar", "music"}, topic, table) == 0.0);
    CHECK(content_relevance({"databas"}, topic, table) == s);
    CHECK(content_relevance({"databas", "sql", "sql"}, topic, table) == doctest::Approx(s + 2 * 0.3));
    const TopicQuery two({"databas", "web"});
    CHECK(content_relevance({"java", "databas"}, two, table) == doctest::Approx(0.7 + s));
}

TEST_CASE("adding a token never lowers relevance") {
    testkit::Rng rng(3);
    const auto corpus = testkit::random_corpus(rng, {150, 20, 8});
    const auto table = build_relatedness_table(corpus, {1, 50, 1});
    const auto &vocab = table.vocab();
    for (int trial = 0; trial < 200; ++trial) {
        TopicQuery topic({vocab[rng.index(vocab.size())], vocab[rng.index(vocab.size())]});
        TokenList tokens;
        double previous = content_relevance(tokens, topic, table);
        for (int i = 0; i < 6; ++i) {
            tokens.push_back(vocab[rng.index(vocab.size())]);
            const double now = content_relevance(tokens, topic, table);
            CHECK(now >= previous);
            previous = now;
        }
    }
}

TEST_CASE("boosted relevance") {
    CHECK(boosted_relevance(0.0, 20.0) == 1.0);
    CHECK(boosted_relevance(0.0, 0.0) == 1.0);
    CHECK(std::abs(boosted_relevance(std::exp(1.0) - 1.0, 20.0) - 21.0) <= 1e-12);
    const double gain10 = boosted_relevance(10.0, 20.0) - 1.0;
    const double gain20 = boosted_relevance(20.0, 20.0) - 1.0;
    CHECK(gain20 / gain10 == doctest::Approx(std::log(21.0) / std::log(11.0)));
    CHECK(gain20 / gain10 < 2.0);
    CHECK_THROWS_AS(boosted_relevance(-0.1, 20.0), NegativeRelevance);
}

TEST_CASE("boosted relevance is increasing and concave") {
    testkit::Rng rng(4);
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = 50 * rng.uniform();
        const double h = 0.01 + rng.uniform();
        const double f0 = boosted_relevance(a, 20), f1 = boosted_relevance(a + h, 20),
                     f2 = boosted_relevance(a + 2 * h, 20);
        CHECK(f1 > f0);
        CHECK(f2 - f1 <= f1 - f0 + 1e-12);
    }
}

TEST_CASE("topic queries are preprocessed, sorted and deduplicated") {
    const Preprocessor pre;
    const auto q = TopicQuery::parse("Databases, SQL and the database", pre);
    CHECK(q.words() == std::vector<std::string>{"databas", "sql"});
    CHECK(q.label() == "databas sql");
    CHECK_THROWS_AS(TopicQuery::parse("the and of", pre), InvalidArgument);
    CHECK_THROWS_AS(TopicQuery(std::vector<std::string>{}), InvalidArgument);
}

TEST_CASE("from_entries rejects self pairs and duplicates") {
    CHECK_THROWS_AS(RelatednessTable::from_entries({{"a", "a", 0.1}}), InvalidArgument);
    CHECK_THROWS_AS(RelatednessTable::from_entries({{"a", "b", 0.1}, {"b", "a", 0.2}}),
                    InvalidArgument);
    CHECK_THROWS_AS(RelatednessTable::from_entries({{"a", "b", -0.1}}), InvalidArgument);
}

TEST_CASE("table file round trip and layout") {
    const auto table = RelatednessTable::from_entries(
        {{"sql", "databas", 0.25}, {"java", "web", 0.1}, {"databas", "schema", 1.0 / 3.0}});
    std::ostringstream out;
    write_relatedness_table(out, table);
    CHECK(out.str() == "databas\tschema\t0.3333333333333333\n"
                       "databas\tsql\t0.25\n"
                       "java\tweb\t0.1\n");
    std::istringstream in(out.str());
    const auto back = read_relatedness_table(in);
    CHECK(back.entries() == table.entries());
    CHECK(back.self_sim() == table.self_sim());

    std::istringstream bad("a\tb\tnotanumber\n");
    CHECK_THROWS_AS(read_relatedness_table(bad), MalformedRecord);
    std::istringstream short_line("a\tb\n");
    CHECK_THROWS_AS(read_relatedness_table(short_line), MalformedRecord);
}

TEST_CASE("corpus reader preprocesses one document per line") {
    std::istringstream in("The databases\n\nSQL queries\n");
    const auto corpus = read_corpus(in, Preprocessor{});
    REQUIRE(corpus.size() == 3);
    CHECK(corpus[0] == TokenList{"databas"});
    CHECK(corpus[1].empty());
    CHECK(corpus[2] == TokenList{"sql", "queri"});
}
