#include "womgraph/relevance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <thread>

#include "womgraph/error.hpp"
#include "womgraph/format.hpp"

namespace womgraph {

namespace {

std::string pair_key(std::string_view a, std::string_view b) {
    std::string key;
    key.reserve(a.size() + b.size() + 1);
    if (b < a)
        std::swap(a, b);
    key.append(a);
    key.push_back('\n');
    key.append(b);
    return key;
}

bool by_score_then_word(const std::pair<std::string, double> &x,
                        const std::pair<std::string, double> &y) {
    if (x.second != y.second)
        return x.second > y.second;
    return x.first < y.first;
}

} // namespace

RelatednessTable RelatednessTable::from_entries(std::vector<RelatednessEntry> entries,
                                                std::vector<std::string> vocab) {
    RelatednessTable table;
    double max_score = 0.0;
    for (auto &e : entries) {
        if (e.first.empty() || e.second.empty())
            throw InvalidArgument("relatedness entry with empty word");
        if (e.first == e.second)
            throw InvalidArgument("self pair '" + e.first + "' in relatedness table");
        if (!std::isfinite(e.score) || e.score < 0.0)
            throw InvalidArgument("relatedness score must be finite and non-negative");
        if (!table.scores_.emplace(pair_key(e.first, e.second), e.score).second)
            throw InvalidArgument("duplicate relatedness pair " + e.first + "/" + e.second);
        table.partners_[e.first].emplace_back(e.second, e.score);
        table.partners_[e.second].emplace_back(e.first, e.score);
        vocab.push_back(e.first);
        vocab.push_back(e.second);
        max_score = std::max(max_score, e.score);
    }
    for (auto &[word, list] : table.partners_)
        std::sort(list.begin(), list.end(), by_score_then_word);
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    table.vocab_ = std::move(vocab);
    table.pair_count_ = entries.size();
    table.self_sim_ = max_score > 0.0 ? max_score : 1.0;
    return table;
}

std::optional<double> RelatednessTable::entry(std::string_view a, std::string_view b) const {
    if (a == b)
        return std::nullopt;
    auto it = scores_.find(pair_key(a, b));
    if (it == scores_.end())
        return std::nullopt;
    return it->second;
}

double RelatednessTable::similarity(std::string_view topic_word,
                                    std::string_view content_word) const {
    if (topic_word == content_word)
        return self_sim_;
    return entry(topic_word, content_word).value_or(0.0);
}

const std::vector<std::pair<std::string, double>> &
RelatednessTable::partners(std::string_view word) const {
    static const std::vector<std::pair<std::string, double>> kNone;
    auto it = partners_.find(std::string(word));
    return it == partners_.end() ? kNone : it->second;
}

bool RelatednessTable::in_vocab(std::string_view word) const {
    return std::binary_search(vocab_.begin(), vocab_.end(), word);
}

std::vector<RelatednessEntry> RelatednessTable::entries() const {
    std::vector<RelatednessEntry> out;
    out.reserve(pair_count_);
    for (const auto &[word, list] : partners_) {
        for (const auto &[other, score] : list) {
            if (word < other)
                out.push_back({word, other, score});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto &x, const auto &y) {
        return std::tie(x.first, x.second) < std::tie(y.first, y.second);
    });
    return out;
}

double presence_mutual_information(std::size_t n_docs, std::size_t df_x, std::size_t df_y,
                                   std::size_t df_xy) {
    if (n_docs == 0 || df_xy > df_x || df_xy > df_y || df_x > n_docs || df_y > n_docs ||
        df_x + df_y - df_xy > n_docs)
        throw InvalidArgument("inconsistent document-frequency counts");
    const double n = static_cast<double>(n_docs);
    const double px[2] = {(n - df_x) / n, df_x / n};
    const double py[2] = {(n - df_y) / n, df_y / n};
    const double joint[2][2] = {
        {(n - df_x - df_y + df_xy) / n, (double(df_y) - df_xy) / n},
        {(double(df_x) - df_xy) / n, df_xy / n},
    };
    double mi = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const double p = joint[x][y];
            if (p > 0.0)
                mi += p * std::log(p / (px[x] * py[y]));
        }
    }
    return mi;
}

namespace {

using PairCounts = std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t>;

void count_pairs(const std::vector<std::vector<std::uint32_t>> &docs, std::size_t begin,
                 std::size_t end, PairCounts &out) {
    for (std::size_t d = begin; d < end; ++d) {
        const auto &ids = docs[d];
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                ++out[{ids[i], ids[j]}];
    }
}

} // namespace

RelatednessTable build_relatedness_table(const Corpus &corpus, const TableParams &params) {
    if (params.min_pair_count < 1)
        throw InvalidArgument("min_pair_count must be at least 1");
    if (std::none_of(corpus.begin(), corpus.end(), [](const auto &d) { return !d.empty(); }))
        throw EmptyCorpus();

    std::vector<std::string> vocab;
    for (const auto &doc : corpus)
        vocab.insert(vocab.end(), doc.begin(), doc.end());
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    auto id_of = [&](const std::string &w) {
        return static_cast<std::uint32_t>(
            std::lower_bound(vocab.begin(), vocab.end(), w) - vocab.begin());
    };

    std::vector<std::vector<std::uint32_t>> docs;
    docs.reserve(corpus.size());
    std::vector<std::size_t> df(vocab.size(), 0);
    for (const auto &doc : corpus) {
        std::vector<std::uint32_t> ids;
        ids.reserve(doc.size());
        for (const auto &w : doc)
            ids.push_back(id_of(w));
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (auto id : ids)
            ++df[id];
        docs.push_back(std::move(ids));
    }

    // Integer counts merge exactly, so the shard layout never affects the result.
    const unsigned workers = std::max(1u, params.workers);
    std::vector<PairCounts> shards(workers);
    {
        std::vector<std::thread> threads;
        const std::size_t chunk = (docs.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(docs.size(), w * chunk);
            const std::size_t end = std::min(docs.size(), begin + chunk);
            if (workers == 1)
                count_pairs(docs, begin, end, shards[w]);
            else
                threads.emplace_back(count_pairs, std::cref(docs), begin, end, std::ref(shards[w]));
        }
        for (auto &t : threads)
            t.join();
    }
    PairCounts pair_df = std::move(shards[0]);
    for (std::size_t s = 1; s < shards.size(); ++s)
        for (const auto &[key, count] : shards[s])
            pair_df[key] += count;

    struct Candidate {
        std::uint32_t a, b;
        double score;
    };
    std::vector<Candidate> candidates;
    std::vector<std::vector<std::size_t>> by_word(vocab.size());
    for (const auto &[key, count] : pair_df) {
        if (count < params.min_pair_count)
            continue;
        double mi = presence_mutual_information(docs.size(), df[key.first], df[key.second], count);
        by_word[key.first].push_back(candidates.size());
        by_word[key.second].push_back(candidates.size());
        candidates.push_back({key.first, key.second, std::max(0.0, mi)});
    }

    // A pair survives when it is within the top-n partners of either of its words.
    std::vector<char> keep(candidates.size(), 0);
    for (std::uint32_t w = 0; w < by_word.size(); ++w) {
        auto &list = by_word[w];
        auto partner = [&](std::size_t c) {
            return candidates[c].a == w ? candidates[c].b : candidates[c].a;
        };
        std::sort(list.begin(), list.end(), [&](std::size_t x, std::size_t y) {
            if (candidates[x].score != candidates[y].score)
                return candidates[x].score > candidates[y].score;
            return partner(x) < partner(y);
        });
        for (std::size_t i = 0; i < list.size() && i < params.top_n_per_word; ++i)
            keep[list[i]] = 1;
    }

    std::vector<RelatednessEntry> entries;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (keep[c])
            entries.push_back({vocab[candidates[c].a], vocab[candidates[c].b], candidates[c].score});
    }
    return RelatednessTable::from_entries(std::move(entries), std::move(vocab));
}

std::vector<std::pair<std::string, double>> related_words(const RelatednessTable &table,
                                                          std::string_view seed,
                                                          std::size_t limit) {
    const auto &list = table.partners(seed);
    return {list.begin(), list.begin() + static_cast<std::ptrdiff_t>(std::min(limit, list.size()))};
}

TopicQuery::TopicQuery(std::vector<std::string> words) : words_(std::move(words)) {
    std::sort(words_.begin(), words_.end());
    words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
    if (words_.empty() || words_.front().empty())
        throw InvalidArgument("topic needs at least one nonempty word");
}

TopicQuery TopicQuery::parse(std::string_view raw, const Preprocessor &preprocessor) {
    auto tokens = preprocessor(raw);
    if (tokens.empty())
        throw InvalidArgument("topic '" + std::string(raw) + "' has no content words");
    return TopicQuery(std::move(tokens));
}

std::string TopicQuery::label() const {
    std::string out;
    for (const auto &w : words_) {
        if (!out.empty())
            out.push_back(' ');
        out += w;
    }
    return out;
}

double content_relevance(const TokenList &tokens, const TopicQuery &topic,
                         const RelatednessTable &table) {
    double relevance = 0.0;
    for (const auto &topic_word : topic.words())
        for (const auto &token : tokens)
            relevance += table.similarity(topic_word, token);
    return relevance;
}

double boosted_relevance(double relevance, double alpha) {
    if (!(relevance >= 0.0))
        throw NegativeRelevance(relevance);
    if (!(alpha >= 0.0))
        throw InvalidArgument("alpha must be non-negative");
    return 1.0 + alpha * std::log1p(relevance);
}

void write_relatedness_table(std::ostream &out, const RelatednessTable &table) {
    std::ostringstream buf;
    for (const auto &e : table.entries())
        buf << e.first << '\t' << e.second << '\t' << format_double(e.score) << '\n';
    out << buf.str();
}

RelatednessTable read_relatedness_table(std::istream &in) {
    std::vector<RelatednessEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos)
            throw MalformedRecord(line_no, "expected word\\tword\\tscore");
        RelatednessEntry e{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), 0.0};
        const std::string num = line.substr(t2 + 1);
        if (!parse_double(num, e.score))
            throw MalformedRecord(line_no, "invalid score '" + num + "'");
        entries.push_back(std::move(e));
    }
    try {
        return RelatednessTable::from_entries(std::move(entries));
    } catch (const InvalidArgument &e) {
        throw MalformedRecord(line_no, e.what());
    }
}

Corpus read_corpus(std::istream &in, const Preprocessor &preprocessor) {
    Corpus corpus;
    std::string line;
    while (std::getline(in, line))
        corpus.push_back(preprocessor(line));
    return corpus;
}

} // namespace womgraph
