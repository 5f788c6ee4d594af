#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "womgraph/text.hpp"

namespace womgraph {

using Corpus = std::vector<TokenList>;

struct RelatednessEntry {
    std::string first;
    std::string second;
    double score = 0.0;

    bool operator==(const RelatednessEntry &) const = default;
};

/// Symmetric word-pair relatedness scores. Each unordered pair is stored once and
/// answered for both orientations; exact matches score self_sim().
class RelatednessTable {
public:
    RelatednessTable() = default;

    // Builds from unordered pairs. Duplicate pairs and self pairs are rejected.
    // `vocab` is extended with every word appearing in an entry.
    static RelatednessTable from_entries(std::vector<RelatednessEntry> entries,
                                         std::vector<std::string> vocab = {});

    std::optional<double> entry(std::string_view a, std::string_view b) const;
    double similarity(std::string_view topic_word, std::string_view content_word) const;
    double self_sim() const { return self_sim_; }

    // Partners of `word` ordered by score descending, then word ascending.
    const std::vector<std::pair<std::string, double>> &partners(std::string_view word) const;

    const std::vector<std::string> &vocab() const { return vocab_; }
    bool in_vocab(std::string_view word) const;
    std::size_t pair_count() const { return pair_count_; }

    // Unordered pairs with first < second, sorted.
    std::vector<RelatednessEntry> entries() const;

private:
    std::vector<std::string> vocab_; // sorted
    std::unordered_map<std::string, std::vector<std::pair<std::string, double>>> partners_;
    std::unordered_map<std::string, double> scores_; // key: a '\n' b with a < b
    std::size_t pair_count_ = 0;
    double self_sim_ = 1.0;
};

struct TableParams {
    std::size_t min_pair_count = 2;
    std::size_t top_n_per_word = 50;
    unsigned workers = 1;
};

// Mutual information of two binary presence variables over n documents, summed over
// the full 2x2 joint table with natural log. Empty cells contribute nothing.
double presence_mutual_information(std::size_t n_docs, std::size_t df_x, std::size_t df_y,
                                   std::size_t df_xy);

RelatednessTable build_relatedness_table(const Corpus &corpus, const TableParams &params = {});

std::vector<std::pair<std::string, double>> related_words(const RelatednessTable &table,
                                                          std::string_view seed,
                                                          std::size_t limit);

/// Nonempty, sorted, deduplicated set of preprocessed topic words.
class TopicQuery {
public:
    explicit TopicQuery(std::vector<std::string> words);

    // Runs raw text through the preprocessor; throws InvalidArgument when nothing is left.
    static TopicQuery parse(std::string_view raw, const Preprocessor &preprocessor);

    const std::vector<std::string> &words() const { return words_; }
    std::string label() const;

    bool operator==(const TopicQuery &) const = default;

private:
    std::vector<std::string> words_;
};

// Sum over every (topic word, token) pair of table similarity; duplicate tokens
// count once per occurrence.
double content_relevance(const TokenList &tokens, const TopicQuery &topic,
                         const RelatednessTable &table);

// 1 + alpha * ln(1 + relevance)
double boosted_relevance(double relevance, double alpha);

inline constexpr double kDefaultAlpha = 20.0;

// Tab-separated "word\tword\tscore", one line per unordered pair, sorted.
void write_relatedness_table(std::ostream &out, const RelatednessTable &table);
RelatednessTable read_relatedness_table(std::istream &in);

// One raw-text document per line.
Corpus read_corpus(std::istream &in, const Preprocessor &preprocessor);

} // namespace womgraph
