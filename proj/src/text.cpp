#include "womgraph/text.hpp"

#include <sstream>

#include "womgraph/error.hpp"

namespace womgraph {

namespace {

// Kept identical to data/stopwords.txt.
constexpr const char *kDefaultStopwords[] = {
    "a",       "about",   "above", "after", "again", "against", "all",     "am",    "an",
    "and",     "any",     "are",   "as",    "at",    "be",      "because", "been",  "before",
    "being",   "below",   "between", "both", "but",  "by",      "can",     "could", "did",
    "do",      "does",    "doing", "down",  "during", "each",   "few",     "for",   "from",
    "further", "had",     "has",   "have",  "having", "he",     "her",     "here",  "hers",
    "herself", "him",     "himself", "his", "how",   "i",       "if",      "in",    "into",
    "is",      "it",      "its",   "itself", "just", "me",      "more",    "most",  "my",
    "myself",  "no",      "nor",   "not",   "now",   "of",      "off",     "on",    "once",
    "only",    "or",      "other", "our",   "ours",  "ourselves", "out",   "over",  "own",
    "same",    "she",     "should", "so",   "some",  "such",    "than",    "that",  "the",
    "their",   "theirs",  "them",  "themselves", "then", "there", "these", "they", "this",
    "those",   "through", "to",    "too",   "under", "until",   "up",      "very",  "was",
    "we",      "were",    "what",  "when",  "where", "which",   "while",   "who",   "whom",
    "why",     "will",    "with",  "would", "you",   "your",    "yours",   "yourself",
    "yourselves",
};

// Kept identical to data/stem_rules.txt.
constexpr const char *kDefaultStemRules = R"(# suffix replacement min_stem
ss ss 1
ing - 3
ed - 3
es - 3
s - 3
e - 3
)";

bool is_token_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

} // namespace

StopwordSet load_stopwords(std::istream &in) {
    StopwordSet words;
    std::string line;
    while (std::getline(in, line)) {
        std::string word;
        for (char c : line) {
            if (c == '#')
                break;
            if (c != ' ' && c != '\t' && c != '\r')
                word.push_back(ascii_lower(c));
        }
        if (!word.empty())
            words.insert(std::move(word));
    }
    return words;
}

std::vector<StemRule> load_stem_rules(std::istream &in) {
    std::vector<StemRule> rules;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        StemRule rule;
        std::string replacement;
        if (!(fields >> rule.suffix))
            continue;
        if (!(fields >> replacement >> rule.min_stem))
            throw MalformedRecord(line_no, "stem rule needs <suffix> <replacement|-> <min_stem>");
        std::string extra;
        if (fields >> extra)
            throw MalformedRecord(line_no, "trailing field '" + extra + "' in stem rule");
        rule.replacement = replacement == "-" ? std::string() : replacement;
        rules.push_back(std::move(rule));
    }
    return rules;
}

StopwordSet default_stopwords() {
    return StopwordSet(std::begin(kDefaultStopwords), std::end(kDefaultStopwords));
}

std::vector<StemRule> default_stem_rules() {
    std::istringstream in(kDefaultStemRules);
    return load_stem_rules(in);
}

std::string apply_stem_rules(std::string_view word, const std::vector<StemRule> &rules) {
    for (const auto &rule : rules) {
        if (word.size() < rule.suffix.size() + rule.min_stem)
            continue;
        if (word.substr(word.size() - rule.suffix.size()) != rule.suffix)
            continue;
        std::string stem(word.substr(0, word.size() - rule.suffix.size()));
        stem += rule.replacement;
        return stem;
    }
    return std::string(word);
}

TokenList preprocess_text(std::string_view raw, const StopwordSet &stopwords,
                          const std::vector<StemRule> &stem_rules) {
    TokenList tokens;
    std::string word;
    auto flush = [&] {
        if (word.empty())
            return;
        if (!stopwords.contains(word)) {
            std::string stem = apply_stem_rules(word, stem_rules);
            if (!stem.empty() && !stopwords.contains(stem))
                tokens.push_back(std::move(stem));
        }
        word.clear();
    };
    for (char c : raw) {
        if (is_token_byte(static_cast<unsigned char>(c)))
            word.push_back(ascii_lower(c));
        else
            flush();
    }
    flush();
    return tokens;
}

} // namespace womgraph
