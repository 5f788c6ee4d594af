#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace womgraph {

// Ordered list of lowercase, stemmed, stopword-free terms.
using TokenList = std::vector<std::string>;

using StopwordSet = std::unordered_set<std::string>;

// Replaces `suffix` with `replacement` when at least `min_stem` characters remain
// in front of the suffix.
struct StemRule {
    std::string suffix;
    std::string replacement;
    std::size_t min_stem = 1;
};

StopwordSet load_stopwords(std::istream &in);

// One rule per line: "<suffix> <replacement|-> <min_stem>". '#' starts a comment.
std::vector<StemRule> load_stem_rules(std::istream &in);

StopwordSet default_stopwords();
std::vector<StemRule> default_stem_rules();

// Applies the first matching rule only.
std::string apply_stem_rules(std::string_view word, const std::vector<StemRule> &rules);

TokenList preprocess_text(std::string_view raw, const StopwordSet &stopwords,
                          const std::vector<StemRule> &stem_rules);

/// Bundles a stopword set and a stem rule list so the same pipeline can be
/// applied to corpus documents, content text and topic words alike.
class Preprocessor {
public:
    Preprocessor() : Preprocessor(default_stopwords(), default_stem_rules()) {}
    Preprocessor(StopwordSet stopwords, std::vector<StemRule> rules)
        : stopwords_(std::move(stopwords)), rules_(std::move(rules)) {}

    TokenList operator()(std::string_view raw) const {
        return preprocess_text(raw, stopwords_, rules_);
    }

    const StopwordSet &stopwords() const { return stopwords_; }
    const std::vector<StemRule> &rules() const { return rules_; }

private:
    StopwordSet stopwords_;
    std::vector<StemRule> rules_;
};

} // namespace womgraph
