#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>

#include "womgraph/authority.hpp"
#include "womgraph/campaign.hpp"
#include "womgraph/graph.hpp"
#include "womgraph/relevance.hpp"
#include "womgraph/synth.hpp"
#include "womgraph/text.hpp"

namespace womgraph {

/// Run settings. Built-in defaults, overridden by a config file, overridden by flags.
struct Config {
    double alpha = kDefaultAlpha;
    ReactionWeights weights;
    PowerIterationParams pagerank;
    double tol = 1e-10;           // HITS and eigenvector
    std::size_t max_iter = 1000;  // HITS and eigenvector
    bool use_weights = true;      // betweenness and closeness
    ReinforcementParams reinforcement;
    Method method = Method::pagerank;
    std::optional<std::filesystem::path> stopwords;
    std::optional<std::filesystem::path> stem_rules;
    std::optional<std::string> group_topic;
    TableParams table;
    unsigned workers = 1;
    SynthesisParams synthesis;

    void validate() const;
    Preprocessor preprocessor() const;
    AuthorityOptions authority() const;
};

// Applies one "key = value" setting. Relative paths resolve against `base_dir`.
void apply_setting(Config &config, const std::string &key, const std::string &value,
                   const std::filesystem::path &base_dir = {});

/// Flat "key = value" lines; '#' starts a comment line. Unknown or repeated keys
/// and invalid values raise ConfigError naming the line.
Config parse_config(std::istream &in, const std::filesystem::path &base_dir = {},
                    Config defaults = {});

Config load_config(const std::filesystem::path &path);

} // namespace womgraph
