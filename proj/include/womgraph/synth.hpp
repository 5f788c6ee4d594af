#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "womgraph/ingest.hpp"

namespace womgraph {

/// Portable random source: the engine sequence is fixed by the standard, and the
/// derived draws avoid the implementation-defined std distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(); // [0, 1)
    std::size_t index(std::size_t n); // [0, n); n > 0
    bool bernoulli(double p);
    std::size_t discrete(std::span<const double> weights); // proportional to weights

    template <typename T> void shuffle(std::vector<T> &items) {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[index(i)]);
    }

private:
    std::mt19937_64 engine_;
};

struct TopicTier {
    std::string name;
    std::vector<std::string> words;
    double weight = 1.0;
    // Probability that a post of this tier also carries group-topic words.
    double group_affinity = 0.0;
};

// The first tier is the group topic.
std::vector<TopicTier> default_topic_tiers();

struct SynthesisParams {
    std::size_t n_users = 5000;
    std::size_t n_posts = 3000;
    double author_fraction = 0.065;
    // Probability that each author, post and react-only member choice follows
    // preferential attachment instead of a uniform draw.
    double pa_strength = 0.5;
    double reactions_per_post = 5.0;
    // Share of reactions made by members of the author pool.
    double author_reaction_share = 0.25;
    // Relative frequency of like_on_comment, like, comment, share.
    std::array<double, 4> kind_mix{0.1, 0.6, 0.2, 0.1};
    std::vector<TopicTier> topics = default_topic_tiers();
    std::size_t filler_vocabulary = 200;
    std::size_t topic_words_per_post = 3;
    std::size_t filler_words_per_post = 4;
    std::array<double, 12> seasonality = uniform_seasonality();
    int year = 2023;
    std::uint64_t seed = 1;

    static std::array<double, 12> uniform_seasonality();

    void validate() const;
    // Ratio of react-only members to authors.
    double react_only_bias() const;
    std::size_t author_count() const;
};

GroupActivityLog synth_generate(const SynthesisParams &params);

// Raw-text documents drawn from the same topic mixture as generated posts.
std::vector<std::string> synth_corpus(const SynthesisParams &params, std::size_t n_docs);

} // namespace womgraph
