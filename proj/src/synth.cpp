#include "womgraph/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "womgraph/error.hpp"

namespace womgraph {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

bool Rng::bernoulli(double p) { return uniform() < p; }

std::size_t Rng::discrete(std::span<const double> weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double x = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (x < weights[i])
            return i;
        x -= weights[i];
    }
    // Rounding can leave x just past the last bucket.
    for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0)
            return i;
    return 0;
}

std::vector<TopicTier> default_topic_tiers() {
    return {
        {"photography", {"camera", "lens", "shutter", "aperture", "tripod"}, 0.15, 1.0},
        {"lighting", {"lighting", "portrait", "studio", "flash"}, 0.35, 1.0},
        {"travel", {"travel", "landscape", "hiking", "mountain"}, 0.3, 0.4},
        {"cooking", {"recipe", "baking", "flour", "oven"}, 0.2, 0.0},
    };
}

std::array<double, 12> SynthesisParams::uniform_seasonality() {
    std::array<double, 12> s;
    s.fill(1.0 / 12.0);
    return s;
}

void SynthesisParams::validate() const {
    if (n_users < 2)
        throw InvalidParams("n_users must be at least 2");
    if (!(author_fraction > 0.0 && author_fraction <= 1.0))
        throw InvalidParams("author_fraction must lie in (0, 1]");
    if (!(pa_strength >= 0.0 && pa_strength <= 1.0))
        throw InvalidParams("pa_strength must lie in [0, 1]");
    if (!(author_reaction_share >= 0.0 && author_reaction_share <= 1.0))
        throw InvalidParams("author_reaction_share must lie in [0, 1]");
    if (!(reactions_per_post >= 0.0) || !std::isfinite(reactions_per_post))
        throw InvalidParams("reactions_per_post must be finite and non-negative");
    double kinds = 0.0;
    for (double w : kind_mix) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw InvalidParams("kind_mix weights must be finite and non-negative");
        kinds += w;
    }
    if (kinds <= 0.0)
        throw InvalidParams("kind_mix needs a positive weight");
    if (topics.empty())
        throw InvalidParams("at least one topic tier is required");
    for (const auto &t : topics) {
        if (t.words.empty())
            throw InvalidParams("topic tier '" + t.name + "' has no words");
        if (!(t.weight > 0.0) || !std::isfinite(t.weight))
            throw InvalidParams("topic tier '" + t.name + "' needs a positive weight");
        if (!(t.group_affinity >= 0.0 && t.group_affinity <= 1.0))
            throw InvalidParams("topic tier '" + t.name + "' affinity must lie in [0, 1]");
    }
    double season = 0.0;
    for (double w : seasonality) {
        if (!(w >= 0.0))
            throw InvalidParams("seasonality weights must be non-negative");
        season += w;
    }
    if (std::abs(season - 1.0) > 1e-9)
        throw InvalidParams("seasonality weights must sum to 1");
    if (year < 1970 || year > 9999)
        throw InvalidParams("year must lie in 1970..9999");
}

double SynthesisParams::react_only_bias() const {
    return static_cast<double>(n_users - author_count()) / static_cast<double>(author_count());
}

std::size_t SynthesisParams::author_count() const {
    const auto a = static_cast<std::size_t>(std::llround(author_fraction * static_cast<double>(n_users)));
    return std::clamp<std::size_t>(a, 1, n_users);
}

namespace {

std::string padded(char prefix, std::size_t value, std::size_t width) {
    std::string digits = std::to_string(value);
    return prefix + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

std::size_t width_of(std::size_t n) { return std::to_string(std::max<std::size_t>(n, 1)).size(); }

class TextMaker {
public:
    TextMaker(const SynthesisParams &params, Rng &rng) : params_(params), rng_(rng) {
        for (const auto &t : params.topics)
            weights_.push_back(t.weight);
    }

    std::size_t pick_tier() { return rng_.discrete(weights_); }

    std::string text(std::size_t tier, std::size_t topic_words, std::size_t filler_words) {
        std::string out;
        auto add = [&](const std::string &w) {
            if (!out.empty())
                out += ' ';
            out += w;
        };
        const auto &words = params_.topics[tier].words;
        for (std::size_t i = 0; i < topic_words; ++i)
            add(words[rng_.index(words.size())]);
        if (tier != 0 && rng_.bernoulli(params_.topics[tier].group_affinity)) {
            const auto &group = params_.topics[0].words;
            for (std::size_t i = 0; i < std::max<std::size_t>(1, topic_words / 2 + 1); ++i)
                add(group[rng_.index(group.size())]);
        }
        if (params_.filler_vocabulary > 0)
            for (std::size_t i = 0; i < filler_words; ++i)
                add(padded('w', rng_.index(params_.filler_vocabulary), 3));
        return out;
    }

private:
    const SynthesisParams &params_;
    Rng &rng_;
    std::vector<double> weights_;
};

// Draws from `pool` either proportionally to past draws (via the urn) or uniformly.
template <typename T>
T attach(Rng &rng, double strength, std::vector<T> &urn, const std::vector<T> &pool) {
    T choice = (!urn.empty() && rng.bernoulli(strength)) ? urn[rng.index(urn.size())]
                                                         : pool[rng.index(pool.size())];
    urn.push_back(choice);
    return choice;
}

struct MonthClock {
    int year;

    // Random instant inside `month` (1-12).
    Timestamp instant(int month, Rng &rng) const {
        const auto [start, length] = bounds(month);
        return start + static_cast<Timestamp>(rng.index(static_cast<std::size_t>(length)));
    }

    // Instant after `base`, at most three days later and still in the same month.
    Timestamp after(Timestamp base, int month, Rng &rng) const {
        const auto [start, length] = bounds(month);
        const Timestamp room = std::min<Timestamp>(start + length - 1 - base, 3 * 86400);
        return base + static_cast<Timestamp>(rng.index(static_cast<std::size_t>(room) + 1));
    }

    std::pair<Timestamp, Timestamp> bounds(int month) const {
        using namespace std::chrono;
        const year_month first{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)}};
        const sys_days begin{first / 1};
        const sys_days end{(first + months{1}) / 1};
        const auto start = duration_cast<seconds>(begin.time_since_epoch()).count();
        const auto stop = duration_cast<seconds>(end.time_since_epoch()).count();
        return {start, stop - start};
    }
};

} // namespace

GroupActivityLog synth_generate(const SynthesisParams &params) {
    params.validate();
    Rng rng(params.seed);
    TextMaker texts(params, rng);
    const MonthClock clock{params.year};

    const std::size_t uw = width_of(params.n_users);
    std::vector<UserId> users;
    for (std::size_t i = 1; i <= params.n_users; ++i)
        users.push_back(padded('u', i, uw));

    std::vector<UserId> shuffled = users;
    rng.shuffle(shuffled);
    const std::size_t n_authors = params.author_count();
    const std::vector<UserId> authors(shuffled.begin(),
                                      shuffled.begin() + static_cast<std::ptrdiff_t>(n_authors));
    std::vector<UserId> lurkers(shuffled.begin() + static_cast<std::ptrdiff_t>(n_authors),
                                shuffled.end());
    if (lurkers.empty())
        lurkers = authors;

    LogBuilder builder;
    for (const auto &u : users)
        builder.add_user(u);

    struct Post {
        std::string id;
        std::size_t tier;
        int month;
        Timestamp ts;
    };
    std::vector<Post> posts;
    std::vector<UserId> author_urn;
    const std::size_t pw = width_of(params.n_posts);
    std::vector<double> season(params.seasonality.begin(), params.seasonality.end());
    for (std::size_t i = 1; i <= params.n_posts; ++i) {
        const UserId author = attach(rng, params.pa_strength, author_urn, authors);
        const std::size_t tier = texts.pick_tier();
        const int month = static_cast<int>(rng.discrete(season)) + 1;
        const Timestamp ts = clock.instant(month, rng);
        Post post{padded('p', i, pw), tier, month, ts};
        builder.add_post(post.id, author,
                         texts.text(tier, params.topic_words_per_post, params.filler_words_per_post),
                         ts);
        posts.push_back(std::move(post));
    }

    const auto n_reactions = static_cast<std::size_t>(
        std::llround(params.reactions_per_post * static_cast<double>(params.n_posts)));
    std::vector<std::size_t> post_indices(posts.size());
    std::iota(post_indices.begin(), post_indices.end(), 0);
    std::vector<std::size_t> post_urn;
    std::vector<UserId> lurker_urn;
    struct Comment {
        std::string id;
        int month;
        Timestamp ts;
    };
    std::vector<Comment> comments;
    const std::size_t cw = width_of(n_reactions);
    for (std::size_t i = 0; i < n_reactions && !posts.empty(); ++i) {
        const UserId reactor = rng.bernoulli(params.author_reaction_share)
                                   ? authors[rng.index(authors.size())]
                                   : attach(rng, params.pa_strength, lurker_urn, lurkers);
        auto kind = static_cast<ReactionKind>(rng.discrete(params.kind_mix));
        if (kind == ReactionKind::like_on_comment && comments.empty())
            kind = ReactionKind::like;
        if (kind == ReactionKind::like_on_comment) {
            const auto &c = comments[rng.index(comments.size())];
            builder.add_reaction(kind, reactor, c.id, clock.after(c.ts, c.month, rng));
            continue;
        }
        const Post &post = posts[attach(rng, params.pa_strength, post_urn, post_indices)];
        const Timestamp ts = clock.after(post.ts, post.month, rng);
        if (kind == ReactionKind::comment_reaction) {
            Comment c{padded('c', comments.size() + 1, cw), post.month, ts};
            builder.add_comment(c.id, reactor, post.id,
                                texts.text(post.tier, 2, params.filler_words_per_post / 2), ts);
            comments.push_back(std::move(c));
        } else {
            builder.add_reaction(kind, reactor, post.id, ts);
        }
    }
    return std::move(builder).build();
}

std::vector<std::string> synth_corpus(const SynthesisParams &params, std::size_t n_docs) {
    params.validate();
    Rng rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
    TextMaker texts(params, rng);
    std::vector<std::string> docs;
    docs.reserve(n_docs);
    for (std::size_t i = 0; i < n_docs; ++i)
        docs.push_back(texts.text(texts.pick_tier(), params.topic_words_per_post,
                                  params.filler_words_per_post));
    return docs;
}

} // namespace womgraph
